//! Equation data: convective flux, diffusion coefficient, initial datum and fractional parameters.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{legendre, PiecewisePolynomial, Polynomial};
use crate::quadrature::{adaptive_gauss, GaussLegendre};
use crate::solver::grid::Grid;
use crate::solver::state::DGState;

/// Benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Example {
    Ex1,
    Ex2,
    Ex3,
}

impl std::str::FromStr for Example {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" => Ok(Example::Ex1),
            "ex2" => Ok(Example::Ex2),
            "ex3" => Ok(Example::Ex3),
            _ => Err(Error::UnknownExample(s.to_string())),
        }
    }
}

/// Initial datum `u0(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InitialDatum {
    Piecewise(PiecewisePolynomial),
    /// `exp(-(x / width)^2)`
    Gaussian { width: f64 },
}

impl InitialDatum {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialDatum::Piecewise(p) => p.eval(x),
            InitialDatum::Gaussian { width } => (-(x / width).powi(2)).exp(),
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        match self {
            InitialDatum::Piecewise(p) => &p.breakpoints,
            InitialDatum::Gaussian { .. } => &[],
        }
    }

    /// Range of values over `[lo, hi]`.
    pub fn value_range(&self, lo: f64, hi: f64) -> (f64, f64) {
        match self {
            InitialDatum::Piecewise(p) => {
                let prim = PiecewisePolynomial {
                    breakpoints: p.breakpoints.clone(),
                    pieces: p.pieces.iter().map(Polynomial::antiderivative).collect(),
                };
                prim.derivative_range(lo, hi)
            }
            InitialDatum::Gaussian { .. } => {
                let peak = if lo <= 0.0 && hi >= 0.0 { 1.0 } else { self.eval(lo).max(self.eval(hi)) };
                (self.eval(lo).min(self.eval(hi)), peak)
            }
        }
    }

    /// Total variation over the real line.
    pub fn total_variation(&self) -> f64 {
        match self {
            InitialDatum::Gaussian { .. } => 2.0,
            InitialDatum::Piecewise(p) => {
                let d = p.derivative();
                let mut tv = 0.0;
                for k in 0..p.pieces.len() {
                    let (lo, hi) = p.piece_bounds(k);
                    if !lo.is_finite() || !hi.is_finite() {
                        if d.pieces[k].coeffs.iter().any(|c| *c != 0.0) {
                            return f64::INFINITY;
                        }
                        continue;
                    }
                    let mut pts = vec![lo];
                    pts.extend(d.pieces[k].sign_change_roots(lo, hi));
                    pts.push(hi);
                    for w in pts.windows(2) {
                        tv += (p.pieces[k].eval(w[1]) - p.pieces[k].eval(w[0])).abs();
                    }
                }
                for (k, b) in p.breakpoints.iter().enumerate() {
                    tv += (p.pieces[k + 1].eval(*b) - p.pieces[k].eval(*b)).abs();
                }
                tv
            }
        }
    }
}

/// User-facing problem definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub f: PiecewisePolynomial,
    pub a: PiecewisePolynomial,
    pub u0: InitialDatum,
    pub lambda: f64,
    pub b: f64,
    pub linear_speed: Option<f64>,
    pub half_width: f64,
    /// Declared admissible state range; evaluation outside it is an error.
    pub state_range: Option<(f64, f64)>,
}

impl ProblemSpec {
    pub fn builtin(example: Example) -> ProblemSpec {
        let a1 = PiecewisePolynomial::from_tables(vec![0.5, 0.6], vec![vec![0.0], vec![-1.25, 2.5], vec![0.25]])
            .expect("static table");
        match example {
            Example::Ex1 => ProblemSpec {
                name: "ex1".into(),
                f: PiecewisePolynomial::single(Polynomial::new(vec![0.0, 0.0, 1.0])),
                a: a1,
                u0: InitialDatum::Piecewise(
                    PiecewisePolynomial::from_tables(
                        vec![-0.5, -0.3, 0.3, 0.5],
                        vec![vec![0.0], vec![2.5, 5.0], vec![1.0], vec![2.5, -5.0], vec![0.0]],
                    )
                    .expect("static table"),
                ),
                lambda: 0.5,
                b: 1.0,
                linear_speed: None,
                half_width: 1.0,
                state_range: None,
            },
            Example::Ex2 => ProblemSpec {
                name: "ex2".into(),
                f: PiecewisePolynomial::single(Polynomial::new(vec![0.0, 0.0, 0.25])),
                a: a1.scale(4.0),
                u0: InitialDatum::Piecewise(
                    PiecewisePolynomial::from_tables(vec![-0.4, 0.0], vec![vec![1.0], vec![0.0, -2.5], vec![0.0]])
                        .expect("static table"),
                ),
                lambda: 0.5,
                b: 1.0,
                linear_speed: None,
                half_width: 1.0,
                state_range: None,
            },
            Example::Ex3 => ProblemSpec {
                name: "ex3".into(),
                f: PiecewisePolynomial::single(Polynomial::new(vec![0.0, 1.0])),
                a: PiecewisePolynomial::single(Polynomial::constant(0.1)),
                u0: InitialDatum::Gaussian { width: 0.1 },
                lambda: 0.5,
                b: 1.0,
                linear_speed: Some(1.0),
                half_width: 1.0,
                state_range: None,
            },
        }
    }

    pub fn with_fractional(mut self, lambda: f64, b: f64) -> Self {
        self.lambda = lambda;
        self.b = b;
        self
    }
}

/// One piece of `g = ∫ sqrt(a)`.
#[derive(Debug, Clone)]
enum SqrtPrimitive {
    /// `a = alpha + beta u` on the piece.
    Linear { alpha: f64, beta: f64 },
    /// Quadrature from `anchor`.
    Numeric { poly: Polynomial, anchor: f64 },
}

impl SqrtPrimitive {
    fn eval(&self, u: f64) -> f64 {
        match self {
            SqrtPrimitive::Linear { alpha, beta } => {
                if *beta == 0.0 {
                    alpha.max(0.0).sqrt() * u
                } else {
                    let s = (alpha + beta * u).max(0.0);
                    2.0 / (3.0 * beta) * s * s.sqrt()
                }
            }
            SqrtPrimitive::Numeric { poly, anchor } => {
                if u == *anchor {
                    return 0.0;
                }
                let f = |s: f64| poly.eval(s).max(0.0).sqrt();
                adaptive_gauss(&f, *anchor, u, 1e-14 * (u - anchor).abs().max(1e-300)).unwrap_or_else(|e| match e {
                    Error::Quadrature { estimate, .. } => estimate,
                    _ => f64::NAN,
                })
            }
        }
    }
}

/// `g(u) = ∫_0^u sqrt(a)`, continuous across breakpoints.
#[derive(Debug, Clone)]
pub struct SqrtIntegral {
    breakpoints: Vec<f64>,
    pieces: Vec<SqrtPrimitive>,
    offsets: Vec<f64>,
}

impl SqrtIntegral {
    fn new(a: &PiecewisePolynomial) -> Self {
        let pieces: Vec<SqrtPrimitive> = a
            .pieces
            .iter()
            .enumerate()
            .map(|(k, p)| {
                if p.degree() <= 1 {
                    SqrtPrimitive::Linear {
                        alpha: p.coeffs.first().copied().unwrap_or(0.0),
                        beta: p.coeffs.get(1).copied().unwrap_or(0.0),
                    }
                } else {
                    let (lo, hi) = a.piece_bounds(k);
                    let anchor = 0.0f64.clamp(lo.max(-1e300), hi.min(1e300));
                    SqrtPrimitive::Numeric { poly: p.clone(), anchor }
                }
            })
            .collect();
        let mut offsets = vec![0.0; pieces.len()];
        for k in 0..a.breakpoints.len() {
            let b = a.breakpoints[k];
            offsets[k + 1] = offsets[k] + pieces[k].eval(b) - pieces[k + 1].eval(b);
        }
        let mut out = SqrtIntegral { breakpoints: a.breakpoints.clone(), pieces, offsets };
        let shift = out.eval(0.0);
        for o in &mut out.offsets {
            *o -= shift;
        }
        out
    }

    pub fn eval(&self, u: f64) -> f64 {
        let k = self.breakpoints.partition_point(|b| *b < u);
        self.offsets[k] + self.pieces[k].eval(u)
    }
}

/// Quantities derived once from a [`ProblemSpec`].
#[derive(Debug, Clone)]
pub struct DerivedCoefficients {
    pub big_a: PiecewisePolynomial,
    pub big_f: PiecewisePolynomial,
    pub df: PiecewisePolynomial,
    pub da: PiecewisePolynomial,
    pub g: SqrtIntegral,
    pub lipschitz_f: f64,
    pub sup_a: f64,
    pub state_range: (f64, f64),
    pub range_is_declared: bool,
}

/// `(f(u), a(u), A(u), g(u))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub f: f64,
    pub a: f64,
    pub big_a: f64,
    pub g: f64,
}

/// Validated problem with precomputed antiderivatives.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub derived: DerivedCoefficients,
    warned: Arc<AtomicBool>,
}

impl Problem {
    pub fn new(spec: ProblemSpec) -> Result<Self> {
        if !(spec.lambda > 0.0 && spec.lambda < 1.0) {
            return Err(Error::InvalidProblem(format!("lambda = {} must lie in (0, 1)", spec.lambda)));
        }
        if !(spec.b >= 0.0) || !spec.b.is_finite() {
            return Err(Error::InvalidProblem(format!("b = {} must be a finite nonnegative number", spec.b)));
        }
        if !(spec.half_width > 0.0) {
            return Err(Error::InvalidProblem("domain half width must be positive".into()));
        }
        if spec.f.eval(0.0) != 0.0 {
            return Err(Error::InvalidProblem(format!("f(0) = {} but f(0) = 0 is required", spec.f.eval(0.0))));
        }
        if let InitialDatum::Gaussian { width } = spec.u0 {
            if !(width > 0.0) {
                return Err(Error::InvalidProblem("Gaussian width must be positive".into()));
            }
        }
        let (range, declared) = match spec.state_range {
            Some((lo, hi)) => {
                if !(lo <= 0.0 && hi >= 0.0 && lo < hi) {
                    return Err(Error::InvalidProblem("declared state range must contain 0".into()));
                }
                ((lo, hi), true)
            }
            None => {
                let (lo, hi) = spec.u0.value_range(-spec.half_width, spec.half_width);
                ((lo.min(0.0), hi.max(0.0)), false)
            }
        };
        let big_a = spec.a.antiderivative();
        let (amin, amax) = big_a.derivative_range(range.0, range.1);
        if amin < 0.0 {
            return Err(Error::InvalidProblem(format!(
                "diffusion coefficient takes the negative value {amin} on the state range"
            )));
        }
        let (dmin, dmax) = spec.f.derivative_range(range.0, range.1);
        let derived = DerivedCoefficients {
            big_f: spec.f.antiderivative(),
            df: spec.f.derivative(),
            da: spec.a.derivative(),
            g: SqrtIntegral::new(&spec.a),
            lipschitz_f: dmin.abs().max(dmax.abs()),
            sup_a: amax,
            big_a,
            state_range: range,
            range_is_declared: declared,
        };
        Ok(Problem { spec, derived, warned: Arc::new(AtomicBool::new(false)) })
    }

    pub fn builtin(example: Example) -> Result<Self> {
        Problem::new(ProblemSpec::builtin(example))
    }

    pub fn lambda(&self) -> f64 {
        self.spec.lambda
    }

    pub fn b(&self) -> f64 {
        self.spec.b
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        self.spec.f.eval(u)
    }

    #[inline]
    pub fn df(&self, u: f64) -> f64 {
        self.derived.df.eval(u)
    }

    #[inline]
    pub fn a(&self, u: f64) -> f64 {
        self.spec.a.eval(u)
    }

    #[inline]
    pub fn da(&self, u: f64) -> f64 {
        self.derived.da.eval(u)
    }

    #[inline]
    pub fn big_a(&self, u: f64) -> f64 {
        self.derived.big_a.eval(u)
    }

    #[inline]
    pub fn big_f(&self, u: f64) -> f64 {
        self.derived.big_f.eval(u)
    }

    #[inline]
    pub fn g(&self, u: f64) -> f64 {
        self.derived.g.eval(u)
    }

    #[inline]
    pub fn sqrt_a(&self, u: f64) -> f64 {
        self.a(u).max(0.0).sqrt()
    }

    /// All four coefficient values, checked against the state range.
    ///
    /// Outside a declared range this is an error. Outside the default range the outer
    /// polynomial pieces are evaluated as given and a warning is logged once.
    pub fn eval_coefficients(&self, u: f64) -> Result<Coefficients> {
        let (lo, hi) = self.derived.state_range;
        if u < lo || u > hi {
            if self.derived.range_is_declared {
                return Err(Error::OutOfRange { value: u, lo, hi });
            }
            if !self.warned.swap(true, Ordering::Relaxed) {
                log::warn!("state {u} outside the admissible range [{lo}, {hi}] of problem {}", self.spec.name);
            }
        }
        Ok(Coefficients { f: self.f(u), a: self.a(u), big_a: self.big_a(u), g: self.g(u) })
    }

    /// Projection of the initial datum onto piecewise polynomials of degree `k`.
    pub fn project_initial(&self, grid: &Grid, k: usize) -> DGState {
        let nq = (k + 1).max(5);
        let rule = GaussLegendre::new(nq);
        let bps = self.spec.u0.breakpoints();
        let mut state = DGState::zeros(grid.cells, k);
        for i in 0..grid.cells {
            let (xl, xr) = (grid.edge(i), grid.edge(i + 1));
            let mut cuts = vec![xl];
            cuts.extend(bps.iter().copied().filter(|b| *b > xl && *b < xr));
            cuts.push(xr);
            for p in 0..=k {
                let mut acc = 0.0;
                for w in cuts.windows(2) {
                    acc += rule.integrate(w[0], w[1], |x| {
                        let xi = 2.0 * (x - xl) / grid.dx - 1.0;
                        self.spec.u0.eval(x) * legendre(p, xi).0
                    });
                }
                state.set(i, p, (2 * p + 1) as f64 / grid.dx * acc);
            }
        }
        state
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ex1_coefficients() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        assert_eq!(p.a(0.55), 2.5 * 0.55 - 1.25);
        assert!((p.a(0.55) - 0.125).abs() < 1e-15);
        assert!((p.big_a(0.7) - 0.0375).abs() < 1e-15);
        let quad = adaptive_gauss(&|u| p.a(u), 0.0, 0.5, 1e-15).unwrap()
            + adaptive_gauss(&|u| p.a(u), 0.5, 0.6, 1e-15).unwrap()
            + adaptive_gauss(&|u| p.a(u), 0.6, 0.7, 1e-15).unwrap();
        assert!((quad - 0.0375).abs() < 1e-14);
        assert_eq!(p.spec.u0.eval(0.4), 2.5 - 5.0 * 0.4);
        assert_eq!(p.f(0.0), 0.0);
    }

    #[test]
    fn ex2_and_ex3_data() {
        let p2 = Problem::builtin(Example::Ex2).unwrap();
        assert!((p2.f(0.6) - 0.09).abs() < 1e-15);
        assert!((p2.a(0.55) - 0.5).abs() < 1e-15);
        let p3 = Problem::builtin(Example::Ex3).unwrap();
        assert_eq!(p3.spec.u0.eval(0.0), 1.0);
        for u in [-2.0, 0.0, 0.3, 5.0] {
            assert_eq!(p3.a(u), 0.1);
        }
        assert_eq!(p3.derived.lipschitz_f, 1.0);
    }

    #[test]
    fn zero_diffusion_gives_zero_antiderivatives() {
        let mut spec = ProblemSpec::builtin(Example::Ex1);
        spec.a = PiecewisePolynomial::single(Polynomial::zero());
        let p = Problem::new(spec).unwrap();
        for u in [-1.0, 0.2, 0.9] {
            assert_eq!(p.big_a(u), 0.0);
            assert_eq!(p.g(u), 0.0);
        }
    }

    #[test]
    fn g_squared_derivative_matches_a() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        for u in [0.52, 0.58, 0.8] {
            let h = 1e-6;
            let dg = (p.g(u + h) - p.g(u - h)) / (2.0 * h);
            let da = (p.big_a(u + h) - p.big_a(u - h)) / (2.0 * h);
            assert!((dg * dg - da).abs() < 1e-6, "u={u}");
        }
        // continuity at the breakpoints
        for b in [0.5, 0.6] {
            assert!((p.g(b) - p.g(b + 1e-13)).abs() < 1e-10);
        }
    }

    #[test]
    fn numeric_sqrt_primitive_matches_closed_form() {
        let mut spec = ProblemSpec::builtin(Example::Ex3);
        spec.a = PiecewisePolynomial::single(Polynomial::new(vec![1.0, 0.0, 1.0]));
        let p = Problem::new(spec).unwrap();
        // ∫_0^u sqrt(1 + s^2) ds = (u sqrt(1+u^2) + asinh u) / 2
        for u in [-0.7, 0.4, 1.3] {
            let exact = 0.5 * (u * (1.0f64 + u * u).sqrt() + u.asinh());
            assert!((p.g(u) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn declared_range_is_enforced() {
        let mut spec = ProblemSpec::builtin(Example::Ex1);
        spec.state_range = Some((0.0, 1.0));
        let p = Problem::new(spec).unwrap();
        assert!(p.eval_coefficients(0.5).is_ok());
        assert!(matches!(p.eval_coefficients(1.5), Err(Error::OutOfRange { .. })));
        let q = Problem::builtin(Example::Ex1).unwrap();
        assert!(q.eval_coefficients(1.5).is_ok());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(Problem::new(ProblemSpec::builtin(Example::Ex1).with_fractional(1.0, 1.0)).is_err());
        assert!(Problem::new(ProblemSpec::builtin(Example::Ex1).with_fractional(0.5, -1.0)).is_err());
        let mut spec = ProblemSpec::builtin(Example::Ex1);
        spec.f = PiecewisePolynomial::single(Polynomial::new(vec![1.0, 1.0]));
        assert!(Problem::new(spec).is_err());
        assert!("ex4".parse::<Example>().is_err());
    }

    #[test]
    fn ex1_cell_average() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        let grid = Grid::symmetric(1.0, 5).unwrap();
        let s = p.project_initial(&grid, 0);
        let g2 = Grid::new(-0.5, 0.5, 0.2).unwrap();
        let s2 = p.project_initial(&g2, 0);
        assert!((s2.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((s.get(2, 0) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn projection_of_linear_function() {
        let mut spec = ProblemSpec::builtin(Example::Ex1);
        spec.u0 = InitialDatum::Piecewise(PiecewisePolynomial::single(Polynomial::new(vec![0.0, 1.0])));
        let p = Problem::new(spec).unwrap();
        let dx = 0.25;
        let grid = Grid::new(0.0, dx, dx).unwrap();
        let s = p.project_initial(&grid, 1);
        assert!((s.get(0, 0) - dx / 2.0).abs() < 1e-15);
        assert!((s.get(0, 1) - dx / 2.0).abs() < 1e-15);
    }

    #[test]
    fn total_variation_of_examples() {
        assert!((ProblemSpec::builtin(Example::Ex1).u0.total_variation() - 2.0).abs() < 1e-14);
        assert!((ProblemSpec::builtin(Example::Ex2).u0.total_variation() - 1.0).abs() < 1e-14);
    }
}
