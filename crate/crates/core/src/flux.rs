//! Monotone convective fluxes, the DDG diffusion flux and the LDG flux pair.

use std::fmt::Debug;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{legendre, PiecewisePolynomial};
use crate::problem::Problem;
use crate::quadrature::GaussLegendre;

/// Scalar flux function `f` with the information monotone fluxes need.
pub trait FluxFunction: Debug + Send + Sync {
    fn value(&self, u: f64) -> f64;
    fn derivative(&self, u: f64) -> f64;
    /// Points in `(lo, hi)` splitting it into intervals where `f` is monotone, sorted.
    fn turning_points(&self, lo: f64, hi: f64) -> Vec<f64>;
    /// `(min f', max f')` over `[lo, hi]`.
    fn derivative_bounds(&self, lo: f64, hi: f64) -> (f64, f64);
}

impl FluxFunction for PiecewisePolynomial {
    fn value(&self, u: f64) -> f64 {
        self.eval(u)
    }
    fn derivative(&self, u: f64) -> f64 {
        let k = self.piece_index(u);
        self.pieces[k].derivative().eval(u)
    }
    fn turning_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        PiecewisePolynomial::turning_points(self, lo, hi)
    }
    fn derivative_bounds(&self, lo: f64, hi: f64) -> (f64, f64) {
        self.derivative_range(lo, hi)
    }
}

/// `f(u) = sin u`, a non-polynomial flux used in property tests.
#[derive(Debug, Clone, Copy)]
pub struct SineFlux;

impl FluxFunction for SineFlux {
    fn value(&self, u: f64) -> f64 {
        u.sin()
    }
    fn derivative(&self, u: f64) -> f64 {
        u.cos()
    }
    fn turning_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let pi = std::f64::consts::PI;
        let mut k = ((lo - half_pi) / pi).floor() as i64;
        let mut out = Vec::new();
        loop {
            let t = half_pi + k as f64 * pi;
            if t >= hi {
                break;
            }
            if t > lo {
                out.push(t);
            }
            k += 1;
        }
        out
    }
    fn derivative_bounds(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut pts = vec![lo, hi];
        let pi = std::f64::consts::PI;
        let mut k = (lo / pi).floor() as i64;
        while (k as f64) * pi < hi {
            let t = k as f64 * pi;
            if t > lo {
                pts.push(t);
            }
            k += 1;
        }
        let vals: Vec<f64> = pts.iter().map(|u| u.cos()).collect();
        (vals.iter().cloned().fold(f64::INFINITY, f64::min), vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Choice of two-point convective flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FluxKind {
    #[default]
    #[serde(alias = "engquist-osher", alias = "engquistosher")]
    Eo,
    Godunov,
    Lf,
    #[serde(alias = "linear_upwind", alias = "upwind")]
    LinearUpwind,
}

impl std::str::FromStr for FluxKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eo" | "engquist-osher" => Ok(FluxKind::Eo),
            "godunov" => Ok(FluxKind::Godunov),
            "lf" | "lax-friedrichs" => Ok(FluxKind::Lf),
            "upwind" | "linear-upwind" | "linearupwind" => Ok(FluxKind::LinearUpwind),
            _ => Err(Error::InvalidParameter(format!("unknown flux `{s}`"))),
        }
    }
}

impl std::fmt::Display for FluxKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FluxKind::Eo => "eo",
            FluxKind::Godunov => "godunov",
            FluxKind::Lf => "lf",
            FluxKind::LinearUpwind => "upwind",
        };
        f.write_str(s)
    }
}

/// A two-point flux `f̂(u⁻, u⁺)` bound to a flux function and a state range.
#[derive(Debug, Clone)]
pub struct ConvectiveFlux {
    pub kind: FluxKind,
    f: Arc<dyn FluxFunction>,
    range: (f64, f64),
    /// Turning points of `f` over `range`, cached.
    turning: Vec<f64>,
    /// Lax–Friedrichs viscosity.
    alpha: f64,
    speed: f64,
}

impl ConvectiveFlux {
    pub fn new(kind: FluxKind, f: Arc<dyn FluxFunction>, range: (f64, f64), linear_speed: Option<f64>) -> Result<Self> {
        let (lo, hi) = range;
        if !(lo <= hi) {
            return Err(Error::InvalidParameter("flux range is empty".into()));
        }
        let turning = f.turning_points(lo, hi);
        let (dmin, dmax) = f.derivative_bounds(lo, hi);
        let speed = match (kind, linear_speed) {
            (FluxKind::LinearUpwind, Some(c)) => c,
            (FluxKind::LinearUpwind, None) => {
                return Err(Error::InvalidParameter("the linear upwind flux needs a linear problem".into()))
            }
            _ => 0.0,
        };
        Ok(ConvectiveFlux { kind, f, range, turning, alpha: dmin.abs().max(dmax.abs()), speed })
    }

    /// Flux for a problem, over its admissible state range.
    pub fn for_problem(kind: FluxKind, problem: &Problem) -> Result<Self> {
        Self::new(
            kind,
            Arc::new(problem.spec.f.clone()),
            problem.derived.state_range,
            problem.spec.linear_speed,
        )
    }

    pub fn function(&self) -> &dyn FluxFunction {
        self.f.as_ref()
    }

    /// Calls `visit` on each turning point of `f` strictly inside `(lo, hi)`, in order.
    fn for_each_turning<V: FnMut(f64)>(&self, lo: f64, hi: f64, mut visit: V) {
        if lo >= self.range.0 && hi <= self.range.1 {
            for t in self.turning.iter().copied().filter(|t| *t > lo && *t < hi) {
                visit(t);
            }
        } else {
            for t in self.f.turning_points(lo, hi) {
                visit(t);
            }
        }
    }

    /// `∫_lo^hi max(f', 0)` for `lo ≤ hi`.
    fn positive_variation(&self, lo: f64, hi: f64) -> f64 {
        let mut total = 0.0;
        let mut fa = self.f.value(lo);
        self.for_each_turning(lo, hi, |t| {
            let ft = self.f.value(t);
            total += (ft - fa).max(0.0);
            fa = ft;
        });
        total + (self.f.value(hi) - fa).max(0.0)
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match self.kind {
            FluxKind::Eo => {
                if u == v {
                    return self.f.value(u);
                }
                // f(v) + ∫_v^u max(f', 0)
                if u > v {
                    self.f.value(v) + self.positive_variation(v, u)
                } else {
                    self.f.value(v) - self.positive_variation(u, v)
                }
            }
            FluxKind::Godunov => {
                if u == v {
                    return self.f.value(u);
                }
                let (lo, hi) = if u < v { (u, v) } else { (v, u) };
                let (flo, fhi) = (self.f.value(lo), self.f.value(hi));
                if u < v {
                    let mut best = flo.min(fhi);
                    self.for_each_turning(lo, hi, |t| best = best.min(self.f.value(t)));
                    best
                } else {
                    let mut best = flo.max(fhi);
                    self.for_each_turning(lo, hi, |t| best = best.max(self.f.value(t)));
                    best
                }
            }
            FluxKind::Lf => 0.5 * (self.f.value(u) + self.f.value(v)) - 0.5 * self.alpha * (v - u),
            FluxKind::LinearUpwind => 0.5 * self.speed * (u + v) - 0.5 * self.speed.abs() * (v - u),
        }
    }

    /// `(‖∂₁f̂‖∞, ‖∂₂f̂‖∞)` over the state range.
    pub fn lipschitz_bounds(&self) -> (f64, f64) {
        let (dmin, dmax) = self.f.derivative_bounds(self.range.0, self.range.1);
        match self.kind {
            FluxKind::Eo | FluxKind::Godunov => (dmax.max(0.0), (-dmin).max(0.0)),
            FluxKind::Lf => (0.5 * (dmax + self.alpha), 0.5 * (self.alpha - dmin)),
            FluxKind::LinearUpwind => (self.speed.max(0.0), (-self.speed).max(0.0)),
        }
    }
}

/// Free-function form of [`ConvectiveFlux::eval`].
pub fn convective_flux(flux: &ConvectiveFlux, u_minus: f64, u_plus: f64) -> f64 {
    flux.eval(u_minus, u_plus)
}

/// Penalty weights of the DDG diffusion flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdgFluxParams {
    pub degree: usize,
    pub beta0: f64,
    /// Weight of `Δx [∂²A]`; used for `k = 2`.
    pub beta1: f64,
}

impl DdgFluxParams {
    pub fn defaults(degree: usize) -> Result<Self> {
        match degree {
            0 => Ok(DdgFluxParams { degree, beta0: 1.0, beta1: 0.0 }),
            1 => Ok(DdgFluxParams { degree, beta0: 2.0, beta1: 0.0 }),
            2 => Ok(DdgFluxParams { degree, beta0: 4.0, beta1: 1.0 / 12.0 }),
            _ => Err(Error::InvalidParameter(format!("degree {degree} is not supported (k ≤ 2)"))),
        }
    }

    /// Number of derivatives of `A` the flux reads at each trace.
    pub fn traces_needed(&self) -> usize {
        match self.degree {
            0 => 1,
            1 => 2,
            _ => 3,
        }
    }
}

/// `ĥ = β₀[A]/Δx + avg(A_x) + β₁ Δx [A_xx]`; traces are `[A, A_x, A_xx]` on each side.
pub fn ddg_diffusion_flux(params: &DdgFluxParams, minus: &[f64], plus: &[f64], dx: f64) -> Result<f64> {
    let needed = params.traces_needed();
    let got = minus.len().min(plus.len());
    if got < needed {
        return Err(Error::MissingTraces { degree: params.degree, needed, got });
    }
    let mut h = params.beta0 * (plus[0] - minus[0]) / dx;
    if params.degree >= 1 {
        h += 0.5 * (plus[1] + minus[1]);
    }
    if params.degree >= 2 {
        h += params.beta1 * dx * (plus[2] - minus[2]);
    }
    Ok(h)
}

/// Outcome of the sampled admissibility search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityCertificate {
    pub gamma: f64,
    pub alpha: f64,
}

/// Per-sample terms of the admissibility inequality.
struct AdmissibilityTerms {
    flux_term: f64,
    jump_term: f64,
    energy: f64,
}

/// `[A, A_x, A_xx]` of a DG cell polynomial at reference point `xi = ±1`.
pub fn a_traces(problem: &Problem, modes: &[f64], xi: f64, dx: f64) -> [f64; 3] {
    let mut u = 0.0;
    let mut ux = 0.0;
    let mut uxx = 0.0;
    for (p, c) in modes.iter().enumerate() {
        let (v, d, s) = legendre(p, xi);
        u += c * v;
        ux += c * d * 2.0 / dx;
        uxx += c * s * 4.0 / (dx * dx);
    }
    let a = problem.a(u);
    [problem.big_a(u), a * ux, problem.da(u) * ux * ux + a * uxx]
}

fn admissibility_terms(
    params: &DdgFluxParams,
    problem: &Problem,
    modes: &[Vec<f64>],
    dx: f64,
    rule: &GaussLegendre,
) -> Result<AdmissibilityTerms> {
    let m = params.degree + 1;
    let zero = vec![0.0; m];
    let n = modes.len();
    let mut flux_term = 0.0;
    let mut jump_term = 0.0;
    for i in 0..=n {
        let left = if i == 0 { &zero } else { &modes[i - 1] };
        let right = if i == n { &zero } else { &modes[i] };
        let tm = a_traces(problem, left, 1.0, dx);
        let tp = a_traces(problem, right, -1.0, dx);
        let um: f64 = left.iter().enumerate().map(|(p, c)| c * legendre(p, 1.0).0).sum();
        let up: f64 = right.iter().enumerate().map(|(p, c)| c * legendre(p, -1.0).0).sum();
        let jump = up - um;
        flux_term += ddg_diffusion_flux(params, &tm, &tp, dx)? * jump;
        jump_term += (tp[0] - tm[0]) / dx * jump;
    }
    let mut energy = 0.0;
    for cell in modes {
        for (xi, w) in rule.nodes.iter().zip(&rule.weights) {
            let mut u = 0.0;
            let mut ux = 0.0;
            for (p, c) in cell.iter().enumerate() {
                let (v, d, _) = legendre(p, *xi);
                u += c * v;
                ux += c * d * 2.0 / dx;
            }
            energy += 0.5 * dx * w * problem.a(u) * ux * ux;
        }
    }
    Ok(AdmissibilityTerms { flux_term, jump_term, energy })
}

/// Searches `γ ∈ {0.1, …, 0.9}` for the largest `α ≥ 0` satisfying the admissibility
/// inequality on `n_samples` random degree-`k` states over 32 cells.
///
/// Samples rotate through independent random cells, sawtooth states and small
/// perturbations of a constant.
///
/// Returns `None` when no `γ` admits `α ≥ 0`. When every sampled jump term vanishes the
/// inequality does not constrain `α` and the certificate reports `α = 0`.
pub fn check_admissibility<R: Rng>(
    params: &DdgFluxParams,
    problem: &Problem,
    n_samples: usize,
    rng: &mut R,
) -> Result<Option<AdmissibilityCertificate>> {
    const CELLS: usize = 32;
    let dx = 1.0 / CELLS as f64;
    let m = params.degree + 1;
    let (lo, hi) = problem.derived.state_range;
    let width = (hi - lo).max(1e-3);
    let rule = GaussLegendre::new(m + 4);
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let family = samples.len() % 3;
        let mean = rng.gen_range(lo..=hi);
        let slope = rng.gen_range(-0.5..=0.5) * width;
        let modes: Vec<Vec<f64>> = (0..CELLS)
            .map(|_| {
                (0..m)
                    .map(|p| match (family, p) {
                        // independent cells
                        (0, 0) => rng.gen_range(lo..=hi),
                        (0, _) => rng.gen_range(-0.5..=0.5) * width / (p as f64),
                        // sawtooth: equal means and slopes, jumps against the slope
                        (1, 0) => mean,
                        (1, 1) => slope * (1.0 + 0.05 * rng.gen_range(-1.0..=1.0)),
                        (1, _) => 0.05 * slope * rng.gen_range(-1.0..=1.0),
                        // small perturbations of a common state
                        (_, 0) => mean + 0.05 * width * rng.gen_range(-1.0..=1.0),
                        (_, _) => 0.05 * width * rng.gen_range(-1.0..=1.0) / (p as f64),
                    })
                    .collect()
            })
            .collect();
        samples.push(admissibility_terms(params, problem, &modes, dx, &rule)?);
    }
    let mut best: Option<AdmissibilityCertificate> = None;
    for g in 1..=9 {
        let gamma = g as f64 / 10.0;
        let mut alpha = f64::INFINITY;
        let mut feasible = true;
        for s in &samples {
            let lhs = s.flux_term + gamma * s.energy;
            if s.jump_term > 1e-300 {
                alpha = alpha.min(lhs / s.jump_term);
            } else if lhs < -1e-14 * (s.flux_term.abs() + s.energy) {
                feasible = false;
            }
        }
        if !feasible || alpha < 0.0 {
            continue;
        }
        if alpha.is_infinite() {
            alpha = 0.0;
        }
        if best.is_none_or(|b| alpha > b.alpha) {
            best = Some(AdmissibilityCertificate { gamma, alpha });
        }
    }
    Ok(best)
}

/// LDG flux pair `(ĥ_u, ĥ_q)` with `c₁₂ = ½[g]/[u]`.
pub fn ldg_flux_pair(problem: &Problem, flux: &ConvectiveFlux, w_minus: (f64, f64), w_plus: (f64, f64)) -> (f64, f64) {
    let (um, qm) = w_minus;
    let (up, qp) = w_plus;
    let ju = up - um;
    let (gm, gp) = (problem.g(um), problem.g(up));
    let fhat = flux.eval(um, up);
    let (f_quot, g_quot) = if ju == 0.0 {
        (problem.f(um), problem.sqrt_a(um))
    } else {
        ((problem.big_f(up) - problem.big_f(um)) / ju, (gp - gm) / ju)
    };
    let c11 = if ju == 0.0 { 0.0 } else { (f_quot - fhat) / ju };
    let c12 = 0.5 * g_quot;
    let qbar = 0.5 * (qm + qp);
    let h_u = f_quot - g_quot * qbar - c11 * ju - c12 * (qp - qm);
    let h_q = -0.5 * (gm + gp) + c12 * ju;
    (h_u, h_q)
}

/// `c₁₁ = ([F]/[u] - f̂)/[u]`, zero at continuity.
pub fn ldg_c11(problem: &Problem, flux: &ConvectiveFlux, um: f64, up: f64) -> f64 {
    let ju = up - um;
    if ju == 0.0 {
        return 0.0;
    }
    ((problem.big_f(up) - problem.big_f(um)) / ju - flux.eval(um, up)) / ju
}

/// Sampled Lipschitz constant of `c₁₂(u⁻, u⁺) = ½[g]/[u]` on an `n × n` lattice over `[lo, hi]²`.
pub fn c12_lipschitz_estimate(problem: &Problem, lo: f64, hi: f64, n: usize) -> f64 {
    let c12 = |um: f64, up: f64| {
        let ju = up - um;
        if ju == 0.0 {
            0.5 * problem.sqrt_a(um)
        } else {
            0.5 * (problem.g(up) - problem.g(um)) / ju
        }
    };
    let h = (hi - lo) / (n.max(2) - 1) as f64;
    let pts: Vec<f64> = (0..n.max(2)).map(|j| lo + j as f64 * h).collect();
    let mut best = 0.0f64;
    for (a, &um) in pts.iter().enumerate() {
        for (b, &up) in pts.iter().enumerate() {
            let v = c12(um, up);
            if a + 1 < pts.len() {
                best = best.max((c12(pts[a + 1], up) - v).abs() / h);
            }
            if b + 1 < pts.len() {
                best = best.max((c12(um, pts[b + 1]) - v).abs() / h);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::problem::{Example, ProblemSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn burgers(kind: FluxKind) -> ConvectiveFlux {
        let f = PiecewisePolynomial::single(Polynomial::new(vec![0.0, 0.0, 1.0]));
        ConvectiveFlux::new(kind, Arc::new(f), (-2.0, 2.0), None).unwrap()
    }

    #[test]
    fn consistency() {
        for kind in [FluxKind::Eo, FluxKind::Godunov, FluxKind::Lf] {
            assert!((burgers(kind).eval(0.3, 0.3) - 0.09).abs() < 1e-15);
        }
    }

    #[test]
    fn godunov_and_eo_values() {
        assert_eq!(burgers(FluxKind::Godunov).eval(1.0, 0.0), 1.0);
        let brute = (0..=10000).map(|k| (k as f64 / 10000.0).powi(2)).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(burgers(FluxKind::Godunov).eval(1.0, 0.0), brute);
        assert!(burgers(FluxKind::Eo).eval(-1.0, 1.0).abs() < 1e-15);
        // split-integral definition: f(0) + ∫_0^u max(f',0) + ∫_0^v min(f',0)
        let eo = burgers(FluxKind::Eo);
        for (u, v) in [(0.7, -0.2), (-0.4, 0.9), (1.2, 0.3)] {
            let split = (u as f64).max(0.0).powi(2) + (v as f64).min(0.0).powi(2);
            assert!((eo.eval(u, v) - split).abs() < 1e-14, "{u} {v}");
        }
    }

    #[test]
    fn linear_upwind() {
        let f = PiecewisePolynomial::single(Polynomial::new(vec![0.0, -2.0]));
        let fl = ConvectiveFlux::new(FluxKind::LinearUpwind, Arc::new(f.clone()), (-1.0, 1.0), Some(-2.0)).unwrap();
        assert_eq!(fl.eval(0.5, 0.25), -0.5);
        let eo = ConvectiveFlux::new(FluxKind::Eo, Arc::new(f), (-1.0, 1.0), None).unwrap();
        assert_eq!(eo.eval(0.5, 0.25), -0.5);
        assert_eq!(fl.lipschitz_bounds(), (0.0, 2.0));
        assert!(ConvectiveFlux::new(
            FluxKind::LinearUpwind,
            Arc::new(PiecewisePolynomial::single(Polynomial::zero())),
            (0.0, 1.0),
            None
        )
        .is_err());
    }

    #[test]
    fn sine_turning_points() {
        let t = SineFlux.turning_points(-4.0, 4.0);
        assert_eq!(t.len(), 2);
        let fl = ConvectiveFlux::new(FluxKind::Godunov, Arc::new(SineFlux), (-4.0, 4.0), None).unwrap();
        assert!((fl.eval(0.0, 3.0) - 0.0).abs() < 1e-15);
        assert!((fl.eval(3.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ddg_flux_examples() {
        let k0 = DdgFluxParams::defaults(0).unwrap();
        assert!((ddg_diffusion_flux(&k0, &[0.0125], &[0.0375], 0.1).unwrap() - 0.25).abs() < 1e-15);
        let k2 = DdgFluxParams::defaults(2).unwrap();
        let h = ddg_diffusion_flux(&k2, &[0.3, 0.2, 0.0], &[0.3, 0.4, 1.0], 0.05).unwrap();
        assert!((h - (0.3 + 0.05 / 12.0)).abs() < 1e-15);
        assert!(matches!(ddg_diffusion_flux(&k2, &[0.3], &[0.3], 0.05), Err(Error::MissingTraces { .. })));
        assert_eq!(ddg_diffusion_flux(&k2, &[0.0; 3], &[0.0; 3], 0.05).unwrap(), 0.0);
    }

    #[test]
    fn admissibility_certificates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ex3 = Problem::builtin(Example::Ex3).unwrap();
        let cert = check_admissibility(&DdgFluxParams::defaults(0).unwrap(), &ex3, 100, &mut rng).unwrap().unwrap();
        assert!((cert.alpha - 1.0).abs() < 1e-12);
        let bad = DdgFluxParams { degree: 1, beta0: 0.0, beta1: 0.0 };
        assert!(check_admissibility(&bad, &ex3, 100, &mut rng).unwrap().is_none());
        for k in 1..=2 {
            let c = check_admissibility(&DdgFluxParams::defaults(k).unwrap(), &ex3, 100, &mut rng).unwrap();
            assert!(c.is_some(), "k={k}");
        }
        let mut spec = ProblemSpec::builtin(Example::Ex1);
        spec.a = PiecewisePolynomial::single(Polynomial::zero());
        let inviscid = Problem::new(spec).unwrap();
        let c = check_admissibility(&DdgFluxParams::defaults(1).unwrap(), &inviscid, 100, &mut rng).unwrap().unwrap();
        assert_eq!(c.alpha, 0.0);
    }

    #[test]
    fn ldg_pair_limits() {
        let p = Problem::builtin(Example::Ex2).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::Eo, &p).unwrap();
        let (hu, hq) = ldg_flux_pair(&p, &fl, (0.7, 0.3), (0.7, 0.3));
        assert!((hu - (p.f(0.7) - p.sqrt_a(0.7) * 0.3)).abs() < 1e-15);
        assert!((hq + p.g(0.7)).abs() < 1e-15);
        assert_eq!(ldg_flux_pair(&p, &fl, (0.0, 0.0), (0.0, 0.0)), (0.0, 0.0));
        let (_, hq) = ldg_flux_pair(&p, &fl, (0.5, 0.0), (0.6, 0.0));
        assert!((hq + p.g(0.5)).abs() < 1e-15);
    }
}
