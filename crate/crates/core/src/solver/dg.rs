//! Semi-discrete DDG operator for Legendre degree `k ≤ 2`.

use crate::error::{Error, Result};
use crate::flux::{a_traces, ddg_diffusion_flux, ConvectiveFlux, DdgFluxParams};
use crate::fractional::{FractionalParams, NonlocalBlocks, WeightMatrix};
use crate::poly::legendre;
use crate::problem::Problem;
use crate::quadrature::GaussLegendre;
use crate::solver::explicit::{DiffusionForm, K0Operator};
use crate::solver::grid::{Boundary, Grid};
use crate::solver::state::DGState;

/// Nonlocal part of the operator.
#[derive(Debug, Clone)]
pub enum Nonlocal {
    None,
    /// Cell weights, used at `k = 0`.
    Weights(WeightMatrix),
    /// Modal blocks, used at `k ≥ 1`.
    Blocks(NonlocalBlocks),
}

impl Nonlocal {
    pub fn assemble(problem: &Problem, grid: &Grid, degree: usize, tail_correction: bool) -> Result<Self> {
        if problem.b() == 0.0 {
            return Ok(Nonlocal::None);
        }
        let params = FractionalParams::new(problem.lambda())?;
        if degree == 0 {
            Ok(Nonlocal::Weights(WeightMatrix::assemble(params, grid)?.with_tail_correction(tail_correction)))
        } else {
            Ok(Nonlocal::Blocks(NonlocalBlocks::assemble(&params, grid, degree)?))
        }
    }

    pub fn weights(&self) -> Option<&WeightMatrix> {
        match self {
            Nonlocal::Weights(w) => Some(w),
            _ => None,
        }
    }
}

/// `du/dt` of the DDG scheme: volume terms by Gauss–Legendre, interface fluxes `f̂` and `ĥ`,
/// the nonlocal term through [`Nonlocal`], and the diagonal mass matrix `Δx/(2p+1)`.
#[derive(Debug, Clone)]
pub struct DdgOperator<'a> {
    pub problem: &'a Problem,
    pub flux: &'a ConvectiveFlux,
    pub params: DdgFluxParams,
    pub grid: Grid,
    pub nonlocal: Nonlocal,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `P_p'(ξ_n)`, node-major.
    dbasis: Vec<f64>,
    /// `P_p(ξ_n)`, node-major.
    basis: Vec<f64>,
}

impl<'a> DdgOperator<'a> {
    pub fn new(problem: &'a Problem, flux: &'a ConvectiveFlux, grid: &Grid, params: DdgFluxParams, nonlocal: Nonlocal) -> Result<Self> {
        let k = params.degree;
        if k > 2 {
            return Err(Error::InvalidParameter(format!("degree {k} is not supported (k ≤ 2)")));
        }
        let rule = GaussLegendre::new(2 * k + 3);
        let m = k + 1;
        let mut basis = Vec::with_capacity(rule.len() * m);
        let mut dbasis = Vec::with_capacity(rule.len() * m);
        for xi in &rule.nodes {
            for p in 0..m {
                let (v, d, _) = legendre(p, *xi);
                basis.push(v);
                dbasis.push(d);
            }
        }
        Ok(DdgOperator {
            problem,
            flux,
            params,
            grid: grid.clone(),
            nonlocal,
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
            dbasis,
            basis,
        })
    }

    /// Operator with default `β` and a freshly assembled nonlocal term.
    pub fn for_problem(problem: &'a Problem, flux: &'a ConvectiveFlux, grid: &Grid, degree: usize) -> Result<Self> {
        let nonlocal = Nonlocal::assemble(problem, grid, degree, false)?;
        Self::new(problem, flux, grid, DdgFluxParams::defaults(degree)?, nonlocal)
    }

    pub fn degree(&self) -> usize {
        self.params.degree
    }

    /// `k = 0` reduction, sharing its arithmetic with the explicit scheme.
    pub fn k0(&self) -> K0Operator<'_> {
        K0Operator {
            problem: self.problem,
            flux: self.flux,
            weights: self.nonlocal.weights(),
            dx: self.grid.dx,
            boundary: self.grid.boundary,
            form: DiffusionForm::Ddg,
        }
    }

    pub fn rhs(&self, u: &DGState) -> Result<DGState> {
        if u.degree != self.params.degree || u.cells != self.grid.cells {
            return Err(Error::DimensionMismatch {
                expected: self.grid.cells * (self.params.degree + 1),
                found: u.coeffs.len(),
            });
        }
        Ok(DGState { cells: u.cells, degree: u.degree, coeffs: self.rhs_coeffs(&u.coeffs)? })
    }

    /// [`Self::rhs`] on raw cell-major coefficients.
    pub fn rhs_coeffs(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let k = self.params.degree;
        let m = k + 1;
        let n = self.grid.cells;
        if coeffs.len() != n * m {
            return Err(Error::DimensionMismatch { expected: n * m, found: coeffs.len() });
        }
        if k == 0 && self.params.beta0 == 1.0 {
            if let Nonlocal::Blocks(_) = self.nonlocal {
                return Err(Error::InvalidParameter("k = 0 uses cell weights".into()));
            }
            return Ok(self.k0().evaluate(coeffs)?.rhs);
        }
        self.modal_rhs(coeffs)
    }

    /// Generic modal assembly, also valid at `k = 0`.
    pub fn modal_rhs(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let k = self.params.degree;
        let m = k + 1;
        let n = self.grid.cells;
        if coeffs.len() != n * m {
            return Err(Error::DimensionMismatch { expected: n * m, found: coeffs.len() });
        }
        let dx = self.grid.dx;
        let zero = vec![0.0; m];
        let cell = |i: isize| -> &[f64] {
            if i >= 0 && (i as usize) < n {
                &coeffs[i as usize * m..(i as usize + 1) * m]
            } else {
                match self.grid.boundary {
                    Boundary::Zero => &zero,
                    Boundary::Periodic => {
                        let j = i.rem_euclid(n as isize) as usize;
                        &coeffs[j * m..(j + 1) * m]
                    }
                }
            }
        };
        // net interface flux f̂ - ĥ at the left edge of each cell
        let mut net = vec![0.0; n + 1];
        for (i, slot) in net.iter_mut().enumerate() {
            let left = cell(i as isize - 1);
            let right = cell(i as isize);
            let um: f64 = left.iter().sum();
            let up: f64 = right.iter().enumerate().map(|(p, c)| if p % 2 == 0 { *c } else { -c }).sum();
            let tm = a_traces(self.problem, left, 1.0, dx);
            let tp = a_traces(self.problem, right, -1.0, dx);
            *slot = self.flux.eval(um, up) - ddg_diffusion_flux(&self.params, &tm, &tp, dx)?;
        }
        let nonlocal = match &self.nonlocal {
            Nonlocal::None => None,
            Nonlocal::Blocks(b) => Some(b.apply(&DGState { cells: n, degree: k, coeffs: coeffs.to_vec() })),
            Nonlocal::Weights(w) => {
                // G_d is the (0,0) block
                let mut v = w.apply(coeffs)?;
                v.iter_mut().for_each(|x| *x *= dx);
                Some(v)
            }
        };
        let b = self.problem.b();
        let mut out = vec![0.0; n * m];
        for i in 0..n {
            let ui = &coeffs[i * m..(i + 1) * m];
            let mut r = vec![0.0; m];
            for (node, w) in self.weights.iter().enumerate() {
                let row = node * m;
                let mut u = 0.0;
                let mut ux = 0.0;
                for q in 0..m {
                    u += ui[q] * self.basis[row + q];
                    ux += ui[q] * self.dbasis[row + q];
                }
                ux *= 2.0 / dx;
                let g = self.problem.f(u) - self.problem.a(u) * ux;
                for (p, rp) in r.iter_mut().enumerate().skip(1) {
                    *rp += w * g * self.dbasis[row + p];
                }
            }
            for (p, rp) in r.iter_mut().enumerate() {
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                *rp += -net[i + 1] + sign * net[i];
                if let Some(nl) = &nonlocal {
                    *rp += b * nl[i * m + p];
                }
                out[i * m + p] = (2 * p + 1) as f64 / dx * *rp;
            }
        }
        debug_assert!(self.nodes.len() == self.weights.len());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::FluxKind;
    use crate::problem::Example;
    use crate::solver::state::CellState;

    #[test]
    fn constants_are_equilibria_on_periodic_window() {
        let p = Problem::builtin(Example::Ex3).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::LinearUpwind, &p).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap().with_boundary(Boundary::Periodic);
        for k in 0..=2 {
            let op = DdgOperator::for_problem(&p, &fl, &grid, k).unwrap();
            let mut u = DGState::zeros(grid.cells, k);
            for i in 0..grid.cells {
                u.set(i, 0, 0.7);
            }
            let r = op.rhs(&u).unwrap();
            assert!(r.coeffs.iter().all(|v| v.abs() < 1e-11), "k={k}: {:?}", &r.coeffs[..3]);
        }
    }

    #[test]
    fn degree_zero_is_explicit_scheme() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::Eo, &p).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let op = DdgOperator::for_problem(&p, &fl, &grid, 0).unwrap();
        let u0 = p.project_initial(&grid, 0);
        let r = op.rhs(&u0).unwrap();
        let dt = 1e-3;
        let mut fe = u0.clone();
        fe.axpy(dt, &r);
        let w = op.nonlocal.weights().unwrap();
        let explicit = crate::solver::explicit::step_ddg_k0(
            &CellState::new(u0.coeffs.clone()),
            &p,
            Some(w),
            &fl,
            grid.dx,
            grid.boundary,
            dt,
        )
        .unwrap();
        assert_eq!(fe.coeffs, explicit.values);
    }

    #[test]
    fn degree_zero_generic_path_agrees() {
        // β₀ = 1 routed through the modal assembly reproduces the explicit operator
        let p = Problem::builtin(Example::Ex1).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::Eo, &p).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let op = DdgOperator::for_problem(&p, &fl, &grid, 0).unwrap();
        let u0 = p.project_initial(&grid, 0);
        let a = op.rhs(&u0).unwrap();
        let b = op.modal_rhs(&u0.coeffs).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b) {
            assert!((x - y).abs() < 1e-11 * (1.0 + x.abs()));
        }
    }
}
