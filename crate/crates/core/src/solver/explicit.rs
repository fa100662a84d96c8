//! The piecewise-constant DDG and LDG schemes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{ldg_flux_pair, ConvectiveFlux};
use crate::fractional::WeightMatrix;
use crate::problem::Problem;
use crate::solver::grid::Boundary;
use crate::solver::state::CellState;

/// Discretization of the local diffusion term at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffusionForm {
    /// `(A(U_{i+1}) - A(U_i)) / Δx`
    Ddg,
    /// `(g(U_{i+1}) - g(U_i))² / ((U_{i+1} - U_i) Δx)`
    Ldg,
}

/// Spatial operator of the `k = 0` schemes on a window.
#[derive(Debug, Clone)]
pub struct K0Operator<'a> {
    pub problem: &'a Problem,
    pub flux: &'a ConvectiveFlux,
    pub weights: Option<&'a WeightMatrix>,
    pub dx: f64,
    pub boundary: Boundary,
    pub form: DiffusionForm,
}

/// Output of one evaluation of the `k = 0` operator.
#[derive(Debug, Clone, Default)]
pub struct K0Evaluation {
    /// `dU/dt`
    pub rhs: Vec<f64>,
    /// `L⟨U⟩_i = (1/Δx) Σ_j G_{j-i} U_j` (zero when `b = 0`).
    pub levy: Vec<f64>,
}

impl<'a> K0Operator<'a> {
    #[inline]
    fn neighbour(&self, u: &[f64], i: isize) -> f64 {
        let n = u.len() as isize;
        if i >= 0 && i < n {
            u[i as usize]
        } else {
            match self.boundary {
                Boundary::Zero => 0.0,
                Boundary::Periodic => u[i.rem_euclid(n) as usize],
            }
        }
    }

    /// Diffusive flux `D_i` at the left edge of cell `i`, between `ul = U_{i-1}` and `ur = U_i`.
    #[inline]
    fn diffusive(&self, ul: f64, ur: f64) -> f64 {
        match self.form {
            DiffusionForm::Ddg => (self.problem.big_a(ur) - self.problem.big_a(ul)) / self.dx,
            DiffusionForm::Ldg => {
                let du = ur - ul;
                if du == 0.0 {
                    0.0
                } else {
                    let dg = self.problem.g(ur) - self.problem.g(ul);
                    dg * dg / du / self.dx
                }
            }
        }
    }

    /// Interface fluxes `F_i = f̂(U_{i-1}, U_i) - D_i` for `i = 0..=M`.
    pub fn interface_fluxes(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len() as isize;
        (0..=n)
            .map(|i| {
                let ul = self.neighbour(u, i - 1);
                let ur = self.neighbour(u, i);
                self.flux.eval(ul, ur) - self.diffusive(ul, ur)
            })
            .collect()
    }

    pub fn evaluate(&self, u: &[f64]) -> Result<K0Evaluation> {
        let b = self.problem.b();
        let levy = match (self.weights, b > 0.0) {
            (Some(w), true) => w.apply(u)?,
            (None, true) => {
                return Err(Error::InvalidParameter("b > 0 requires a weight matrix".into()));
            }
            _ => vec![0.0; u.len()],
        };
        let fl = self.interface_fluxes(u);
        let rhs = (0..u.len()).map(|i| -(fl[i + 1] - fl[i]) / self.dx + b * levy[i]).collect();
        Ok(K0Evaluation { rhs, levy })
    }

    /// `U + dt · rhs(U)`, with the nonlocal term returned for entropy audits.
    pub fn step(&self, u: &[f64], dt: f64) -> Result<(Vec<f64>, K0Evaluation)> {
        let ev = self.evaluate(u)?;
        let next = u.iter().zip(&ev.rhs).map(|(a, r)| a + dt * r).collect();
        Ok((next, ev))
    }
}

/// One forward-Euler step of the piecewise-constant DDG scheme.
pub fn step_ddg_k0(
    state: &CellState,
    problem: &Problem,
    weights: Option<&WeightMatrix>,
    flux: &ConvectiveFlux,
    dx: f64,
    boundary: Boundary,
    dt: f64,
) -> Result<CellState> {
    let op = K0Operator { problem, flux, weights, dx, boundary, form: DiffusionForm::Ddg };
    Ok(CellState::new(op.step(&state.values, dt)?.0))
}

/// `(U, Q)` of the piecewise-constant LDG scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdgState {
    pub u: Vec<f64>,
    pub q: Vec<f64>,
}

impl LdgState {
    /// Builds the state with `Q_i = (g(U_i) - g(U_{i-1}))/Δx`.
    pub fn from_u(u: Vec<f64>, problem: &Problem, dx: f64, boundary: Boundary) -> Self {
        let n = u.len();
        let q = (0..n)
            .map(|i| {
                let left = if i > 0 {
                    u[i - 1]
                } else {
                    match boundary {
                        Boundary::Zero => 0.0,
                        Boundary::Periodic => u[n - 1],
                    }
                };
                (problem.g(u[i]) - problem.g(left)) / dx
            })
            .collect();
        LdgState { u, q }
    }
}

/// One forward-Euler step of the piecewise-constant LDG scheme.
pub fn step_ldg_k0(
    state: &LdgState,
    problem: &Problem,
    weights: Option<&WeightMatrix>,
    flux: &ConvectiveFlux,
    dx: f64,
    boundary: Boundary,
    dt: f64,
) -> Result<LdgState> {
    let op = K0Operator { problem, flux, weights, dx, boundary, form: DiffusionForm::Ldg };
    let (u, _) = op.step(&state.u, dt)?;
    Ok(LdgState::from_u(u, problem, dx, boundary))
}

/// `dU/dt` of the `k = 0` LDG scheme assembled from the flux pair `(ĥ_u, ĥ_q)`.
///
/// `Q` is obtained from the `q`-equation and `ĥ_u` from the full pair, so agreement with
/// the closed-form operator checks the algebra behind the `c₁₂` choice.
pub fn ldg_k0_rhs_from_flux_pair(
    u: &[f64],
    problem: &Problem,
    weights: Option<&WeightMatrix>,
    flux: &ConvectiveFlux,
    dx: f64,
    boundary: Boundary,
) -> Result<Vec<f64>> {
    let n = u.len();
    let at = |i: isize| -> f64 {
        if i >= 0 && (i as usize) < n {
            u[i as usize]
        } else {
            match boundary {
                Boundary::Zero => 0.0,
                Boundary::Periodic => u[i.rem_euclid(n as isize) as usize],
            }
        }
    };
    // Q_j from the q-equation on cell j; exterior cells follow the same relation with U = 0
    let hq = |i: isize| ldg_flux_pair(problem, flux, (at(i - 1), 0.0), (at(i), 0.0)).1;
    let q_of = |j: isize| (hq(j) - hq(j + 1)) / dx;
    let hu = |i: isize| ldg_flux_pair(problem, flux, (at(i - 1), q_of(i - 1)), (at(i), q_of(i))).0;
    let b = problem.b();
    let levy = match (weights, b > 0.0) {
        (Some(w), true) => w.apply(u)?,
        _ => vec![0.0; n],
    };
    Ok((0..n)
        .map(|i| {
            let i = i as isize;
            -(hu(i + 1) - hu(i)) / dx + b * levy[i as usize]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::FluxKind;
    use crate::poly::{PiecewisePolynomial, Polynomial};
    use crate::problem::{Example, ProblemSpec};

    #[test]
    fn rest_state_is_fixed() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::Eo, &p).unwrap();
        let grid = crate::solver::grid::Grid::symmetric(1.0, 10).unwrap();
        let w = WeightMatrix::assemble(crate::fractional::FractionalParams::new(0.5).unwrap(), &grid).unwrap();
        let s = step_ddg_k0(&CellState::zeros(20), &p, Some(&w), &fl, 0.1, Boundary::Zero, 1e-3).unwrap();
        assert!(s.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn inviscid_upwind_bump() {
        let mut spec = ProblemSpec::builtin(Example::Ex1).with_fractional(0.5, 0.0);
        spec.a = PiecewisePolynomial::single(Polynomial::zero());
        let p = Problem::new(spec).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::Eo, &p).unwrap();
        let mut u = vec![0.0; 8];
        u[3] = 0.8;
        let (dx, dt) = (0.1, 0.02);
        let s = step_ddg_k0(&CellState::new(u), &p, None, &fl, dx, Boundary::Zero, dt).unwrap();
        // u ≥ 0 and f' ≥ 0: pure upwinding to the right
        let lam = dt / dx;
        assert!((s.values[3] - (0.8 - lam * 0.64)).abs() < 1e-15);
        assert!((s.values[4] - lam * 0.64).abs() < 1e-15);
        assert_eq!(s.values[2], 0.0);
    }

    #[test]
    fn ldg_matches_ddg_without_diffusion() {
        let mut spec = ProblemSpec::builtin(Example::Ex2);
        spec.a = PiecewisePolynomial::single(Polynomial::zero());
        let p = Problem::new(spec.with_fractional(0.5, 0.0)).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::Eo, &p).unwrap();
        let u: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin().abs()).collect();
        let d = step_ddg_k0(&CellState::new(u.clone()), &p, None, &fl, 0.1, Boundary::Zero, 0.01).unwrap();
        let l = step_ldg_k0(&LdgState::from_u(u, &p, 0.1, Boundary::Zero), &p, None, &fl, 0.1, Boundary::Zero, 0.01)
            .unwrap();
        assert_eq!(d.values, l.u);
    }

    #[test]
    fn flux_pair_assembly_matches_closed_form() {
        let p = Problem::builtin(Example::Ex2).unwrap();
        let fl = ConvectiveFlux::for_problem(FluxKind::Eo, &p).unwrap();
        let grid = crate::solver::grid::Grid::symmetric(1.0, 8).unwrap();
        let w = WeightMatrix::assemble(crate::fractional::FractionalParams::new(0.5).unwrap(), &grid).unwrap();
        let u: Vec<f64> = (0..grid.cells).map(|i| 0.5 + 0.3 * ((i as f64) * 1.3).cos()).collect();
        for boundary in [Boundary::Zero, Boundary::Periodic] {
            let op = K0Operator { problem: &p, flux: &fl, weights: Some(&w), dx: grid.dx, boundary, form: DiffusionForm::Ldg };
            let closed = op.evaluate(&u).unwrap().rhs;
            let assembled = ldg_k0_rhs_from_flux_pair(&u, &p, Some(&w), &fl, grid.dx, boundary).unwrap();
            for (a, b) in closed.iter().zip(&assembled) {
                assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()), "{a} vs {b}");
            }
        }
    }
}
