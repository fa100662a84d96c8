//! Cell entropy residuals of the piecewise-constant DDG scheme.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::ConvectiveFlux;
use crate::fractional::WeightMatrix;
use crate::problem::Problem;
use crate::solver::grid::Boundary;
use crate::solver::state::CellState;

/// `sgn` with `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Residuals of one step; a residual `≤ tol` means the inequality holds in that cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyAudit {
    pub levels: Vec<f64>,
    /// `residuals[l][i]` for level `l` and cell `i`.
    pub residuals: Vec<Vec<f64>>,
    pub worst: f64,
    pub worst_level: usize,
    pub worst_cell: usize,
}

impl EntropyAudit {
    /// `(level index, worst cell, residual)` for each level.
    pub fn worst_per_level(&self) -> Vec<(usize, usize, f64)> {
        self.residuals
            .iter()
            .enumerate()
            .map(|(l, r)| {
                let (cell, v) = r
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if *v > bv { (i, *v) } else { (bi, bv) });
                (l, cell, v)
            })
            .collect()
    }
}

/// `count` equispaced levels strictly inside `(min U, max U)`.
pub fn interior_levels(u: &CellState, count: usize) -> Vec<f64> {
    let (lo, hi) = min_max(&u.values);
    (1..=count).map(|j| lo + (hi - lo) * j as f64 / (count + 1) as f64).collect()
}

/// Nine interior levels plus `min U - |U|_BV` and `max U + |U|_BV`.
pub fn default_levels(u: &CellState) -> Vec<f64> {
    let (lo, hi) = min_max(&u.values);
    let bv = u.bv();
    let mut out = vec![lo - bv];
    out.extend(interior_levels(u, 9));
    out.push(hi + bv);
    out
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)))
}

/// Residual of the discrete cell entropy inequality
/// `η^{n+1} - η^n + Δt D₋Q - Δt D₋D₊|A(U^n) - A(k)| - Δt η'(U^{n+1}) b L⟨U^n⟩`
/// for `η = |u - k|`, with `L⟨U^n⟩` supplied.
#[allow(clippy::too_many_arguments)]
pub fn entropy_residuals_with_levy(
    u_n: &[f64],
    u_np1: &[f64],
    levels: &[f64],
    problem: &Problem,
    flux: &ConvectiveFlux,
    levy: &[f64],
    dx: f64,
    dt: f64,
    boundary: Boundary,
) -> Result<EntropyAudit> {
    let n = u_n.len();
    if u_np1.len() != n || levy.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u_np1.len().min(levy.len()) });
    }
    let at = |i: isize| -> f64 {
        if i >= 0 && (i as usize) < n {
            u_n[i as usize]
        } else {
            match boundary {
                Boundary::Zero => 0.0,
                Boundary::Periodic => u_n[i.rem_euclid(n as isize) as usize],
            }
        }
    };
    let b = problem.b();
    let mut residuals = Vec::with_capacity(levels.len());
    let (mut worst, mut worst_level, mut worst_cell) = (f64::NEG_INFINITY, 0, 0);
    for (l, &k) in levels.iter().enumerate() {
        let ak = problem.big_a(k);
        // q[i + 1] = Q_i and w[i + 1] = |A(U_i) - A(k)| for i = -1..=n
        let q: Vec<f64> = (-1..=n as isize)
            .map(|i| {
                let (u, v) = (at(i), at(i + 1));
                flux.eval(u.max(k), v.max(k)) - flux.eval(u.min(k), v.min(k))
            })
            .collect();
        let w: Vec<f64> = (-1..=n as isize).map(|i| (problem.big_a(at(i)) - ak).abs()).collect();
        let mut r = Vec::with_capacity(n);
        for i in 0..n {
            let eta_new = (u_np1[i] - k).abs();
            let eta_old = (u_n[i] - k).abs();
            let dq = (q[i + 1] - q[i]) / dx;
            let lap = (w[i + 2] - 2.0 * w[i + 1] + w[i]) / (dx * dx);
            let v = eta_new - eta_old + dt * dq - dt * lap - dt * sgn(u_np1[i] - k) * b * levy[i];
            if v > worst {
                worst = v;
                worst_level = l;
                worst_cell = i;
            }
            r.push(v);
        }
        residuals.push(r);
    }
    Ok(EntropyAudit { levels: levels.to_vec(), residuals, worst, worst_level, worst_cell })
}

/// [`entropy_residuals_with_levy`] with `L⟨U^n⟩` computed from the weights.
#[allow(clippy::too_many_arguments)]
pub fn check_cell_entropy(
    u_n: &CellState,
    u_np1: &CellState,
    levels: &[f64],
    problem: &Problem,
    flux: &ConvectiveFlux,
    weights: Option<&WeightMatrix>,
    dx: f64,
    dt: f64,
    boundary: Boundary,
) -> Result<EntropyAudit> {
    let levy = match weights {
        Some(w) if problem.b() > 0.0 => w.apply(&u_n.values)?,
        _ => vec![0.0; u_n.len()],
    };
    entropy_residuals_with_levy(&u_n.values, &u_np1.values, levels, problem, flux, &levy, dx, dt, boundary)
}
