//! Grid-refinement studies: errors, relative errors and observed orders for `p = 1, 2`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::norms::{comparison_grid, error_norms, midpoint_samples, restrict_cell_averages};
use crate::analysis::rates::convergence_rate;
use crate::error::{Error, Result};
use crate::flux::FluxKind;
use crate::problem::Problem;
use crate::solver::grid::{Boundary, Grid};
use crate::solver::run::{run, RunOptions, Scheme, Trajectory};
use crate::spectral::{linear_exact_solution, LinearSymbol, SpectralConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ReferenceMode {
    /// Fourier solution of the linear problem.
    Oracle(SpectralConfig),
    /// Same scheme on a finer grid with `1/Δx_ref = inv_dx`.
    FineGrid { inv_dx: usize },
}

impl ReferenceMode {
    /// Oracle matching `boundary`: the window itself as the period on a periodic window,
    /// otherwise a period wide enough for the algebraic tails that `b > 0` creates.
    pub fn oracle_for(problem: &Problem, boundary: Boundary) -> Self {
        if boundary == Boundary::Periodic {
            ReferenceMode::Oracle(SpectralConfig { half_period: problem.spec.half_width, ..SpectralConfig::default() })
        } else if problem.b() > 0.0 {
            ReferenceMode::Oracle(SpectralConfig { half_period: 32.0, modes: 1 << 17, ..SpectralConfig::default() })
        } else {
            ReferenceMode::Oracle(SpectralConfig::default())
        }
    }
}

impl fmt::Display for ReferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceMode::Oracle(c) => write!(f, "oracle(L={},N={})", c.half_period, c.modes),
            ReferenceMode::FineGrid { inv_dx } => write!(f, "fine_grid(1/{inv_dx})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySetup {
    pub scheme: Scheme,
    pub flux: FluxKind,
    pub final_time: f64,
    pub safety: Option<f64>,
    pub reference: ReferenceMode,
    pub boundary: Boundary,
    /// Midpoint samples per cell of the finest grid (default 8).
    pub compare_refine: Option<usize>,
}

impl StudySetup {
    pub fn new(scheme: Scheme, flux: FluxKind, final_time: f64, reference: ReferenceMode) -> Self {
        StudySetup { scheme, flux, final_time, safety: None, reference, boundary: Boundary::Zero, compare_refine: None }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    fn refine(&self) -> usize {
        self.compare_refine.unwrap_or(8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub e1: f64,
    pub r1: f64,
    pub alpha1: Option<f64>,
    pub e2: f64,
    pub r2: f64,
    pub alpha2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub reference: String,
    pub comparison: String,
    pub scheme: String,
    pub flux: String,
    pub lambda: f64,
    pub b: f64,
    pub final_time: f64,
}

impl ConvergenceReport {
    pub fn alphas(&self, p: u32) -> Vec<f64> {
        self.rows.iter().filter_map(|r| if p == 1 { r.alpha1 } else { r.alpha2 }).collect()
    }
}

/// `u_t + c u_x = a u_xx + b L[u]` coefficients when the problem is linear.
pub fn linear_symbol(problem: &Problem) -> Result<LinearSymbol> {
    let s = &problem.spec;
    let linear = s.f.pieces.len() == 1 && s.f.pieces[0].degree() <= 1 && s.a.pieces.len() == 1 && s.a.pieces[0].degree() == 0;
    if !linear {
        return Err(Error::Analysis(format!("problem `{}` is nonlinear; the oracle needs linear f and constant a", s.name)));
    }
    Ok(LinearSymbol {
        c: s.f.pieces[0].coeffs.get(1).copied().unwrap_or(0.0),
        a: s.a.pieces[0].coeffs.first().copied().unwrap_or(0.0),
        b: s.b,
        lambda: s.lambda,
    })
}

/// Oracle values at `points` and time `t`.
pub fn oracle_values(problem: &Problem, cfg: &SpectralConfig, t: f64, points: &[f64]) -> Result<Vec<f64>> {
    let sym = linear_symbol(problem)?;
    let u0 = cfg.sample(|x| problem.spec.u0.eval(x));
    linear_exact_solution(cfg, &sym, &u0, t, points)
}

fn check_halving(grids: &[usize]) -> Result<()> {
    if grids.is_empty() {
        return Err(Error::Analysis("empty grid list".into()));
    }
    if let Some(w) = grids.windows(2).find(|w| w[1] != 2 * w[0]) {
        return Err(Error::Analysis(format!("grids 1/{} and 1/{} are not related by halving", w[0], w[1])));
    }
    Ok(())
}

/// Runs every grid (and the fine reference) and assembles the report ordered by `Δx`.
pub fn convergence_study(problem: &Problem, grids: &[usize], setup: &StudySetup) -> Result<ConvergenceReport> {
    check_halving(grids)?;
    let hw = problem.spec.half_width;
    let opts = RunOptions {
        safety: setup.safety,
        ..RunOptions::new(setup.scheme, setup.final_time).with_flux(setup.flux)
    };
    let solve = |inv: usize| -> Result<(Grid, Trajectory)> {
        let g = Grid::symmetric(hw, inv)?.with_boundary(setup.boundary);
        let tr = run(problem, &g, &opts)?;
        Ok((g, tr))
    };
    let runs: Vec<(Grid, Trajectory)> = grids.par_iter().map(|inv| solve(*inv)).collect::<Result<_>>()?;
    let finest = &runs.last().unwrap().0;

    let mut errors = Vec::with_capacity(runs.len());
    let comparison;
    match setup.reference {
        ReferenceMode::Oracle(cfg) => {
            if setup.boundary == Boundary::Periodic && (cfg.half_period - hw).abs() > 1e-12 * hw {
                return Err(Error::Analysis(format!("a periodic window of half width {hw} needs the oracle period to match")));
            }
            let cmp = comparison_grid(finest, setup.refine())?;
            comparison = format!("midpoints of 1/{}", (1.0 / cmp.dx).round());
            let exact = oracle_values(problem, &cfg, setup.final_time, &cmp.centers())?;
            for (g, tr) in &runs {
                let u = midpoint_samples(&tr.final_state, g, &cmp)?;
                errors.push([error_norms(&u, &exact, cmp.dx, 1)?, error_norms(&u, &exact, cmp.dx, 2)?]);
            }
        }
        ReferenceMode::FineGrid { inv_dx } => {
            let last = *grids.last().unwrap();
            if inv_dx <= last || inv_dx % last != 0 {
                return Err(Error::Analysis(format!("reference grid 1/{inv_dx} must refine 1/{last} by a whole factor")));
            }
            let (rg, rt) = solve(inv_dx)?;
            if setup.scheme.degree == 0 {
                comparison = "cell averages of the reference on each grid".into();
                for (g, tr) in &runs {
                    let r = restrict_cell_averages(&rt.final_state, &rg, g)?;
                    let u = &tr.final_state.coeffs;
                    errors.push([error_norms(u, &r, g.dx, 1)?, error_norms(u, &r, g.dx, 2)?]);
                }
            } else {
                let cmp = comparison_grid(finest, setup.refine())?;
                comparison = format!("midpoints of 1/{}", (1.0 / cmp.dx).round());
                let r = midpoint_samples(&rt.final_state, &rg, &cmp)?;
                for (g, tr) in &runs {
                    let u = midpoint_samples(&tr.final_state, g, &cmp)?;
                    errors.push([error_norms(&u, &r, cmp.dx, 1)?, error_norms(&u, &r, cmp.dx, 2)?]);
                }
            }
        }
    }

    let rows = runs
        .iter()
        .enumerate()
        .map(|(j, (g, _))| {
            let [(e1, r1), (e2, r2)] = errors[j];
            let next = errors.get(j + 1);
            ConvergenceRow {
                dx: g.dx,
                e1,
                r1,
                alpha1: next.and_then(|n| convergence_rate(e1, n[0].0).ok()),
                e2,
                r2,
                alpha2: next.and_then(|n| convergence_rate(e2, n[1].0).ok()),
            }
        })
        .collect();
    Ok(ConvergenceReport {
        rows,
        reference: setup.reference.to_string(),
        comparison,
        scheme: setup.scheme.to_string(),
        flux: setup.flux.to_string(),
        lambda: problem.lambda(),
        b: problem.b(),
        final_time: setup.final_time,
    })
}
