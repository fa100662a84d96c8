//! Threshold audits shared by `fracdg properties` and the test suites.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::monitors::stability_monitors;
use crate::error::Result;
use crate::flux::{check_admissibility, ConvectiveFlux, DdgFluxParams, FluxKind};
use crate::fractional::oracle::quadrature_oracle_weight;
use crate::fractional::weights::closed_form_weight;
use crate::fractional::{FractionalParams, WeightMatrix};
use crate::problem::Problem;
use crate::solver::dg::Nonlocal;
use crate::solver::explicit::{DiffusionForm, K0Operator};
use crate::solver::grid::Grid;
use crate::solver::run::{certified_dt, run, RunOptions, Scheme};

/// Relative slack of the cell entropy inequality, scaled by `max(1, |U|, |k|)`.
pub const ENTROPY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    AtMost,
    AtLeast,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }
}

/// One audit: the measured value against its threshold, or `n/a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditLine {
    pub name: String,
    pub value: Option<f64>,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: Option<bool>,
}

impl AuditLine {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        AuditLine { name: name.into(), value: Some(value), relation: Relation::AtMost, threshold, passed: Some(value <= threshold) }
    }

    /// A missing value fails.
    pub fn at_least(name: impl Into<String>, value: Option<f64>, threshold: f64) -> Self {
        let passed = value.is_some_and(|v| v >= threshold);
        AuditLine { name: name.into(), value, relation: Relation::AtLeast, threshold, passed: Some(passed) }
    }

    pub fn skipped(name: impl Into<String>) -> Self {
        AuditLine { name: name.into(), value: None, relation: Relation::AtMost, threshold: f64::NAN, passed: None }
    }

    pub fn failed(&self) -> bool {
        self.passed == Some(false)
    }
}

/// Worst values of the weight lemmas on the zero-exterior window `[-1, 1]` with `1/Δx = inv_dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightLemmas {
    /// `|Σ_d G_d| / |G_0|` with the tail folded in.
    pub row_sum: f64,
    /// Largest `|G_{ij} - G_{ji}|` and Toeplitz defect over the window.
    pub asymmetry: f64,
    /// Most negative off-diagonal entry, as a nonnegative number.
    pub negative_off_diagonal: f64,
    /// `|G_0 + d_λ Δx^{1-λ}| / (d_λ Δx^{1-λ})`
    pub diagonal: f64,
}

pub fn weight_lemmas(lambda: f64, inv_dx: usize) -> Result<WeightLemmas> {
    let params = FractionalParams::new(lambda)?;
    let grid = Grid::symmetric(1.0, inv_dx)?;
    let w = WeightMatrix::assemble(params, &grid)?.with_tail_correction(true);
    let n = grid.cells;
    let mut asymmetry: f64 = 0.0;
    let mut negative: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            asymmetry = asymmetry.max((w.entry(i, j) - w.entry(j, i)).abs());
            if i > 0 && j > 0 {
                asymmetry = asymmetry.max((w.entry(i, j) - w.entry(i - 1, j - 1)).abs());
            }
            if i != j {
                negative = negative.max(-w.entry(i, j));
            }
        }
    }
    let expect = params.d * grid.dx.powf(1.0 - lambda);
    Ok(WeightLemmas {
        row_sum: w.represented_row_sum().abs() / w.row[0].abs(),
        asymmetry,
        negative_off_diagonal: negative,
        diagonal: (w.row[0] + expect).abs() / expect,
    })
}

/// `(d, G_d, oracle, abs_err, rel_err)` for `d = 0..=max_offset`.
pub fn weight_oracle_table(lambda: f64, dx: f64, max_offset: usize) -> Result<Vec<(i64, f64, f64, f64, f64)>> {
    let params = FractionalParams::new(lambda)?;
    (0..=max_offset as i64)
        .map(|d| {
            let g = closed_form_weight(&params, dx, d);
            let o = quadrature_oracle_weight(&params, dx, d)?;
            let abs = (g - o).abs();
            Ok((d, g, o, abs, abs / o.abs()))
        })
        .collect()
}

/// Largest violation of consistency and monotonicity of `f̂` on an `n × n` lattice over
/// `[lo, hi]²`, using forward differences of step `(hi - lo)/(n - 1)`.
pub fn flux_lattice(flux: &ConvectiveFlux, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let u = lo + i as f64 * h;
        worst = worst.max((flux.eval(u, u) - flux.function().value(u)).abs());
        for j in 0..n {
            let v = lo + j as f64 * h;
            let f = flux.eval(u, v);
            if i + 1 < n {
                // nondecreasing in the first argument
                worst = worst.max(-(flux.eval(u + h, v) - f) / h);
            }
            if j + 1 < n {
                // nonincreasing in the second
                worst = worst.max((flux.eval(u, v + h) - f) / h);
            }
        }
    }
    worst
}

/// Largest admissibility margin `α` found for `params`; `None` when no certificate exists.
pub fn admissibility<R: Rng>(params: &DdgFluxParams, problem: &Problem, samples: usize, rng: &mut R) -> Result<Option<f64>> {
    Ok(check_admissibility(params, problem, samples, rng)?.map(|c| c.alpha))
}

fn k0_steps(problem: &Problem, grid: &Grid, form: DiffusionForm, u0: &[f64], dt: f64, steps: usize) -> Result<Vec<Vec<f64>>> {
    let flux = ConvectiveFlux::for_problem(FluxKind::Eo, problem)?;
    let nonlocal = Nonlocal::assemble(problem, grid, 0, false)?;
    let op = K0Operator { problem, flux: &flux, weights: nonlocal.weights(), dx: grid.dx, boundary: grid.boundary, form };
    let mut out = vec![u0.to_vec()];
    for _ in 0..steps {
        let (next, _) = op.step(out.last().unwrap(), dt)?;
        out.push(next);
    }
    Ok(out)
}

/// Largest per-step change of `Σ U_i` relative to `Σ|U⁰_i|` over `steps` steps.
pub fn conservation_drift(problem: &Problem, grid: &Grid, form: DiffusionForm, steps: usize) -> Result<f64> {
    let flux = ConvectiveFlux::for_problem(FluxKind::Eo, problem)?;
    let dt = certified_dt(problem, &flux, grid, Scheme::ddg_k0(), None, None)?;
    let u0 = problem.project_initial(grid, 0).coeffs;
    let scale: f64 = u0.iter().map(|v| v.abs()).sum();
    let traj = k0_steps(problem, grid, form, &u0, dt, steps)?;
    let sums: Vec<f64> = traj.iter().map(|u| u.iter().sum::<f64>()).collect();
    Ok(sums.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max) / scale)
}

/// Evolves `U⁰` and `V⁰ = U⁰ + shift` with a common certified step and returns
/// `max_{n,i} (U_i^n - V_i^n)⁺`.
///
/// `problem` must declare a state range containing both data.
pub fn comparison_defect(problem: &Problem, grid: &Grid, form: DiffusionForm, shift: f64, steps: usize) -> Result<f64> {
    let flux = ConvectiveFlux::for_problem(FluxKind::Eo, problem)?;
    let dt = certified_dt(problem, &flux, grid, Scheme::ddg_k0(), None, None)?;
    let u0 = problem.project_initial(grid, 0).coeffs;
    let v0: Vec<f64> = u0.iter().map(|u| u + shift).collect();
    let us = k0_steps(problem, grid, form, &u0, dt, steps)?;
    let vs = k0_steps(problem, grid, form, &v0, dt, steps)?;
    let mut worst: f64 = 0.0;
    for (u, v) in us.iter().zip(&vs) {
        for (a, b) in u.iter().zip(v) {
            worst = worst.max(a - b);
        }
    }
    Ok(worst)
}

/// Outcome of a monitored `k = 0` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitoredRun {
    pub steps: usize,
    pub monitor_violations: usize,
    /// Smallest entropy slack divided by `max(1, |U|, |k|)`.
    pub entropy_slack: f64,
}

pub fn monitored_run(problem: &Problem, grid: &Grid, scheme: Scheme, steps: usize) -> Result<MonitoredRun> {
    let opts = RunOptions::new(scheme, f64::INFINITY).with_max_steps(steps).with_entropy(None).with_history();
    let tr = run(problem, grid, &opts)?;
    let m = stability_monitors(&tr);
    let scale = tr
        .entropy_levels
        .iter()
        .map(|k| k.abs())
        .chain(std::iter::once(tr.initial.coeffs.iter().fold(1.0f64, |a, v| a.max(v.abs()))))
        .fold(1.0, f64::max);
    let slack = tr.ledger.iter().skip(1).map(|r| r.min_entropy_residual).fold(f64::INFINITY, f64::min);
    Ok(MonitoredRun { steps: tr.steps, monitor_violations: m.violations.len(), entropy_slack: slack / scale })
}

/// Declares `[min(0, lo), max(0, hi)]` as the state range, widened by `shift` above.
pub fn with_shifted_range(problem: &Problem, shift: f64) -> Result<Problem> {
    let (lo, hi) = problem.derived.state_range;
    let mut spec = problem.spec.clone();
    spec.state_range = Some((lo.min(0.0), hi.max(0.0) + shift.max(0.0)));
    Problem::new(spec)
}
