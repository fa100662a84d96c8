//! Time loop with snapshots, the run ledger and entropy monitoring.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::entropy::{default_levels, entropy_residuals_with_levy};
use crate::error::{Error, Result};
use crate::flux::{c12_lipschitz_estimate, ConvectiveFlux, DdgFluxParams, FluxKind};
use crate::fractional::FractionalParams;
use crate::problem::Problem;
use crate::solver::cfl::{cfl_dt, rk3_dt};
use crate::solver::dg::{DdgOperator, Nonlocal};
use crate::solver::explicit::{DiffusionForm, K0Operator};
use crate::solver::grid::Grid;
use crate::solver::rk3::rk3_step;
use crate::solver::state::{CellState, DGState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    DdgK0,
    LdgK0,
    DdgRk3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scheme {
    pub kind: SchemeKind,
    pub degree: usize,
}

impl Scheme {
    pub fn ddg_k0() -> Self {
        Scheme { kind: SchemeKind::DdgK0, degree: 0 }
    }

    pub fn ldg_k0() -> Self {
        Scheme { kind: SchemeKind::LdgK0, degree: 0 }
    }

    pub fn ddg_rk3(degree: usize) -> Self {
        Scheme { kind: SchemeKind::DdgRk3, degree }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SchemeKind::DdgK0 | SchemeKind::LdgK0 if self.degree != 0 => {
                Err(Error::InvalidParameter(format!("{self} is a piecewise-constant scheme (k = 0)")))
            }
            SchemeKind::DdgRk3 if self.degree > 2 => {
                Err(Error::InvalidParameter(format!("degree {} is not supported (k ≤ 2)", self.degree)))
            }
            _ => Ok(()),
        }
    }

    pub fn is_explicit_k0(&self) -> bool {
        matches!(self.kind, SchemeKind::DdgK0 | SchemeKind::LdgK0)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SchemeKind::DdgK0 => write!(f, "ddg_k0"),
            SchemeKind::LdgK0 => write!(f, "ldg_k0"),
            SchemeKind::DdgRk3 => write!(f, "ddg_rk3(k={})", self.degree),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub scheme: Scheme,
    pub flux: FluxKind,
    pub final_time: f64,
    pub snapshot_times: Vec<f64>,
    /// CFL safety; defaults to 0.9 for `k = 0` and 0.45 for RK3.
    pub safety: Option<f64>,
    /// Fixed step; for the `k = 0` schemes it must not exceed the CFL step.
    pub dt: Option<f64>,
    /// Stop after this many steps even if `final_time` is not reached.
    pub max_steps: Option<usize>,
    pub ddg_params: Option<DdgFluxParams>,
    /// Entropy levels; `None` selects [`default_levels`], an empty list disables the audit.
    pub entropy_levels: Option<Vec<f64>>,
    /// Keep every time level (`k = 0` cell values, otherwise cell means).
    pub record_history: bool,
    pub tail_correction: bool,
}

impl RunOptions {
    pub fn new(scheme: Scheme, final_time: f64) -> Self {
        RunOptions {
            scheme,
            flux: FluxKind::Eo,
            final_time,
            snapshot_times: Vec::new(),
            safety: None,
            dt: None,
            max_steps: None,
            ddg_params: None,
            entropy_levels: Some(Vec::new()),
            record_history: false,
            tail_correction: false,
        }
    }

    pub fn with_flux(mut self, flux: FluxKind) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn with_max_steps(mut self, n: usize) -> Self {
        self.max_steps = Some(n);
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn with_entropy(mut self, levels: Option<Vec<f64>>) -> Self {
        self.entropy_levels = levels;
        self
    }

    pub fn with_history(mut self) -> Self {
        self.record_history = true;
        self
    }
}

/// One row of the run ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub step: usize,
    pub t: f64,
    pub mass: f64,
    pub linf: f64,
    pub bv: f64,
    /// `Δx Σ|U^{n+1} - U^n|`
    pub l1_time_increment: f64,
    /// Smallest slack `rhs - lhs` of the cell entropy inequality; `NaN` when not audited.
    pub min_entropy_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub state: DGState,
}

/// Worst cell of one entropy level at one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub step: usize,
    pub k_level: f64,
    pub worst_cell: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub grid: Grid,
    pub scheme: Scheme,
    pub flux: FluxKind,
    pub dt: f64,
    pub steps: usize,
    pub t_final: f64,
    pub initial: DGState,
    pub final_state: DGState,
    pub snapshots: Vec<Snapshot>,
    pub ledger: Vec<LedgerRow>,
    pub entropy: Vec<EntropyRow>,
    pub entropy_levels: Vec<f64>,
    /// Time levels `t_n`, filled when history is recorded.
    pub times: Vec<f64>,
    pub history: Vec<CellState>,
    /// Final minus initial mass; nonzero under the zero exterior once mass reaches the edge.
    pub mass_change: f64,
    pub c12_lipschitz: Option<f64>,
}

impl Trajectory {
    pub fn final_cells(&self) -> CellState {
        CellState::from(self.final_state.clone())
    }

    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

/// Certified step for `scheme` on `grid`.
pub fn certified_dt(
    problem: &Problem,
    flux: &ConvectiveFlux,
    grid: &Grid,
    scheme: Scheme,
    beta0: Option<f64>,
    safety: Option<f64>,
) -> Result<f64> {
    let fp = FractionalParams::new(problem.lambda())?;
    let d = &problem.derived;
    if scheme.is_explicit_k0() {
        cfl_dt(grid.dx, flux.lipschitz_bounds(), d.sup_a, fp.d, fp.lambda, problem.b(), safety.unwrap_or(0.9))
    } else {
        let (l1, l2) = flux.lipschitz_bounds();
        let lip = d.lipschitz_f.max(l1).max(l2);
        let beta0 = match beta0 {
            Some(b) => b,
            None => DdgFluxParams::defaults(scheme.degree)?.beta0,
        };
        rk3_dt(grid.dx, lip, d.sup_a, fp.d, fp.lambda, problem.b(), scheme.degree, beta0, safety.unwrap_or(0.45))
    }
}

fn ledger_row(step: usize, t: f64, cells: &CellState, prev: Option<&CellState>, grid: &Grid, slack: f64) -> LedgerRow {
    let dx = grid.dx;
    let inc = prev.map_or(0.0, |p| dx * p.values.iter().zip(&cells.values).map(|(a, b)| (b - a).abs()).sum::<f64>());
    LedgerRow {
        step,
        t,
        mass: cells.mass(dx),
        linf: cells.linf(),
        bv: cells.bv_on(grid.boundary),
        l1_time_increment: inc,
        min_entropy_residual: slack,
    }
}

fn means(coeffs: &[f64], degree: usize) -> CellState {
    CellState::new(coeffs.iter().step_by(degree + 1).copied().collect())
}

fn check_state(problem: &Problem, v: &[f64], step: usize) -> Result<()> {
    if let Some(cell) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { step, cell });
    }
    if problem.derived.range_is_declared {
        let (lo, hi) = problem.derived.state_range;
        if let Some(x) = v.iter().find(|x| **x < lo || **x > hi) {
            return Err(Error::OutOfRange { value: *x, lo, hi });
        }
    }
    Ok(())
}

/// Advances the projected initial datum to `final_time`.
pub fn run(problem: &Problem, grid: &Grid, options: &RunOptions) -> Result<Trajectory> {
    let scheme = options.scheme;
    scheme.validate()?;
    if !(options.final_time >= 0.0) {
        return Err(Error::InvalidParameter(format!("final time {} must be nonnegative", options.final_time)));
    }
    if options.final_time.is_infinite() && options.max_steps.is_none() {
        return Err(Error::InvalidParameter("an unbounded horizon needs max_steps".into()));
    }
    let mut snaps_wanted = options.snapshot_times.clone();
    snaps_wanted.sort_by(|a, b| a.total_cmp(b));
    if let Some(t) = snaps_wanted.iter().find(|t| !(**t >= 0.0 && **t <= options.final_time)) {
        return Err(Error::InvalidParameter(format!("snapshot time {t} outside [0, {}]", options.final_time)));
    }
    let flux = ConvectiveFlux::for_problem(options.flux, problem)?;
    let certified = certified_dt(problem, &flux, grid, scheme, options.ddg_params.as_ref().map(|p| p.beta0), options.safety)?;
    let dt = match options.dt {
        Some(dt) if !(dt > 0.0) => return Err(Error::InvalidParameter(format!("dt = {dt} must be positive"))),
        Some(dt) if scheme.is_explicit_k0() && dt > certified * (1.0 + 1e-12) => {
            return Err(Error::InvalidParameter(format!("dt = {dt} exceeds the CFL step {certified}")));
        }
        Some(dt) => {
            if dt > certified {
                log::warn!("dt = {dt} exceeds the suggested step {certified}");
            }
            dt
        }
        None => certified,
    };
    let degree = scheme.degree;
    let nonlocal = Nonlocal::assemble(problem, grid, degree, options.tail_correction)?;
    let params = match &options.ddg_params {
        Some(p) if p.degree != degree => {
            return Err(Error::InvalidParameter(format!("flux parameters are for k = {}, scheme has k = {degree}", p.degree)));
        }
        Some(p) => p.clone(),
        None => DdgFluxParams::defaults(degree)?,
    };
    let op = DdgOperator::new(problem, &flux, grid, params, nonlocal)?;
    let form = if scheme.kind == SchemeKind::LdgK0 { DiffusionForm::Ldg } else { DiffusionForm::Ddg };
    let k0 = K0Operator { form, ..op.k0() };

    let initial = problem.project_initial(grid, degree);
    check_state(problem, &initial.coeffs, 0)?;
    let mut u = initial.coeffs.clone();
    let mut cells = means(&u, degree);
    let levels = if scheme.is_explicit_k0() {
        options.entropy_levels.clone().unwrap_or_else(|| default_levels(&cells))
    } else {
        Vec::new()
    };

    let mut snapshots = Vec::new();
    let mut next_snap = 0;
    while next_snap < snaps_wanted.len() && snaps_wanted[next_snap] == 0.0 {
        snapshots.push(Snapshot { t: 0.0, state: initial.clone() });
        next_snap += 1;
    }
    let mut ledger = vec![ledger_row(0, 0.0, &cells, None, grid, f64::NAN)];
    let mut entropy = Vec::new();
    let (mut times, mut history) = (Vec::new(), Vec::new());
    if options.record_history {
        times.push(0.0);
        history.push(cells.clone());
    }

    let horizon = options.final_time;
    let max_steps = options.max_steps.unwrap_or(usize::MAX);
    let mut t = 0.0;
    let mut step = 0;
    while t < horizon && step < max_steps {
        let remaining = horizon - t;
        let last = remaining <= dt * (1.0 + 1e-12);
        let h = if last { remaining } else { dt };
        let (next, levy) = if scheme.is_explicit_k0() {
            let (next, ev) = k0.step(&u, h)?;
            (next, Some(ev.levy))
        } else {
            (rk3_step(&u, h, |v| op.rhs_coeffs(v))?, None)
        };
        step += 1;
        check_state(problem, &next, step).map_err(|e| match e {
            Error::NonFinite { cell, .. } => Error::NonFinite { step, cell },
            other => other,
        })?;
        let t_new = if last { horizon } else { step as f64 * dt };
        while next_snap < snaps_wanted.len() && snaps_wanted[next_snap] <= t_new {
            let ts = snaps_wanted[next_snap];
            let theta = if t_new > t { (ts - t) / (t_new - t) } else { 1.0 };
            let coeffs = u.iter().zip(&next).map(|(a, b)| (1.0 - theta) * a + theta * b).collect();
            snapshots.push(Snapshot { t: ts, state: DGState { cells: grid.cells, degree, coeffs } });
            next_snap += 1;
        }
        let new_cells = means(&next, degree);
        let mut slack = f64::NAN;
        if let (Some(levy), false) = (&levy, levels.is_empty()) {
            let audit = entropy_residuals_with_levy(&u, &next, &levels, problem, &flux, levy, grid.dx, h, grid.boundary)?;
            slack = -audit.worst;
            for (l, cell, r) in audit.worst_per_level() {
                entropy.push(EntropyRow { step, k_level: levels[l], worst_cell: cell, residual: r });
            }
        }
        ledger.push(ledger_row(step, t_new, &new_cells, Some(&cells), grid, slack));
        if options.record_history {
            times.push(t_new);
            history.push(new_cells.clone());
        }
        cells = new_cells;
        u = next;
        t = t_new;
    }

    let final_state = DGState { cells: grid.cells, degree, coeffs: u };
    let mass_change = final_state.mass(grid.dx) - initial.mass(grid.dx);
    if mass_change != 0.0 {
        log::info!("mass change over the run: {mass_change:e}");
    }
    let c12_lipschitz = (scheme.kind == SchemeKind::LdgK0).then(|| {
        let (lo, hi) = problem.derived.state_range;
        let l = c12_lipschitz_estimate(problem, lo, hi, 201);
        log::info!("sampled Lipschitz constant of c12: {l}");
        l
    });
    Ok(Trajectory {
        grid: grid.clone(),
        scheme,
        flux: options.flux,
        dt,
        steps: step,
        t_final: t,
        initial,
        final_state,
        snapshots,
        ledger,
        entropy,
        entropy_levels: levels,
        times,
        history,
        mass_change,
        c12_lipschitz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Example;

    #[test]
    fn zero_horizon_returns_projection() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let tr = run(&p, &grid, &RunOptions::new(Scheme::ddg_k0(), 0.0).with_snapshots(vec![0.0])).unwrap();
        assert_eq!(tr.steps, 0);
        assert_eq!(tr.final_state, p.project_initial(&grid, 0));
        assert_eq!(tr.snapshots.len(), 1);
    }

    #[test]
    fn lands_on_final_time() {
        let p = Problem::builtin(Example::Ex3).unwrap();
        let grid = Grid::symmetric(1.0, 20).unwrap();
        let opts = RunOptions::new(Scheme::ddg_rk3(1), 0.1).with_flux(FluxKind::LinearUpwind).with_snapshots(vec![0.05, 0.1]);
        let tr = run(&p, &grid, &opts).unwrap();
        assert_eq!(tr.t_final, 0.1);
        assert_eq!(tr.snapshots.len(), 2);
        assert_eq!(tr.snapshots[1].state, tr.final_state);
    }

    #[test]
    fn rejects_degree_mismatch() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let s = Scheme { kind: SchemeKind::LdgK0, degree: 1 };
        assert!(run(&p, &grid, &RunOptions::new(s, 0.1)).is_err());
    }
}
