//! L¹, L∞ and BV monitors of a piecewise-constant run.

use serde::{Deserialize, Serialize};

use crate::solver::run::Trajectory;

/// Absolute slack allowed on top of `1e-12` relative.
pub const MONITOR_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorRow {
    pub step: usize,
    pub l1: f64,
    pub linf: f64,
    pub bv: f64,
    /// Differences to the previous step; zero at step 0.
    pub d_l1: f64,
    pub d_linf: f64,
    pub d_bv: f64,
    /// `‖U^{n} - U^{n-1}‖_{L¹} / Δt_n`
    pub time_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub step: usize,
    pub monitor: String,
    pub increase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub rows: Vec<MonitorRow>,
    pub violations: Vec<Violation>,
    /// Time-Lipschitz constant measured on the first step.
    pub lipschitz_time: f64,
}

impl MonitorReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn increased(new: f64, old: f64) -> Option<f64> {
    let d = new - old;
    (d > MONITOR_SLACK * old.abs().max(1.0)).then_some(d)
}

/// Per-step monitors from the run ledger, flagging increases of `L¹`, `L∞`, `BV` and of the
/// time-rate `‖U^{n+1} - U^n‖/Δt` (which the `L¹` contraction bounds by its first value).
pub fn stability_monitors(tr: &Trajectory) -> MonitorReport {
    let dx = tr.grid.dx;
    let l1s: Vec<f64> = if tr.history.len() == tr.ledger.len() {
        tr.history.iter().map(|c| c.l1(dx)).collect()
    } else {
        // only the ledger is available; mass equals L¹ for nonnegative states
        tr.ledger.iter().map(|r| r.mass.abs()).collect()
    };
    let mut rows = Vec::with_capacity(tr.ledger.len());
    let mut violations = Vec::new();
    let mut lipschitz_time = 0.0;
    for (n, r) in tr.ledger.iter().enumerate() {
        let (d_l1, d_linf, d_bv, rate) = if n == 0 {
            (0.0, 0.0, 0.0, 0.0)
        } else {
            let prev = &tr.ledger[n - 1];
            let h = r.t - prev.t;
            (l1s[n] - l1s[n - 1], r.linf - prev.linf, r.bv - prev.bv, if h > 0.0 { r.l1_time_increment / h } else { 0.0 })
        };
        if n == 1 {
            lipschitz_time = rate;
        }
        if n > 0 {
            let prev = &tr.ledger[n - 1];
            for (name, new, old) in [("l1", l1s[n], l1s[n - 1]), ("linf", r.linf, prev.linf), ("bv", r.bv, prev.bv)] {
                if let Some(inc) = increased(new, old) {
                    violations.push(Violation { step: r.step, monitor: name.into(), increase: inc });
                }
            }
            if n > 1 {
                if let Some(inc) = increased(rate, lipschitz_time) {
                    violations.push(Violation { step: r.step, monitor: "time_rate".into(), increase: inc });
                }
            }
        }
        rows.push(MonitorRow { step: r.step, l1: l1s[n], linf: r.linf, bv: r.bv, d_l1, d_linf, d_bv, time_rate: rate });
    }
    MonitorReport { rows, violations, lipschitz_time }
}
