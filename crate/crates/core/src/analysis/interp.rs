//! Space-time bilinear interpolation of `U_i^n`, with `U_i^n` placed at `x_i = x_left + iΔx`.

use crate::error::{Error, Result};
use crate::solver::run::Trajectory;

/// Bilinear interpolant on the rectangle `[x_i, x_{i+1}) × [t_n, t_{n+1})` containing `(x, t)`.
pub fn bilinear_interpolant(tr: &Trajectory, x: f64, t: f64) -> Result<f64> {
    let h = &tr.history;
    if h.is_empty() || h.len() != tr.times.len() {
        return Err(Error::Analysis("interpolation needs a trajectory with recorded history".into()));
    }
    let g = &tr.grid;
    let x_last = g.edge(g.cells - 1);
    let t_last = *tr.times.last().unwrap();
    if !(x >= g.x_left && x <= x_last && t >= 0.0 && t <= t_last) {
        return Err(Error::Analysis(format!("({x}, {t}) outside the window [{}, {x_last}] × [0, {t_last}]", g.x_left)));
    }
    let s = (x - g.x_left) / g.dx;
    let i = (s.floor() as usize).min(g.cells.saturating_sub(2));
    let n = tr.times.partition_point(|tn| *tn <= t).saturating_sub(1).min(h.len().saturating_sub(2));
    let tx = if g.cells > 1 { s - i as f64 } else { 0.0 };
    let (i1, n1) = ((i + 1).min(g.cells - 1), (n + 1).min(h.len() - 1));
    let tt = if n1 > n { (t - tr.times[n]) / (tr.times[n1] - tr.times[n]) } else { 0.0 };
    let u = |i: usize, n: usize| h[n].values[i];
    Ok(u(i, n)
        + (u(i1, n) - u(i, n)) * tx
        + (u(i, n1) - u(i, n)) * tt
        + (u(i1, n1) - u(i, n1) - u(i1, n) + u(i, n)) * tx * tt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Example, Problem};
    use crate::solver::run::{run, RunOptions, Scheme};
    use crate::solver::Grid;

    fn traj() -> Trajectory {
        let p = Problem::builtin(Example::Ex1).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        run(&p, &grid, &RunOptions::new(Scheme::ddg_k0(), 0.02).with_history()).unwrap()
    }

    #[test]
    fn reproduces_nodes() {
        let tr = traj();
        for n in [0, 1, tr.times.len() - 1] {
            for i in [0, 7, 12, 19] {
                let v = bilinear_interpolant(&tr, tr.grid.edge(i), tr.times[n]).unwrap();
                assert!((v - tr.history[n].values[i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn centre_is_corner_average() {
        let tr = traj();
        let (i, n) = (8, 1);
        let x = tr.grid.edge(i) + 0.5 * tr.grid.dx;
        let t = 0.5 * (tr.times[n] + tr.times[n + 1]);
        let h = &tr.history;
        let avg = 0.25 * (h[n].values[i] + h[n].values[i + 1] + h[n + 1].values[i] + h[n + 1].values[i + 1]);
        assert!((bilinear_interpolant(&tr, x, t).unwrap() - avg).abs() < 1e-15);
    }

    #[test]
    fn rejects_outside_window() {
        let tr = traj();
        assert!(bilinear_interpolant(&tr, 2.0, 0.0).is_err());
        assert!(bilinear_interpolant(&tr, 0.0, 1.0).is_err());
    }
}
