//! Space-time Hölder audit of `A(U)`: `|A(U_i^m) - A(U_j^n)| ≲ |i - j|Δx + sqrt(|m - n|Δt)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::solver::run::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub constant: f64,
    pub pairs: usize,
    /// `(i, m, j, n)` of the worst pair.
    pub worst: (usize, usize, usize, usize),
}

/// Supremum of the ratio over all space-neighbour pairs, all time-neighbour pairs and
/// `random_pairs` seeded random pairs. Needs a trajectory with recorded history.
pub fn holder_audit(tr: &Trajectory, problem: &Problem, seed: u64, random_pairs: usize) -> Result<HolderEstimate> {
    let h = &tr.history;
    if h.len() != tr.times.len() || h.is_empty() {
        return Err(Error::Analysis("the Hölder audit needs a trajectory with recorded history".into()));
    }
    let dx = tr.grid.dx;
    let cells = tr.grid.cells;
    let big_a: Vec<Vec<f64>> = h.iter().map(|c| c.values.iter().map(|u| problem.big_a(*u)).collect()).collect();
    let mut best = HolderEstimate { constant: 0.0, pairs: 0, worst: (0, 0, 0, 0) };
    let mut visit = |i: usize, m: usize, j: usize, n: usize| {
        let denom = i.abs_diff(j) as f64 * dx + (tr.times[m] - tr.times[n]).abs().sqrt();
        if denom <= 0.0 {
            return;
        }
        let r = (big_a[m][i] - big_a[n][j]).abs() / denom;
        best.pairs += 1;
        if r > best.constant {
            best.constant = r;
            best.worst = (i, m, j, n);
        }
    };
    for m in 0..h.len() {
        for i in 0..cells {
            if i + 1 < cells {
                visit(i, m, i + 1, m);
            }
            if m + 1 < h.len() {
                visit(i, m, i, m + 1);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_pairs {
        let (i, j) = (rng.gen_range(0..cells), rng.gen_range(0..cells));
        let (m, n) = (rng.gen_range(0..h.len()), rng.gen_range(0..h.len()));
        visit(i, m, j, n);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Example, InitialDatum, ProblemSpec};
    use crate::poly::{PiecewisePolynomial, Polynomial};
    use crate::solver::run::{run, RunOptions, Scheme};
    use crate::solver::Grid;

    #[test]
    fn steady_state_scores_zero() {
        let mut spec = ProblemSpec::builtin(Example::Ex1);
        spec.u0 = InitialDatum::Piecewise(PiecewisePolynomial::single(Polynomial::zero()));
        let p = Problem::new(spec).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let tr = run(&p, &grid, &RunOptions::new(Scheme::ddg_k0(), 0.01).with_history()).unwrap();
        assert_eq!(holder_audit(&tr, &p, 1, 100).unwrap().constant, 0.0);
    }

    #[test]
    fn vanishing_diffusion_scores_zero() {
        let mut spec = ProblemSpec::builtin(Example::Ex1);
        spec.a = PiecewisePolynomial::single(Polynomial::zero());
        let p = Problem::new(spec).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let tr = run(&p, &grid, &RunOptions::new(Scheme::ddg_k0(), 0.01).with_history()).unwrap();
        let est = holder_audit(&tr, &p, 1, 100).unwrap();
        assert_eq!(est.constant, 0.0);
        assert!(est.pairs > 0);
    }

    #[test]
    fn needs_history() {
        let p = Problem::builtin(Example::Ex1).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let tr = run(&p, &grid, &RunOptions::new(Scheme::ddg_k0(), 0.01)).unwrap();
        assert!(holder_audit(&tr, &p, 1, 10).is_err());
    }
}
