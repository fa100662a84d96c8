//! Cell entropy inequality and stability monitors along a `k = 0` run.
//!
//! `cargo run --example entropy_audit -- ex1 80`

use fracdg::analysis::{holder_audit, stability_monitors};
use fracdg::problem::{Example, Problem};
use fracdg::solver::{run, Grid, RunOptions, Scheme};

fn main() -> fracdg::Result<()> {
    let mut args = std::env::args().skip(1);
    let example: Example = args.next().as_deref().unwrap_or("ex1").parse()?;
    let inv_dx: usize = args.next().map_or(80, |s| s.parse().expect("1/Δx"));

    let problem = Problem::builtin(example)?;
    let grid = Grid::symmetric(1.0, inv_dx)?;
    let tr = run(&problem, &grid, &RunOptions::new(Scheme::ddg_k0(), 0.1).with_entropy(None).with_history())?;

    // residual ≤ 0 means the inequality holds
    let worst = tr.entropy.iter().max_by(|a, b| a.residual.total_cmp(&b.residual)).expect("audited");
    println!("levels {:?}", tr.entropy_levels.iter().map(|k| format!("{k:.3}")).collect::<Vec<_>>());
    println!("worst residual {:.3e} at step {}, k = {:.3}, cell {}", worst.residual, worst.step, worst.k_level, worst.worst_cell);

    let m = stability_monitors(&tr);
    println!("monitor violations {}, time-Lipschitz constant {:.4}", m.violations.len(), m.lipschitz_time);
    let h = holder_audit(&tr, &problem, 1, 5000)?;
    println!("Hölder constant {:.4} over {} pairs", h.constant, h.pairs);
    Ok(())
}
