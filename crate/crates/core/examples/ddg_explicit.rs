//! Piecewise-constant DDG on the three built-in problems, printing the run ledger.
//!
//! `cargo run --example ddg_explicit -- ex2 80 0.15`

use fracdg::problem::{Example, Problem};
use fracdg::solver::{run, Grid, RunOptions, Scheme};

fn main() -> fracdg::Result<()> {
    let mut args = std::env::args().skip(1);
    let example: Example = args.next().as_deref().unwrap_or("ex1").parse()?;
    let inv_dx: usize = args.next().map_or(80, |s| s.parse().expect("1/Δx"));
    let t: f64 = args.next().map_or(0.15, |s| s.parse().expect("T"));

    let problem = Problem::builtin(example)?;
    let grid = Grid::symmetric(problem.spec.half_width, inv_dx)?;
    let tr = run(&problem, &grid, &RunOptions::new(Scheme::ddg_k0(), t).with_entropy(None))?;

    println!("dt = {:.3e}, {} steps", tr.dt, tr.steps);
    println!("{:>6} {:>8} {:>10} {:>8} {:>8} {:>11}", "step", "t", "mass", "linf", "bv", "min_slack");
    let every = (tr.ledger.len() / 10).max(1);
    for r in tr.ledger.iter().step_by(every).chain(tr.ledger.last()) {
        println!("{:>6} {:>8.4} {:>10.6} {:>8.4} {:>8.4} {:>11.2e}", r.step, r.t, r.mass, r.linf, r.bv, r.min_entropy_residual);
    }
    println!("mass change {:.3e}", tr.mass_change);
    Ok(())
}
