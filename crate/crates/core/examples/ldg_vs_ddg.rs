//! DDG and LDG with `k = 0` on the same problem; the two differ only in how the
//! degenerate diffusion is discretized.
//!
//! `cargo run --example ldg_vs_ddg -- 160`

use fracdg::problem::{Example, Problem, ProblemSpec};
use fracdg::solver::{run, Grid, RunOptions, Scheme};

fn main() -> fracdg::Result<()> {
    let inv_dx: usize = std::env::args().nth(1).map_or(160, |s| s.parse().expect("1/Δx"));
    let problem = Problem::new(ProblemSpec::builtin(Example::Ex2).with_fractional(0.5, 0.0))?;
    let grid = Grid::symmetric(1.0, inv_dx)?;

    for t in [0.0625, 0.25, 1.0] {
        let ddg = run(&problem, &grid, &RunOptions::new(Scheme::ddg_k0(), t))?.final_cells();
        let ldg = run(&problem, &grid, &RunOptions::new(Scheme::ldg_k0(), t))?.final_cells();
        let l1: f64 = ddg.values.iter().zip(&ldg.values).map(|(a, b)| grid.dx * (a - b).abs()).sum();
        println!("T = {t:<7} ‖DDG - LDG‖₁ = {l1:.3e}   ‖DDG‖₁ = {:.4}", ddg.l1(grid.dx));
    }
    Ok(())
}
