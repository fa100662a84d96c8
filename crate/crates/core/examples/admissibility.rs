//! Sampled admissibility margin of the DDG diffusion flux as the penalty `β₀` varies.
//!
//! With the degenerate `a(u)` of ex1 no `β₀` is admissible for `k ≥ 1`: a cell can carry
//! `a(u) > 0` at its trace while `a(u) = 0` over most of its interior, so the energy cannot
//! absorb the `avg(A_x)` term. The constant `a` of ex3 is admissible once `β₀ > 0`.
//!
//! `cargo run --example admissibility -- 1`

use fracdg::flux::{check_admissibility, DdgFluxParams};
use fracdg::problem::{Example, Problem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fracdg::Result<()> {
    let degree: usize = std::env::args().nth(1).map_or(1, |s| s.parse().expect("degree"));
    let defaults = DdgFluxParams::defaults(degree)?;
    for example in [Example::Ex1, Example::Ex3] {
        let problem = Problem::builtin(example)?;
        println!("{}, k = {degree}", problem.spec.name);
        for beta0 in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let params = DdgFluxParams { beta0, ..defaults.clone() };
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            match check_admissibility(&params, &problem, 300, &mut rng)? {
                Some(c) => println!("  β₀ = {beta0:<4} γ = {:.1}  α = {:.3}", c.gamma, c.alpha),
                None => println!("  β₀ = {beta0:<4} not admissible"),
            }
        }
    }
    Ok(())
}
