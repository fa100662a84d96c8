//! Error table `E_p = ‖u - u_ref‖_p^p` and observed rates `α_p` for a nonlinear problem,
//! against the same scheme on a finer grid.
//!
//! `cargo run --release --example convergence_table -- ex1 320`

use fracdg::analysis::study::{convergence_study, ReferenceMode, StudySetup};
use fracdg::flux::FluxKind;
use fracdg::problem::{Example, Problem};
use fracdg::solver::Scheme;

fn fmt(a: Option<f64>) -> String {
    a.map(|a| format!("{a:.3}")).unwrap_or_else(|| "-".into())
}

fn main() -> fracdg::Result<()> {
    let mut args = std::env::args().skip(1);
    let example: Example = args.next().as_deref().unwrap_or("ex1").parse()?;
    let reference: usize = args.next().map_or(320, |s| s.parse().expect("1/Δx_ref"));

    let problem = Problem::builtin(example)?;
    let setup = StudySetup::new(Scheme::ddg_k0(), FluxKind::Eo, 0.15, ReferenceMode::FineGrid { inv_dx: reference });
    let report = convergence_study(&problem, &[10, 20, 40, 80], &setup)?;

    println!("reference {}, {}", report.reference, report.comparison);
    println!("{:>9} {:>11} {:>7} {:>11} {:>7}", "dx", "E1", "alpha1", "E2", "alpha2");
    for r in &report.rows {
        println!("{:>9.5} {:>11.3e} {:>7} {:>11.3e} {:>7}", r.dx, r.e1, fmt(r.alpha1), r.e2, fmt(r.alpha2));
    }
    Ok(())
}
