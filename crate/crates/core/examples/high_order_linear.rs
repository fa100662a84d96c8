//! DDG with `k = 0, 1, 2` and SSP-RK3 on the linear Gaussian problem, compared with
//! its Fourier solution on a periodic window.
//!
//! `cargo run --release --example high_order_linear`

use fracdg::analysis::study::{convergence_study, ReferenceMode, StudySetup};
use fracdg::flux::FluxKind;
use fracdg::problem::{Example, Problem};
use fracdg::solver::{Boundary, Scheme};

fn main() -> fracdg::Result<()> {
    let problem = Problem::builtin(Example::Ex3)?;
    let reference = ReferenceMode::oracle_for(&problem, Boundary::Periodic);
    for scheme in [Scheme::ddg_k0(), Scheme::ddg_rk3(1), Scheme::ddg_rk3(2)] {
        let setup = StudySetup::new(scheme, FluxKind::LinearUpwind, 0.1, reference.clone()).with_boundary(Boundary::Periodic);
        let report = convergence_study(&problem, &[20, 40, 80], &setup)?;
        println!("{}", report.scheme);
        for r in &report.rows {
            let rate = r.alpha2.map(|a| format!("{:.2}", a / 2.0)).unwrap_or_default();
            println!("  dx = {:<8.5} ‖e‖₂ = {:.3e}  order {rate}", r.dx, r.e2.sqrt());
        }
    }
    Ok(())
}
