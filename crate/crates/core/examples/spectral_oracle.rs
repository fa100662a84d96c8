//! Fourier solution of `u_t + c u_x = a u_xx + b L[u]` for a Gaussian, and the fractional
//! operator applied spectrally against the cell weights.
//!
//! `cargo run --release --example spectral_oracle`

use fracdg::fractional::{FractionalParams, WeightMatrix};
use fracdg::solver::Grid;
use fracdg::spectral::{linear_exact_solution, spectral_levy_at, LinearSymbol, SpectralConfig};

fn main() -> fracdg::Result<()> {
    let cfg = SpectralConfig { half_period: 32.0, modes: 1 << 17, ..SpectralConfig::default() };
    let gauss = |x: f64| (-(x / 0.1f64).powi(2)).exp();
    let u0 = cfg.sample(gauss);
    cfg.check_wrap(&u0)?;

    let sym = LinearSymbol { c: 1.0, a: 0.1, b: 1.0, lambda: 0.5 };
    let points = [-0.2, 0.0, 0.1, 0.2, 0.4];
    for t in [0.0, 0.05, 0.1] {
        let u = linear_exact_solution(&cfg, &sym, &u0, t, &points)?;
        println!("t = {t:<5} {}", u.iter().map(|v| format!("{v:9.5}")).collect::<String>());
    }

    let grid = Grid::symmetric(1.0, 160)?;
    let w = WeightMatrix::assemble(FractionalParams::new(0.5)?, &grid)?;
    let centres = grid.centers();
    let cells: Vec<f64> = centres.iter().map(|x| gauss(*x)).collect();
    let discrete = w.apply(&cells)?;
    let spectral = spectral_levy_at(&cfg, &u0, 0.5, &centres)?;
    let err = discrete.iter().zip(&spectral).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max |L⟨U⟩ - L[u]| at the centres, Δx = 1/160: {err:.3e}");
    Ok(())
}
