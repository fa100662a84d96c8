use crate::error::{Error, Result};

/// Largest `dt` with
/// `(dt/Δx)(‖∂₁f̂‖ + ‖∂₂f̂‖) + (2dt/Δx²)‖a‖ + b d_λ dt/Δx^λ ≤ safety`.
pub fn cfl_dt(
    dx: f64,
    flux_bounds: (f64, f64),
    sup_a: f64,
    d_lambda: f64,
    lambda: f64,
    b: f64,
    safety: f64,
) -> Result<f64> {
    if !(dx > 0.0) || !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::InvalidParameter(format!("cfl: dx = {dx}, safety = {safety}")));
    }
    let rate = (flux_bounds.0 + flux_bounds.1) / dx + 2.0 * sup_a / (dx * dx) + b * d_lambda / dx.powf(lambda);
    if !rate.is_finite() {
        return Err(Error::InvalidParameter("cfl: non-finite stiffness bound".into()));
    }
    if rate == 0.0 {
        return Err(Error::InvalidParameter("cfl: the problem has no dynamics (all bounds vanish)".into()));
    }
    Ok(safety / rate)
}

/// `Δx²`-stiffness of the DDG diffusion operator at default `β`, as `ρ ≈ σ_k ‖a‖/Δx² · 2.5`:
/// measured spectral radii are about `4.1, 24.4, 108` times `‖a‖/Δx²` for `k = 0, 1, 2`.
const DDG_DIFFUSION_STIFFNESS: [f64; 3] = [2.0, 10.0, 44.0];
const DEFAULT_BETA0: [f64; 3] = [1.0, 2.0, 4.0];

/// `safety · min(Δx/((2k+1)L), Δx²/(σ_k ‖a‖), Δx^λ/(b d_λ))` for the high-order DDG scheme,
/// with `σ_k` scaled up when `β₀` exceeds its default.
#[allow(clippy::too_many_arguments)]
pub fn rk3_dt(
    dx: f64,
    lipschitz_f: f64,
    sup_a: f64,
    d_lambda: f64,
    lambda: f64,
    b: f64,
    degree: usize,
    beta0: f64,
    safety: f64,
) -> Result<f64> {
    if degree > 2 {
        return Err(Error::InvalidParameter(format!("degree {degree} is not supported (k ≤ 2)")));
    }
    let k = (2 * degree + 1) as f64;
    let mut dt = f64::INFINITY;
    if lipschitz_f > 0.0 {
        dt = dt.min(dx / (k * lipschitz_f));
    }
    if sup_a > 0.0 {
        let sigma = DDG_DIFFUSION_STIFFNESS[degree] * (beta0 / DEFAULT_BETA0[degree]).max(1.0);
        dt = dt.min(dx * dx / (sigma * sup_a));
    }
    if b > 0.0 {
        dt = dt.min(dx.powf(lambda) / (b * d_lambda));
    }
    if !dt.is_finite() {
        return Err(Error::InvalidParameter("cfl: the problem has no dynamics (all bounds vanish)".into()));
    }
    Ok(safety * dt)
}
