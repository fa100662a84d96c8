//! Quadrature oracles for the weights, the seminorm and the operator symbol.
//!
//! Nothing here uses the closed-form weights; every value is an independent numerical integral.

use std::f64::consts::PI;

use super::FractionalParams;
use crate::error::Result;
use crate::quadrature::{adaptive_gauss, tanh_sinh, GaussLegendre};

/// `∫_lo^hi z^{-1-λ} dz` in the variable `s = ln z`.
fn kernel_mass(lambda: f64, lo: f64, hi: f64) -> Result<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    if b <= a {
        return Ok(0.0);
    }
    let f = |s: f64| (-lambda * s).exp();
    let scale = (-lambda * a).exp() * (b - a);
    adaptive_gauss(&f, a, b, 1e-15 * scale)
}

/// `∫_lo^∞ z^{-1-λ} dz`: quadrature up to `lo · 1e4`, analytic tail beyond.
fn kernel_mass_to_infinity(lambda: f64, lo: f64) -> Result<f64> {
    let r = lo * 1e4;
    Ok(kernel_mass(lambda, lo, r)? + r.powf(-lambda) / lambda)
}

/// `∫_{I_0} c ∫ (1_{I_d}(x+z) - 1_{I_d}(x)) |z|^{-1-λ} dz dx` by nested quadrature.
///
/// The singularity at `z = 0` is excised symmetrically: for `d = 0` only `|z|` large enough
/// to leave the cell contributes, and for `d ≠ 0` the inner interval starts at the distance
/// from `x` to the target cell, supplied by the outer tanh-sinh rule without cancellation.
pub fn quadrature_oracle_weight(params: &FractionalParams, dx: f64, d: i64) -> Result<f64> {
    let lambda = params.lambda;
    let h = dx;
    let tol = 1e-14;
    let value = if d == 0 {
        let f = |_x: f64, dl: f64, dr: f64| -> f64 {
            let left = kernel_mass_to_infinity(lambda, dl).unwrap_or(f64::NAN);
            let right = kernel_mass_to_infinity(lambda, dr).unwrap_or(f64::NAN);
            -(left + right)
        };
        tanh_sinh(&f, 0.0, h, tol)?
    } else {
        let n = d.unsigned_abs() as f64;
        let positive = d > 0;
        let f = |_x: f64, dl: f64, dr: f64| -> f64 {
            // distance from x to the near edge of I_d
            let near = if positive { (n - 1.0) * h + dr } else { (n - 1.0) * h + dl };
            kernel_mass(lambda, near, near + h).unwrap_or(f64::NAN)
        };
        tanh_sinh(&f, 0.0, h, tol)?
    };
    Ok(params.c * value)
}

/// `∬ (1_I(z) - 1_I(x))^2 |z - x|^{-1-λ} dz dx` for a single cell `I` of width `dx`.
pub fn single_cell_seminorm(lambda: f64, dx: f64) -> Result<f64> {
    let f = |_x: f64, dl: f64, dr: f64| -> f64 {
        kernel_mass_to_infinity(lambda, dl).unwrap_or(f64::NAN) + kernel_mass_to_infinity(lambda, dr).unwrap_or(f64::NAN)
    };
    Ok(2.0 * tanh_sinh(&f, 0.0, dx, 1e-14)?)
}

/// Symbol of `c ∫ (u(x+z) - u(x)) |z|^{-1-λ} dz` at frequency `xi`, by quadrature.
///
/// Evaluates `-2c ∫_0^∞ (1 - cos ξz) z^{-1-λ} dz`: tanh-sinh on the first period, Gauss
/// on the following periods, and an asymptotic expansion for the remainder.
pub fn quadrature_symbol(params: &FractionalParams, xi: f64) -> Result<f64> {
    let lambda = params.lambda;
    let xi = xi.abs();
    if xi == 0.0 {
        return Ok(0.0);
    }
    let period = 2.0 * PI / xi;
    let integrand = |z: f64| {
        let s = (0.5 * xi * z).sin() * z.powf(-0.5 * (1.0 + lambda));
        2.0 * s * s
    };
    let first = tanh_sinh(&|z: f64, _dl: f64, _dr: f64| integrand(z), 0.0, period, 1e-14)?;
    let rule = GaussLegendre::new(40);
    let periods = 4000usize;
    let mut body = 0.0;
    for k in 1..periods {
        let a = k as f64 * period;
        body += rule.integrate(a, a + period, integrand);
    }
    let z = periods as f64 * period;
    // ∫_Z^∞ z^{-1-λ} dz - ∫_Z^∞ cos(ξz) z^{-1-λ} dz with cos(ξZ) = 1, sin(ξZ) = 0
    let mu = 1.0 + lambda;
    let mut cos_tail = 0.0;
    let mut coef = mu / (xi * xi) * z.powf(-mu - 1.0);
    let mut sign = 1.0;
    for k in 0..6 {
        cos_tail += sign * coef;
        let m = mu + 1.0 + 2.0 * k as f64;
        coef *= m * (m + 1.0) / (xi * xi * z * z);
        sign = -sign;
    }
    let tail = z.powf(-lambda) / lambda - cos_tail;
    Ok(-2.0 * params.c * (first + body + tail))
}
