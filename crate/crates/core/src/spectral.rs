//! Periodized Fourier solutions of the linear problem and a spectral fractional Laplacian.
//!
//! Transform convention: `û(ξ) = ∫ u(x) e^{-iξx} dx`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodization `[-L, L)` sampled at `N` equispaced nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub half_period: f64,
    pub modes: usize,
    /// Largest admissible `|u|` near the period edges, relative to `max |u|`.
    pub wrap_budget: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { half_period: 4.0, modes: 1 << 14, wrap_budget: 1e-10 }
    }
}

/// Coefficients of `u_t + c u_x = a u_xx + b L[u]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSymbol {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_period > 0.0) {
            return Err(Error::Spectral("half period must be positive".into()));
        }
        if self.modes < 4 || !self.modes.is_power_of_two() {
            return Err(Error::Spectral(format!("mode count {} must be a power of two ≥ 4", self.modes)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_period / self.modes as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.modes).map(|j| -self.half_period + j as f64 * h).collect()
    }

    /// `f` sampled at [`Self::nodes`].
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes().into_iter().map(f).collect()
    }

    /// Wavenumber of DFT index `m`.
    pub fn wavenumber(&self, m: usize) -> f64 {
        let n = self.modes;
        let signed = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
        PI * signed / self.half_period
    }

    /// Errors when the samples near the period edges exceed the wrap budget.
    pub fn check_wrap(&self, samples: &[f64]) -> Result<()> {
        let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 {
            return Ok(());
        }
        let edge = 0.875 * self.half_period;
        let nodes = self.nodes();
        let tail = nodes.iter().zip(samples).filter(|(x, _)| x.abs() >= edge).fold(0.0f64, |m, (_, v)| m.max(v.abs()));
        if tail > self.wrap_budget * peak {
            return Err(Error::Spectral(format!(
                "wrap budget exceeded: |u| = {tail:e} near the period edge (budget {:e} of the peak)",
                self.wrap_budget
            )));
        }
        Ok(())
    }
}

fn forward(cfg: &SpectralConfig, samples: &[f64]) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    if samples.len() != cfg.modes {
        return Err(Error::DimensionMismatch { expected: cfg.modes, found: samples.len() });
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(cfg.modes).process(&mut buf);
    Ok(buf)
}

fn inverse(cfg: &SpectralConfig, mut coeffs: Vec<Complex64>) -> Vec<f64> {
    FftPlanner::new().plan_fft_inverse(cfg.modes).process(&mut coeffs);
    let s = 1.0 / cfg.modes as f64;
    coeffs.iter().map(|c| c.re * s).collect()
}

/// Multiplies DFT coefficients by `m(ξ)`; the Nyquist mode keeps only the real part.
fn apply_multiplier<M: Fn(f64) -> Complex64>(cfg: &SpectralConfig, coeffs: &mut [Complex64], m: M) {
    let n = cfg.modes;
    for (j, c) in coeffs.iter_mut().enumerate() {
        let mut factor = m(cfg.wavenumber(j));
        if j == n / 2 {
            factor = Complex64::new(factor.re, 0.0);
        }
        *c *= factor;
    }
}

/// Trigonometric interpolant of DFT coefficients at arbitrary points.
pub fn evaluate_band_limited(cfg: &SpectralConfig, coeffs: &[Complex64], points: &[f64]) -> Vec<f64> {
    let n = cfg.modes;
    let dxi = PI / cfg.half_period;
    points
        .par_iter()
        .map(|x| {
            let s = x + cfg.half_period;
            let step = Complex64::from_polar(1.0, dxi * s);
            let mut z = Complex64::new(1.0, 0.0);
            let mut acc = coeffs[0].re;
            for m in 1..n / 2 {
                z = if m % 64 == 0 { Complex64::from_polar(1.0, dxi * s * m as f64) } else { z * step };
                // modes m and n - m are conjugate for real data
                acc += 2.0 * (coeffs[m] * z).re;
            }
            acc += coeffs[n / 2].re * (dxi * s * (n / 2) as f64).cos();
            acc / n as f64
        })
        .collect()
}

/// Coefficients of the solution at time `t`.
fn evolve(cfg: &SpectralConfig, sym: &LinearSymbol, u0: &[f64], t: f64) -> Result<Vec<Complex64>> {
    if !(t >= 0.0) {
        return Err(Error::Spectral(format!("time {t} must be nonnegative")));
    }
    if !(sym.lambda > 0.0 && sym.lambda <= 2.0) || sym.a < 0.0 || sym.b < 0.0 {
        return Err(Error::Spectral("symbol parameters out of range".into()));
    }
    cfg.check_wrap(u0)?;
    let mut c = forward(cfg, u0)?;
    apply_multiplier(cfg, &mut c, |xi| {
        let decay = (sym.a * xi * xi + sym.b * xi.abs().powf(sym.lambda)) * t;
        Complex64::from_polar((-decay).exp(), -xi * sym.c * t)
    });
    Ok(c)
}

/// Solution at time `t` on the spectral nodes.
pub fn linear_solution_on_nodes(cfg: &SpectralConfig, sym: &LinearSymbol, u0: &[f64], t: f64) -> Result<Vec<f64>> {
    Ok(inverse(cfg, evolve(cfg, sym, u0, t)?))
}

/// Solution of `u_t + c u_x = a u_xx + b L[u]` at time `t` and the requested points,
/// from `u0` sampled at the spectral nodes.
pub fn linear_exact_solution(cfg: &SpectralConfig, sym: &LinearSymbol, u0: &[f64], t: f64, points: &[f64]) -> Result<Vec<f64>> {
    let c = evolve(cfg, sym, u0, t)?;
    Ok(evaluate_band_limited(cfg, &c, points))
}

/// Inverse transform of `-|ξ|^λ û` on the spectral nodes.
pub fn spectral_levy(cfg: &SpectralConfig, u: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let c = levy_coefficients(cfg, u, lambda)?;
    Ok(inverse(cfg, c))
}

/// [`spectral_levy`] evaluated at arbitrary points.
pub fn spectral_levy_at(cfg: &SpectralConfig, u: &[f64], lambda: f64, points: &[f64]) -> Result<Vec<f64>> {
    let c = levy_coefficients(cfg, u, lambda)?;
    Ok(evaluate_band_limited(cfg, &c, points))
}

fn levy_coefficients(cfg: &SpectralConfig, u: &[f64], lambda: f64) -> Result<Vec<Complex64>> {
    if !(lambda > 0.0 && lambda <= 2.0) {
        return Err(Error::Spectral(format!("lambda = {lambda} outside (0, 2]")));
    }
    cfg.check_wrap(u)?;
    let mut c = forward(cfg, u)?;
    apply_multiplier(cfg, &mut c, |xi| Complex64::new(-xi.abs().powf(lambda), 0.0));
    Ok(c)
}

/// Spectral `∂_x` on the nodes.
pub fn spectral_derivative(cfg: &SpectralConfig, u: &[f64], order: u32) -> Result<Vec<f64>> {
    let mut c = forward(cfg, u)?;
    apply_multiplier(cfg, &mut c, |xi| Complex64::new(0.0, xi).powu(order));
    Ok(inverse(cfg, c))
}
