//! The fractional Laplacian: normalization, cell weights, quadrature oracles and DG blocks.

pub mod blocks;
pub mod oracle;
pub mod weights;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

pub use blocks::NonlocalBlocks;
pub use weights::WeightMatrix;

/// Normalization making the symbol of `c ∫ (u(x+z) - u(x)) |z|^{-1-λ} dz` equal to `-|ξ|^λ`.
pub fn compute_c_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must lie in (0, 1)")));
    }
    let c = 2f64.powf(lambda) * gamma(0.5 * (1.0 + lambda))
        / (std::f64::consts::PI.sqrt() * gamma(-0.5 * lambda).abs());
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidParameter(format!("c_lambda is not representable for lambda = {lambda}")));
    }
    Ok(c)
}

/// `λ`, `c_λ` and the diagonal constant `d_λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    pub lambda: f64,
    pub c: f64,
    pub d: f64,
}

impl FractionalParams {
    pub fn new(lambda: f64) -> Result<Self> {
        let c = compute_c_lambda(lambda)?;
        let d = c * (2.0 / (1.0 - lambda) + 2.0 / lambda);
        if !d.is_finite() {
            return Err(Error::InvalidParameter(format!("d_lambda overflows for lambda = {lambda}")));
        }
        Ok(FractionalParams { lambda, c, d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_limit_and_known_value() {
        // λ → 1 gives the Cauchy normalization 1/π.
        let c = compute_c_lambda(1.0 - 1e-9).unwrap();
        assert!((c - 1.0 / std::f64::consts::PI).abs() < 1e-6);
        // Γ(3/4) = 1.2254167024651776, Γ(-1/4) = -4.901666809860711
        let expect = 2f64.sqrt() * 1.2254167024651776 / (std::f64::consts::PI.sqrt() * 4.901666809860711);
        assert!((compute_c_lambda(0.5).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn diagonal_bracket_at_one_half() {
        let p = FractionalParams::new(0.5).unwrap();
        assert!((p.d - 8.0 * p.c).abs() < 1e-15);
    }

    #[test]
    fn rejects_endpoints() {
        assert!(compute_c_lambda(0.0).is_err());
        assert!(compute_c_lambda(1.0).is_err());
        assert!(FractionalParams::new(-0.2).is_err());
    }
}
