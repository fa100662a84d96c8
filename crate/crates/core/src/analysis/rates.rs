//! Observed order `α = log₂(E_Δx / E_{Δx/2})`.

use crate::error::{Error, Result};

pub fn convergence_rate(e_coarse: f64, e_fine: f64) -> Result<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0) || !e_coarse.is_finite() || !e_fine.is_finite() {
        return Err(Error::Analysis(format!("rates need positive errors, got {e_coarse:e} and {e_fine:e}")));
    }
    Ok((e_coarse / e_fine).log2())
}

/// Rates between successive entries; `None` where an error is not positive.
pub fn successive_rates(errors: &[f64]) -> Vec<Option<f64>> {
    errors.windows(2).map(|w| convergence_rate(w[0], w[1]).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halving_is_first_order() {
        assert_eq!(convergence_rate(0.4, 0.2).unwrap(), 1.0);
    }

    #[test]
    fn table_rows() {
        assert!((convergence_rate(0.0706, 0.0361).unwrap() - 0.9676).abs() < 1e-4);
        assert!((convergence_rate(0.009, 0.0023).unwrap() - 1.96829).abs() < 1e-5);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(convergence_rate(0.0, 1.0).is_err());
        assert!(convergence_rate(1.0, -1.0).is_err());
        assert_eq!(successive_rates(&[1.0, 0.5, 0.0]), vec![Some(1.0), None]);
    }
}
