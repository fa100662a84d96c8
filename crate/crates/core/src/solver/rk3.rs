use crate::error::{Error, Result};

fn check(v: &[f64], stage: usize) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(cell) => Err(Error::NonFinite { step: stage, cell }),
        None => Ok(()),
    }
}

/// `u + dt · L(u)`.
pub fn forward_euler_step<F>(u: &[f64], dt: f64, mut rhs: F) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let l = rhs(u)?;
    let out: Vec<f64> = u.iter().zip(&l).map(|(a, r)| a + dt * r).collect();
    check(&out, 0)?;
    Ok(out)
}

/// Shu–Osher SSP-RK3:
/// `u¹ = u + dt L(u)`, `u² = ¾u + ¼(u¹ + dt L(u¹))`, `u⁺ = ⅓u + ⅔(u² + dt L(u²))`.
pub fn rk3_step<F>(u: &[f64], dt: f64, mut rhs: F) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let l0 = rhs(u)?;
    let u1: Vec<f64> = u.iter().zip(&l0).map(|(a, r)| a + dt * r).collect();
    check(&u1, 1)?;
    let l1 = rhs(&u1)?;
    let u2: Vec<f64> = u.iter().zip(u1.iter().zip(&l1)).map(|(a, (b, r))| 0.75 * a + 0.25 * (b + dt * r)).collect();
    check(&u2, 2)?;
    let l2 = rhs(&u2)?;
    let out: Vec<f64> =
        u.iter().zip(u2.iter().zip(&l2)).map(|(a, (b, r))| a / 3.0 + 2.0 / 3.0 * (b + dt * r)).collect();
    check(&out, 3)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(u: &[f64]) -> Result<Vec<f64>> {
        Ok(u.iter().map(|v| -v).collect())
    }

    #[test]
    fn zero_rhs() {
        let u = vec![1.0, -2.0, 3.5];
        assert_eq!(rk3_step(&u, 0.3, |v| Ok(vec![0.0; v.len()])).unwrap(), u);
    }

    #[test]
    fn amplification_factor() {
        let g = rk3_step(&[1.0], 0.1, decay).unwrap()[0];
        let expect = 1.0 - 0.1 + 0.005 - 0.001 / 6.0;
        assert!((g - expect).abs() < 1e-15);
    }

    #[test]
    fn third_order() {
        let err = |dt: f64| {
            let n = (1.0 / dt).round() as usize;
            let mut u = vec![1.0];
            for _ in 0..n {
                u = rk3_step(&u, dt, decay).unwrap();
            }
            (u[0] - (-1.0f64).exp()).abs()
        };
        let e: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|d| err(*d)).collect();
        for w in e.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!((rate - 3.0).abs() < 0.1, "{rate}");
        }
    }

    #[test]
    fn non_finite_aborts() {
        assert!(matches!(rk3_step(&[1.0], 1.0, |_| Ok(vec![f64::NAN])), Err(Error::NonFinite { .. })));
    }
}
