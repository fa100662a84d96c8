//! Gauss–Legendre rules, adaptive Gauss integration and tanh-sinh for endpoint singularities.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection with a 10-point Gauss rule checked against its two halves.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let rule = GaussLegendre::new(10);
    let whole = rule.integrate(a, b, f);
    let (v, err) = adaptive_rec(f, &rule, a, b, whole, tol, 0);
    if err > tol.max(1e-300) * 10.0 || !v.is_finite() {
        return Err(Error::Quadrature { estimate: v, error: err });
    }
    Ok(v)
}

fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, f);
    let right = rule.integrate(m, b, f);
    let err = (left + right - whole).abs();
    if err <= tol || depth >= 50 {
        return (left + right, err);
    }
    let (l, el) = adaptive_rec(f, rule, a, m, left, 0.5 * tol, depth + 1);
    let (r, er) = adaptive_rec(f, rule, m, b, right, 0.5 * tol, depth + 1);
    (l + r, el + er)
}

/// Tanh-sinh integration over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` with both distances computed without
/// cancellation, so endpoint singularities such as `(b - x)^(-λ)` stay accurate.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let half = 0.5 * (b - a);
    let t_max = 6.5;
    let mut h = 0.5;
    let node = |t: f64| -> Option<(f64, f64, f64, f64)> {
        let u = 0.5 * PI * t.sinh();
        // 1 - tanh(u) and 1 + tanh(u) without cancellation
        let e = (-2.0 * u.abs()).exp();
        let small = 2.0 * e / (1.0 + e);
        let (one_minus, one_plus) = if u >= 0.0 { (small, 2.0 - small) } else { (2.0 - small, small) };
        let dl = half * one_plus;
        let dr = half * one_minus;
        if dl <= 0.0 || dr <= 0.0 {
            return None;
        }
        let x = if dl < dr { a + dl } else { b - dr };
        let cu = u.cosh();
        let w = half * 0.5 * PI * t.cosh() / (cu * cu);
        Some((x, dl, dr, w))
    };
    let mut sum = 0.0;
    let mut k = 0i64;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        for s in if k == 0 { vec![0.0] } else { vec![t, -t] } {
            if let Some((x, dl, dr, w)) = node(s) {
                if w > 0.0 {
                    sum += w * f(x, dl, dr);
                }
            }
        }
        k += 1;
    }
    let mut estimate = sum * h;
    for level in 0..12 {
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1i64;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            for s in [t, -t] {
                if let Some((x, dl, dr, w)) = node(s) {
                    if w > 0.0 {
                        add += w * f(x, dl, dr);
                    }
                }
            }
            k += 2;
        }
        sum += add;
        let next = sum * h;
        let err = (next - estimate).abs();
        estimate = next;
        if err <= tol * estimate.abs().max(1e-300) && level >= 2 {
            return Ok(estimate);
        }
    }
    Err(Error::Quadrature { estimate, error: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        for n in 1..12 {
            let g = GaussLegendre::new(n);
            let ws: f64 = g.weights.iter().sum();
            assert!((ws - 2.0).abs() < 1e-13);
            for deg in 0..(2 * n) {
                let v = g.integrate(0.0, 1.0, |x| x.powi(deg as i32));
                assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn adaptive_gauss_smooth() {
        let v = adaptive_gauss(&|x: f64| x.sin(), 0.0, PI, 1e-13).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} + (1-x)^{-0.9} dx = 2 + 10
        let v = tanh_sinh(&|_x, dl: f64, dr: f64| dl.powf(-0.5) + dr.powf(-0.9), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 12.0).abs() < 1e-9, "{v}");
    }
}
