//! Dense univariate polynomials, piecewise polynomials and the Legendre basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if *c == 0.0) {
            self.coeffs.pop();
        }
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| n as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Polynomial {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend(self.coeffs.iter().enumerate().map(|(n, c)| c / (n as f64 + 1.0)));
        Polynomial::new(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + other.coeffs.get(i).unwrap_or(&0.0))
            .collect();
        Polynomial::new(out)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `p(alpha + beta * x)` expanded in powers of `x`.
    pub fn compose_affine(&self, alpha: f64, beta: f64) -> Polynomial {
        let inner = Polynomial::new(vec![alpha, beta]);
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&Polynomial::constant(*c));
        }
        acc
    }

    /// Sign-change roots in the open interval `(lo, hi)`, located by sampling and bisection.
    ///
    /// Roots of even multiplicity are not reported; callers only use this to split
    /// intervals where the polynomial keeps one sign.
    pub fn sign_change_roots(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut roots = Vec::new();
        if self.degree() == 0 || !(hi > lo) {
            return roots;
        }
        if self.degree() == 1 {
            let r = -self.coeffs[0] / self.coeffs[1];
            if r > lo && r < hi {
                roots.push(r);
            }
            return roots;
        }
        let samples = 64 * self.degree();
        let h = (hi - lo) / samples as f64;
        let mut a = lo;
        let mut fa = self.eval(a);
        for s in 1..=samples {
            let b = if s == samples { hi } else { lo + s as f64 * h };
            let fb = self.eval(b);
            if fa == 0.0 && a > lo {
                roots.push(a);
            } else if fa * fb < 0.0 {
                let (mut l, mut r, mut fl) = (a, b, fa);
                for _ in 0..200 {
                    let m = 0.5 * (l + r);
                    if m <= l || m >= r {
                        break;
                    }
                    let fm = self.eval(m);
                    if fm == 0.0 {
                        l = m;
                        r = m;
                        break;
                    }
                    if fl * fm < 0.0 {
                        r = m;
                    } else {
                        l = m;
                        fl = fm;
                    }
                }
                roots.push(0.5 * (l + r));
            }
            a = b;
            fa = fb;
        }
        roots
    }
}

/// Piecewise polynomial on the real line.
///
/// `breakpoints` are strictly increasing; piece `k` covers `(b_{k-1}, b_k]` with the
/// outer pieces extending to infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePolynomial {
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Polynomial>,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Polynomial>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidProblem(format!(
                "{} pieces need {} breakpoints, got {}",
                pieces.len(),
                pieces.len().saturating_sub(1),
                breakpoints.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidProblem("breakpoints must be finite and strictly increasing".into()));
        }
        if pieces.iter().flat_map(|p| p.coeffs.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidProblem("non-finite polynomial coefficient".into()));
        }
        Ok(PiecewisePolynomial { breakpoints, pieces })
    }

    pub fn single(p: Polynomial) -> Self {
        PiecewisePolynomial { breakpoints: vec![], pieces: vec![p] }
    }

    /// Builds from raw coefficient tables (ascending powers per piece).
    pub fn from_tables(breakpoints: Vec<f64>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(breakpoints, pieces.into_iter().map(Polynomial::new).collect())
    }

    #[inline]
    pub fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|b| *b < x)
    }

    /// Interval `[lo, hi]` of piece `k` (infinite for the outer pieces).
    pub fn piece_bounds(&self, k: usize) -> (f64, f64) {
        let lo = if k == 0 { f64::NEG_INFINITY } else { self.breakpoints[k - 1] };
        let hi = if k == self.breakpoints.len() { f64::INFINITY } else { self.breakpoints[k] };
        (lo, hi)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn derivative(&self) -> PiecewisePolynomial {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(Polynomial::derivative).collect(),
        }
    }

    /// Continuous antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> PiecewisePolynomial {
        let mut pieces: Vec<Polynomial> = self.pieces.iter().map(Polynomial::antiderivative).collect();
        for k in 0..self.breakpoints.len() {
            let b = self.breakpoints[k];
            let jump = pieces[k].eval(b) - pieces[k + 1].eval(b);
            pieces[k + 1] = pieces[k + 1].add(&Polynomial::constant(jump));
        }
        let mut out = PiecewisePolynomial { breakpoints: self.breakpoints.clone(), pieces };
        let shift = out.eval(0.0);
        if shift != 0.0 {
            out.pieces = out.pieces.iter().map(|p| p.add(&Polynomial::constant(-shift))).collect();
        }
        out
    }

    pub fn scale(&self, s: f64) -> PiecewisePolynomial {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Breakpoints and sign-change roots of the derivative inside `(lo, hi)`, sorted.
    pub fn turning_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        let d = self.derivative();
        let mut pts: Vec<f64> = self.breakpoints.iter().copied().filter(|b| *b > lo && *b < hi).collect();
        for (k, piece) in d.pieces.iter().enumerate() {
            let (plo, phi) = self.piece_bounds(k);
            let (a, b) = (plo.max(lo), phi.min(hi));
            if a < b {
                pts.extend(piece.sign_change_roots(a, b));
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Exact range of the derivative over `[lo, hi]` (one-sided limits at breakpoints).
    pub fn derivative_range(&self, lo: f64, hi: f64) -> (f64, f64) {
        let d = self.derivative();
        let dd = d.derivative();
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut visit = |v: f64| {
            min = min.min(v);
            max = max.max(v);
        };
        for (k, piece) in d.pieces.iter().enumerate() {
            let (plo, phi) = self.piece_bounds(k);
            let (a, b) = (plo.max(lo), phi.min(hi));
            if a > b {
                continue;
            }
            visit(piece.eval(a));
            visit(piece.eval(b));
            for r in dd.pieces[k].sign_change_roots(a, b) {
                visit(piece.eval(r));
            }
        }
        (min, max)
    }
}

/// Legendre polynomial `P_p` and its first two derivatives at `xi` in `[-1, 1]`.
pub fn legendre(p: usize, xi: f64) -> (f64, f64, f64) {
    // P_p(1) = 1 and P_p(-1) = (-1)^p.
    let mut p0 = 1.0;
    let mut d0 = 0.0;
    let mut s0 = 0.0;
    if p == 0 {
        return (p0, d0, s0);
    }
    let mut p1 = xi;
    let mut d1 = 1.0;
    let mut s1 = 0.0;
    for n in 1..p {
        let n = n as f64;
        let p2 = ((2.0 * n + 1.0) * xi * p1 - n * p0) / (n + 1.0);
        let d2 = ((2.0 * n + 1.0) * (p1 + xi * d1) - n * d0) / (n + 1.0);
        let s2 = ((2.0 * n + 1.0) * (2.0 * d1 + xi * s1) - n * s0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        s0 = s1;
        s1 = s2;
    }
    (p1, d1, s1)
}

/// Legendre polynomial `P_p(2s - 1)` as a polynomial in `s` on the reference cell `[0, 1]`.
pub fn shifted_legendre(p: usize) -> Polynomial {
    let mut prev = Polynomial::constant(1.0);
    if p == 0 {
        return prev;
    }
    let xi = Polynomial::new(vec![-1.0, 2.0]);
    let mut cur = xi.clone();
    for n in 1..p {
        let n = n as f64;
        let next = xi.mul(&cur).scale((2.0 * n + 1.0) / (n + 1.0)).add(&prev.scale(-n / (n + 1.0)));
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_calculus() {
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 9.0);
        assert_eq!(p.derivative().coeffs, vec![-2.0, 6.0]);
        assert_eq!(p.antiderivative().coeffs, vec![0.0, 1.0, -1.0, 1.0]);
        let q = p.compose_affine(1.0, 2.0);
        for x in [-1.0, 0.3, 2.0] {
            assert!((q.eval(x) - p.eval(1.0 + 2.0 * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn piecewise_antiderivative_is_continuous() {
        let a = PiecewisePolynomial::from_tables(vec![0.5, 0.6], vec![vec![0.0], vec![-1.25, 2.5], vec![0.25]]).unwrap();
        let big_a = a.antiderivative();
        for b in [0.5, 0.6] {
            let l = big_a.pieces[big_a.piece_index(b)].eval(b);
            let r = big_a.pieces[big_a.piece_index(b) + 1].eval(b);
            assert!((l - r).abs() < 1e-15);
        }
        assert_eq!(big_a.eval(0.0), 0.0);
        assert!((big_a.eval(0.7) - 0.0375).abs() < 1e-15);
    }

    #[test]
    fn breakpoint_belongs_to_left_piece() {
        let a = PiecewisePolynomial::from_tables(vec![0.5], vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(a.eval(0.5), 0.0);
        assert_eq!(a.eval(0.5000001), 1.0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(PiecewisePolynomial::from_tables(vec![0.5, 0.4], vec![vec![0.0], vec![1.0], vec![2.0]]).is_err());
        assert!(PiecewisePolynomial::from_tables(vec![0.5], vec![vec![0.0]]).is_err());
    }

    #[test]
    fn legendre_endpoint_values() {
        for p in 0..6 {
            let (v1, _, _) = legendre(p, 1.0);
            let (vm1, _, _) = legendre(p, -1.0);
            assert!((v1 - 1.0).abs() < 1e-14);
            assert!((vm1 - if p % 2 == 0 { 1.0 } else { -1.0 }).abs() < 1e-14);
        }
        // P_2 = (3x^2 - 1)/2
        let (v, d, s) = legendre(2, 0.3);
        assert!((v - (3.0 * 0.09 - 1.0) / 2.0).abs() < 1e-15);
        assert!((d - 0.9).abs() < 1e-15);
        assert!((s - 3.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_legendre_matches_recurrence() {
        for p in 0..5 {
            let sp = shifted_legendre(p);
            for s in [0.0, 0.2, 0.5, 0.9, 1.0] {
                assert!((sp.eval(s) - legendre(p, 2.0 * s - 1.0).0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn turning_points_of_parabola() {
        let f = PiecewisePolynomial::single(Polynomial::new(vec![0.0, 0.0, 1.0]));
        assert_eq!(f.turning_points(-1.0, 1.0), vec![0.0]);
        let (lo, hi) = f.derivative_range(-1.0, 2.0);
        assert_eq!((lo, hi), (-2.0, 4.0));
    }
}
