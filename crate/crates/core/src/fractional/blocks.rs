//! Nonlocal blocks `N_d^{pq} = ∫_{I_i} L[φ_{q,i+d}] φ_{p,i}` for Legendre modes of degree ≤ k.

use serde::{Deserialize, Serialize};

use super::weights::periodic_image_tail;
use super::FractionalParams;
use crate::error::{Error, Result};
use crate::poly::{shifted_legendre, Polynomial};
use crate::quadrature::GaussLegendre;
use crate::solver::grid::{Boundary, Grid};
use crate::solver::state::DGState;

const FAR_FIELD_NODES: usize = 24;
const PERIODIC_IMAGES: i64 = 64;

/// `∫_0^1 t^alpha P(t) dt` for a polynomial `P` of degree `< nodes`, known only by samples.
fn weighted_moment<F: Fn(f64) -> f64>(p: F, nodes: usize, alpha: f64) -> f64 {
    let rule = GaussLegendre::new(nodes);
    let ts: Vec<f64> = rule.mapped(0.0, 1.0).map(|(t, _)| t).collect();
    let mut total = 0.0;
    for (j, tj) in ts.iter().enumerate() {
        let mut ell = Polynomial::constant(1.0);
        for (m, tm) in ts.iter().enumerate() {
            if m != j {
                ell = ell.mul(&Polynomial::new(vec![-tm / (tj - tm), 1.0 / (tj - tm)]));
            }
        }
        let moment: f64 = ell.coeffs.iter().enumerate().map(|(n, c)| c / (n as f64 + 1.0 + alpha)).sum();
        total += p(*tj) * moment;
    }
    total
}

/// `(v(x) - v(y)) / (x - y)` evaluated exactly for a polynomial `v`.
fn divided_difference(v: &Polynomial, x: f64, y: f64) -> f64 {
    let mut total = 0.0;
    for (n, c) in v.coeffs.iter().enumerate().skip(1) {
        let mut s = 0.0;
        for m in 0..n {
            s += x.powi(m as i32) * y.powi((n - 1 - m) as i32);
        }
        total += c * s;
    }
    total
}

/// Reference-cell block `ν_d^{pq}` (unit cells, kernel without `c_λ`), `d ≥ 0`.
pub fn reference_block(lambda: f64, d: usize, degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let basis: Vec<Polynomial> = (0..m).map(shifted_legendre).collect();
    let mut out = vec![0.0; m * m];
    let inner = GaussLegendre::new(2 * degree + 4);
    match d {
        0 => {
            for p in 0..m {
                for q in 0..m {
                    let (w, v) = (&basis[p], &basis[q]);
                    // ∬_{[0,1]^2} (v(x)-v(y))(w(x)-w(y))|x-y|^{-1-λ} = 2 ∫_0^1 τ^{1-λ} H(τ) dτ
                    let h = |tau: f64| {
                        inner.integrate(0.0, 1.0 - tau, |y| {
                            divided_difference(v, y + tau, y) * divided_difference(w, y + tau, y)
                        })
                    };
                    let double = if degree == 0 { 0.0 } else { 2.0 * weighted_moment(h, 2 * degree + 1, 1.0 - lambda) };
                    // ∫_0^1 v w (x^{-λ} + (1-x)^{-λ}) / λ
                    let vw = v.mul(w);
                    let mirrored = vw.compose_affine(1.0, -1.0);
                    let moment = |poly: &Polynomial| -> f64 {
                        poly.coeffs.iter().enumerate().map(|(n, c)| c / (n as f64 + 1.0 - lambda)).sum()
                    };
                    let edge = (moment(&vw) + moment(&mirrored)) / lambda;
                    out[p * m + q] = -0.5 * double - edge;
                }
            }
        }
        1 => {
            let outer = GaussLegendre::new(30);
            for p in 0..m {
                for q in 0..m {
                    let phi = |s: f64, r: f64| basis[q].eval(s) * basis[p].eval(1.0 - r);
                    // σ = s + r ≤ 1: s = σt, r = σ(1-t)
                    let j = |sigma: f64| inner.integrate(0.0, 1.0, |t| phi(sigma * t, sigma * (1.0 - t)));
                    let near = weighted_moment(j, 2 * degree + 1, -lambda);
                    // 1 ≤ σ ≤ 2: smooth kernel
                    let far = outer.integrate(1.0, 2.0, |sigma| {
                        sigma.powf(-1.0 - lambda) * inner.integrate(sigma - 1.0, 1.0, |s| phi(s, sigma - s))
                    });
                    out[p * m + q] = near + far;
                }
            }
        }
        _ => {
            let rule = GaussLegendre::new(FAR_FIELD_NODES);
            let pts: Vec<(f64, f64)> = rule.mapped(0.0, 1.0).collect();
            let df = d as f64;
            for p in 0..m {
                for q in 0..m {
                    let mut acc = 0.0;
                    for (s, ws) in &pts {
                        let vq = basis[q].eval(*s);
                        let mut row = 0.0;
                        for (y, wy) in &pts {
                            row += wy * basis[p].eval(*y) * (df + s - y).powf(-1.0 - lambda);
                        }
                        acc += ws * vq * row;
                    }
                    out[p * m + q] = acc;
                }
            }
        }
    }
    out
}

/// Blocks over a computational window, scaled by `c_λ Δx^{1-λ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlocalBlocks {
    pub degree: usize,
    pub dx: f64,
    pub cells: usize,
    pub boundary: Boundary,
    /// Offsets `0..cells`, each an `(k+1)×(k+1)` row-major block (row = test mode `p`).
    blocks: Vec<f64>,
}

impl NonlocalBlocks {
    pub fn assemble(params: &FractionalParams, grid: &Grid, degree: usize) -> Result<Self> {
        if degree > 2 {
            return Err(Error::InvalidParameter(format!("nonlocal blocks support degree ≤ 2, got {degree}")));
        }
        let m = degree + 1;
        let scale = params.c * grid.dx.powf(1.0 - params.lambda);
        let cells = grid.cells;
        let reference = |d: i64| -> Vec<f64> {
            let mut b = reference_block(params.lambda, d.unsigned_abs() as usize, degree);
            if d < 0 {
                for p in 0..m {
                    for q in 0..m {
                        if (p + q) % 2 == 1 {
                            b[p * m + q] = -b[p * m + q];
                        }
                    }
                }
            }
            b
        };
        let mut blocks = vec![0.0; cells * m * m];
        match grid.boundary {
            Boundary::Zero => {
                for d in 0..cells {
                    let b = reference(d as i64);
                    for (k, v) in b.iter().enumerate() {
                        blocks[d * m * m + k] = scale * v;
                    }
                }
            }
            Boundary::Periodic => {
                let mc = cells as i64;
                let far_cache: std::collections::HashMap<i64, Vec<f64>> = (-PERIODIC_IMAGES * mc - mc
                    ..=PERIODIC_IMAGES * mc + mc)
                    .map(|e| (e, reference(e)))
                    .collect();
                for d in 0..mc {
                    // centred representative keeps the parity relation between d and -d
                    let e = if 2 * d <= mc { d } else { d - mc };
                    for img in -PERIODIC_IMAGES..=PERIODIC_IMAGES {
                        let b = &far_cache[&(e + img * mc)];
                        for (k, v) in b.iter().enumerate() {
                            blocks[d as usize * m * m + k] += scale * v;
                        }
                    }
                    blocks[d as usize * m * m] += scale * periodic_image_tail(params.lambda, e, cells, PERIODIC_IMAGES as usize);
                }
                // zero action on constants
                for p in 0..m {
                    let total: f64 = (0..cells).map(|d| blocks[d * m * m + p * m]).sum();
                    blocks[p * m] -= total;
                    if p > 0 {
                        blocks[p] = blocks[p * m];
                    }
                }
            }
        }
        if blocks.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("nonlocal blocks are not finite".into()));
        }
        Ok(NonlocalBlocks { degree, dx: grid.dx, cells, boundary: grid.boundary, blocks })
    }

    /// `N_d^{pq}` for window offset `d = j - i`.
    pub fn get(&self, d: i64, p: usize, q: usize) -> f64 {
        let m = self.degree + 1;
        match self.boundary {
            Boundary::Zero => {
                let v = self.blocks[d.unsigned_abs() as usize * m * m + p * m + q];
                if d < 0 && (p + q) % 2 == 1 {
                    -v
                } else {
                    v
                }
            }
            Boundary::Periodic => {
                let e = d.rem_euclid(self.cells as i64) as usize;
                self.blocks[e * m * m + p * m + q]
            }
        }
    }

    /// `out[i, p] = Σ_j Σ_q N_{j-i}^{pq} U_{q,j}`.
    pub fn apply(&self, u: &DGState) -> Vec<f64> {
        let m = self.degree + 1;
        let mut out = vec![0.0; self.cells * m];
        for i in 0..self.cells {
            for j in 0..self.cells {
                let d = j as i64 - i as i64;
                for p in 0..m {
                    let mut acc = 0.0;
                    for q in 0..m {
                        acc += self.get(d, p, q) * u.get(j, q);
                    }
                    out[i * m + p] += acc;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::weights::gamma_d;

    #[test]
    fn degree_zero_blocks_are_cell_weights() {
        for lambda in [0.2, 0.5, 0.8] {
            let p = FractionalParams::new(lambda).unwrap();
            for d in 0..6usize {
                let nu = reference_block(lambda, d, 0)[0];
                let g = gamma_d(&p, d as i64) / p.c;
                assert!(((nu - g) / g).abs() < 1e-12, "lambda={lambda} d={d}: {nu} vs {g}");
            }
        }
    }

    #[test]
    fn diagonal_block_is_symmetric_and_negative_definite() {
        let b = reference_block(0.5, 0, 2);
        for p in 0..3 {
            assert!(b[p * 3 + p] < 0.0);
            for q in 0..3 {
                assert!((b[p * 3 + q] - b[q * 3 + p]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn even_modes_annihilate_constants() {
        // Σ_d N_d^{p0} = ∫_{I_0} L[1] φ_p = 0, with odd p cancelling by symmetry
        let lambda = 0.5;
        let deg = 2;
        let dmax = 4000usize;
        for p in [0usize, 2] {
            let mut s = reference_block(lambda, 0, deg)[p * 3];
            let mut tail = 0.0;
            for d in (1..=dmax).rev() {
                tail += reference_block(lambda, d, deg)[p * 3];
            }
            s += 2.0 * tail;
            let scale = reference_block(lambda, 0, deg)[p * 3 + p].abs();
            let tol = if p == 0 { 1e-2 } else { 1e-8 };
            assert!(s.abs() < tol * scale, "p={p}: {s}");
        }
    }

    #[test]
    fn near_and_far_rules_agree_at_two() {
        // the far-field tensor rule at d = 2 against the exact split used for d = 1, shifted
        let lambda = 0.5;
        let nu2 = reference_block(lambda, 2, 1);
        let rule = GaussLegendre::new(60);
        let basis = [shifted_legendre(0), shifted_legendre(1)];
        for p in 0..2 {
            for q in 0..2 {
                let v = rule.integrate(0.0, 1.0, |s| {
                    basis[q].eval(s) * rule.integrate(0.0, 1.0, |y| basis[p].eval(y) * (2.0 + s - y).powf(-1.5))
                });
                assert!((v - nu2[p * 2 + q]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn periodic_blocks_kill_constants() {
        let p = FractionalParams::new(0.5).unwrap();
        let grid = Grid::symmetric(1.0, 10).unwrap().with_boundary(Boundary::Periodic);
        let nb = NonlocalBlocks::assemble(&p, &grid, 1).unwrap();
        let mut u = DGState::zeros(grid.cells, 1);
        for i in 0..grid.cells {
            u.set(i, 0, 1.7);
        }
        let out = nb.apply(&u);
        assert!(out.iter().all(|v| v.abs() < 1e-12), "{:?}", &out[..4]);
    }
}
