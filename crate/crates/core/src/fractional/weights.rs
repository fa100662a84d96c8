//! Cell weights `G_d = ∫_{I_i} L[1_{I_{i+d}}]` for piecewise-constant functions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FractionalParams;
use crate::error::{Error, Result};
use crate::solver::grid::{Boundary, Grid};

/// Number of periodic images summed for the periodic test window.
const PERIODIC_IMAGES: usize = 64;

/// `s(d) - s(d-1)` with `s(d) = d^{1-λ}`, evaluated without cancellation.
fn first_difference(d: f64, lambda: f64) -> f64 {
    if d <= 1.0 {
        return d.powf(1.0 - lambda);
    }
    -d.powf(1.0 - lambda) * ((1.0 - lambda) * (-1.0 / d).ln_1p()).exp_m1()
}

/// Grid-independent weight `γ_d` with `G_d = Δx^{1-λ} γ_d`.
pub fn gamma_d(params: &FractionalParams, d: i64) -> f64 {
    let lambda = params.lambda;
    let d = d.unsigned_abs() as f64;
    if d == 0.0 {
        return -params.d;
    }
    let k = params.c / (lambda * (1.0 - lambda));
    k * (first_difference(d, lambda) - first_difference(d + 1.0, lambda))
}

/// Closed-form weight for offset `d` on cells of width `dx`.
pub fn closed_form_weight(params: &FractionalParams, dx: f64, d: i64) -> f64 {
    dx.powf(1.0 - params.lambda) * gamma_d(params, d)
}

/// `Σ_{|d| > max_offset} G_d`, the mass beyond the stored row.
pub fn tail_mass(params: &FractionalParams, dx: f64, max_offset: usize) -> f64 {
    let k = params.c / (params.lambda * (1.0 - params.lambda));
    2.0 * k * dx.powf(1.0 - params.lambda) * first_difference(max_offset as f64 + 1.0, params.lambda)
}

/// `Σ_{|m| > images} |d + m N|^{-1-λ}` for unit cells: midpoint integral of the far images
/// plus the first Euler–Maclaurin correction.
pub fn periodic_image_tail(lambda: f64, d: i64, cells: usize, images: usize) -> f64 {
    let n = cells as f64;
    let start = (images as f64 + 0.5) * n;
    let side = |r: f64| r.powf(-lambda) / (lambda * n) - (1.0 + lambda) * n / 24.0 * r.powf(-2.0 - lambda);
    side(start + d as f64) + side(start - d as f64)
}

/// Toeplitz weight row over a computational window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    pub params: FractionalParams,
    pub dx: f64,
    pub cells: usize,
    /// `row[d] = G_d` for `d = 0..row.len()`; periodic rows hold circulant entries.
    pub row: Vec<f64>,
    pub boundary: Boundary,
    /// Fold the analytic mass beyond the stored row into the diagonal.
    pub tail_correction: bool,
}

impl WeightMatrix {
    /// Row over the padded window of `grid` (offsets up to `cells + 2 * padding - 1`).
    pub fn assemble(params: FractionalParams, grid: &Grid) -> Result<Self> {
        if grid.cells < 3 {
            return Err(Error::InvalidGrid("the weight row needs at least 3 cells".into()));
        }
        match grid.boundary {
            Boundary::Zero => {
                let len = grid.cells + 2 * grid.padding_cells;
                let row: Vec<f64> = (0..len as i64).map(|d| closed_form_weight(&params, grid.dx, d)).collect();
                if row.iter().any(|g| !g.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "weights overflow for lambda = {} and dx = {}",
                        params.lambda, grid.dx
                    )));
                }
                Ok(WeightMatrix {
                    params,
                    dx: grid.dx,
                    cells: grid.cells,
                    row,
                    boundary: Boundary::Zero,
                    tail_correction: false,
                })
            }
            Boundary::Periodic => Ok(Self::periodic(params, grid.dx, grid.cells)),
        }
    }

    /// Circulant row of the periodized operator with zero row sum.
    pub fn periodic(params: FractionalParams, dx: f64, cells: usize) -> Self {
        let m = cells as i64;
        let p = PERIODIC_IMAGES as i64;
        let mut row = vec![0.0; cells];
        for d in 1..=cells / 2 {
            let d = d as i64;
            let mut acc = 0.0;
            for img in -p..=p {
                acc += closed_form_weight(&params, dx, d + img * m);
            }
            acc += params.c * dx.powf(1.0 - params.lambda) * periodic_image_tail(params.lambda, d, cells, PERIODIC_IMAGES);
            row[d as usize] = acc;
            row[(m - d) as usize] = acc;
        }
        row[0] = -row[1..].iter().sum::<f64>();
        WeightMatrix { params, dx, cells, row, boundary: Boundary::Periodic, tail_correction: false }
    }

    pub fn with_tail_correction(mut self, on: bool) -> Self {
        self.tail_correction = on;
        self
    }

    pub fn max_offset(&self) -> usize {
        self.row.len() - 1
    }

    /// Diagonal used when applying the operator.
    pub fn diagonal(&self) -> f64 {
        if self.tail_correction && self.boundary == Boundary::Zero {
            self.row[0] + tail_mass(&self.params, self.dx, self.max_offset())
        } else {
            self.row[0]
        }
    }

    /// `G_{j-i}` between window cells.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match self.boundary {
            Boundary::Zero => {
                if i == j {
                    self.diagonal()
                } else {
                    self.row[i.abs_diff(j)]
                }
            }
            Boundary::Periodic => self.row[(j + self.cells - i) % self.cells],
        }
    }

    /// Sum of the represented full row, including the tail correction when enabled.
    pub fn represented_row_sum(&self) -> f64 {
        match self.boundary {
            Boundary::Zero => {
                let off: f64 = self.row[1..].iter().rev().sum();
                self.diagonal() + 2.0 * off
            }
            Boundary::Periodic => self.row.iter().rev().sum(),
        }
    }

    /// `(1/Δx) Σ_j G_{j-i} U_j` for every window cell, summed in fixed order.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.cells {
            return Err(Error::DimensionMismatch { expected: self.cells, found: u.len() });
        }
        let mut out = vec![0.0; self.cells];
        self.apply_into(u, &mut out);
        Ok(out)
    }

    /// As [`apply`](Self::apply) without the length check or allocation.
    pub fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        let inv = 1.0 / self.dx;
        let diag = self.diagonal();
        let row_i = |i: usize| -> f64 {
            let mut acc = 0.0;
            match self.boundary {
                Boundary::Zero => {
                    for j in 0..i {
                        acc += self.row[i - j] * u[j];
                    }
                    acc += diag * u[i];
                    for j in i + 1..u.len() {
                        acc += self.row[j - i] * u[j];
                    }
                }
                Boundary::Periodic => {
                    for (j, uj) in u.iter().enumerate() {
                        acc += self.row[(j + self.cells - i) % self.cells] * uj;
                    }
                }
            }
            acc * inv
        };
        if self.cells >= 256 {
            out.par_iter_mut().enumerate().for_each(|(i, o)| *o = row_i(i));
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                *o = row_i(i);
            }
        }
    }

    /// `Σ_i Σ_j U_i G_{j-i} U_j`.
    pub fn quadratic_form(&self, u: &[f64]) -> Result<f64> {
        let lu = self.apply(u)?;
        Ok(self.dx * u.iter().zip(&lu).map(|(a, b)| a * b).sum::<f64>())
    }

    /// Squared `H^{λ/2}` seminorm of the piecewise-constant interpolant of `U`.
    pub fn discrete_h_seminorm(&self, u: &[f64]) -> Result<f64> {
        Ok((-2.0 / self.params.c * self.quadratic_form(u)?).max(0.0))
    }
}

/// Free-function form of [`WeightMatrix::apply`].
pub fn apply_levy(w: &WeightMatrix, u: &[f64]) -> Result<Vec<f64>> {
    w.apply(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: f64) -> FractionalParams {
        FractionalParams::new(l).unwrap()
    }

    #[test]
    fn diagonal_closed_form() {
        let p = params(0.5);
        let g0 = closed_form_weight(&p, 0.01, 0);
        assert!((g0 + 8.0 * p.c * 0.1).abs() < 1e-15);
    }

    #[test]
    fn first_offset_matches_reference_cell_integral() {
        for l in [0.1, 0.5, 0.9] {
            let p = params(l);
            let expect = p.c * (2.0 - 2f64.powf(1.0 - l)) / (l * (1.0 - l));
            assert!((gamma_d(&p, 1) - expect).abs() < 1e-14 * expect);
            assert_eq!(gamma_d(&p, 1), gamma_d(&p, -1));
        }
    }

    #[test]
    fn telescoping_tail_closes_the_row() {
        for l in [0.1, 0.5, 0.9] {
            let p = params(l);
            let grid = Grid::symmetric(1.0, 20).unwrap();
            let w = WeightMatrix::assemble(p, &grid).unwrap().with_tail_correction(true);
            assert!(w.represented_row_sum().abs() <= 1e-12 * w.row[0].abs());
            let plain = w.clone().with_tail_correction(false);
            assert!(plain.represented_row_sum() < 0.0);
        }
    }

    #[test]
    fn periodic_row_sums_vanish() {
        let w = WeightMatrix::periodic(params(0.5), 0.05, 40);
        let s: f64 = (0..40).map(|j| w.entry(7, j)).sum();
        assert!(s.abs() < 1e-13 * w.row[0].abs());
        assert_eq!(w.entry(3, 5), w.entry(5, 3));
        assert_eq!(w.entry(0, 39), w.entry(1, 0));
        let out = w.apply(&[2.5; 40]).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-11));
    }

    #[test]
    fn periodic_image_tail_is_converged() {
        let (lambda, cells) = (0.5, 40usize);
        for d in [1i64, 7, 20] {
            let direct: f64 = (65..200_000i64)
                .map(|m| ((d + m * cells as i64) as f64).powf(-1.0 - lambda) + ((m * cells as i64 - d) as f64).powf(-1.0 - lambda))
                .sum::<f64>()
                + periodic_image_tail(lambda, d, cells, 199_999);
            let t = periodic_image_tail(lambda, d, cells, 64);
            assert!((t - direct).abs() < 1e-8 * direct, "{t} vs {direct}");
        }
    }

    #[test]
    fn periodic_cosine_is_an_approximate_eigenfunction() {
        // symbol -|π|^λ on the period [-1, 1)
        let lambda = 0.5;
        let cells = 160;
        let dx = 2.0 / cells as f64;
        let w = WeightMatrix::periodic(params(lambda), dx, cells);
        let s = (0.5 * std::f64::consts::PI * dx).sin() / (0.5 * std::f64::consts::PI * dx);
        let u: Vec<f64> = (0..cells).map(|i| s * (std::f64::consts::PI * (-1.0 + (i as f64 + 0.5) * dx)).cos()).collect();
        let lu = w.apply(&u).unwrap();
        let eig = -std::f64::consts::PI.powf(lambda);
        let err = u.iter().zip(&lu).map(|(a, b)| (b - eig * a).abs()).fold(0.0, f64::max);
        assert!(err < 5e-3, "{err}");
    }

    #[test]
    fn unit_cell_response() {
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let w = WeightMatrix::assemble(params(0.5), &grid).unwrap();
        let mut u = vec![0.0; grid.cells];
        u[7] = 1.0;
        let out = w.apply(&u).unwrap();
        for (i, v) in out.iter().enumerate() {
            if i == 7 {
                assert!(*v < 0.0);
            } else {
                assert!(*v > 0.0);
                assert_eq!(*v, w.row[i.abs_diff(7)] * (1.0 / grid.dx));
            }
        }
        assert!(w.apply(&u[1..]).is_err());
    }

    #[test]
    fn single_cell_seminorm() {
        let p = params(0.5);
        let grid = Grid::symmetric(1.0, 10).unwrap();
        let w = WeightMatrix::assemble(p, &grid).unwrap();
        let mut u = vec![0.0; grid.cells];
        u[4] = 1.0;
        let s = w.discrete_h_seminorm(&u).unwrap();
        let expect = 2.0 * 2.0 / (0.5 * 0.5) * 0.1f64.sqrt();
        assert!((s - expect).abs() < 1e-12 * expect);
        assert_eq!(w.discrete_h_seminorm(&vec![0.0; grid.cells]).unwrap(), 0.0);
    }
}
