use serde::{Deserialize, Serialize};

use crate::poly::legendre;

/// Cell averages of a piecewise-constant approximation; the exterior is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellState {
    pub values: Vec<f64>,
}

impl CellState {
    pub fn new(values: Vec<f64>) -> Self {
        CellState { values }
    }

    pub fn zeros(cells: usize) -> Self {
        CellState { values: vec![0.0; cells] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mass(&self, dx: f64) -> f64 {
        dx * self.values.iter().sum::<f64>()
    }

    pub fn l1(&self, dx: f64) -> f64 {
        dx * self.values.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Total variation including the jumps to the zero exterior.
    pub fn bv(&self) -> f64 {
        let n = self.values.len();
        if n == 0 {
            return 0.0;
        }
        let inner: f64 = self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
        inner + self.values[0].abs() + self.values[n - 1].abs()
    }

    /// Total variation over one period when the window is periodic.
    pub fn bv_periodic(&self) -> f64 {
        let n = self.values.len();
        if n == 0 {
            return 0.0;
        }
        let inner: f64 = self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
        inner + (self.values[0] - self.values[n - 1]).abs()
    }

    pub fn bv_on(&self, boundary: crate::solver::grid::Boundary) -> f64 {
        match boundary {
            crate::solver::grid::Boundary::Zero => self.bv(),
            crate::solver::grid::Boundary::Periodic => self.bv_periodic(),
        }
    }
}

impl From<DGState> for CellState {
    fn from(s: DGState) -> Self {
        CellState { values: (0..s.cells).map(|i| s.get(i, 0)).collect() }
    }
}

/// Legendre modal coefficients `U_{p,i}`, stored cell-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DGState {
    pub cells: usize,
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl DGState {
    pub fn zeros(cells: usize, degree: usize) -> Self {
        DGState { cells, degree, coeffs: vec![0.0; cells * (degree + 1)] }
    }

    pub fn from_cells(c: &CellState) -> Self {
        DGState { cells: c.len(), degree: 0, coeffs: c.values.clone() }
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.degree + 1
    }

    #[inline]
    pub fn get(&self, i: usize, p: usize) -> f64 {
        self.coeffs[i * (self.degree + 1) + p]
    }

    #[inline]
    pub fn set(&mut self, i: usize, p: usize, v: f64) {
        let m = self.degree + 1;
        self.coeffs[i * m + p] = v;
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        let m = self.degree + 1;
        &self.coeffs[i * m..(i + 1) * m]
    }

    /// Value at reference coordinate `xi` in `[-1, 1]` of cell `i`.
    pub fn eval_ref(&self, i: usize, xi: f64) -> f64 {
        self.cell(i).iter().enumerate().map(|(p, c)| c * legendre(p, xi).0).sum()
    }

    /// `y <- y + s x`
    pub fn axpy(&mut self, s: f64, x: &DGState) {
        for (y, v) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *y += s * v;
        }
    }

    pub fn mass(&self, dx: f64) -> f64 {
        dx * (0..self.cells).map(|i| self.get(i, 0)).sum::<f64>()
    }

    /// Exact L² norm squared using the mass matrix.
    pub fn l2_squared(&self, dx: f64) -> f64 {
        let m = self.degree + 1;
        self.coeffs.iter().enumerate().map(|(n, c)| c * c * dx / (2 * (n % m) + 1) as f64).sum()
    }
}
