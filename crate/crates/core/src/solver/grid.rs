use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Treatment of the region outside the computational window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Zero exterior: every cell outside the window is pinned to 0.
    #[default]
    Zero,
    /// The window is one period of a periodic state. Test configuration only.
    Periodic,
}

/// Uniform grid of `cells` cells of width `dx` starting at `x_left`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dx: f64,
    pub x_left: f64,
    pub cells: usize,
    pub padding_cells: usize,
    pub boundary: Boundary,
}

impl Grid {
    /// Window `[-half_width, half_width]` with `inv_dx` cells per unit length.
    pub fn symmetric(half_width: f64, inv_dx: usize) -> Result<Self> {
        if !(half_width > 0.0) || inv_dx == 0 {
            return Err(Error::InvalidGrid("half width and 1/dx must be positive".into()));
        }
        let cells_f = 2.0 * half_width * inv_dx as f64;
        let cells = cells_f.round() as usize;
        if (cells_f - cells as f64).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!(
                "window width {} is not a whole number of cells of width 1/{}",
                2.0 * half_width,
                inv_dx
            )));
        }
        Self::new(-half_width, half_width, 1.0 / inv_dx as f64)
    }

    pub fn new(x_left: f64, x_right: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !(x_right > x_left) || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!("bad window [{x_left}, {x_right}] with dx {dx}")));
        }
        let ratio = (x_right - x_left) / dx;
        let cells = ratio.round() as usize;
        if (ratio - cells as f64).abs() > 1e-9 * ratio.max(1.0) || cells == 0 {
            return Err(Error::InvalidGrid(format!("window width {} is not a multiple of dx {}", x_right - x_left, dx)));
        }
        Ok(Grid { dx, x_left, cells, padding_cells: cells, boundary: Boundary::Zero })
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_padding(mut self, padding_cells: usize) -> Result<Self> {
        if padding_cells < self.cells {
            return Err(Error::InvalidGrid(format!(
                "padding of {padding_cells} cells is narrower than the {}-cell window",
                self.cells
            )));
        }
        self.padding_cells = padding_cells;
        Ok(self)
    }

    pub fn x_right(&self) -> f64 {
        self.x_left + self.cells as f64 * self.dx
    }

    /// Left edge of cell `i`.
    #[inline]
    pub fn edge(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }

    /// Cell containing `x`, with the right window edge assigned to the last cell.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if x < self.x_left || x > self.x_right() {
            return None;
        }
        let i = ((x - self.x_left) / self.dx).floor() as usize;
        Some(i.min(self.cells - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_window() {
        let g = Grid::symmetric(1.0, 20).unwrap();
        assert_eq!(g.cells, 40);
        assert!((g.center(0) + 0.975).abs() < 1e-15);
        assert!((g.x_right() - 1.0).abs() < 1e-14);
        assert_eq!(g.locate(1.0), Some(39));
        assert_eq!(g.locate(-1.0), Some(0));
        assert_eq!(g.locate(1.5), None);
    }

    #[test]
    fn rejects_fractional_cells() {
        assert!(Grid::new(-1.0, 1.0, 0.3).is_err());
        assert!(Grid::symmetric(1.0, 10).unwrap().with_padding(3).is_err());
    }
}
