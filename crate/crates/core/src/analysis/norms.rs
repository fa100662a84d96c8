//! `E = ‖u - u_ref‖_p^p` and its relative form on a common comparison grid.

use crate::error::{Error, Result};
use crate::solver::grid::Grid;
use crate::solver::state::DGState;

/// `(E, R)` for samples on cells of width `h`: `E = h Σ|u - r|^p`, `R = E / (h Σ|r|^p)`.
pub fn error_norms(u_num: &[f64], u_ref: &[f64], h: f64, p: u32) -> Result<(f64, f64)> {
    if u_num.is_empty() {
        return Err(Error::Analysis("empty comparison grid".into()));
    }
    if u_num.len() != u_ref.len() {
        return Err(Error::DimensionMismatch { expected: u_ref.len(), found: u_num.len() });
    }
    if p == 0 || !(h > 0.0) {
        return Err(Error::Analysis(format!("need p ≥ 1 and h > 0, got p = {p}, h = {h}")));
    }
    let pw = |v: f64| v.abs().powi(p as i32);
    let e = h * u_num.iter().zip(u_ref).map(|(a, b)| pw(a - b)).sum::<f64>();
    let norm = h * u_ref.iter().map(|v| pw(*v)).sum::<f64>();
    let r = if norm > 0.0 { e / norm } else if e == 0.0 { 0.0 } else { f64::INFINITY };
    Ok((e, r))
}

/// Comparison grid: `grid` with every cell split into `refine` equal parts.
pub fn comparison_grid(grid: &Grid, refine: usize) -> Result<Grid> {
    if refine == 0 {
        return Err(Error::Analysis("refinement factor must be positive".into()));
    }
    let fine = Grid::new(grid.x_left, grid.x_right(), grid.dx / refine as f64)?;
    Ok(fine.with_boundary(grid.boundary))
}

/// DG state on `grid` sampled at the cell midpoints of `compare`; points outside the window read 0.
pub fn midpoint_samples(state: &DGState, grid: &Grid, compare: &Grid) -> Result<Vec<f64>> {
    if state.cells != grid.cells {
        return Err(Error::DimensionMismatch { expected: grid.cells, found: state.cells });
    }
    if compare.x_right() <= grid.x_left || compare.x_left >= grid.x_right() {
        return Err(Error::Analysis("comparison grid does not overlap the solution window".into()));
    }
    Ok((0..compare.cells)
        .map(|j| {
            let x = compare.center(j);
            match grid.locate(x) {
                Some(i) if x < grid.x_right() => state.eval_ref(i, 2.0 * (x - grid.edge(i)) / grid.dx - 1.0),
                _ => 0.0,
            }
        })
        .collect())
}

/// Cell averages of a fine state on an aligned coarse grid whose width is a whole multiple.
pub fn restrict_cell_averages(fine: &DGState, fine_grid: &Grid, coarse: &Grid) -> Result<Vec<f64>> {
    if fine.cells != fine_grid.cells {
        return Err(Error::DimensionMismatch { expected: fine_grid.cells, found: fine.cells });
    }
    let ratio = coarse.dx / fine_grid.dx;
    let r = ratio.round() as usize;
    if r == 0 || (ratio - r as f64).abs() > 1e-9 * ratio {
        return Err(Error::Analysis(format!("coarse width {} is not a multiple of {}", coarse.dx, fine_grid.dx)));
    }
    let offset = (coarse.x_left - fine_grid.x_left) / fine_grid.dx;
    let off = offset.round() as isize;
    if (offset - off as f64).abs() > 1e-9 * offset.abs().max(1.0) {
        return Err(Error::Analysis("coarse and fine grids are not aligned".into()));
    }
    Ok((0..coarse.cells)
        .map(|i| {
            let sum: f64 = (0..r)
                .map(|s| {
                    let j = off + (i * r + s) as isize;
                    if j >= 0 && (j as usize) < fine.cells {
                        fine.get(j as usize, 0)
                    } else {
                        0.0
                    }
                })
                .sum();
            sum / r as f64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs_vanish() {
        let u = vec![0.3, -1.0, 2.0];
        assert_eq!(error_norms(&u, &u, 0.1, 2).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn constant_offset_on_window_of_measure_two() {
        let r = vec![1.0; 40];
        let u: Vec<f64> = r.iter().map(|v| v + 0.1).collect();
        let (e, rel) = error_norms(&u, &r, 0.05, 1).unwrap();
        assert!((e - 0.2).abs() < 1e-14);
        assert!((rel - 0.1).abs() < 1e-14);
    }

    #[test]
    fn midpoint_sampling_of_linear_modes() {
        let grid = Grid::symmetric(1.0, 2).unwrap();
        let mut s = DGState::zeros(grid.cells, 1);
        s.set(0, 0, 1.0);
        s.set(0, 1, 0.5);
        let cmp = comparison_grid(&grid, 2).unwrap();
        let v = midpoint_samples(&s, &grid, &cmp).unwrap();
        assert!((v[0] - 0.75).abs() < 1e-15 && (v[1] - 1.25).abs() < 1e-15);
        assert_eq!(v[2], 0.0);
    }

    #[test]
    fn restriction_averages_children() {
        let fine = Grid::symmetric(1.0, 4).unwrap();
        let coarse = Grid::symmetric(1.0, 2).unwrap();
        let s = DGState { cells: 8, degree: 0, coeffs: (0..8).map(|i| i as f64).collect() };
        assert_eq!(restrict_cell_averages(&s, &fine, &coarse).unwrap(), vec![0.5, 2.5, 4.5, 6.5]);
        let skew = Grid::new(-0.9, 0.1, 0.5).unwrap();
        assert!(restrict_cell_averages(&s, &fine, &skew).is_err());
    }
}
