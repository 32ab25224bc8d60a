//! Rectangular evaluation grids. Nodes are cell-centered so that window
//! boundaries (the real axis in particular, where Im f vanishes identically
//! for real-coefficient series) are never sampled exactly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::error::TraceError;
use crate::geom::Rect;
use crate::series::POLE_EXCLUSION_RADIUS;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridWindow {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl GridWindow {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Result<Self, TraceError> {
        if nx < 64 || ny < 64 {
            return Err(TraceError::InvalidWindow(format!(
                "grid resolution must be at least 64x64, got {nx}x{ny}"
            )));
        }
        Ok(GridWindow { rect, nx, ny })
    }

    /// Pick a resolution targeting `cell` s-units per cell, clamped to
    /// [64, 1600] nodes per axis.
    pub fn with_cell_size(rect: Rect, cell: f64) -> Self {
        let nx = ((rect.width() / cell).ceil() as usize).clamp(64, 1600);
        let ny = ((rect.height() / cell).ceil() as usize).clamp(64, 1600);
        GridWindow { rect, nx, ny }
    }

    pub fn dx(&self) -> f64 {
        self.rect.width() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.rect.height() / self.ny as f64
    }

    /// Cell-centered node (i, j).
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.rect.sigma_min + (i as f64 + 0.5) * self.dx(),
            self.rect.t_min + (j as f64 + 0.5) * self.dy(),
        )
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Grid indices of the node nearest to `s`, clamped into range.
    pub fn nearest_node(&self, s: Complex64) -> (usize, usize) {
        let i = (((s.re - self.rect.sigma_min) / self.dx() - 0.5).round() as isize)
            .clamp(0, self.nx as isize - 1) as usize;
        let j = (((s.im - self.rect.t_min) / self.dy() - 0.5).round() as isize)
            .clamp(0, self.ny as isize - 1) as usize;
        (i, j)
    }
}

/// Values of f and f' on a grid. Entries inside the pole-exclusion disk (or
/// failed evaluations) are NaN; the tracer skips cells touching them.
pub struct FieldGrid {
    pub window: GridWindow,
    pub f: Vec<Complex64>,
    pub f1: Vec<Complex64>,
    pub f2: Vec<Complex64>,
    /// Largest recorded evaluation bound for the value channel.
    pub max_err: f64,
}

impl FieldGrid {
    /// Evaluate `map` over the grid in parallel. Deterministic: values land
    /// by index, independent of the worker count.
    pub fn fill(map: &(impl AnalyticMap + ?Sized), window: GridWindow, tol: f64) -> Self {
        let pole = map.pole();
        let rows: Vec<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>, f64)> = (0..window.ny)
            .into_par_iter()
            .map(|j| {
                let mut f = Vec::with_capacity(window.nx);
                let mut f1 = Vec::with_capacity(window.nx);
                let mut f2 = Vec::with_capacity(window.nx);
                let mut err = 0.0f64;
                for i in 0..window.nx {
                    let s = window.node(i, j);
                    let excluded = pole
                        .map(|p| (s - p).norm() < POLE_EXCLUSION_RADIUS * 2.0)
                        .unwrap_or(false);
                    match (!excluded).then(|| map.jet(s, tol)).and_then(Result::ok) {
                        Some(jet) => {
                            f.push(jet.f());
                            f1.push(jet.d1());
                            f2.push(jet.d2());
                            err = err.max(jet.err[0]);
                        }
                        None => {
                            f.push(Complex64::new(f64::NAN, f64::NAN));
                            f1.push(Complex64::new(f64::NAN, f64::NAN));
                            f2.push(Complex64::new(f64::NAN, f64::NAN));
                        }
                    }
                }
                (f, f1, f2, err)
            })
            .collect();
        let mut f = Vec::with_capacity(window.nx * window.ny);
        let mut f1 = Vec::with_capacity(window.nx * window.ny);
        let mut f2 = Vec::with_capacity(window.nx * window.ny);
        let mut max_err = 0.0f64;
        for (rf, rf1, rf2, re) in rows {
            f.extend(rf);
            f1.extend(rf1);
            f2.extend(rf2);
            max_err = max_err.max(re);
        }
        FieldGrid {
            window,
            f,
            f1,
            f2,
            max_err,
        }
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.f[self.window.index(i, j)]
    }

    pub fn deriv(&self, i: usize, j: usize) -> Complex64 {
        self.f1[self.window.index(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesSpec;

    #[test]
    fn parallel_fill_is_deterministic() {
        let spec = SeriesSpec::zeta();
        let window =
            GridWindow::new(Rect::new(-2.0, 4.0, 5.0, 11.0), 64, 64).unwrap();
        let a = FieldGrid::fill(&spec.map(1e-8), window, 1e-8);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| FieldGrid::fill(&spec.map(1e-8), window, 1e-8));
        assert_eq!(a.f, b.f);
        assert_eq!(a.f1, b.f1);
    }

    #[test]
    fn pole_disk_is_masked() {
        let spec = SeriesSpec::zeta();
        // Fine enough that nodes land inside the exclusion disk around s = 1.
        let window =
            GridWindow::new(Rect::new(0.996, 1.004, -0.004, 0.004), 64, 64).unwrap();
        let grid = FieldGrid::fill(&spec.map(1e-8), window, 1e-8);
        let (i, j) = window.nearest_node(Complex64::new(1.0, 0.0));
        assert!(grid.value(i, j).re.is_nan());
        assert!(grid.value(0, 0).re.is_finite());
    }
}
