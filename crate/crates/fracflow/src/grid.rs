//! Uniform periodic grids and the fields living on them.
//!
//! The box [origin, origin + L) per axis discretizes R^d; all solvers
//! require the box to be large enough that the field carries negligible
//! mass near the boundary (see [`ScalarField::boundary_mass_fraction`]).

use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;
use std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    n: Vec<usize>,
    len: Vec<f64>,
    origin: Vec<f64>,
}

impl Grid {
    pub fn new(n: Vec<usize>, len: Vec<f64>, origin: Vec<f64>) -> Result<Self> {
        let d = n.len();
        if d == 0 {
            return Err(Error::InvalidGrid("dimension must be >= 1".into()));
        }
        if len.len() != d || origin.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: len.len().max(origin.len()) });
        }
        for (&na, &la) in n.iter().zip(&len) {
            if na < 8 || !na.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "points per axis must be a power of two >= 8, got {na}"
                )));
            }
            if !(la > 0.0) || !la.is_finite() {
                return Err(Error::InvalidGrid(format!("axis length must be positive, got {la}")));
            }
        }
        Ok(Self { n, len, origin })
    }

    /// 1-D box [-L/2, L/2).
    pub fn centered_1d(n: usize, len: f64) -> Result<Self> {
        Grid::new(vec![n], vec![len], vec![-0.5 * len])
    }

    /// d-dim cube [-L/2, L/2)^d.
    pub fn centered(dim: usize, n: usize, len: f64) -> Result<Self> {
        Grid::new(vec![n; dim], vec![len; dim], vec![-0.5 * len; dim])
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.n
    }

    pub fn lengths(&self) -> &[f64] {
        &self.len
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.len[axis] / self.n[axis] as f64
    }

    pub fn total_points(&self) -> usize {
        self.n.iter().product()
    }

    /// Cell volume dx_1 ... dx_d.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    /// Wavenumber for FFT bin `idx` on `axis`: 2 pi m / L with
    /// m in {-N/2, ..., N/2 - 1}.
    pub fn wavenumber(&self, axis: usize, idx: usize) -> f64 {
        let n = self.n[axis];
        let m = if idx < n / 2 { idx as i64 } else { idx as i64 - n as i64 };
        TAU * m as f64 / self.len[axis]
    }

    /// Decompose a flat row-major index into per-axis indices.
    pub fn unravel(&self, mut flat: usize, idx: &mut [usize]) {
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.n[a];
            flat /= self.n[a];
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for a in 0..self.dim() {
            flat = flat * self.n[a] + idx[a];
        }
        flat
    }

    /// Physical coordinate of the grid point with per-axis indices `idx`.
    pub fn coordinate(&self, idx: &[usize], out: &mut [f64]) {
        for a in 0..self.dim() {
            out[a] = self.origin[a] + idx[a] as f64 * self.spacing(a);
        }
    }

    /// Wavevector of FFT bin with per-axis indices `idx`.
    pub fn wavevector(&self, idx: &[usize], out: &mut [f64]) {
        for a in 0..self.dim() {
            out[a] = self.wavenumber(a, idx[a]);
        }
    }

    /// Map a physical point to its cell index, wrapping periodically.
    /// Returns (flat index, was the point inside the primary box).
    pub fn cell_of(&self, x: &[f64]) -> (usize, bool) {
        let mut flat = 0;
        let mut inside = true;
        for a in 0..self.dim() {
            let rel = (x[a] - self.origin[a]) / self.len[a];
            if !(0.0..1.0).contains(&rel) {
                inside = false;
            }
            let wrapped = rel - rel.floor();
            let mut i = (wrapped * self.n[a] as f64) as usize;
            if i >= self.n[a] {
                i = self.n[a] - 1;
            }
            flat = flat * self.n[a] + i;
        }
        (flat, inside)
    }
}

/// Real field sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(Error::SizeMismatch(format!(
                "expected {} values, got {}",
                grid.total_points(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.total_points();
        Self { grid, values: vec![0.0; n] }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let d = grid.dim();
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0; d];
        let mut values = Vec::with_capacity(grid.total_points());
        for flat in 0..grid.total_points() {
            grid.unravel(flat, &mut idx);
            grid.coordinate(&idx, &mut x);
            values.push(f(&x));
        }
        Self { grid, values }
    }

    /// Normalized isotropic Gaussian bump.
    pub fn gaussian(grid: Grid, center: &[f64], sigma: f64) -> Self {
        let d = grid.dim();
        let norm = (TAU * sigma * sigma).powf(-(d as f64) / 2.0);
        ScalarField::from_fn(grid, |x| {
            let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
            norm * (-r2 / (2.0 * sigma * sigma)).exp()
        })
    }

    /// Band-limited delta at the grid origin cell: all spectral modes equal,
    /// total mass 1.
    pub fn delta(grid: Grid) -> Self {
        // realized in real space as 1/cell_volume at the cell containing 0
        let d = grid.dim();
        let mut f = ScalarField::zeros(grid);
        let zero = vec![0.0; d];
        let (cell, _) = f.grid.cell_of(&zero);
        f.values[cell] = 1.0 / f.grid.cell_volume();
        f
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Integral over the box.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn linf_distance(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn l1_distance(&self, other: &ScalarField) -> f64 {
        let dv = self.grid.cell_volume();
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * dv
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// Fraction of |field| mass in cells within one spacing of the box
    /// boundary. Solvers assume this is tiny; the CLI warns otherwise.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let d = self.grid.dim();
        let mut idx = vec![0usize; d];
        let mut boundary = 0.0;
        let mut total = 0.0;
        for flat in 0..self.grid.total_points() {
            self.grid.unravel(flat, &mut idx);
            let v = self.values[flat].abs();
            total += v;
            let near = (0..d).any(|a| idx[a] == 0 || idx[a] == self.grid.points()[a] - 1);
            if near {
                boundary += v;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            boundary / total
        }
    }
}

/// Complex spectral companion of a `ScalarField`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(Error::SizeMismatch(format!(
                "expected {} modes, got {}",
                grid.total_points(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Multiply each mode by `symbol(k)`.
    pub fn apply_symbol(&mut self, mut symbol: impl FnMut(&[f64]) -> Complex64) {
        let d = self.grid.dim();
        let mut idx = vec![0usize; d];
        let mut k = vec![0.0; d];
        for flat in 0..self.values.len() {
            self.grid.unravel(flat, &mut idx);
            self.grid.wavevector(&idx, &mut k);
            self.values[flat] *= symbol(&k);
        }
    }
}

/// d scalar components on a shared grid.
#[derive(Debug, Clone)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("vector field needs >= 1 component".into()));
        }
        let grid = components[0].grid().clone();
        for c in &components {
            if c.grid() != &grid {
                return Err(Error::SizeMismatch("vector components on different grids".into()));
            }
        }
        Ok(Self { components })
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.components[i]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![7], vec![1.0], vec![0.0]).is_err());
        assert!(Grid::new(vec![12], vec![1.0], vec![0.0]).is_err());
        assert!(Grid::new(vec![16], vec![-1.0], vec![0.0]).is_err());
        assert!(Grid::new(vec![16], vec![1.0], vec![0.0]).is_ok());
    }

    #[test]
    fn wavenumbers_cover_symmetric_range() {
        let g = Grid::centered_1d(8, 4.0).unwrap();
        let ks: Vec<f64> = (0..8).map(|j| g.wavenumber(0, j)).collect();
        let base = TAU / 4.0;
        assert_abs_diff_eq!(ks[0], 0.0);
        assert_abs_diff_eq!(ks[1], base);
        assert_abs_diff_eq!(ks[3], 3.0 * base);
        assert_abs_diff_eq!(ks[4], -4.0 * base);
        assert_abs_diff_eq!(ks[7], -base);
    }

    #[test]
    fn ravel_unravel_roundtrip() {
        let g = Grid::new(vec![8, 16, 8], vec![1.0, 2.0, 3.0], vec![0.0; 3]).unwrap();
        let mut idx = vec![0usize; 3];
        for flat in [0usize, 5, 100, 1023] {
            g.unravel(flat, &mut idx);
            assert_eq!(g.ravel(&idx), flat);
        }
    }

    #[test]
    fn gaussian_mass_is_one() {
        let g = Grid::centered(2, 64, 20.0).unwrap();
        let f = ScalarField::gaussian(g, &[0.0, 0.0], 1.0);
        assert_abs_diff_eq!(f.mass(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn delta_mass_is_one() {
        let g = Grid::centered_1d(64, 10.0).unwrap();
        let f = ScalarField::delta(g);
        assert_abs_diff_eq!(f.mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cell_of_wraps_periodically() {
        let g = Grid::centered_1d(8, 8.0).unwrap();
        let (c0, inside) = g.cell_of(&[-4.0]);
        assert!(inside);
        assert_eq!(c0, 0);
        let (c1, inside) = g.cell_of(&[4.0]);
        assert!(!inside);
        assert_eq!(c1, 0);
        let (c2, _) = g.cell_of(&[3.9]);
        assert_eq!(c2, 7);
    }
}
