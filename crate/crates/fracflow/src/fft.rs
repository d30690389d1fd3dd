//! Discrete Fourier transforms matching the continuum conventions
//!
//! ```text
//!   F(k) = sum_x f(x) exp(+i k.x) dx^d          (forward)
//!   f(x) = (2 pi)^-d sum_k F(k) exp(-i k.x) dk^d (inverse)
//! ```
//!
//! so spectral multipliers can be written exactly as their continuum
//! symbols. Transforms are exact inverses of each other up to rounding.

use crate::error::Result;
use crate::grid::{Grid, ScalarField, SpectralField};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn rustfft::Fft<f64>>>> =
        RefCell::new(HashMap::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn rustfft::Fft<f64>> {
    PLANS.with(|cell| {
        cell.borrow_mut()
            .entry((len, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

/// In-place unnormalized FFT along `axis` of a row-major d-dim array.
fn fft_axis(grid: &Grid, data: &mut [Complex64], axis: usize, inverse: bool) {
    let d = grid.dim();
    let n = grid.points()[axis];
    let fft = plan(n, inverse);
    // stride of the axis and number of lines
    let stride: usize = grid.points()[axis + 1..d].iter().product();
    let block = stride * n;
    let blocks = data.len() / block;
    let mut line = vec![Complex64::default(); n];
    for b in 0..blocks {
        for s in 0..stride {
            let base = b * block + s;
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[base + j * stride];
            }
            fft.process(&mut line);
            for (j, v) in line.iter().enumerate() {
                data[base + j * stride] = *v;
            }
        }
    }
}

/// Forward transform of a real field.
pub fn forward(field: &ScalarField) -> SpectralField {
    let grid = field.grid().clone();
    let mut data: Vec<Complex64> = field
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    forward_complex(&grid, &mut data);
    SpectralField::new(grid, data).expect("sizes agree by construction")
}

/// Forward transform of complex samples in place.
pub fn forward_complex(grid: &Grid, data: &mut [Complex64]) {
    let d = grid.dim();
    for axis in 0..d {
        // exp(+ik.x) on index n is the unnormalized inverse FFT
        fft_axis(grid, data, axis, true);
    }
    let scale = grid.cell_volume();
    let mut idx = vec![0usize; d];
    let mut k = vec![0.0; d];
    for flat in 0..data.len() {
        grid.unravel(flat, &mut idx);
        grid.wavevector(&idx, &mut k);
        let phase: f64 = k.iter().zip(grid.origin()).map(|(ka, oa)| ka * oa).sum();
        data[flat] *= Complex64::from_polar(scale, phase);
    }
}

/// Inverse transform; returns the real part (fields of real origin keep
/// imaginary residue at rounding level).
pub fn inverse(spec: &SpectralField) -> ScalarField {
    let vals = inverse_complex(spec.grid(), spec.values());
    ScalarField::new(spec.grid().clone(), vals.iter().map(|c| c.re).collect())
        .expect("sizes agree by construction")
}

/// Inverse transform keeping complex values.
pub fn inverse_complex(grid: &Grid, modes: &[Complex64]) -> Vec<Complex64> {
    let d = grid.dim();
    let mut data = modes.to_vec();
    let mut idx = vec![0usize; d];
    let mut k = vec![0.0; d];
    for flat in 0..data.len() {
        grid.unravel(flat, &mut idx);
        grid.wavevector(&idx, &mut k);
        let phase: f64 = k.iter().zip(grid.origin()).map(|(ka, oa)| ka * oa).sum();
        data[flat] *= Complex64::from_polar(1.0, -phase);
    }
    for axis in 0..d {
        fft_axis(grid, &mut data, axis, false);
    }
    let scale: f64 = grid.lengths().iter().map(|l| 1.0 / l).product();
    for v in data.iter_mut() {
        *v *= scale;
    }
    data
}

/// Largest imaginary residue of the inverse transform, for reality checks.
pub fn inverse_imag_residue(spec: &SpectralField) -> f64 {
    inverse_complex(spec.grid(), spec.values())
        .iter()
        .map(|c| c.im.abs())
        .fold(0.0, f64::max)
}

/// Apply a spectral symbol to a real field and return the real field.
pub fn apply_multiplier(
    field: &ScalarField,
    symbol: impl FnMut(&[f64]) -> Complex64,
) -> Result<ScalarField> {
    let mut spec = forward(field);
    spec.apply_symbol(symbol);
    Ok(inverse(&spec))
}
