use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::check_finite_complex;
use super::{ComplexField, Grid};
use crate::error::{Error, Result};

/// Discrete Fourier coefficients of a field, stored in FFT order.
///
/// The field is synthesized as `f(x) = N^{-1/2} Σ_m c_m e^{+i k_m·x}`, with
/// `N = n^d` (unitary normalization). The continuous-transform convention with
/// kernel `e^{-ik·x}` corresponds to `k ↦ -k_m`; every operator used here
/// depends only on `k²`, so the two conventions give identical results.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        check_finite_complex(&coeffs)?;
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Multiplies every coefficient by a function of its `k²`.
    pub fn apply_multiplier<F: Fn(f64) -> Complex64>(&self, multiplier: F) -> Self {
        let k2 = self.grid.k_squared();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&k2)
            .map(|(c, &k2)| c * multiplier(k2))
            .collect();
        Self {
            grid: self.grid,
            coeffs,
        }
    }
}

/// Reusable multi-dimensional FFT for one grid shape.
///
/// Construction plans the 1-D transforms once; steppers that transform every
/// time step hold one of these instead of calling [`dft_forward`].
#[derive(Clone)]
pub struct FftEngine {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for FftEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftEngine")
            .field("grid", &self.grid)
            .finish()
    }
}

impl FftEngine {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.points_per_axis();
        Self {
            grid: *grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / (grid.len() as f64).sqrt(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Unitary forward transform in place.
    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Unitary inverse transform in place.
    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.grid.len(), "buffer does not match grid");
        let n = self.grid.points_per_axis();
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for axis in 0..self.grid.dim() {
            let stride = self.grid.stride(axis);
            if stride == 1 {
                fft.process_with_scratch(data, &mut scratch);
                continue;
            }
            let block = stride * n;
            for start in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + j * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (j, value) in line.iter().enumerate() {
                        data[base + j * stride] = *value;
                    }
                }
            }
        }
        for z in data.iter_mut() {
            *z *= self.scale;
        }
    }

    pub fn forward(&self, field: &ComplexField) -> Result<SpectralCoeffs> {
        check_finite_complex(field.values())?;
        let mut coeffs = field.values().to_vec();
        self.forward_in_place(&mut coeffs);
        Ok(SpectralCoeffs {
            grid: *field.grid(),
            coeffs,
        })
    }

    pub fn inverse(&self, coeffs: &SpectralCoeffs) -> ComplexField {
        let mut values = coeffs.coeffs.clone();
        self.inverse_in_place(&mut values);
        ComplexField::new(coeffs.grid, values).expect("inverse of finite coefficients is finite")
    }
}

/// Unitary forward DFT. Non-finite samples are rejected.
pub fn dft_forward(field: &ComplexField) -> Result<SpectralCoeffs> {
    FftEngine::new(field.grid()).forward(field)
}

pub fn dft_inverse(coeffs: &SpectralCoeffs) -> ComplexField {
    FftEngine::new(coeffs.grid()).inverse(coeffs)
}

/// Spectral Laplacian: multiplies mode `k` by `-k²`.
pub fn laplacian(coeffs: &SpectralCoeffs) -> SpectralCoeffs {
    coeffs.apply_multiplier(|k2| Complex64::new(-k2, 0.0))
}

/// Spectral bilaplacian: multiplies mode `k` by `k⁴`, computed as `(-k²)·(-k²)`
/// so it coincides bit-for-bit with two applications of [`laplacian`].
pub fn bilaplacian(coeffs: &SpectralCoeffs) -> SpectralCoeffs {
    let k2 = coeffs.grid().k_squared();
    let coeffs_out = coeffs
        .coeffs()
        .iter()
        .zip(&k2)
        .map(|(c, &k2)| c * Complex64::new(-k2, 0.0) * Complex64::new(-k2, 0.0))
        .collect();
    SpectralCoeffs {
        grid: *coeffs.grid(),
        coeffs: coeffs_out,
    }
}

/// Applies the spectral Laplacian to a real-space field.
pub fn laplacian_field(field: &ComplexField) -> Result<ComplexField> {
    let engine = FftEngine::new(field.grid());
    Ok(engine.inverse(&laplacian(&engine.forward(field)?)))
}

/// Fraction of spectral energy carried by modes with `max_j |m_j| ≥ n/4`.
pub fn top_octave_energy_fraction(coeffs: &SpectralCoeffs) -> f64 {
    let grid = coeffs.grid();
    let quarter = (grid.points_per_axis() / 4) as i64;
    let mut total = crate::numerics::CompensatedSum::new();
    let mut tail = crate::numerics::CompensatedSum::new();
    for (flat, c) in coeffs.coeffs().iter().enumerate() {
        let e = c.norm_sqr();
        total.add(e);
        if grid.mode_vector(flat).iter().any(|m| m.abs() >= quarter) {
            tail.add(e);
        }
    }
    let total = total.value();
    if total == 0.0 {
        0.0
    } else {
        tail.value() / total
    }
}
