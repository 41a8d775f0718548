//! Exact spectral propagation of the free Schrödinger equation `iψ̇ = -Δψ`
//! (units with ħ = 1, 2m = 1).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    laplacian, top_octave_energy_fraction, ComplexField, FftEngine, Grid, SpectralCoeffs,
};

/// Default cap on the top-octave energy fraction of admissible initial data.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-6;

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

/// `(cos(k²t), sin(k²t))`. Every module that rotates modes by the free
/// dispersion goes through this function.
#[inline]
pub fn mode_rotation(k2: f64, t: f64) -> (f64, f64) {
    let angle = k2 * t;
    (angle.cos(), angle.sin())
}

/// Multiplies each coefficient by `e^{-ik²t}` in place.
pub fn apply_free_phase(coeffs: &mut [Complex64], k2: &[f64], t: f64) {
    for (c, &k2) in coeffs.iter_mut().zip(k2) {
        let (cos, sin) = mode_rotation(k2, t);
        *c *= Complex64::new(cos, -sin);
    }
}

/// Cauchy data `ψ(0) = ψ₀` for the free equation.
///
/// The initial datum must be spectrally resolved: the fraction of its energy
/// in modes with `max_j |m_j| ≥ n/4` must stay below the tail threshold. This
/// is the grid stand-in for rapid decay of the Fourier transform.
#[derive(Debug, Clone)]
pub struct SchrodingerProblem {
    psi0: ComplexField,
    spectrum: SpectralCoeffs,
}

impl SchrodingerProblem {
    pub fn new(psi0: ComplexField) -> Result<Self> {
        Self::with_tail_threshold(psi0, DEFAULT_TAIL_THRESHOLD)
    }

    pub fn with_tail_threshold(psi0: ComplexField, threshold: f64) -> Result<Self> {
        let spectrum = FftEngine::new(psi0.grid()).forward(&psi0)?;
        let fraction = top_octave_energy_fraction(&spectrum);
        if !(fraction <= threshold) {
            return Err(Error::NotResolved {
                fraction,
                threshold,
            });
        }
        Ok(Self { psi0, spectrum })
    }

    pub fn psi0(&self) -> &ComplexField {
        &self.psi0
    }

    pub fn grid(&self) -> &Grid {
        self.psi0.grid()
    }

    pub fn spectrum(&self) -> &SpectralCoeffs {
        &self.spectrum
    }

    /// `ψ(t)`: mode `k` picks up the phase `e^{-ik²t}`.
    pub fn evolve_free(&self, t: f64) -> Result<ComplexField> {
        check_time(t)?;
        let grid = self.grid();
        let mut coeffs = self.spectrum.coeffs().to_vec();
        apply_free_phase(&mut coeffs, &grid.k_squared(), t);
        let engine = FftEngine::new(grid);
        engine.inverse_in_place(&mut coeffs);
        ComplexField::new(*grid, coeffs)
    }

    /// `ψ̇(0) = iΔψ₀`.
    pub fn initial_time_derivative(&self) -> ComplexField {
        let lap = laplacian(&self.spectrum);
        let i_lap = SpectralCoeffs::new(
            *self.grid(),
            lap.coeffs().iter().map(|c| c * Complex64::i()).collect(),
        )
        .expect("finite");
        FftEngine::new(self.grid()).inverse(&i_lap)
    }
}

/// Free evolution of an arbitrary field without the resolution check, for
/// steppers that interleave evolution with projections.
pub fn evolve_field(engine: &FftEngine, k2: &[f64], field: &mut ComplexField, t: f64) {
    let values = field.values_mut();
    engine.forward_in_place(values);
    apply_free_phase(values, k2, t);
    engine.inverse_in_place(values);
}
