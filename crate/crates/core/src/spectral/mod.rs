//! Periodic grids, sampled fields, unitary discrete Fourier transforms and the
//! spectral Laplacian/bilaplacian shared by every real-space solver.

mod field;
mod grid;
pub mod io;
mod transform;

pub(crate) use field::{check_finite_complex, check_finite_real};
pub use field::{ComplexField, RealField, RealFieldPair};
pub use grid::Grid;
pub use transform::{
    bilaplacian, dft_forward, dft_inverse, laplacian, laplacian_field, top_octave_energy_fraction,
    FftEngine, SpectralCoeffs,
};
