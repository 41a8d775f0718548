//! Deterministic initial data: Gaussian packets and seeded random fields whose
//! spectrum is confined to low modes, so they count as resolved on the grid.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::spectral::{ComplexField, FftEngine, Grid, RealField};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Periodic distance from `a` to `b` on a circle of circumference `length`,
/// in `[-length/2, length/2)`.
pub fn periodic_offset(a: f64, b: f64, length: f64) -> f64 {
    (a - b + 0.5 * length).rem_euclid(length) - 0.5 * length
}

/// `exp(-|x - c|²/(4σ²) + i k·x)` with periodic minimum-image distances.
pub fn gaussian_packet(
    grid: Grid,
    center: &[f64],
    width: f64,
    wavevector: &[f64],
) -> Result<ComplexField> {
    let l = grid.box_length();
    ComplexField::from_fn(grid, |x| {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for j in 0..x.len() {
            let d = periodic_offset(x[j], center[j], l);
            r2 += d * d;
            phase += wavevector[j] * d;
        }
        Complex64::from_polar((-r2 / (4.0 * width * width)).exp(), phase)
    })
}

/// Random complex field with coefficients drawn uniformly from the unit disk
/// on modes `max_j |m_j| ≤ max_mode` and a Gaussian envelope
/// `exp(-|m|²/(2·max_mode²/4))`; all other modes vanish.
pub fn random_resolved_field<R: Rng>(grid: Grid, max_mode: usize, rng: &mut R) -> ComplexField {
    let engine = FftEngine::new(&grid);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    let width2 = (max_mode as f64 / 2.0).max(0.5).powi(2);
    for (flat, c) in coeffs.iter_mut().enumerate() {
        let m = grid.mode_vector(flat);
        if m.iter().all(|mj| mj.unsigned_abs() as usize <= max_mode) {
            let m2: f64 = m.iter().map(|&mj| (mj * mj) as f64).sum();
            let envelope = (-m2 / (2.0 * width2)).exp();
            let r = rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * TAU;
            *c = Complex64::from_polar(r * envelope, theta);
        }
    }
    engine.inverse_in_place(&mut coeffs);
    ComplexField::new(grid, coeffs).expect("finite by construction")
}

/// Real part of [`random_resolved_field`] plus a random constant offset.
pub fn random_smooth_real<R: Rng>(grid: Grid, max_mode: usize, rng: &mut R) -> RealField {
    let offset = rng.gen::<f64>() - 0.5;
    let field = random_resolved_field(grid, max_mode, rng);
    let scale = 1.0 / field.sup_norm().max(f64::MIN_POSITIVE);
    RealField::new(
        grid,
        field
            .values()
            .iter()
            .map(|z| z.re * scale + offset)
            .collect(),
    )
    .expect("finite by construction")
}
