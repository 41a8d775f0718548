//! Spectral solution of the Euler–Bernoulli equation `ẅ + Δ²w = 0` on the
//! periodic grid, the coupled initial data induced by a complex wave function,
//! and the Schrödinger ↔ Euler–Bernoulli equivalence check.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::sup_distance;
use crate::schrodinger::{check_time, mode_rotation, SchrodingerProblem};
use crate::spectral::{ComplexField, FftEngine, Grid, RealField, SpectralCoeffs};

/// Relative sup-norm tolerance of [`verify_equivalence`].
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-11;

/// Displacement and velocity data for one beam/plate.
#[derive(Debug, Clone, PartialEq)]
pub struct EBProblem {
    w0: RealField,
    wdot0: RealField,
}

impl EBProblem {
    pub fn new(w0: RealField, wdot0: RealField) -> Result<Self> {
        if w0.grid() != wdot0.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { w0, wdot0 })
    }

    pub fn grid(&self) -> &Grid {
        self.w0.grid()
    }

    pub fn displacement(&self) -> &RealField {
        &self.w0
    }

    pub fn velocity(&self) -> &RealField {
        &self.wdot0
    }

    /// Fourier coefficients of `w(t)`:
    /// `ŵ₀ cos(k²t) + (ŵ̇₀/k²) sin(k²t)` for `k ≠ 0` and `ŵ₀ + ŵ̇₀·t` at `k = 0`.
    pub fn evolve_spectrum(&self, t: f64) -> Result<SpectralCoeffs> {
        check_time(t)?;
        let grid = *self.grid();
        let engine = FftEngine::new(&grid);
        let w_hat = engine.forward(&self.w0.to_complex())?;
        let wdot_hat = engine.forward(&self.wdot0.to_complex())?;
        let k2 = grid.k_squared();
        let coeffs = w_hat
            .coeffs()
            .iter()
            .zip(wdot_hat.coeffs())
            .zip(&k2)
            .map(|((&w, &wdot), &k2)| {
                if k2 == 0.0 {
                    w + wdot * t
                } else {
                    let (cos, sin) = mode_rotation(k2, t);
                    w * cos + (wdot / k2) * sin
                }
            })
            .collect();
        SpectralCoeffs::new(grid, coeffs)
    }

    /// `w(t)`.
    pub fn evolve(&self, t: f64) -> Result<RealField> {
        let spectrum = self.evolve_spectrum(t)?;
        let field = FftEngine::new(self.grid()).inverse(&spectrum);
        RealField::new(*self.grid(), field.values().iter().map(|z| z.re).collect())
    }

    /// `w(t)` for `ẅ + s²Δ²w = 0`, i.e. a beam whose dispersion is `ω = s·k²`.
    /// Equals the unit-stiffness solution with data `(w₀, ẇ₀/s)` at time `s·t`.
    pub fn evolve_with_stiffness(&self, s: f64, t: f64) -> Result<RealField> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stiffness scale must be positive, got {s}"
            )));
        }
        let scaled = Self {
            w0: self.w0.clone(),
            wdot0: RealField::new(
                *self.grid(),
                self.wdot0.values().iter().map(|v| v / s).collect(),
            )?,
        };
        scaled.evolve(s * t)
    }
}

pub fn evolve_eb(problem: &EBProblem, t: f64) -> Result<RealField> {
    problem.evolve(t)
}

/// Splits `ψ₀ = u₀ + i·v₀` into the two beam problems
/// `(u₀, -Δv₀)` and `(v₀, Δu₀)`.
pub fn eb_data_from_psi(psi0: &ComplexField) -> Result<(EBProblem, EBProblem)> {
    let grid = *psi0.grid();
    let engine = FftEngine::new(&grid);
    let pair = psi0.split();
    let k2 = grid.k_squared();
    // Δf for real f, computed from its own transform.
    let lap = |f: &RealField| -> Result<RealField> {
        let mut c = f.to_complex().into_values();
        engine.forward_in_place(&mut c);
        for (c, &k2) in c.iter_mut().zip(&k2) {
            *c *= -k2;
        }
        engine.inverse_in_place(&mut c);
        RealField::new(grid, c.iter().map(|z| z.re).collect())
    };
    let lap_u = lap(&pair.u)?;
    let lap_v = lap(&pair.v)?;
    let minus_lap_v = RealField::new(grid, lap_v.values().iter().map(|x| -x).collect())?;
    Ok((
        EBProblem::new(pair.u, minus_lap_v)?,
        EBProblem::new(pair.v, lap_u)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceEntry {
    pub time: f64,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub tolerance: f64,
    pub entries: Vec<EquivalenceEntry>,
    pub pass: bool,
}

impl EquivalenceReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Evolves `ψ₀` once as a Schrödinger solution and once as the pair of beams
/// with coupled data, and reports `‖ψ_S(t) - (u(t) + i·v(t))‖∞ / ‖ψ₀‖∞` per
/// time.
pub fn verify_equivalence(psi0: &ComplexField, times: &[f64]) -> Result<EquivalenceReport> {
    if times.is_empty() {
        return Err(Error::EmptyTimes);
    }
    let schrodinger = SchrodingerProblem::new(psi0.clone())?;
    let (u_problem, v_problem) = eb_data_from_psi(psi0)?;
    let scale = psi0.sup_norm();
    let mut entries = Vec::with_capacity(times.len());
    for &t in times {
        let psi_s = schrodinger.evolve_free(t)?;
        let u = u_problem.evolve(t)?;
        let v = v_problem.evolve(t)?;
        let psi_eb: Vec<Complex64> = u
            .values()
            .iter()
            .zip(v.values())
            .map(|(&u, &v)| Complex64::new(u, v))
            .collect();
        let distance = sup_distance(psi_s.values(), &psi_eb);
        let residual = if scale > 0.0 {
            distance / scale
        } else {
            distance
        };
        entries.push(EquivalenceEntry {
            time: t,
            residual,
            pass: residual <= EQUIVALENCE_TOLERANCE,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(EquivalenceReport {
        tolerance: EQUIVALENCE_TOLERANCE,
        entries,
        pass,
    })
}
