//! The real/imaginary split of the Schrödinger equation as a canonical
//! Hamiltonian system.
//!
//! With `ψ = u + i·v` the free equation becomes `u̇ = -Δv`, `v̇ = Δu`, generated
//! by `H_sym = ½∫[u(-Δ)u + v(-Δ)v]`. We take `u` as the coordinate and `v` as
//! the momentum; swapping the roles only flips the sign of the flow.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, linear_fit, LineFit};
use crate::schrodinger::{check_time, mode_rotation};
use crate::spectral::{ComplexField, FftEngine, Grid, RealField, RealFieldPair};

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticState {
    pub pair: RealFieldPair,
    pub time: f64,
}

impl SymplecticState {
    pub fn new(pair: RealFieldPair, time: f64) -> Result<Self> {
        check_time(time)?;
        Ok(Self { pair, time })
    }

    pub fn from_psi(psi: &ComplexField) -> Self {
        Self {
            pair: psi.split(),
            time: 0.0,
        }
    }

    pub fn to_psi(&self) -> ComplexField {
        ComplexField::from_pair(&self.pair)
    }

    pub fn grid(&self) -> &Grid {
        self.pair.grid()
    }
}

fn transform_real(engine: &FftEngine, f: &RealField) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = f.values().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    engine.forward_in_place(&mut c);
    c
}

fn real_from_spectrum(engine: &FftEngine, mut c: Vec<Complex64>) -> Result<RealField> {
    engine.inverse_in_place(&mut c);
    RealField::new(*engine.grid(), c.into_iter().map(|z| z.re).collect())
}

/// `½ h^d Σ_k k² (|ũ(k)|² + |ṽ(k)|²)`, the grid quadrature of `H_sym`.
pub fn hamiltonian_energy(state: &SymplecticState) -> f64 {
    let grid = *state.grid();
    let engine = FftEngine::new(&grid);
    let u_hat = transform_real(&engine, &state.pair.u);
    let v_hat = transform_real(&engine, &state.pair.v);
    let k2 = grid.k_squared();
    let sum = compensated_sum(
        k2.iter()
            .zip(u_hat.iter().zip(&v_hat))
            .map(|(&k2, (u, v))| k2 * (u.norm_sqr() + v.norm_sqr())),
    );
    0.5 * grid.cell_volume() * sum
}

/// Exact flow for time `t`: each mode rotates in the `(ũ, ṽ)` plane,
/// `(ũ, ṽ) ↦ (ũ cos k²t + ṽ sin k²t, ṽ cos k²t - ũ sin k²t)`.
pub fn exact_rotation(state: &SymplecticState, t: f64) -> Result<SymplecticState> {
    check_time(t)?;
    let grid = *state.grid();
    let engine = FftEngine::new(&grid);
    let mut u_hat = transform_real(&engine, &state.pair.u);
    let mut v_hat = transform_real(&engine, &state.pair.v);
    for ((u, v), &k2) in u_hat
        .iter_mut()
        .zip(v_hat.iter_mut())
        .zip(&grid.k_squared())
    {
        let (cos, sin) = mode_rotation(k2, t);
        let (u0, v0) = (*u, *v);
        *u = u0 * cos + v0 * sin;
        *v = v0 * cos - u0 * sin;
    }
    Ok(SymplecticState {
        pair: RealFieldPair::new(
            real_from_spectrum(&engine, u_hat)?,
            real_from_spectrum(&engine, v_hat)?,
        )?,
        time: state.time + t,
    })
}

/// Largest stable leapfrog step, `2 / k²_max`.
pub fn leapfrog_stability_bound(grid: &Grid) -> f64 {
    2.0 / grid.max_k_squared()
}

/// One kick–drift–kick step on a single mode with `λ = k²`, as the matrix
/// acting on `(u, v)`.
pub fn leapfrog_mode_matrix(lambda: f64, dt: f64) -> [[f64; 2]; 2] {
    let a = lambda * dt;
    let diag = 1.0 - 0.5 * a * a;
    [[diag, a], [-a + 0.25 * a * a * a, diag]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySample {
    pub step: usize,
    pub time: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftStatistics {
    pub max_relative_deviation: f64,
    pub fit: LineFit,
    /// `|slope| ≤ stderr(slope)`.
    pub drift_free: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnergyTrace {
    pub samples: Vec<EnergySample>,
}

impl EnergyTrace {
    pub fn initial_energy(&self) -> Option<f64> {
        self.samples.first().map(|s| s.energy)
    }

    pub fn max_relative_deviation(&self) -> f64 {
        let Some(e0) = self.initial_energy() else {
            return 0.0;
        };
        let dev = self
            .samples
            .iter()
            .map(|s| (s.energy - e0).abs())
            .fold(0.0, f64::max);
        if e0 == 0.0 {
            dev
        } else {
            dev / e0.abs()
        }
    }

    /// Least-squares line through the relative energy error versus time.
    pub fn drift_statistics(&self) -> Option<DriftStatistics> {
        let e0 = self.initial_energy()?;
        let norm = if e0 == 0.0 { 1.0 } else { e0.abs() };
        let t: Vec<f64> = self.samples.iter().map(|s| s.time).collect();
        let rel: Vec<f64> = self
            .samples
            .iter()
            .map(|s| (s.energy - e0) / norm)
            .collect();
        let fit = linear_fit(&t, &rel)?;
        Some(DriftStatistics {
            max_relative_deviation: self.max_relative_deviation(),
            fit,
            drift_free: fit.slope.abs() <= fit.slope_stderr,
        })
    }

    /// CSV with header `step,time,H_sym`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "time", "H_sym"])?;
        for s in &self.samples {
            w.write_record(&[
                s.step.to_string(),
                format!("{:e}", s.time),
                format!("{:e}", s.energy),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// `H f = -Δf` through the spectral operator.
struct SpectralOperator {
    engine: FftEngine,
    k2: Vec<f64>,
    buffer: Vec<Complex64>,
}

impl SpectralOperator {
    fn new(grid: &Grid) -> Self {
        Self {
            engine: FftEngine::new(grid),
            k2: grid.k_squared(),
            buffer: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    fn apply(&mut self, f: &[f64], out: &mut [f64]) {
        for (b, &x) in self.buffer.iter_mut().zip(f) {
            *b = Complex64::new(x, 0.0);
        }
        self.engine.forward_in_place(&mut self.buffer);
        for (b, &k2) in self.buffer.iter_mut().zip(&self.k2) {
            *b *= k2;
        }
        self.engine.inverse_in_place(&mut self.buffer);
        for (o, b) in out.iter_mut().zip(&self.buffer) {
            *o = b.re;
        }
    }
}

fn check_step(grid: &Grid, dt: f64) -> Result<()> {
    let bound = leapfrog_stability_bound(grid);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if dt > bound {
        return Err(Error::Unstable { dt, bound });
    }
    Ok(())
}

fn run_leapfrog(
    state: &SymplecticState,
    dt: f64,
    steps: usize,
    mut record: Option<&mut EnergyTrace>,
) -> Result<SymplecticState> {
    let grid = *state.grid();
    check_step(&grid, dt)?;
    let mut op = SpectralOperator::new(&grid);
    let mut u = state.pair.u.values().to_vec();
    let mut v = state.pair.v.values().to_vec();
    let mut hu = vec![0.0; u.len()];
    let mut hv = vec![0.0; u.len()];
    let half = 0.5 * dt;
    let energy = |u: &[f64], v: &[f64], time: f64| -> Result<f64> {
        let s = SymplecticState {
            pair: RealFieldPair::new(
                RealField::new(grid, u.to_vec())?,
                RealField::new(grid, v.to_vec())?,
            )?,
            time,
        };
        Ok(hamiltonian_energy(&s))
    };
    if let Some(trace) = record.as_deref_mut() {
        trace.samples.push(EnergySample {
            step: 0,
            time: state.time,
            energy: energy(&u, &v, state.time)?,
        });
    }
    op.apply(&u, &mut hu);
    for step in 1..=steps {
        // kick: v̇ = -Hu
        for (v, h) in v.iter_mut().zip(&hu) {
            *v -= half * h;
        }
        // drift: u̇ = Hv
        op.apply(&v, &mut hv);
        for (u, h) in u.iter_mut().zip(&hv) {
            *u += dt * h;
        }
        op.apply(&u, &mut hu);
        for (v, h) in v.iter_mut().zip(&hu) {
            *v -= half * h;
        }
        if let Some(trace) = record.as_deref_mut() {
            let time = state.time + step as f64 * dt;
            trace.samples.push(EnergySample {
                step,
                time,
                energy: energy(&u, &v, time)?,
            });
        }
    }
    Ok(SymplecticState {
        pair: RealFieldPair::new(RealField::new(grid, u)?, RealField::new(grid, v)?)?,
        time: state.time + steps as f64 * dt,
    })
}

/// Störmer–Verlet (kick–drift–kick) integration of `u̇ = Hv`, `v̇ = -Hu` with
/// `H = -Δ` applied spectrally. Steps above `2/k²_max` are rejected.
pub fn leapfrog_integrate(
    state: &SymplecticState,
    dt: f64,
    steps: usize,
) -> Result<SymplecticState> {
    run_leapfrog(state, dt, steps, None)
}

/// [`leapfrog_integrate`] that also records `H_sym` after every step.
pub fn leapfrog_with_trace(
    state: &SymplecticState,
    dt: f64,
    steps: usize,
) -> Result<(SymplecticState, EnergyTrace)> {
    let mut trace = EnergyTrace::default();
    let out = run_leapfrog(state, dt, steps, Some(&mut trace))?;
    Ok((out, trace))
}
