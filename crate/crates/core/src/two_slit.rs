//! Two-slit scattering on a periodic 2D box, computed once as a Schrödinger
//! field and once as the equivalent `(u, v)` beam pair.
//!
//! Both paths use the same first-order splitting: exact free evolution for
//! `dt`, then projection to zero on the barrier set. Axis 0 is the
//! propagation direction `x`, axis 1 is the transverse coordinate `y`.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial_data::gaussian_packet;
use crate::numerics::sup_distance;
use crate::schrodinger::evolve_field;
use crate::spectral::{ComplexField, FftEngine, Grid, RealField, RealFieldPair};
use crate::symplectic::{exact_rotation, SymplecticState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlitConfig {
    /// Points per axis.
    pub n: usize,
    pub length: f64,
    /// Center line of the barrier.
    pub barrier_x: f64,
    pub barrier_thickness: f64,
    pub slit_centers: [f64; 2],
    pub slit_width: f64,
    /// Which slits are open.
    pub open: [bool; 2],
    pub source_center: [f64; 2],
    /// `σ` in `exp(-r²/(4σ²))`.
    pub source_width: f64,
    /// Mean wavenumber along `+x`.
    pub wavenumber: f64,
    pub detect_x: f64,
    pub total_time: f64,
    pub dt: f64,
}

impl Default for SlitConfig {
    fn default() -> Self {
        let length = 256.0;
        let k0 = PI / 2.0;
        let source_x = 56.0;
        let detect_x = 146.0;
        Self {
            n: 256,
            length,
            barrier_x: 96.0,
            barrier_thickness: 20.0,
            slit_centers: [length / 2.0 - 10.0, length / 2.0 + 10.0],
            slit_width: 6.0,
            open: [true, true],
            source_center: [source_x, length / 2.0],
            source_width: 6.0,
            wavenumber: k0,
            detect_x,
            // arrival of the packet center at the detection line
            total_time: (detect_x - source_x) / (2.0 * k0),
            dt: 0.05,
        }
    }
}

impl SlitConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(2, self.n, self.length)
    }

    /// Plane where the wave leaves the barrier.
    pub fn barrier_exit(&self) -> f64 {
        self.barrier_x + 0.5 * self.barrier_thickness
    }

    pub fn slit_separation(&self) -> f64 {
        (self.slit_centers[1] - self.slit_centers[0]).abs()
    }

    /// Largest `dt` for which the fast edge of the packet, group velocity
    /// `2(k₀ + 4σ_k)` with `σ_k = 1/(2σ)`, moves at most one cell per step.
    pub fn stability_guard(&self) -> f64 {
        let sigma_k = 1.0 / (2.0 * self.source_width);
        self.length / self.n as f64 / (2.0 * (self.wavenumber.abs() + 4.0 * sigma_k))
    }

    pub fn steps(&self) -> usize {
        (self.total_time / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<Grid> {
        let grid = self.grid()?;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let reals = [
            self.length,
            self.barrier_x,
            self.barrier_thickness,
            self.slit_centers[0],
            self.slit_centers[1],
            self.slit_width,
            self.source_center[0],
            self.source_center[1],
            self.source_width,
            self.wavenumber,
            self.detect_x,
            self.total_time,
            self.dt,
        ];
        if reals.iter().any(|x| !x.is_finite()) {
            return bad("all parameters must be finite".into());
        }
        let h = grid.spacing();
        let l = self.length;
        if self.slit_width < h {
            return bad(format!(
                "slit width {} is below the spacing {h}",
                self.slit_width
            ));
        }
        if self.barrier_thickness < h {
            return bad(format!(
                "barrier thickness {} is below the spacing {h}",
                self.barrier_thickness
            ));
        }
        if self.source_width <= 0.0 {
            return bad("source width must be positive".into());
        }
        if self.total_time <= 0.0 || self.dt <= 0.0 {
            return bad("total_time and dt must be positive".into());
        }
        let [c0, c1] = self.slit_centers;
        let half = 0.5 * self.slit_width;
        for c in [c0, c1] {
            if c - half <= 0.0 || c + half >= l {
                return bad(format!("slit at y = {c} reaches the box edge"));
            }
        }
        if (c0 - c1).abs() <= self.slit_width {
            return bad("slits overlap".into());
        }
        let entry = self.barrier_x - 0.5 * self.barrier_thickness;
        if entry <= 0.0 || self.barrier_exit() >= l {
            return bad("barrier must lie inside the box".into());
        }
        if self.detect_x <= self.barrier_exit() || self.detect_x >= l {
            return bad("detection line must lie beyond the barrier and inside the box".into());
        }
        if self.source_center[0] + 4.0 * self.source_width >= entry {
            return bad("source packet overlaps the barrier".into());
        }
        if l < 4.0 * (self.detect_x - self.barrier_x) {
            return bad(format!(
                "box length {l} is under four times the barrier-to-detector distance"
            ));
        }
        let bound = self.stability_guard();
        if self.dt > bound {
            return Err(Error::Unstable { dt: self.dt, bound });
        }
        Ok(grid)
    }

    /// `true` on barrier points where the field is forced to zero.
    pub fn barrier_mask(&self, grid: &Grid) -> Vec<bool> {
        let half_wall = 0.5 * self.barrier_thickness + 1e-9;
        let half_slit = 0.5 * self.slit_width + 1e-9;
        (0..grid.len())
            .map(|flat| {
                let x = grid.coordinates(flat);
                if (x[0] - self.barrier_x).abs() > half_wall {
                    return false;
                }
                !self
                    .slit_centers
                    .iter()
                    .zip(self.open)
                    .any(|(&c, open)| open && (x[1] - c).abs() <= half_slit)
            })
            .collect()
    }

    /// Source packet normalized to unit `L²` norm.
    pub fn source(&self, grid: Grid) -> Result<ComplexField> {
        let psi = gaussian_packet(
            grid,
            &self.source_center,
            self.source_width,
            &[self.wavenumber, 0.0],
        )?;
        Ok(psi.scale(1.0 / psi.l2_norm()))
    }

    fn detect_row(&self, grid: &Grid) -> usize {
        (self.detect_x / grid.spacing()).round() as usize % grid.points_per_axis()
    }
}

#[derive(Debug, Clone)]
pub struct TwoSlitRun {
    pub y: Vec<f64>,
    /// `|ψ|²` on the detection line, Schrödinger path.
    pub intensity_schrodinger: Vec<f64>,
    /// `u² + v²` on the detection line, beam path.
    pub intensity_eb: Vec<f64>,
    /// `‖ψ_S - (u + iv)‖∞` at final time.
    pub residual: f64,
    /// Fraction of the initial norm found in `[exit, barrier_x + L/2)`.
    pub transmitted: f64,
    /// Largest increase of `‖ψ‖₂` caused by any projection.
    pub max_projection_gain: f64,
    pub final_schrodinger: ComplexField,
    pub final_eb: ComplexField,
}

fn project(values: &mut [num_complex::Complex64], mask: &[bool]) {
    for (z, &m) in values.iter_mut().zip(mask) {
        if m {
            *z = num_complex::Complex64::new(0.0, 0.0);
        }
    }
}

fn project_real(field: RealField, mask: &[bool]) -> Result<RealField> {
    let grid = *field.grid();
    let mut values = field.into_values();
    for (x, &m) in values.iter_mut().zip(mask) {
        if m {
            *x = 0.0;
        }
    }
    RealField::new(grid, values)
}

/// Runs both paths from the configured Gaussian source.
pub fn run_two_slit(config: &SlitConfig) -> Result<TwoSlitRun> {
    let grid = config.validate()?;
    let psi0 = config.source(grid)?;
    run_two_slit_from(config, psi0)
}

/// Runs both paths from an arbitrary initial field on the configured grid.
/// Intensities are `|ψ|²` in the units of `psi0`.
pub fn run_two_slit_from(config: &SlitConfig, psi0: ComplexField) -> Result<TwoSlitRun> {
    let grid = config.validate()?;
    if *psi0.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let mask = config.barrier_mask(&grid);
    let engine = FftEngine::new(&grid);
    let k2 = grid.k_squared();
    let norm0 = psi0.l2_norm();

    let mut psi = psi0.clone();
    project(psi.values_mut(), &mask);
    let mut state = SymplecticState::from_psi(&psi);
    let mut gain = 0.0f64;
    for _ in 0..config.steps() {
        evolve_field(&engine, &k2, &mut psi, config.dt);
        let before = psi.l2_norm();
        project(psi.values_mut(), &mask);
        gain = gain.max(psi.l2_norm() - before);

        let rotated = exact_rotation(&state, config.dt)?;
        state = SymplecticState {
            pair: RealFieldPair::new(
                project_real(rotated.pair.u, &mask)?,
                project_real(rotated.pair.v, &mask)?,
            )?,
            time: rotated.time,
        };
    }
    let eb = state.to_psi();

    let n = grid.points_per_axis();
    let h = grid.spacing();
    let row = config.detect_row(&grid);
    let line = |f: &ComplexField| -> Vec<f64> {
        (0..n).map(|j| f.values()[row * n + j].norm_sqr()).collect()
    };
    let lo = config.barrier_exit();
    let hi = config.barrier_x + 0.5 * config.length;
    let beyond: f64 = (0..grid.len())
        .filter(|&flat| {
            let x = grid.coordinates(flat)[0];
            x >= lo && x < hi
        })
        .map(|flat| psi.values()[flat].norm_sqr())
        .sum::<f64>()
        * grid.cell_volume();

    Ok(TwoSlitRun {
        y: (0..n).map(|j| j as f64 * h).collect(),
        intensity_schrodinger: line(&psi),
        intensity_eb: line(&eb),
        residual: sup_distance(psi.values(), eb.values()),
        transmitted: if norm0 > 0.0 {
            beyond / (norm0 * norm0)
        } else {
            0.0
        },
        max_projection_gain: gain,
        final_schrodinger: psi,
        final_eb: eb,
    })
}

impl TwoSlitRun {
    /// CSV with header `y,I_schrodinger,I_eb`.
    pub fn write_intensity_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["y", "I_schrodinger", "I_eb"])?;
        for ((y, a), b) in self
            .y
            .iter()
            .zip(&self.intensity_schrodinger)
            .zip(&self.intensity_eb)
        {
            w.write_record(&[format!("{y:e}"), format!("{a:e}"), format!("{b:e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_intensity_csv(&self, path: &Path) -> Result<()> {
        self.write_intensity_csv(std::fs::File::create(path)?)
    }

    /// Binary P5 image of `|ψ|²`, rows along `y` and columns along `x`,
    /// scaled so the maximum maps to 255.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        let grid = self.final_schrodinger.grid();
        let n = grid.points_per_axis();
        let density: Vec<f64> = self
            .final_schrodinger
            .values()
            .iter()
            .map(|z| z.norm_sqr())
            .collect();
        let peak = density.iter().cloned().fold(0.0, f64::max);
        write!(out, "P5\n{n} {n}\n255\n")?;
        let mut pixels = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let level = if peak > 0.0 {
                    density[i * n + j] / peak
                } else {
                    0.0
                };
                pixels.push((level * 255.0).round() as u8);
            }
        }
        out.write_all(&pixels)?;
        Ok(())
    }

    pub fn save_pgm(&self, path: &Path) -> Result<()> {
        self.write_pgm(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

/// `max_j |I(y_j) - I(L - y_j)| / max I`.
pub fn symmetry_residual(intensity: &[f64]) -> f64 {
    let n = intensity.len();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    let worst = (0..n)
        .map(|j| (intensity[j] - intensity[(n - j) % n]).abs())
        .fold(0.0, f64::max);
    if peak > 0.0 {
        worst / peak
    } else {
        worst
    }
}

/// Fringe spacing `λ·D/d` with `λ = 2π/k₀` and `D` the distance from the
/// barrier exit to the detection line.
pub fn fraunhofer_spacing(config: &SlitConfig) -> f64 {
    TAU * (config.detect_x - config.barrier_exit()) / (config.slit_separation() * config.wavenumber)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeReport {
    pub peaks: Vec<usize>,
    pub peak_positions: Vec<f64>,
    pub mean_spacing: Option<f64>,
    /// `(I_max - I_min)/(I_max + I_min)` between the outermost peaks; zero
    /// with fewer than two peaks.
    pub visibility: f64,
}

/// Local maxima above 5% of the global maximum, with spacing and visibility.
pub fn fringe_analysis(intensity: &[f64], spacing: f64) -> Result<FringeReport> {
    if let Some(i) = intensity.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::NonFinite {
            index: i,
            value: intensity[i],
        });
    }
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroIntensity);
    }
    let threshold = 0.05 * peak;
    let peaks: Vec<usize> = (1..intensity.len().saturating_sub(1))
        .filter(|&i| {
            intensity[i] > threshold
                && intensity[i] > intensity[i - 1]
                && intensity[i] >= intensity[i + 1]
        })
        .collect();
    let (mean_spacing, visibility) = match (peaks.first(), peaks.last()) {
        (Some(&a), Some(&b)) if b > a => {
            let window = &intensity[a..=b];
            let hi = window.iter().cloned().fold(0.0, f64::max);
            let lo = window.iter().cloned().fold(f64::INFINITY, f64::min);
            let mean = (b - a) as f64 * spacing / (peaks.len() - 1) as f64;
            (Some(mean), (hi - lo) / (hi + lo))
        }
        _ => (None, 0.0),
    };
    Ok(FringeReport {
        peak_positions: peaks.iter().map(|&i| i as f64 * spacing).collect(),
        peaks,
        mean_spacing,
        visibility,
    })
}
