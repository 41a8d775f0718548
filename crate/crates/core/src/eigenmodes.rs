//! Natural frequencies of a finite beam `ẅ + w'''' = 0` on `[0, L]` and the
//! Dirichlet energies of a particle in a box of the same length.
//!
//! The beam is discretized on nodes `x_i = i·h`, `i = 0..=n+1`,
//! `h = L/(n+1)`. Boundary conditions are eliminated through ghost points:
//!
//! * simply supported: `w = 0`, `w'' = 0` (ghost `w_{-1} = -w_1`);
//! * clamped: `w = 0`, `w' = 0` (ghost `w_{-1} = w_1`);
//! * free: `w'' = 0`, `w''' = 0` (boundary node is an unknown).
//!
//! The eliminated system is assembled as `K = D₂ᵀ W D₂` with `D₂` the
//! three-point second difference at every node where `w''` is not prescribed
//! and `W` trapezoidal weights, against a trapezoidal mass matrix `M`. Row for
//! row this is the ghost-point five-point biharmonic, and it makes the pencil
//! `(K, M)` symmetric positive semidefinite for every combination of ends.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MATCH_TOLERANCE: f64 = 1e-2;
pub const MIN_RESOLUTION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    SimplySupported,
    Clamped,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    pub length: f64,
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    /// Number of interior nodes.
    pub resolution: usize,
}

impl BeamSpec {
    pub fn new(
        length: f64,
        left: BoundaryCondition,
        right: BoundaryCondition,
        resolution: usize,
    ) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beam length must be positive, got {length}"
            )));
        }
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidParameter(format!(
                "beam resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        Ok(Self {
            length,
            left,
            right,
            resolution,
        })
    }

    pub fn simply_supported(length: f64, resolution: usize) -> Result<Self> {
        use BoundaryCondition::SimplySupported as S;
        Self::new(length, S, S, resolution)
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.resolution + 1) as f64
    }

    /// Number of zero-frequency rigid-body modes admitted by the ends.
    pub fn rigid_modes(&self) -> usize {
        use BoundaryCondition::*;
        match (self.left, self.right) {
            (Free, Free) => 2,
            (Free, SimplySupported) | (SimplySupported, Free) => 1,
            _ => 0,
        }
    }
}

/// The discrete pencil `(K, M)` restricted to the unknown nodes.
#[derive(Debug, Clone)]
pub struct BiharmonicSystem {
    pub stiffness: DMatrix<f64>,
    pub mass: Vec<f64>,
    /// Node index (into `0..=n+1`) of each unknown.
    pub unknowns: Vec<usize>,
}

impl BiharmonicSystem {
    /// `M^{-1/2} K M^{-1/2}`, whose eigenvalues are `ω²`.
    pub fn symmetric_operator(&self) -> DMatrix<f64> {
        let s: Vec<f64> = self.mass.iter().map(|m| m.sqrt()).collect();
        let n = s.len();
        DMatrix::from_fn(n, n, |i, j| self.stiffness[(i, j)] / (s[i] * s[j]))
    }
}

pub fn biharmonic_system(spec: &BeamSpec) -> BiharmonicSystem {
    use BoundaryCondition::*;
    let n = spec.resolution;
    let h = spec.spacing();
    let last = n + 1;

    let mut unknowns = Vec::with_capacity(n + 2);
    if spec.left == Free {
        unknowns.push(0);
    }
    unknowns.extend(1..=n);
    if spec.right == Free {
        unknowns.push(last);
    }
    let mut column = vec![None; n + 2];
    for (col, &node) in unknowns.iter().enumerate() {
        column[node] = Some(col);
    }
    let mass: Vec<f64> = unknowns
        .iter()
        .map(|&node| {
            if node == 0 || node == last {
                0.5 * h
            } else {
                h
            }
        })
        .collect();

    // Second-difference rows: (row weight, [(node, coefficient)]).
    let mut rows: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
    if spec.left == Clamped {
        rows.push((0.5 * h, vec![(1, 2.0)]));
    }
    for i in 1..=n {
        rows.push((h, vec![(i - 1, 1.0), (i, -2.0), (i + 1, 1.0)]));
    }
    if spec.right == Clamped {
        rows.push((0.5 * h, vec![(n, 2.0)]));
    }

    let m = unknowns.len();
    let mut stiffness = DMatrix::zeros(m, m);
    let h4 = h.powi(4);
    for (weight, entries) in &rows {
        let live: Vec<(usize, f64)> = entries
            .iter()
            .filter_map(|&(node, c)| column[node].map(|col| (col, c)))
            .collect();
        for &(a, ca) in &live {
            for &(b, cb) in &live {
                stiffness[(a, b)] += weight * ca * cb / h4;
            }
        }
    }
    BiharmonicSystem {
        stiffness,
        mass,
        unknowns,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSet {
    /// Ascending positive natural frequencies `ω_n`.
    pub frequencies: Vec<f64>,
    /// Node positions `x_0..=x_{n+1}`.
    pub nodes: Vec<f64>,
    /// One shape per frequency on all nodes, unit discrete L² norm.
    pub shapes: Vec<Vec<f64>>,
}

pub fn beam_frequencies(spec: &BeamSpec, n_modes: usize) -> Result<ModeSet> {
    let max = spec.resolution / 4;
    if n_modes > max {
        return Err(Error::TrustRegion {
            requested: n_modes,
            max,
        });
    }
    let system = biharmonic_system(spec);
    let eig = SymmetricEigen::new(system.symmetric_operator());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let h = spec.spacing();
    let nodes: Vec<f64> = (0..spec.resolution + 2).map(|i| i as f64 * h).collect();
    let sqrt_mass: Vec<f64> = system.mass.iter().map(|m| m.sqrt()).collect();
    let mut frequencies = Vec::with_capacity(n_modes);
    let mut shapes = Vec::with_capacity(n_modes);
    for &j in order.iter().skip(spec.rigid_modes()).take(n_modes) {
        frequencies.push(eig.eigenvalues[j].max(0.0).sqrt());
        let mut shape = vec![0.0; nodes.len()];
        for (col, &node) in system.unknowns.iter().enumerate() {
            shape[node] = eig.eigenvectors[(col, j)] / sqrt_mass[col];
        }
        let peak = shape.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if let Some(first) = shape.iter().find(|x| x.abs() > 1e-8 * peak) {
            if *first < 0.0 {
                shape.iter_mut().for_each(|x| *x = -*x);
            }
        }
        shapes.push(shape);
    }
    Ok(ModeSet {
        frequencies,
        nodes,
        shapes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxEnergies {
    /// `(nπ/L)²`.
    pub analytic: Vec<f64>,
    /// Lowest eigenvalues of the three-point `-d²/dx²` with Dirichlet ends.
    pub finite_difference: Vec<f64>,
}

pub fn quantum_box_energies(length: f64, n_modes: usize, resolution: usize) -> Result<BoxEnergies> {
    if n_modes == 0 || n_modes > resolution {
        return Err(Error::InvalidParameter(format!(
            "need 1..={resolution} modes, got {n_modes}"
        )));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "box length must be positive, got {length}"
        )));
    }
    let h = length / (resolution + 1) as f64;
    let op = DMatrix::from_fn(resolution, resolution, |i, j| match i.abs_diff(j) {
        0 => 2.0 / (h * h),
        1 => -1.0 / (h * h),
        _ => 0.0,
    });
    let mut values: Vec<f64> = SymmetricEigen::new(op)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values.truncate(n_modes);
    let analytic = (1..=n_modes)
        .map(|n| (n as f64 * PI / length).powi(2))
        .collect();
    Ok(BoxEnergies {
        analytic,
        finite_difference: values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeMatch {
    pub n: usize,
    pub omega: f64,
    /// Analytic box energy `(nπ/L)²`.
    pub energy: f64,
    /// Finite-difference box energy at the beam's resolution.
    pub energy_discrete: f64,
    /// `|ω_n - E_n| / E_n` against the analytic energy.
    pub relative_mismatch: f64,
    /// The same against the finite-difference energy.
    pub discrete_mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub spec: BeamSpec,
    pub rows: Vec<ModeMatch>,
    pub max_relative_mismatch: f64,
    pub max_discrete_mismatch: f64,
    /// Only asserted for a beam simply supported at both ends; `None`
    /// otherwise since the spectra are not expected to coincide.
    pub pass: Option<bool>,
}

impl MatchReport {
    /// CSV with header `n,omega,E,relative_mismatch`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "omega", "E", "relative_mismatch"])?;
        for r in &self.rows {
            w.write_record(&[
                r.n.to_string(),
                format!("{:e}", r.omega),
                format!("{:e}", r.energy),
                format!("{:e}", r.relative_mismatch),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Compares beam frequencies with box energies of the same length and
/// resolution.
pub fn frequency_energy_match(spec: &BeamSpec, n_modes: usize) -> Result<MatchReport> {
    let modes = beam_frequencies(spec, n_modes)?;
    let energies = quantum_box_energies(spec.length, n_modes, spec.resolution)?;
    let rows: Vec<ModeMatch> = modes
        .frequencies
        .iter()
        .zip(energies.finite_difference.iter().zip(&energies.analytic))
        .enumerate()
        .map(|(i, (&omega, (&e, &ea)))| ModeMatch {
            n: i + 1,
            omega,
            energy: ea,
            energy_discrete: e,
            relative_mismatch: (omega - ea).abs() / ea,
            discrete_mismatch: (omega - e).abs() / e,
        })
        .collect();
    let max_relative_mismatch = rows.iter().map(|r| r.relative_mismatch).fold(0.0, f64::max);
    let max_discrete_mismatch = rows.iter().map(|r| r.discrete_mismatch).fold(0.0, f64::max);
    let simply_supported = spec.left == BoundaryCondition::SimplySupported
        && spec.right == BoundaryCondition::SimplySupported;
    Ok(MatchReport {
        spec: *spec,
        rows,
        max_relative_mismatch,
        max_discrete_mismatch,
        pass: simply_supported.then_some(max_relative_mismatch <= MATCH_TOLERANCE),
    })
}
