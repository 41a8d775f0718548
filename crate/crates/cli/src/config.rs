//! JSON run configuration and the per-command parameter blocks.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use wavebeam::eigenmodes::BoundaryCondition;

/// Top level of a config file. Command parameters live under `params`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Parameters for `command`, with defaults for anything left out.
    pub fn params<P: DeserializeOwned + Default>(&self, command: &str) -> Result<P, String> {
        if let Some(c) = &self.command {
            if c != command {
                return Err(format!("config is for `{c}` but `{command}` was run"));
            }
        }
        match &self.params {
            serde_json::Value::Null => Ok(P::default()),
            v => serde_json::from_value(v.clone()).map_err(|e| format!("params: {e}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialData {
    Gaussian,
    Random,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquivalenceParams {
    pub dim: usize,
    pub n: usize,
    pub length: f64,
    pub times: Vec<f64>,
    pub initial: InitialData,
    /// Gaussian width σ in `exp(-|x - c|²/(4σ²))`.
    pub width: f64,
    /// Carrier wavenumber along the first axis.
    pub wavenumber: f64,
    /// Mode cutoff for random data.
    pub max_mode: usize,
}

impl Default for EquivalenceParams {
    fn default() -> Self {
        Self {
            dim: 1,
            n: 256,
            length: TAU,
            times: vec![0.1, 1.0, 10.0],
            initial: InitialData::Gaussian,
            width: 0.4,
            wavenumber: 0.0,
            max_mode: 32,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymplecticParams {
    pub dim: usize,
    pub n: usize,
    pub length: f64,
    pub max_mode: usize,
    /// Leapfrog step; when absent, `0.05/k_data²` with `k_data` the largest
    /// populated wavenumber.
    pub dt: Option<f64>,
    pub steps: usize,
    /// End of the exact-rotation conservation window.
    pub exact_time: f64,
}

impl Default for SymplecticParams {
    fn default() -> Self {
        Self {
            dim: 1,
            n: 64,
            length: TAU,
            max_mode: 12,
            dt: None,
            steps: 10_000,
            exact_time: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Potential,
    Curved,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HamiltonianParams {
    pub kind: OperatorKind,
    pub dim: usize,
    pub n: usize,
    pub length: f64,
    /// Mode cutoff of the random potential or conformal factor.
    pub coefficient_modes: usize,
    /// Sup norm of φ in the conformal inverse metric `g^{ik} = e^φ δ^{ik}`.
    pub metric_amplitude: f64,
    /// Mode cutoff of the random `(u₀, v₀)`.
    pub data_modes: usize,
    pub time: f64,
}

impl Default for HamiltonianParams {
    fn default() -> Self {
        Self {
            kind: OperatorKind::Potential,
            dim: 1,
            n: 128,
            length: TAU,
            coefficient_modes: 4,
            metric_amplitude: 0.4,
            data_modes: 5,
            time: 0.7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenmodeParams {
    pub length: f64,
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub resolution: usize,
    pub modes: usize,
}

impl Default for EigenmodeParams {
    fn default() -> Self {
        Self {
            length: std::f64::consts::PI,
            left: BoundaryCondition::SimplySupported,
            right: BoundaryCondition::SimplySupported,
            resolution: 512,
            modes: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PAdicInitial {
    Random,
    UnitBall,
    /// `exp(-|x|_p²)`.
    Radial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PAdicParams {
    pub prime: u64,
    pub outer: u32,
    pub inner: u32,
    pub alpha: f64,
    pub time: f64,
    pub initial: PAdicInitial,
}

impl Default for PAdicParams {
    fn default() -> Self {
        Self {
            prime: 3,
            outer: 3,
            inner: 3,
            alpha: 1.0,
            time: 3.0,
            initial: PAdicInitial::Random,
        }
    }
}
