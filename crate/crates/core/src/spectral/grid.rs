use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic uniform sampling of the box `[0, L)^d` with `n` points per axis.
///
/// Flat indices are row-major with axis 0 varying slowest. Spectral arrays use
/// the same layout in FFT order, so flat index `i` along an axis carries the
/// mode number `i` for `i < n/2` and `i - n` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    length: f64,
}

impl Grid {
    pub const MAX_DIM: usize = 3;

    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim == 0 || dim > Self::MAX_DIM {
            return Err(Error::InvalidGrid(format!(
                "dimension must be in 1..={}, got {dim}",
                Self::MAX_DIM
            )));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least 4, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box length must be positive and finite, got {length}"
            )));
        }
        Ok(Self { dim, n, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Quadrature weight of a single grid cell, `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of grid points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed mode number in `[-n/2, n/2)` for an FFT-order axis index.
    pub fn mode_number(&self, axis_index: usize) -> i64 {
        let half = self.n / 2;
        if axis_index < half {
            axis_index as i64
        } else {
            axis_index as i64 - self.n as i64
        }
    }

    pub fn wavenumber(&self, axis_index: usize) -> f64 {
        TAU * self.mode_number(axis_index) as f64 / self.length
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.dim - 1 - axis) as u32)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Physical coordinates `x_j = i_j · h` of a flat index.
    pub fn coordinates(&self, flat: usize) -> Vec<f64> {
        let h = self.spacing();
        self.multi_index(flat)
            .into_iter()
            .map(|i| i as f64 * h)
            .collect()
    }

    /// Mode vector of a flat spectral index.
    pub fn mode_vector(&self, flat: usize) -> Vec<i64> {
        self.multi_index(flat)
            .into_iter()
            .map(|i| self.mode_number(i))
            .collect()
    }

    /// `k²` for every spectral index, in FFT order.
    ///
    /// Every solver reads its dispersion from here so that independent code
    /// paths evaluate the same phase arguments.
    pub fn k_squared(&self) -> Vec<f64> {
        let axis_k2: Vec<f64> = (0..self.n).map(|i| self.wavenumber(i).powi(2)).collect();
        (0..self.len())
            .map(|flat| self.multi_index(flat).into_iter().map(|i| axis_k2[i]).sum())
            .collect()
    }

    /// Largest `k²` on the grid, reached at the Nyquist corner.
    pub fn max_k_squared(&self) -> f64 {
        let k_nyq = TAU * (self.n / 2) as f64 / self.length;
        self.dim as f64 * k_nyq * k_nyq
    }

    /// Samples `f(x)` at every grid point.
    pub fn sample<T, F: Fn(&[f64]) -> T>(&self, f: F) -> Vec<T> {
        (0..self.len()).map(|i| f(&self.coordinates(i))).collect()
    }

    /// Index reached by reflecting every axis, `i ↦ (n - i) mod n`.
    pub fn reflected_index(&self, flat: usize) -> usize {
        let idx: Vec<usize> = self
            .multi_index(flat)
            .into_iter()
            .map(|i| (self.n - i) % self.n)
            .collect();
        self.flat_index(&idx)
    }
}
