use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, sup_norm, sup_norm_real};

fn check_len(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            actual: len,
        });
    }
    Ok(())
}

pub(crate) fn check_finite_complex(values: &[Complex64]) -> Result<()> {
    for (index, z) in values.iter().enumerate() {
        if !z.re.is_finite() {
            return Err(Error::NonFinite { index, value: z.re });
        }
        if !z.im.is_finite() {
            return Err(Error::NonFinite { index, value: z.im });
        }
    }
    Ok(())
}

pub(crate) fn check_finite_real(values: &[f64]) -> Result<()> {
    match values.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// A complex wave function sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        check_finite_complex(&values)?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(grid: Grid, f: F) -> Result<Self> {
        Self::new(grid, grid.sample(f))
    }

    /// Reassembles `ψ = u + i·v`.
    pub fn from_pair(pair: &RealFieldPair) -> Self {
        let values = pair
            .u
            .values
            .iter()
            .zip(&pair.v.values)
            .map(|(&u, &v)| Complex64::new(u, v))
            .collect();
        Self {
            grid: pair.u.grid,
            values,
        }
    }

    /// Splits into `(Re ψ, Im ψ)`.
    pub fn split(&self) -> RealFieldPair {
        RealFieldPair {
            u: RealField {
                grid: self.grid,
                values: self.values.iter().map(|z| z.re).collect(),
            },
            v: RealField {
                grid: self.grid,
                values: self.values.iter().map(|z| z.im).collect(),
            },
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Mutable access for in-place steppers. Transforms re-validate finiteness.
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `(h^d Σ|ψ|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_volume() * compensated_sum(self.values.iter().map(|z| z.norm_sqr()))).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.values)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|z| z * s).collect(),
        }
    }
}

/// A real field sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        check_finite_real(&values)?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: Grid, f: F) -> Result<Self> {
        Self::new(grid, grid.sample(f))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm_real(&self.values)
    }

    pub fn l2_norm_sqr(&self) -> f64 {
        self.grid.cell_volume() * compensated_sum(self.values.iter().map(|x| x * x))
    }
}

/// The real/imaginary split `(u, v)` of a complex field on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFieldPair {
    pub u: RealField,
    pub v: RealField,
}

impl RealFieldPair {
    pub fn new(u: RealField, v: RealField) -> Result<Self> {
        if u.grid != v.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self { u, v })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            u: RealField::zeros(grid),
            v: RealField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.u.grid
    }

    /// `‖u‖² + ‖v‖²`, i.e. `‖u + i·v‖²` under the grid quadrature.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.u.l2_norm_sqr() + self.v.l2_norm_sqr()
    }
}
