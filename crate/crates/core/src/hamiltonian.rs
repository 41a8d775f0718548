//! Generalized Hamiltonians `H = -Δ + V` and `H = -Δ_g`, the propagator
//! `u(t) = cos(Ht)u₀ + sin(Ht)v₀`, `v(t) = cos(Ht)v₀ - sin(Ht)u₀`, and the
//! scalar relation between beam material constants and the quantum scale.
//!
//! Operators are assembled densely and diagonalized once. A
//! [`DiscreteHamiltonian`] stores the symmetric form `K = W·H` together with
//! the quadrature weights `W`, so self-adjointness in the weighted inner
//! product `⟨f, g⟩_W = Σ w_i f_i g_i` is exact by construction.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, sup_norm_real};
use crate::schrodinger::check_time;
use crate::spectral::{FftEngine, Grid, RealField, RealFieldPair};

pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Real potential `V(x)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    values: RealField,
}

impl PotentialField {
    pub fn new(values: RealField) -> Self {
        Self { values }
    }

    pub fn zero(grid: Grid) -> Self {
        Self {
            values: RealField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.values.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.values.values()
    }
}

/// Inverse metric `g^{ik}(x)` and `g(x) = det(g_{ik})` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    grid: Grid,
    /// Row-major `d×d` block per grid point.
    g_inv: Vec<f64>,
    g_det: Vec<f64>,
}

impl MetricField {
    /// Builds the metric from `g^{ik}` alone; `g = 1 / det(g^{ik})`.
    pub fn from_inverse(grid: Grid, g_inv: Vec<f64>) -> Result<Self> {
        let d = grid.dim();
        if g_inv.len() != grid.len() * d * d {
            return Err(Error::LengthMismatch {
                expected: grid.len() * d * d,
                actual: g_inv.len(),
            });
        }
        let mut g_det = Vec::with_capacity(grid.len());
        for point in 0..grid.len() {
            let block = Self::block_of(&g_inv, d, point);
            let det = Self::check_positive_definite(&block, point)?;
            g_det.push(1.0 / det);
        }
        Ok(Self { grid, g_inv, g_det })
    }

    /// Builds the metric from both `g^{ik}` and `g`, checking
    /// `g · det(g^{ik}) = 1` to 1e-10.
    pub fn new(grid: Grid, g_inv: Vec<f64>, g_det: Vec<f64>) -> Result<Self> {
        if g_det.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: g_det.len(),
            });
        }
        let derived = Self::from_inverse(grid, g_inv)?;
        for (point, (&given, &implied)) in g_det.iter().zip(&derived.g_det).enumerate() {
            if !(given > 0.0) || ((given / implied) - 1.0).abs() > 1e-10 {
                return Err(Error::InconsistentMetric { point });
            }
        }
        Ok(Self { g_det, ..derived })
    }

    pub fn flat(grid: Grid) -> Self {
        Self::conformal(&RealField::zeros(grid))
    }

    /// `g^{ik} = e^{φ(x)} δ^{ik}`, hence `g = e^{-dφ}`.
    pub fn conformal(phi: &RealField) -> Self {
        let grid = *phi.grid();
        let d = grid.dim();
        let mut g_inv = vec![0.0; grid.len() * d * d];
        let mut g_det = Vec::with_capacity(grid.len());
        for (point, &p) in phi.values().iter().enumerate() {
            for a in 0..d {
                g_inv[point * d * d + a * d + a] = p.exp();
            }
            g_det.push((-(d as f64) * p).exp());
        }
        Self { grid, g_inv, g_det }
    }

    fn block_of(g_inv: &[f64], d: usize, point: usize) -> DMatrix<f64> {
        DMatrix::from_row_slice(d, d, &g_inv[point * d * d..(point + 1) * d * d])
    }

    fn check_positive_definite(block: &DMatrix<f64>, point: usize) -> Result<f64> {
        let d = block.nrows();
        let symmetric = (0..d).all(|i| (0..d).all(|j| block[(i, j)] == block[(j, i)]));
        if !symmetric || block.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotPositiveDefinite { point });
        }
        match block.clone().cholesky() {
            Some(chol) => Ok(chol.determinant()),
            None => Err(Error::NotPositiveDefinite { point }),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn g_inv(&self, point: usize, a: usize, b: usize) -> f64 {
        let d = self.grid.dim();
        self.g_inv[point * d * d + a * d + b]
    }

    pub fn g_det(&self) -> &[f64] {
        &self.g_det
    }
}

/// A self-adjoint operator on grid functions with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    grid: Grid,
    /// `K = W·H`, exactly symmetric.
    form: DMatrix<f64>,
    weights: Vec<f64>,
    eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, orthonormal under `W`.
    eigenvectors: DMatrix<f64>,
}

impl DiscreteHamiltonian {
    fn from_form(grid: Grid, form: DMatrix<f64>, weights: Vec<f64>) -> Self {
        let n = weights.len();
        let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        let scaled = DMatrix::from_fn(n, n, |i, j| form[(i, j)] / (sqrt_w[i] * sqrt_w[j]));
        let eig = SymmetricEigen::new(scaled);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
        let eigenvectors =
            DMatrix::from_fn(n, n, |i, col| eig.eigenvectors[(i, order[col])] / sqrt_w[i]);
        Self {
            grid,
            form,
            weights,
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The operator matrix `H = W⁻¹K`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let w = &self.weights;
        DMatrix::from_fn(w.len(), w.len(), |i, j| self.form[(i, j)] / w[i])
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, j: usize) -> Result<RealField> {
        RealField::new(
            self.grid,
            self.eigenvectors.column(j).iter().copied().collect(),
        )
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let y = &self.form * DVector::from_column_slice(f);
        y.iter().zip(&self.weights).map(|(y, w)| y / w).collect()
    }

    /// `max |H - H*| / max |H|` with `H* = W⁻¹HᵀW` the weighted adjoint.
    pub fn self_adjointness_residual(&self) -> f64 {
        let h = self.matrix();
        let w = &self.weights;
        let n = w.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let adj = h[(j, i)] * w[j] / w[i];
                worst = worst.max((h[(i, j)] - adj).abs());
            }
        }
        let scale = h.amax();
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    /// `max |EᵀWE - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let e = &self.eigenvectors;
        let we = DMatrix::from_fn(e.nrows(), e.ncols(), |i, j| e[(i, j)] * self.weights[i]);
        let gram = e.transpose() * we;
        (gram - DMatrix::identity(e.ncols(), e.ncols())).amax()
    }

    fn coefficients(&self, f: &RealField) -> Result<DVector<f64>> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let wf = DVector::from_iterator(
            f.values().len(),
            f.values().iter().zip(&self.weights).map(|(x, w)| x * w),
        );
        Ok(self.eigenvectors.transpose() * wf)
    }

    /// CSV with header `index,lambda`.
    pub fn write_eigenvalue_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "lambda"])?;
        for (i, lambda) in self.eigenvalues.iter().enumerate() {
            w.write_record(&[i.to_string(), format!("{lambda:e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_eigenvalue_csv(&self, path: &Path) -> Result<()> {
        self.write_eigenvalue_csv(std::fs::File::create(path)?)
    }
}

fn check_cap(grid: &Grid, cap: usize) -> Result<()> {
    if grid.len() > cap {
        return Err(Error::SizeCap {
            size: grid.len(),
            cap,
        });
    }
    Ok(())
}

/// Row of the dense spectral `-Δ` on one periodic axis, indexed by the offset
/// `(j - l) mod n`: `t_r = n⁻¹ Σ_m k_m² cos(2π m r / n)`.
fn spectral_axis_row(grid: &Grid) -> Vec<f64> {
    let n = grid.points_per_axis();
    let mut row = vec![0.0; n];
    for r in 0..=n / 2 {
        let value = compensated_sum((0..n).map(|i| {
            let m = grid.mode_number(i);
            grid.wavenumber(i).powi(2) * (TAU * (m * r as i64) as f64 / n as f64).cos()
        })) / n as f64;
        row[r] = value;
        row[(n - r) % n] = value;
    }
    row
}

/// Dense `-Δ` (spectral, Kronecker sum over axes), exactly symmetric.
pub fn spectral_laplacian_matrix(grid: &Grid) -> DMatrix<f64> {
    let n = grid.points_per_axis();
    let row = spectral_axis_row(grid);
    let size = grid.len();
    let mut m = DMatrix::zeros(size, size);
    for p in 0..size {
        let ip = grid.multi_index(p);
        for axis in 0..grid.dim() {
            let stride = grid.stride(axis);
            let base = p - ip[axis] * stride;
            for j in 0..n {
                let q = base + j * stride;
                m[(p, q)] += row[(ip[axis] + n - j) % n];
            }
        }
    }
    m
}

/// `H = -Δ + V` with the spectral Laplacian, weights `h^d`.
pub fn build_h_potential(grid: &Grid, potential: &PotentialField) -> Result<DiscreteHamiltonian> {
    build_h_potential_capped(grid, potential, DEFAULT_DENSE_CAP)
}

pub fn build_h_potential_capped(
    grid: &Grid,
    potential: &PotentialField,
    cap: usize,
) -> Result<DiscreteHamiltonian> {
    check_cap(grid, cap)?;
    if potential.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let hd = grid.cell_volume();
    let mut form = spectral_laplacian_matrix(grid);
    for (i, v) in potential.values().iter().enumerate() {
        form[(i, i)] += v;
    }
    form *= hd;
    Ok(DiscreteHamiltonian::from_form(
        *grid,
        form,
        vec![hd; grid.len()],
    ))
}

/// `H = -Δ_g = -(1/√g) ∂_i(√g g^{ik} ∂_k)` in divergence form.
///
/// The quadratic form `⟨f, Hf⟩_W = ∫ √g g^{ik} ∂_i f ∂_k f` is discretized by
/// averaging the forward- and backward-difference gradients, each weighted by
/// `√g g^{ik}` at the grid point. The result is symmetric positive
/// semidefinite, annihilates constants, and is second-order accurate.
pub fn build_h_curved(grid: &Grid, metric: &MetricField) -> Result<DiscreteHamiltonian> {
    build_h_curved_capped(grid, metric, DEFAULT_DENSE_CAP)
}

pub fn build_h_curved_capped(
    grid: &Grid,
    metric: &MetricField,
    cap: usize,
) -> Result<DiscreteHamiltonian> {
    check_cap(grid, cap)?;
    if metric.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let d = grid.dim();
    let n = grid.points_per_axis();
    let h = grid.spacing();
    let hd = grid.cell_volume();
    let size = grid.len();
    let shifted = |p: usize, axis: usize, forward: bool| -> usize {
        let mut idx = grid.multi_index(p);
        idx[axis] = if forward {
            (idx[axis] + 1) % n
        } else {
            (idx[axis] + n - 1) % n
        };
        grid.flat_index(&idx)
    };
    let mut form = DMatrix::<f64>::zeros(size, size);
    for p in 0..size {
        let sqrt_g = metric.g_det[p].sqrt();
        for forward in [true, false] {
            // gradient stencil along each axis: (index, sign) pairs
            let stencil: Vec<[(usize, f64); 2]> = (0..d)
                .map(|a| {
                    if forward {
                        [(shifted(p, a, true), 1.0), (p, -1.0)]
                    } else {
                        [(p, 1.0), (shifted(p, a, false), -1.0)]
                    }
                })
                .collect();
            for a in 0..d {
                for b in 0..d {
                    let c = 0.5 * hd * sqrt_g * metric.g_inv(p, a, b) / (h * h);
                    if c == 0.0 {
                        continue;
                    }
                    for &(i, si) in &stencil[a] {
                        for &(j, sj) in &stencil[b] {
                            form[(i, j)] += c * si * sj;
                        }
                    }
                }
            }
        }
    }
    for i in 0..size {
        for j in i + 1..size {
            let s = 0.5 * (form[(i, j)] + form[(j, i)]);
            form[(i, j)] = s;
            form[(j, i)] = s;
        }
    }
    let weights = metric.g_det.iter().map(|g| g.sqrt() * hd).collect();
    Ok(DiscreteHamiltonian::from_form(*grid, form, weights))
}

/// `u(t) = cos(Ht)u₀ + sin(Ht)v₀`, `v(t) = cos(Ht)v₀ - sin(Ht)u₀` through the
/// eigenexpansion of `H`.
pub fn propagate_cos_sin(
    h: &DiscreteHamiltonian,
    u0: &RealField,
    v0: &RealField,
    t: f64,
) -> Result<RealFieldPair> {
    check_time(t)?;
    let cu = h.coefficients(u0)?;
    let cv = h.coefficients(v0)?;
    let n = cu.len();
    let mut au = DVector::zeros(n);
    let mut av = DVector::zeros(n);
    for j in 0..n {
        let angle = h.eigenvalues[j] * t;
        let (cos, sin) = (angle.cos(), angle.sin());
        au[j] = cos * cu[j] + sin * cv[j];
        av[j] = cos * cv[j] - sin * cu[j];
    }
    let u = &h.eigenvectors * au;
    let v = &h.eigenvectors * av;
    RealFieldPair::new(
        RealField::new(h.grid, u.iter().copied().collect())?,
        RealField::new(h.grid, v.iter().copied().collect())?,
    )
}

/// Spectral helpers for the expanded identity: `Δf` and pointwise products.
struct SpectralOps {
    engine: FftEngine,
    k2: Vec<f64>,
}

impl SpectralOps {
    fn laplacian(&self, f: &[f64]) -> Vec<f64> {
        let mut c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.engine.forward_in_place(&mut c);
        for (c, &k2) in c.iter_mut().zip(&self.k2) {
            *c *= -k2;
        }
        self.engine.inverse_in_place(&mut c);
        c.iter().map(|z| z.re).collect()
    }

    fn bilaplacian(&self, f: &[f64]) -> Vec<f64> {
        let mut c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.engine.forward_in_place(&mut c);
        for (c, &k2) in c.iter_mut().zip(&self.k2) {
            *c *= k2 * k2;
        }
        self.engine.inverse_in_place(&mut c);
        c.iter().map(|z| z.re).collect()
    }
}

/// `‖H²u - (Δ²u - Δ(Vu) - VΔu + V²u)‖∞ / ‖H²u‖∞` for `H = -Δ + V`, where the
/// left side applies `H` twice and the right side is the term-by-term
/// expansion. All derivatives are spectral.
pub fn expanded_eb_residual(potential: &PotentialField, u: &RealField) -> Result<f64> {
    let grid = *u.grid();
    if potential.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    let ops = SpectralOps {
        engine: FftEngine::new(&grid),
        k2: grid.k_squared(),
    };
    let v = potential.values();
    let apply_h = |f: &[f64]| -> Vec<f64> {
        ops.laplacian(f)
            .iter()
            .zip(f.iter().zip(v))
            .map(|(lap, (f, v))| -lap + v * f)
            .collect()
    };
    let h2u = apply_h(&apply_h(u.values()));

    let lap_u = ops.laplacian(u.values());
    let vu: Vec<f64> = v.iter().zip(u.values()).map(|(v, u)| v * u).collect();
    let lap_vu = ops.laplacian(&vu);
    let bilap_u = ops.bilaplacian(u.values());
    let expanded: Vec<f64> = (0..grid.len())
        .map(|i| bilap_u[i] - lap_vu[i] - v[i] * lap_u[i] + v[i] * v[i] * u.values()[i])
        .collect();

    let diff: Vec<f64> = h2u.iter().zip(&expanded).map(|(a, b)| a - b).collect();
    let scale = sup_norm_real(&h2u);
    let num = sup_norm_real(&diff);
    Ok(if scale == 0.0 { num } else { num / scale })
}

/// Scale `s = ħ/(2m) = sqrt(F·I/μ)` relating a beam `μẅ + F·I Δ²w = 0` to the
/// Schrödinger equation `iħψ̇ = -(ħ²/2m)Δψ`. The beam dispersion is
/// `ω = s·k²`, matching the phase `e^{-isk²t}`.
pub fn material_correspondence(mu: f64, stiffness: f64, inertia: f64) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mass density must be positive, got {mu}"
        )));
    }
    let fi = stiffness * inertia;
    if !(fi.is_finite() && fi > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stiffness·inertia must be positive, got {fi}"
        )));
    }
    Ok((fi / mu).sqrt())
}
