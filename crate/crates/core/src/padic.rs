//! Schrödinger and Euler–Bernoulli evolution over a finite window of `Q_p`.
//!
//! The window is the group `G = p^{-M}Z_p / p^N Z_p` with `P = p^{M+N}`
//! elements. An element is stored as the integer `X ∈ [0, P)` with
//! `x = X·p^{-M}`; its digit vector `(a_{-M}, …, a_{N-1})` is the base-`p`
//! expansion of `X`. The dual group `p^{-N}Z_p / p^M Z_p` is indexed the same
//! way by `K` with `k = K·p^{-N}`, so `{kx}_p = (KX mod P)/P` and the Fourier
//! transform on `G` is a length-`P` DFT.
//!
//! The Vladimirov operator `D^α` is the multiplier `|k|_p^α`. Every function
//! on `G` is locally constant with compact support, so no regularization is
//! involved and any `α > 0` is admissible.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::sup_distance;
use crate::spectral::{check_finite_complex, check_finite_real};

/// Largest admissible window size `p^{M+N}`.
pub const MAX_WINDOW: usize = 1 << 22;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicGrid {
    p: u64,
    m: u32,
    n: u32,
}

impl PAdicGrid {
    pub fn new(p: u64, m: u32, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        let size = p
            .checked_pow(m + n)
            .filter(|&s| s <= MAX_WINDOW as u64)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("window {p}^({m}+{n}) exceeds {MAX_WINDOW}"))
            })?;
        debug_assert!(size >= 1);
        Ok(Self { p, m, n })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn outer_scale(&self) -> u32 {
        self.m
    }

    pub fn inner_scale(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.p.pow(self.m + self.n) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The window with both scales increased by one.
    pub fn doubled(&self) -> Result<Self> {
        Self::new(self.p, self.m + 1, self.n + 1)
    }

    /// Index of `num / p^den_pow`, reduced modulo `p^N Z_p`.
    pub fn element_from_ratio(&self, num: i64, den_pow: u32) -> Result<usize> {
        if den_pow > self.m {
            return Err(Error::InvalidParameter(format!(
                "p^-{den_pow} lies outside the window p^-{}Z_p",
                self.m
            )));
        }
        let modulus = self.len() as i128;
        let scale = (self.p as i128).pow(self.m - den_pow);
        Ok((num as i128 * scale).rem_euclid(modulus) as usize)
    }

    /// Digits `(a_{-M}, …, a_{N-1})` of an element.
    pub fn digits(&self, x: usize) -> Vec<u32> {
        let mut rest = x as u64;
        (0..self.m + self.n)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d as u32
            })
            .collect()
    }

    /// Element with the given digits `(a_{-M}, …, a_{N-1})`.
    pub fn from_digits(&self, digits: &[u32]) -> Result<usize> {
        if digits.len() != (self.m + self.n) as usize {
            return Err(Error::LengthMismatch {
                expected: (self.m + self.n) as usize,
                actual: digits.len(),
            });
        }
        let mut x = 0u64;
        for &d in digits.iter().rev() {
            if d as u64 >= self.p {
                return Err(Error::InvalidParameter(format!(
                    "digit {d} out of range for p = {}",
                    self.p
                )));
            }
            x = x * self.p + d as u64;
        }
        Ok(x as usize)
    }

    fn index_valuation(&self, x: usize) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let mut x = x as u64;
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// `v_p(x)`, `None` for the zero element.
    pub fn valuation(&self, x: usize) -> Option<i32> {
        self.index_valuation(x).map(|v| v as i32 - self.m as i32)
    }

    /// `|k|_p` of the dual element with index `k`.
    pub fn dual_norm(&self, k: usize) -> f64 {
        match self.index_valuation(k) {
            None => 0.0,
            Some(v) => (self.p as f64).powi(self.n as i32 - v as i32),
        }
    }

    /// `|k|_p^α` for every dual index.
    pub fn multiplier(&self, alpha: f64) -> Vec<f64> {
        (0..self.len())
            .map(|k| {
                let norm = self.dual_norm(k);
                if norm == 0.0 {
                    0.0
                } else {
                    norm.powf(alpha)
                }
            })
            .collect()
    }

    /// Index of `-x`.
    pub fn negate(&self, x: usize) -> usize {
        (self.len() - x) % self.len()
    }

    /// Digits from `a_{-M}` to `a_{N-1}`, space separated.
    pub fn digit_string(&self, x: usize) -> String {
        self.digits(x)
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `|x|_p = p^{-v(x)}`, `0` for the zero element.
pub fn padic_norm(grid: &PAdicGrid, x: usize) -> f64 {
    match grid.valuation(x) {
        None => 0.0,
        Some(v) => (grid.p as f64).powi(-v),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "Vladimirov exponent must be positive, got {alpha}"
        )))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PAdicField {
    grid: PAdicGrid,
    values: Vec<Complex64>,
}

impl PAdicField {
    pub fn new(grid: PAdicGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        check_finite_complex(&values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: PAdicGrid, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        Self::new(grid, (0..grid.len()).map(f).collect())
    }

    pub fn from_real(grid: PAdicGrid, values: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn grid(&self) -> &PAdicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Counting-measure `l²` norm.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        crate::numerics::sup_norm(&self.values)
    }

    /// CSV with header `digits,valuation,re,im`; the zero element has
    /// valuation `inf`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["digits", "valuation", "re", "im"])?;
        for (x, z) in self.values.iter().enumerate() {
            let v = self
                .grid
                .valuation(x)
                .map_or_else(|| "inf".to_string(), |v| v.to_string());
            w.write_record(&[
                self.grid.digit_string(x),
                v,
                format!("{:e}", z.re),
                format!("{:e}", z.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PAdicSpectral {
    grid: PAdicGrid,
    coeffs: Vec<Complex64>,
}

impl PAdicSpectral {
    pub fn new(grid: PAdicGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        check_finite_complex(&coeffs)?;
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &PAdicGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn scaled(&self, factor: impl Fn(usize) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * factor(k))
                .collect(),
        }
    }
}

/// Real `(u, v)` pair on a p-adic window.
#[derive(Debug, Clone, PartialEq)]
pub struct PAdicPair {
    pub grid: PAdicGrid,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl PAdicPair {
    pub fn new(grid: PAdicGrid, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        for len in [u.len(), v.len()] {
            if len != grid.len() {
                return Err(Error::LengthMismatch {
                    expected: grid.len(),
                    actual: len,
                });
            }
        }
        check_finite_real(&u)?;
        check_finite_real(&v)?;
        Ok(Self { grid, u, v })
    }

    pub fn from_field(psi: &PAdicField) -> Self {
        Self {
            grid: psi.grid,
            u: psi.values.iter().map(|z| z.re).collect(),
            v: psi.values.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_field(&self) -> PAdicField {
        PAdicField {
            grid: self.grid,
            values: self
                .u
                .iter()
                .zip(&self.v)
                .map(|(&u, &v)| Complex64::new(u, v))
                .collect(),
        }
    }
}

fn transform(grid: &PAdicGrid, values: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    // rustfft's inverse carries e^{+2πi KX/P}, the character e^{2πi{kx}_p}.
    let fft = if inverse {
        planner.plan_fft_forward(buf.len())
    } else {
        planner.plan_fft_inverse(buf.len())
    };
    fft.process(&mut buf);
    let scale = 1.0 / (grid.len() as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

/// `f̃(k) = P^{-1/2} Σ_x f(x) e^{2πi{kx}_p}`.
pub fn padic_fourier(f: &PAdicField) -> PAdicSpectral {
    PAdicSpectral {
        grid: f.grid,
        coeffs: transform(&f.grid, &f.values, false),
    }
}

pub fn padic_inverse_fourier(s: &PAdicSpectral) -> PAdicField {
    PAdicField {
        grid: s.grid,
        values: transform(&s.grid, &s.coeffs, true),
    }
}

/// `D^α f`.
pub fn vladimirov_apply(f: &PAdicField, alpha: f64) -> Result<PAdicField> {
    check_alpha(alpha)?;
    let mult = f.grid.multiplier(alpha);
    let spec = padic_fourier(f).scaled(|k| Complex64::new(mult[k], 0.0));
    Ok(padic_inverse_fourier(&spec))
}

/// Solution of `iψ̇ = D^α ψ`: mode `k` picks up `e^{-i|k|_p^α t}`.
pub fn evolve_padic_schrodinger(psi0: &PAdicField, alpha: f64, t: f64) -> Result<PAdicField> {
    check_alpha(alpha)?;
    check_time(t)?;
    let mult = psi0.grid.multiplier(alpha);
    let spec = padic_fourier(psi0).scaled(|k| Complex64::from_polar(1.0, -mult[k] * t));
    Ok(padic_inverse_fourier(&spec))
}

/// Spectra `(ũ(t), ṽ(t))` of the coupled beam pair:
/// `ũ₀ cos(|k|^α t) + ṽ₀ sin(|k|^α t)` and `ṽ₀ cos(|k|^α t) - ũ₀ sin(|k|^α t)`.
pub fn evolve_padic_eb_spectrum(
    u0: &PAdicSpectral,
    v0: &PAdicSpectral,
    alpha: f64,
    t: f64,
) -> Result<(PAdicSpectral, PAdicSpectral)> {
    check_alpha(alpha)?;
    check_time(t)?;
    if u0.grid != v0.grid {
        return Err(Error::GridMismatch);
    }
    let mult = u0.grid.multiplier(alpha);
    let (u, v): (Vec<_>, Vec<_>) = u0
        .coeffs
        .iter()
        .zip(&v0.coeffs)
        .zip(&mult)
        .map(|((&u, &v), &lam)| {
            let (sin, cos) = (lam * t).sin_cos();
            (u * cos + v * sin, v * cos - u * sin)
        })
        .unzip();
    Ok((
        PAdicSpectral {
            grid: u0.grid,
            coeffs: u,
        },
        PAdicSpectral {
            grid: u0.grid,
            coeffs: v,
        },
    ))
}

/// Evolves the real pair `(u₀, v₀)` with coupled velocities
/// `u̇(0) = D^α v₀`, `v̇(0) = -D^α u₀`; each component solves
/// `ü + D^{2α} u = 0`.
pub fn evolve_padic_eb(state: &PAdicPair, alpha: f64, t: f64) -> Result<PAdicPair> {
    let grid = state.grid;
    let u0 = padic_fourier(&PAdicField::from_real(grid, &state.u)?);
    let v0 = padic_fourier(&PAdicField::from_real(grid, &state.v)?);
    let (u, v) = evolve_padic_eb_spectrum(&u0, &v0, alpha, t)?;
    // The multiplier is even in k, so real data stays real.
    let re = |s: &PAdicSpectral| -> Vec<f64> {
        padic_inverse_fourier(s)
            .values
            .iter()
            .map(|z| z.re)
            .collect()
    };
    Ok(PAdicPair {
        grid,
        u: re(&u),
        v: re(&v),
    })
}

/// `½ Σ_k |k|_p^α (|ũ(k)|² + |ṽ(k)|²)`.
pub fn padic_energy(state: &PAdicPair, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let grid = state.grid;
    let mult = grid.multiplier(alpha);
    let u = padic_fourier(&PAdicField::from_real(grid, &state.u)?);
    let v = padic_fourier(&PAdicField::from_real(grid, &state.v)?);
    let energy = crate::numerics::compensated_sum(
        u.coeffs
            .iter()
            .zip(&v.coeffs)
            .zip(&mult)
            .map(|((a, b), &lam)| lam * (a.norm_sqr() + b.norm_sqr())),
    );
    Ok(0.5 * energy)
}

/// Radial function `f(|x|_p)`.
pub fn radial_field(grid: PAdicGrid, f: impl Fn(f64) -> f64) -> Result<PAdicField> {
    PAdicField::from_fn(grid, |x| Complex64::new(f(padic_norm(&grid, x)), 0.0))
}

/// Random field whose dual coefficients are uniform on the unit disk times
/// `exp(-(|k|_p/p)²)`, so the content at large `|k|_p` is negligible.
pub fn random_enveloped_field<R: Rng>(grid: PAdicGrid, rng: &mut R) -> PAdicField {
    let p = grid.p as f64;
    let coeffs = (0..grid.len())
        .map(|k| {
            let envelope = (-(grid.dual_norm(k) / p).powi(2)).exp();
            let r = rng.gen::<f64>().sqrt();
            Complex64::from_polar(r * envelope, TAU * rng.gen::<f64>())
        })
        .collect();
    padic_inverse_fourier(&PAdicSpectral { grid, coeffs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PAdicEquivalence {
    pub prime: u64,
    pub alpha: f64,
    pub time: f64,
    /// `‖ψ(t) - (u(t) + iv(t))‖∞ / ‖ψ₀‖∞`.
    pub residual: f64,
    /// `|‖ψ(t)‖ - ‖ψ₀‖| / ‖ψ₀‖`.
    pub norm_drift: f64,
    /// `|H(t) - H(0)| / H(0)`.
    pub energy_drift: f64,
}

/// Runs both evolutions from `ψ₀` and compares them.
pub fn padic_equivalence(psi0: &PAdicField, alpha: f64, t: f64) -> Result<PAdicEquivalence> {
    let psi = evolve_padic_schrodinger(psi0, alpha, t)?;
    let pair0 = PAdicPair::from_field(psi0);
    let pair = evolve_padic_eb(&pair0, alpha, t)?;
    let scale = psi0.sup_norm();
    let distance = sup_distance(psi.values(), pair.to_field().values());
    let norm0 = psi0.l2_norm();
    let e0 = padic_energy(&pair0, alpha)?;
    let e1 = padic_energy(&pair, alpha)?;
    let rel = |a: f64, b: f64| {
        if b > 0.0 {
            (a - b).abs() / b
        } else {
            (a - b).abs()
        }
    };
    Ok(PAdicEquivalence {
        prime: psi0.grid.p,
        alpha,
        time: t,
        residual: if scale > 0.0 {
            distance / scale
        } else {
            distance
        },
        norm_drift: rel(psi.l2_norm(), norm0),
        energy_drift: rel(e1, e0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationReport {
    pub alpha: f64,
    /// Sup-norm change of `D^α f` on the original window after doubling.
    pub change: f64,
    /// The logged reference bound `p^{-N·min(1, α)}`.
    pub reference_bound: f64,
}

/// Applies `D^α` to `f` on its window and on the doubled window (with `f`
/// extended by zero outside `p^{-M}Z_p`), and compares the results on the
/// original window.
pub fn truncation_consistency(f: &PAdicField, alpha: f64) -> Result<TruncationReport> {
    let small = f.grid;
    let big = small.doubled()?;
    let p = small.p as usize;
    let len = small.len();
    // x = X'·p^{-(M+1)} lies in p^{-M}Z_p iff p | X', and then X = X'/p mod P.
    let lifted = PAdicField::from_fn(big, |x| {
        if x % p == 0 {
            f.values[(x / p) % len]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let d_small = vladimirov_apply(f, alpha)?;
    let d_big = vladimirov_apply(&lifted, alpha)?;
    let change = (0..len)
        .map(|x| (d_small.values[x] - d_big.values[x * p]).norm())
        .fold(0.0, f64::max);
    Ok(TruncationReport {
        alpha,
        change,
        reference_bound: (small.p as f64).powf(-(small.n as f64) * alpha.min(1.0)),
    })
}
