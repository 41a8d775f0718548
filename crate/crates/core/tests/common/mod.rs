//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the solver paths it is used to check.

#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use wavebeam::spectral::Grid;

/// Unitary DFT by direct summation: `c_m = N^{-1/2} Σ_x f(x) e^{-i k_m·x}`.
pub fn naive_dft(grid: &Grid, f: &[Complex64]) -> Vec<Complex64> {
    naive_dft_signed(grid, f, -1.0)
}

/// Inverse of [`naive_dft`].
pub fn naive_idft(grid: &Grid, c: &[Complex64]) -> Vec<Complex64> {
    naive_dft_signed(grid, c, 1.0)
}

fn naive_dft_signed(grid: &Grid, f: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let d = grid.dim();
    let scale = 1.0 / (grid.len() as f64).sqrt();
    let index = |mut flat: usize| -> Vec<usize> {
        let mut idx = vec![0; d];
        for a in (0..d).rev() {
            idx[a] = flat % n;
            flat /= n;
        }
        idx
    };
    (0..grid.len())
        .map(|m| {
            let mi = index(m);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, fx) in f.iter().enumerate() {
                let xi = index(x);
                let phase: usize = mi.iter().zip(&xi).map(|(a, b)| a * b).sum();
                let angle = sign * TAU * (phase % n) as f64 / n as f64;
                acc += fx * Complex64::from_polar(1.0, angle);
            }
            acc * scale
        })
        .collect()
}

/// `|k|²` of FFT-order mode `m` on `grid`, from the mode numbers directly.
pub fn mode_k2(grid: &Grid, flat: usize) -> f64 {
    let n = grid.points_per_axis() as i64;
    let base = TAU / grid.box_length();
    let mut rest = flat as i64;
    let mut k2 = 0.0;
    for _ in 0..grid.dim() {
        let i = rest % n;
        rest /= n;
        let m = if i < n / 2 { i } else { i - n };
        k2 += (base * m as f64).powi(2);
    }
    k2
}

/// Classical fourth-order Runge–Kutta for `ẏ = f(y)`.
pub fn rk4(mut y: Vec<f64>, f: impl Fn(&[f64]) -> Vec<f64>, dt: f64, steps: usize) -> Vec<f64> {
    let axpy = |y: &[f64], k: &[f64], a: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(y, k)| y + a * k).collect()
    };
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&axpy(&y, &k1, 0.5 * dt));
        let k3 = f(&axpy(&y, &k2, 0.5 * dt));
        let k4 = f(&axpy(&y, &k3, dt));
        for i in 0..y.len() {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Implicit midpoint for `ż = -iλz` over time `t` with `steps` steps; the
/// step map is the Cayley factor `(1 - iλh/2)/(1 + iλh/2)`.
pub fn implicit_midpoint(z0: Complex64, lambda: f64, t: f64, steps: u64) -> Complex64 {
    let h = t / steps as f64;
    let a = Complex64::new(0.0, 0.5 * lambda * h);
    let mut factor = (Complex64::new(1.0, 0.0) - a) / (Complex64::new(1.0, 0.0) + a);
    let mut out = z0;
    let mut e = steps;
    while e > 0 {
        if e & 1 == 1 {
            out *= factor;
        }
        factor = factor * factor;
        e >>= 1;
    }
    out
}

/// Root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    assert!(fa * f(b) <= 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Smallest positive root of `cos β cosh β = 1`.
pub fn clamped_beta1() -> f64 {
    bisect(|b| b.cos() * b.cosh() - 1.0, 4.0, 5.0)
}

/// Base-`p` digits of `x` with `len` places, least significant first.
pub fn base_digits(mut x: u64, p: u64, len: u32) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// `{k·x}_p` from digit expansions: with `x = Σ a_i p^i` (`i ≥ -M`) and
/// `k = Σ b_j p^j` (`j ≥ -N`), sums `a_i b_j p^{i+j}` over `i + j < 0`.
pub fn padic_fractional_part(p: u64, m: u32, n: u32, x_index: u64, k_index: u64) -> f64 {
    let len = m + n;
    let a = base_digits(x_index, p, len);
    let b = base_digits(k_index, p, len);
    let modulus = p.pow(len) as u128;
    let mut acc: u128 = 0;
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            // exponent of p in a_i b_j p^{(i - M) + (j - N)}
            let e = i as i64 - m as i64 + j as i64 - n as i64;
            if e < 0 && ai * bj != 0 {
                let shift = (e + len as i64) as u32;
                acc += (ai * bj) as u128 * (p as u128).pow(shift);
            }
        }
    }
    (acc % modulus) as f64 / modulus as f64
}

/// `f̃(k) = P^{-1/2} Σ_x f(x) e^{2πi{kx}_p}` by direct character sums.
pub fn padic_character_sum(p: u64, m: u32, n: u32, f: &[Complex64]) -> Vec<Complex64> {
    let size = f.len() as u64;
    let scale = 1.0 / (size as f64).sqrt();
    (0..size)
        .map(|k| {
            f.iter()
                .enumerate()
                .filter(|(_, fx)| fx.norm_sqr() > 0.0)
                .map(|(x, fx)| {
                    fx * Complex64::from_polar(
                        1.0,
                        TAU * padic_fractional_part(p, m, n, x as u64, k),
                    )
                })
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

/// `|k|_p` for `k = K·p^{-N}`, from the digit expansion.
pub fn padic_dual_norm(p: u64, m: u32, n: u32, k_index: u64) -> f64 {
    let digits = base_digits(k_index, p, m + n);
    match digits.iter().position(|&d| d != 0) {
        None => 0.0,
        Some(j) => (p as f64).powi(n as i32 - j as i32),
    }
}

pub fn sup_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn sup_diff_real(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
