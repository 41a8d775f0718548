//! Small numerical helpers shared across modules: compensated sums, norms,
//! least-squares line fits and convergence orders.

use num_complex::Complex64;

/// Neumaier-compensated summation. Reported norms go through this so the
/// result does not depend on how the terms were produced.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

pub fn sup_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn sup_norm_real(values: &[f64]) -> f64 {
    values.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn sup_distance_real(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Σ|z|², compensated.
pub fn norm_sqr(values: &[Complex64]) -> f64 {
    compensated_sum(values.iter().map(|z| z.norm_sqr()))
}

/// Ordinary least-squares fit `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope under the usual i.i.d. residual model.
    pub slope_stderr: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 3 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let x_mean = compensated_sum(x.iter().copied()) / nf;
    let y_mean = compensated_sum(y.iter().copied()) / nf;
    let sxx = compensated_sum(x.iter().map(|&xi| (xi - x_mean).powi(2)));
    if sxx == 0.0 {
        return None;
    }
    let sxy = compensated_sum(
        x.iter()
            .zip(y)
            .map(|(&xi, &yi)| (xi - x_mean) * (yi - y_mean)),
    );
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let rss = compensated_sum(
        x.iter()
            .zip(y)
            .map(|(&xi, &yi)| (yi - intercept - slope * xi).powi(2)),
    );
    let slope_stderr = (rss / (nf - 2.0) / sxx).sqrt();
    Some(LineFit {
        slope,
        intercept,
        slope_stderr,
    })
}

/// Observed convergence order from errors at step sizes `h` and `h/ratio`.
pub fn observed_order(coarse_error: f64, fine_error: f64, ratio: f64) -> f64 {
    (coarse_error / fine_error).ln() / ratio.ln()
}
