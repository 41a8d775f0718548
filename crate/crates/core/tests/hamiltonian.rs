mod common;

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use std::f64::consts::TAU;
use wavebeam::hamiltonian::{
    build_h_curved, build_h_potential, expanded_eb_residual, propagate_cos_sin, MetricField,
    PotentialField,
};
use wavebeam::initial_data::{random_smooth_real, seeded_rng};
use wavebeam::numerics::observed_order;
use wavebeam::spectral::{Grid, RealField};
use wavebeam::symplectic::{exact_rotation, SymplecticState};

use common::sup_diff_real;

/// Lowest eigenvalues of the periodic three-point `-d²/dx² + V`.
fn fd_eigenvalues(n: usize, length: f64, v: impl Fn(f64) -> f64, count: usize) -> Vec<f64> {
    let h = length / n as f64;
    let m = DMatrix::from_fn(n, n, |i, j| {
        let dist = (i as i64 - j as i64).rem_euclid(n as i64);
        match dist {
            0 => 2.0 / (h * h) + v(i as f64 * h),
            1 => -1.0 / (h * h),
            d if d == n as i64 - 1 => -1.0 / (h * h),
            _ => 0.0,
        }
    });
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e.truncate(count);
    e
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn potential_spectrum_agrees_with_finite_differences() {
    let v = |x: f64| 1.0 + 0.8 * x.cos() + 0.3 * (2.0 * x).sin();
    let g = Grid::new(1, 64, TAU).unwrap();
    let potential = PotentialField::new(RealField::from_fn(g, |x| v(x[0])).unwrap());
    let h = build_h_potential(&g, &potential).unwrap();
    let spectral = &h.eigenvalues()[..5];
    let e1 = max_diff(&fd_eigenvalues(64, TAU, v, 5), spectral);
    let e2 = max_diff(&fd_eigenvalues(128, TAU, v, 5), spectral);
    // three-point error k⁴h²/12 ≈ 0.013 at k = 2, n = 64
    assert!(e1 < 2e-2, "{e1}");
    let order = observed_order(e1, e2, 2.0);
    assert!((order - 2.0).abs() < 0.2, "order {order}");
}

#[test]
fn propagator_solves_the_generalized_equation() {
    let g = Grid::new(1, 128, TAU).unwrap();
    let mut rng = seeded_rng(41);
    let v = random_smooth_real(g, 4, &mut rng);
    let h = build_h_potential(&g, &PotentialField::new(v)).unwrap();
    let u0 = random_smooth_real(g, 5, &mut rng);
    let v0 = random_smooth_real(g, 5, &mut rng);
    let (t, eps) = (0.7, 1e-5);
    let at = |t: f64| propagate_cos_sin(&h, &u0, &v0, t).unwrap();
    let (mid, ahead, behind) = (at(t), at(t + eps), at(t - eps));
    // iψ̇ = Hψ  ⇔  u̇ = Hv, v̇ = -Hu
    let hu = h.apply(mid.u.values());
    let hv = h.apply(mid.v.values());
    for i in 0..g.len() {
        let du = (ahead.u.values()[i] - behind.u.values()[i]) / (2.0 * eps);
        let dv = (ahead.v.values()[i] - behind.v.values()[i]) / (2.0 * eps);
        assert!((du - hv[i]).abs() <= 1e-4, "{i}: {du} vs {}", hv[i]);
        assert!((dv + hu[i]).abs() <= 1e-4);
    }
}

#[test]
fn zero_potential_reduces_to_the_free_flow() {
    let g = Grid::new(1, 128, TAU).unwrap();
    let mut rng = seeded_rng(3);
    let u0 = random_smooth_real(g, 8, &mut rng);
    let v0 = random_smooth_real(g, 8, &mut rng);
    let h = build_h_potential(&g, &PotentialField::zero(g)).unwrap();
    let t = 2.5;
    let out = propagate_cos_sin(&h, &u0, &v0, t).unwrap();
    let state =
        SymplecticState::new(wavebeam::spectral::RealFieldPair::new(u0, v0).unwrap(), 0.0).unwrap();
    let free = exact_rotation(&state, t).unwrap();
    assert!(sup_diff_real(out.u.values(), free.pair.u.values()) <= 1e-10);
    assert!(sup_diff_real(out.v.values(), free.pair.v.values()) <= 1e-10);
}

#[test]
fn flat_metric_matches_free_spectrum_at_second_order() {
    let free = [0.0, 1.0, 1.0, 4.0, 4.0];
    let error = |n: usize| {
        let g = Grid::new(1, n, TAU).unwrap();
        let h = build_h_curved(&g, &MetricField::flat(g)).unwrap();
        max_diff(&h.eigenvalues()[..5], &free)
    };
    let (e1, e2) = (error(32), error(64));
    let ratio = e1 / e2;
    assert!((ratio / 4.0 - 1.0).abs() <= 0.2, "ratio {ratio}");
}

#[test]
fn curved_circle_spectrum_follows_arc_length() {
    // On a circle with metric g(x), -Δ_g = -d²/ds² in arc length, so the
    // spectrum is (2πm/ℓ)² with ℓ = ∫√g dx.
    let phi = |x: f64| 0.4 * x.sin() + 0.2 * (2.0 * x).cos();
    let ell = {
        let m = 20000;
        (0..m)
            .map(|i| (-0.5 * phi(TAU * (i as f64 + 0.5) / m as f64)).exp())
            .sum::<f64>()
            * TAU
            / m as f64
    };
    let exact: Vec<f64> = [0, 1, 1, 2, 2]
        .iter()
        .map(|&m| (TAU * m as f64 / ell).powi(2))
        .collect();
    let error = |n: usize| {
        let g = Grid::new(1, n, TAU).unwrap();
        let metric = MetricField::conformal(&RealField::from_fn(g, |x| phi(x[0])).unwrap());
        let h = build_h_curved(&g, &metric).unwrap();
        assert!(h.self_adjointness_residual() <= 1e-12);
        max_diff(&h.eigenvalues()[..5], &exact)
    };
    let (e1, e2) = (error(64), error(128));
    assert!(e2 < 1e-2, "{e2}");
    let order = observed_order(e1, e2, 2.0);
    assert!((order - 2.0).abs() < 0.3, "order {order}");
}

#[test]
fn conformal_plane_operator_is_self_adjoint_and_nonnegative() {
    let g = Grid::new(2, 12, TAU).unwrap();
    let phi = random_smooth_real(g, 2, &mut seeded_rng(6));
    let h = build_h_curved(&g, &MetricField::conformal(&phi)).unwrap();
    assert!(h.self_adjointness_residual() <= 1e-12);
    assert!(h.orthonormality_residual() <= 1e-10);
    assert!(h.eigenvalues()[0] > -1e-10);
    assert!(h.eigenvalues()[1] > 1e-3);
}

#[test]
fn eigenvalue_csv_lists_every_eigenvalue() {
    let g = Grid::new(1, 16, TAU).unwrap();
    let h = build_h_potential(&g, &PotentialField::zero(g)).unwrap();
    let mut buf = Vec::new();
    h.write_eigenvalue_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next(), Some("index,lambda"));
    assert_eq!(text.lines().count(), 17);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn expanded_identity_holds_for_random_data(seed in any::<u64>()) {
        let g = Grid::new(1, 128, TAU).unwrap();
        let mut rng = seeded_rng(seed);
        let v = PotentialField::new(random_smooth_real(g, 6, &mut rng));
        let u = random_smooth_real(g, 8, &mut rng);
        prop_assert!(expanded_eb_residual(&v, &u).unwrap() <= 1e-10);
    }

    #[test]
    fn propagator_preserves_the_weighted_norm(seed in any::<u64>(), t in 0.0f64..20.0) {
        let g = Grid::new(1, 32, TAU).unwrap();
        let mut rng = seeded_rng(seed);
        let h = build_h_potential(&g, &PotentialField::new(random_smooth_real(g, 3, &mut rng))).unwrap();
        let u0 = random_smooth_real(g, 4, &mut rng);
        let v0 = random_smooth_real(g, 4, &mut rng);
        let before = u0.l2_norm_sqr() + v0.l2_norm_sqr();
        let out = propagate_cos_sin(&h, &u0, &v0, t).unwrap();
        prop_assert!((out.l2_norm_sqr() - before).abs() <= 1e-10 * before);
    }
}
