mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};
use wavebeam::initial_data::{random_resolved_field, seeded_rng};
use wavebeam::numerics::observed_order;
use wavebeam::spectral::{dft_forward, Grid, RealField, RealFieldPair};
use wavebeam::symplectic::{
    exact_rotation, hamiltonian_energy, leapfrog_integrate, leapfrog_mode_matrix,
    leapfrog_stability_bound, leapfrog_with_trace, EnergySample, EnergyTrace, SymplecticState,
};
use wavebeam::Error;

use common::{mode_k2, naive_dft, naive_idft, sup_diff_real};

fn state(grid: Grid, max_mode: usize, seed: u64) -> SymplecticState {
    SymplecticState::from_psi(&random_resolved_field(
        grid,
        max_mode,
        &mut seeded_rng(seed),
    ))
}

fn real_dft(grid: &Grid, f: &RealField) -> Vec<Complex64> {
    naive_dft(grid, f.to_complex().values())
}

#[test]
fn leapfrog_matches_per_mode_kick_drift_kick() {
    let g = Grid::new(1, 32, TAU).unwrap();
    let s0 = state(g, 6, 4);
    let (dt, steps) = (0.005, 37);
    let out = leapfrog_integrate(&s0, dt, steps).unwrap();

    let mut u = real_dft(&g, &s0.pair.u);
    let mut v = real_dft(&g, &s0.pair.v);
    for m in 0..g.len() {
        let lam = mode_k2(&g, m);
        for _ in 0..steps {
            v[m] -= 0.5 * dt * lam * u[m];
            u[m] += dt * lam * v[m];
            v[m] -= 0.5 * dt * lam * u[m];
        }
    }
    let u: Vec<f64> = naive_idft(&g, &u).iter().map(|z| z.re).collect();
    let v: Vec<f64> = naive_idft(&g, &v).iter().map(|z| z.re).collect();
    assert!(sup_diff_real(out.pair.u.values(), &u) < 1e-12);
    assert!(sup_diff_real(out.pair.v.values(), &v) < 1e-12);
    assert!((out.time - 0.185).abs() < 1e-15);
}

#[test]
fn exact_rotation_is_the_free_flow() {
    let g = Grid::new(2, 16, 4.0).unwrap();
    let psi0 = random_resolved_field(g, 3, &mut seeded_rng(2));
    let t = 1.7;
    let out = exact_rotation(&SymplecticState::from_psi(&psi0), t).unwrap();
    let c: Vec<Complex64> = naive_dft(&g, psi0.values())
        .iter()
        .enumerate()
        .map(|(m, c)| c * Complex64::from_polar(1.0, -mode_k2(&g, m) * t))
        .collect();
    let psi = naive_idft(&g, &c);
    let re: Vec<f64> = psi.iter().map(|z| z.re).collect();
    let im: Vec<f64> = psi.iter().map(|z| z.im).collect();
    assert!(sup_diff_real(out.pair.u.values(), &re) < 1e-12);
    assert!(sup_diff_real(out.pair.v.values(), &im) < 1e-12);
}

#[test]
fn energy_matches_quadrature_of_the_gradient() {
    // H_sym = ½∫(|∇u|² + |∇v|²) for u = cos(3x), v = sin(2x) on [0, 2π)
    let g = Grid::new(1, 64, TAU).unwrap();
    let u = RealField::from_fn(g, |x| (3.0 * x[0]).cos()).unwrap();
    let v = RealField::from_fn(g, |x| (2.0 * x[0]).sin()).unwrap();
    let s = SymplecticState::new(RealFieldPair::new(u, v).unwrap(), 0.0).unwrap();
    let expected = 0.5 * (9.0 * PI + 4.0 * PI);
    assert!((hamiltonian_energy(&s) - expected).abs() < 1e-12);
}

#[test]
fn unstable_step_is_rejected() {
    let g = Grid::new(1, 32, TAU).unwrap();
    let bound = leapfrog_stability_bound(&g);
    assert!((bound - 2.0 / 256.0).abs() < 1e-15);
    let s = state(g, 4, 1);
    assert!(matches!(
        leapfrog_integrate(&s, 1.01 * bound, 1),
        Err(Error::Unstable { .. })
    ));
    assert!(leapfrog_integrate(&s, bound, 1).is_ok());
}

#[test]
fn leapfrog_energy_oscillates_without_drift() {
    let g = Grid::new(1, 64, TAU).unwrap();
    for seed in 0..5 {
        let s0 = state(g, 12, seed);
        let dt = 0.05 / 144.0;
        let (_, trace) = leapfrog_with_trace(&s0, dt, 10_000).unwrap();
        let stats = trace.drift_statistics().unwrap();
        assert!(
            stats.max_relative_deviation <= 1e-4,
            "seed {seed}: {stats:?}"
        );
        assert!(stats.drift_free, "seed {seed}: {stats:?}");
    }
}

#[test]
fn drift_test_detects_a_trend() {
    let samples = (0..2000)
        .map(|i| {
            let t = i as f64 * 1e-3;
            EnergySample {
                step: i,
                time: t,
                energy: 1.0 + 1e-6 * t + 1e-5 * (40.0 * t).sin(),
            }
        })
        .collect();
    let trace = EnergyTrace { samples };
    assert!(!trace.drift_statistics().unwrap().drift_free);
}

#[test]
fn leapfrog_self_convergence_is_second_order() {
    let g = Grid::new(1, 64, TAU).unwrap();
    let s0 = state(g, 8, 9);
    let t = 0.5;
    let run = |steps: usize| leapfrog_integrate(&s0, t / steps as f64, steps).unwrap();
    let (a, b, c) = (run(400), run(800), run(1600));
    let e1 = sup_diff_real(a.pair.u.values(), b.pair.u.values());
    let e2 = sup_diff_real(b.pair.u.values(), c.pair.u.values());
    let order = observed_order(e1, e2, 2.0);
    assert!((order - 2.0).abs() <= 0.1, "order {order}");
}

#[test]
fn trace_csv_layout() {
    let g = Grid::new(1, 16, TAU).unwrap();
    let (_, trace) = leapfrog_with_trace(&state(g, 3, 0), 1e-3, 3).unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next(), Some("step,time,H_sym"));
    assert_eq!(text.lines().count(), 1 + trace.samples.len());
}

#[test]
fn coupled_mode_derivatives_by_central_difference() {
    let g = Grid::new(1, 64, TAU).unwrap();
    let s0 = state(g, 10, 13);
    let (t, eps) = (0.9, 1e-6);
    let spectra = |t: f64| {
        let s = exact_rotation(&s0, t).unwrap();
        (
            dft_forward(&s.pair.u.to_complex()).unwrap(),
            dft_forward(&s.pair.v.to_complex()).unwrap(),
        )
    };
    let (u, v) = spectra(t);
    let (up, vp) = spectra(t + eps);
    let (um, vm) = spectra(t - eps);
    let k2 = g.k_squared();
    for m in 0..g.len() {
        let du = (up.coeffs()[m] - um.coeffs()[m]) / (2.0 * eps);
        let dv = (vp.coeffs()[m] - vm.coeffs()[m]) / (2.0 * eps);
        assert!((du - v.coeffs()[m] * k2[m]).norm() <= 1e-4);
        assert!((dv + u.coeffs()[m] * k2[m]).norm() <= 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mode_matrix_is_area_preserving(lambda in 0.0f64..1e4, frac in 0.0f64..1.0) {
        let dt = frac * 2.0 / lambda.max(1e-9);
        let m = leapfrog_mode_matrix(lambda, dt);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        prop_assert!((det - 1.0).abs() <= 1e-12 * (1.0 + m[0][1].abs() * m[1][0].abs()));
    }

    #[test]
    fn exact_rotation_conserves_energy(seed in any::<u64>(), t in 0.0f64..10.0) {
        let g = Grid::new(2, 16, 5.0).unwrap();
        let s0 = state(g, 3, seed);
        let e0 = hamiltonian_energy(&s0);
        let e1 = hamiltonian_energy(&exact_rotation(&s0, t).unwrap());
        prop_assert!((e1 - e0).abs() <= 1e-12 * e0);
    }
}
