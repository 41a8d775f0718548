mod common;

use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use std::f64::consts::PI;
use wavebeam::eigenmodes::{
    beam_frequencies, biharmonic_system, frequency_energy_match, quantum_box_energies, BeamSpec,
    BoundaryCondition,
};
use wavebeam::numerics::observed_order;

use common::{bisect, clamped_beta1};
use BoundaryCondition::*;

fn first_frequency(
    left: BoundaryCondition,
    right: BoundaryCondition,
    length: f64,
    n: usize,
) -> f64 {
    let spec = BeamSpec::new(length, left, right, n).unwrap();
    beam_frequencies(&spec, 1).unwrap().frequencies[0]
}

#[test]
fn simply_supported_fundamental() {
    let w = first_frequency(SimplySupported, SimplySupported, PI, 512);
    assert!((w - 1.0).abs() <= 1e-3, "{w}");
}

#[test]
fn clamped_fundamental_matches_characteristic_root() {
    let beta = clamped_beta1();
    assert!((beta - 4.730040745).abs() < 1e-8);
    let w = first_frequency(Clamped, Clamped, 1.0, 512);
    assert!((w / (beta * beta) - 1.0).abs() <= 1e-3, "{w}");
}

#[test]
fn cantilever_and_propped_fundamentals() {
    let cantilever = bisect(|b| b.cos() * b.cosh() + 1.0, 1.0, 3.0);
    let w = first_frequency(Clamped, Free, 1.0, 512);
    assert!((w / cantilever.powi(2) - 1.0).abs() <= 1e-3, "{w}");

    let propped = bisect(|b| b.tan() - b.tanh(), 3.5, 4.5);
    let w = first_frequency(SimplySupported, Clamped, 1.0, 512);
    assert!((w / propped.powi(2) - 1.0).abs() <= 1e-3, "{w}");
}

#[test]
fn clamped_error_drops_fourfold_under_refinement() {
    let target = clamped_beta1().powi(2);
    // n + 1 doubles, so h halves exactly
    let e1 = (first_frequency(Clamped, Clamped, 1.0, 63) - target).abs();
    let e2 = (first_frequency(Clamped, Clamped, 1.0, 127) - target).abs();
    let order = observed_order(e1, e2, 2.0);
    assert!((order - 2.0).abs() <= 0.2, "order {order}");
}

#[test]
fn box_energies_converge_at_second_order() {
    let e = |n: usize| {
        let b = quantum_box_energies(PI, 3, n).unwrap();
        (b.finite_difference[2] - b.analytic[2]).abs()
    };
    let order = observed_order(e(63), e(127), 2.0);
    assert!((order - 2.0).abs() <= 0.2, "order {order}");
}

#[test]
fn simply_supported_shapes_are_sines() {
    let spec = BeamSpec::simply_supported(PI, 512).unwrap();
    let modes = beam_frequencies(&spec, 5).unwrap();
    for (j, shape) in modes.shapes.iter().enumerate() {
        let m = (j + 1) as f64;
        let s: Vec<f64> = modes.nodes.iter().map(|x| (m * x).sin()).collect();
        let dot: f64 = shape.iter().zip(&s).map(|(a, b)| a * b).sum();
        let na: f64 = shape.iter().map(|a| a * a).sum::<f64>().sqrt();
        let nb: f64 = s.iter().map(|b| b * b).sum::<f64>().sqrt();
        assert!(dot.abs() / (na * nb) >= 0.999);
        // unit discrete L² norm
        let h = spec.spacing();
        let norm: f64 = shape.iter().map(|a| a * a * h).sum();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}

#[test]
fn frequencies_and_energies_scale_with_length() {
    for bc in [SimplySupported, Clamped] {
        let a = beam_frequencies(&BeamSpec::new(1.0, bc, bc, 64).unwrap(), 4).unwrap();
        let b = beam_frequencies(&BeamSpec::new(2.0, bc, bc, 64).unwrap(), 4).unwrap();
        for (x, y) in a.frequencies.iter().zip(&b.frequencies) {
            assert!((x / y - 4.0).abs() < 1e-9);
        }
    }
    let a = quantum_box_energies(1.0, 4, 64).unwrap();
    let b = quantum_box_energies(2.0, 4, 64).unwrap();
    for (x, y) in a.finite_difference.iter().zip(&b.finite_difference) {
        assert!((x / y - 4.0).abs() < 1e-9);
    }
}

#[test]
fn simply_supported_correspondence() {
    let spec = BeamSpec::simply_supported(PI, 512).unwrap();
    let report = frequency_energy_match(&spec, 5).unwrap();
    assert_eq!(report.pass, Some(true));
    for r in &report.rows {
        let n2 = (r.n * r.n) as f64;
        assert_eq!(r.energy, n2);
        assert!((r.omega - n2).abs() / n2 <= 1e-2);
        // both sides use the same three-point operator; the biharmonic
        // eigensolve loses about eps·λ_max/λ_1 ≈ 1e-5 of relative accuracy
        assert!(r.discrete_mismatch < 1e-5, "{}", r.discrete_mismatch);
    }
}

#[test]
fn report_csv_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("modes.csv");
    let spec = BeamSpec::simply_supported(PI, 64).unwrap();
    frequency_energy_match(&spec, 3)
        .unwrap()
        .save_csv(&path)
        .unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 4);
}

fn bc_strategy() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![Just(SimplySupported), Just(Clamped), Just(Free)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn discrete_biharmonic_is_positive_semidefinite(
        left in bc_strategy(),
        right in bc_strategy(),
        n in 16usize..64,
    ) {
        let spec = BeamSpec::new(1.0, left, right, n).unwrap();
        let sys = biharmonic_system(&spec);
        // dimensionless h⁴·M^{-1/2}KM^{-1/2}
        let op = sys.symmetric_operator() * spec.spacing().powi(4);
        prop_assert_eq!(&op, &op.transpose());
        let eig = SymmetricEigen::new(op);
        prop_assert!(eig.eigenvalues.iter().all(|&e| e >= -1e-10));
        let zeros = eig.eigenvalues.iter().filter(|e| e.abs() < 1e-9).count();
        prop_assert_eq!(zeros, spec.rigid_modes());
    }
}
