mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use wavebeam::euler_bernoulli::{eb_data_from_psi, verify_equivalence, EBProblem};
use wavebeam::initial_data::{random_resolved_field, random_smooth_real, seeded_rng};
use wavebeam::schrodinger::SchrodingerProblem;
use wavebeam::spectral::{Grid, RealField};

use common::{mode_k2, naive_dft, naive_idft, rk4, sup_diff, sup_diff_real};

#[test]
fn free_evolution_matches_modal_rk4() {
    let g = Grid::new(1, 32, 6.0).unwrap();
    let psi0 = random_resolved_field(g, 5, &mut seeded_rng(21));
    let t = 0.8;
    let coeffs = naive_dft(&g, psi0.values());
    // ċ = -ik²c as a real system (re, im) per mode
    let y0: Vec<f64> = coeffs.iter().flat_map(|c| [c.re, c.im]).collect();
    let k2: Vec<f64> = (0..g.len()).map(|m| mode_k2(&g, m)).collect();
    let y = rk4(
        y0,
        |y| {
            let mut out = vec![0.0; y.len()];
            for m in 0..k2.len() {
                out[2 * m] = k2[m] * y[2 * m + 1];
                out[2 * m + 1] = -k2[m] * y[2 * m];
            }
            out
        },
        t / 20000.0,
        20000,
    );
    let c: Vec<Complex64> = y.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    let oracle = naive_idft(&g, &c);
    let psi = SchrodingerProblem::new(psi0)
        .unwrap()
        .evolve_free(t)
        .unwrap();
    assert!(sup_diff(psi.values(), &oracle) < 1e-9);
}

#[test]
fn beam_evolution_matches_rk4_on_the_biharmonic() {
    let g = Grid::new(1, 16, 4.0).unwrap();
    let mut rng = seeded_rng(5);
    let w0 = random_smooth_real(g, 3, &mut rng);
    let wdot0 = random_smooth_real(g, 3, &mut rng);
    let t = 0.3;
    let k2: Vec<f64> = (0..g.len()).map(|m| mode_k2(&g, m)).collect();
    let bilap = |f: &[f64]| -> Vec<f64> {
        let c: Vec<Complex64> = naive_dft(
            &g,
            &f.iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
        .iter()
        .zip(&k2)
        .map(|(c, k2)| c * k2 * k2)
        .collect();
        naive_idft(&g, &c).iter().map(|z| z.re).collect()
    };
    let n = g.len();
    let y0: Vec<f64> = w0.values().iter().chain(wdot0.values()).copied().collect();
    let y = rk4(
        y0,
        |y| {
            let acc = bilap(&y[..n]);
            y[n..]
                .iter()
                .copied()
                .chain(acc.iter().map(|a| -a))
                .collect()
        },
        t / 4000.0,
        4000,
    );
    let w = EBProblem::new(w0, wdot0).unwrap().evolve(t).unwrap();
    assert!(sup_diff_real(w.values(), &y[..n]) < 1e-9);
}

#[test]
fn coupled_velocities_follow_the_laplacian() {
    let g = Grid::new(2, 16, 6.0).unwrap();
    let psi0 = random_resolved_field(g, 3, &mut seeded_rng(8));
    let (pu, pv) = eb_data_from_psi(&psi0).unwrap();
    let lap = |f: &RealField| -> Vec<f64> {
        let c: Vec<Complex64> = naive_dft(&g, f.to_complex().values())
            .iter()
            .enumerate()
            .map(|(m, c)| -c * mode_k2(&g, m))
            .collect();
        naive_idft(&g, &c).iter().map(|z| z.re).collect()
    };
    let lap_v = lap(pv.displacement());
    let lap_u = lap(pu.displacement());
    let neg: Vec<f64> = lap_v.iter().map(|x| -x).collect();
    assert!(sup_diff_real(pu.velocity().values(), &neg) < 1e-11);
    assert!(sup_diff_real(pv.velocity().values(), &lap_u) < 1e-11);
}

#[test]
fn material_scaling_reproduces_scaled_dispersion() {
    // a beam with ω = s·k² is the Schrödinger flow run for time s·t
    let g = Grid::new(1, 32, 6.0).unwrap();
    let psi0 = random_resolved_field(g, 4, &mut seeded_rng(17));
    let s = wavebeam::hamiltonian::material_correspondence(2.0, 3.0, 1.5).unwrap();
    assert!((s - 1.5).abs() < 1e-15);
    let (pu, _) = eb_data_from_psi(&psi0).unwrap();
    let t = 0.4;
    let scaled = EBProblem::new(
        pu.displacement().clone(),
        RealField::new(g, pu.velocity().values().iter().map(|v| v * s).collect()).unwrap(),
    )
    .unwrap();
    let w = scaled.evolve_with_stiffness(s, t).unwrap();
    let psi = SchrodingerProblem::new(psi0)
        .unwrap()
        .evolve_free(s * t)
        .unwrap();
    let re: Vec<f64> = psi.values().iter().map(|z| z.re).collect();
    assert!(sup_diff_real(w.values(), &re) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalence_holds_for_random_data(seed in any::<u64>(), t in -20.0f64..20.0) {
        let g = Grid::new(1, 64, 5.0).unwrap();
        let psi0 = random_resolved_field(g, 10, &mut seeded_rng(seed));
        let report = verify_equivalence(&psi0, &[t]).unwrap();
        prop_assert!(report.pass, "residual {}", report.max_residual());
    }

    #[test]
    fn free_flow_is_unitary(seed in any::<u64>(), t in 0.0f64..50.0) {
        let g = Grid::new(2, 16, 3.0).unwrap();
        let psi0 = random_resolved_field(g, 3, &mut seeded_rng(seed));
        let psi = SchrodingerProblem::new(psi0.clone()).unwrap().evolve_free(t).unwrap();
        prop_assert!((psi.l2_norm() - psi0.l2_norm()).abs() <= 1e-12 * psi0.l2_norm());
    }
}
