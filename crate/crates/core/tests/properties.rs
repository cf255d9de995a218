//! Invariants over randomized inputs. Matrices and states are drawn from the
//! crate's seeded generators, so proptest only has to shrink a seed.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use clock_core::fringe::bounds::gamma_bound_ev;
use clock_core::fringe::{
    fit_fringe, linear_grid, predicted_ratios, read_scan, scan_fringe, shape_metrics,
    three_level_closure, write_scan, FringeSource, NoiseSpec,
};
use clock_core::lindblad::analytic::{lambda_product_form, lambda_split_form};
use clock_core::lindblad::fixtures::{
    random_diagonal_jump_generator, random_generator, random_stable_model,
};
use clock_core::lindblad::{
    analytic_propagate, coherence_decay_matrix, entropy_condition_check, propagate,
    StableBasisModel,
};
use clock_core::numerics::random::{
    random_density, random_ginibre, random_hermitian, random_unitary, seeded,
};
use clock_core::numerics::{
    hermitian_eigenvalues, matrix_exponential, von_neumann_entropy, ComplexMatrix, DensityMatrix,
    C64,
};
use clock_core::ramsey::{
    analytic_pe, ramsey_sequence, ramsey_sequence_params, ClockTransition, FringeParams,
    RamseyConfig,
};

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn hermitian_trace_equals_eigenvalue_sum(seed: u64, d in 1usize..6) {
        let m = random_hermitian(&mut seeded(seed), d, 3.0);
        let sum: f64 = hermitian_eigenvalues(&m).unwrap().iter().sum();
        prop_assert!((m.trace().re - sum).abs() < 1e-10);
    }

    #[test]
    fn exponential_inverse(seed: u64, d in 1usize..5, scale in 0.1f64..4.0) {
        let m = random_ginibre(&mut seeded(seed), d, scale);
        let a = matrix_exponential(&m).unwrap();
        let b = matrix_exponential(&m.scale_real(-1.0)).unwrap();
        let dev = (&a.matmul(&b) - &ComplexMatrix::identity(d)).max_abs();
        // Rounding in the product scales with ‖e^m‖·‖e^{−m}‖ for non-normal m.
        let kappa = (a.max_abs() * b.max_abs()).max(1.0);
        prop_assert!(dev < 1e-14 * d as f64 * kappa, "{dev:e} at κ = {kappa:e}");
    }

    #[test]
    fn entropy_unitarily_invariant(seed: u64, d in 2usize..5) {
        let mut rng = seeded(seed);
        let rho = random_density(&mut rng, d);
        let u = random_unitary(&mut rng, d);
        let rotated = DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.adjoint())).unwrap();
        let ds = von_neumann_entropy(&rho).unwrap() - von_neumann_entropy(&rotated).unwrap();
        prop_assert!(ds.abs() < 1e-10);
    }

    #[test]
    fn propagation_preserves_trace_and_composes(seed: u64, d in 2usize..5, s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let mut rng = seeded(seed);
        let gen = random_generator(&mut rng, d, 2, 1.0);
        let rho = random_density(&mut rng, d);
        let at_s = propagate(&gen, &rho, s).unwrap();
        prop_assert!((at_s.matrix().trace().re - 1.0).abs() < 1e-10);
        let two_step = propagate(&gen, &at_s, t).unwrap();
        let one_step = propagate(&gen, &rho, s + t).unwrap();
        prop_assert!((two_step.matrix() - one_step.matrix()).max_abs() < 1e-9);
    }

    #[test]
    fn entropy_monotone_under_condition(seed: u64, d in 2usize..5, t in 0.0f64..4.0, delta in 1e-3f64..1.0) {
        let mut rng = seeded(seed);
        let gen = random_diagonal_jump_generator(&mut rng, d, 2, 1.0);
        prop_assume!(entropy_condition_check(&gen).satisfied);
        let rho = random_density(&mut rng, d);
        let s0 = von_neumann_entropy(&propagate(&gen, &rho, t).unwrap()).unwrap();
        let s1 = von_neumann_entropy(&propagate(&gen, &rho, t + delta).unwrap()).unwrap();
        prop_assert!(s1 >= s0 - 1e-9, "{s0} -> {s1}");
    }

    #[test]
    fn decay_rate_forms_agree(seed: u64, d in 2usize..5, jumps in 0usize..4) {
        let model = random_stable_model(&mut seeded(seed), d, jumps, 3.0);
        for m in 0..d {
            for n in 0..d {
                let a = lambda_product_form(&model, m, n);
                let b = lambda_split_form(&model, m, n);
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_propagation_matches_and_coherences_shrink(seed: u64, d in 2usize..5, t in 0.0f64..5.0, dt in 0.0f64..1.0) {
        let mut rng = seeded(seed);
        let model = random_stable_model(&mut rng, d, 2, 2.0);
        let rho = random_density(&mut rng, d);
        let a = analytic_propagate(&model, &rho, t).unwrap();
        let b = propagate(&model.to_generator(), &rho, t).unwrap();
        prop_assert!((a.matrix() - b.matrix()).max_abs() < 1e-8);
        let later = analytic_propagate(&model, &rho, t + dt).unwrap();
        for m in 0..d {
            for n in 0..d {
                prop_assert!(later.get(m, n).norm() <= a.get(m, n).norm() + 1e-15);
            }
        }
    }

    #[test]
    fn ideal_ramsey_matches_textbook_fringe(area in 0.1f64..3.0, delta in -0.05f64..0.05, t in 0.5f64..20.0) {
        let tau = 1e-3 * t;
        let cfg = RamseyConfig::new(tau, t, area / tau, delta * area / tau).unwrap();
        let ideal = FringeParams::new(0.0, 0.0, area).unwrap();
        let pe = ramsey_sequence_params(&ideal, &cfg).unwrap().pe;
        let textbook = 0.5 * area.sin().powi(2) * (1.0 + (cfg.delta_omega_rad_s * t).cos());
        prop_assert!((pe - textbook).abs() < 1e-12);
    }

    #[test]
    fn sequence_matches_fringe_formula(
        area in 0.2f64..3.0, t in 0.5f64..20.0, frac in 1e-4f64..1e-2,
        delta in -0.05f64..0.05, gt in 1e-3f64..3.0, et in -1.0f64..1.0,
    ) {
        let tau = t * frac;
        let omega = area / tau;
        let cfg = RamseyConfig::new(tau, t, omega, delta * omega).unwrap();
        let p = FringeParams::new(gt / t, et / t, area).unwrap();
        let model = clock_core::fringe::model_from_params(1e3 * omega, p.gamma_rad_s, p.eshift_rad_s).unwrap();
        let pe = ramsey_sequence(&model, ClockTransition::default(), &cfg).unwrap().pe;
        prop_assert!((pe - analytic_pe(&p, cfg.delta_omega_rad_s, t)).abs() < 1e-10);
    }

    #[test]
    fn fringe_bounded_and_even_about_shift(gt in 0.0f64..3.0, et in -1.0f64..1.0, x in -10.0f64..10.0, area in 0.0f64..PI) {
        let p = FringeParams::new(gt, et, area).unwrap();
        let (a, b) = (analytic_pe(&p, et + x, 1.0), analytic_pe(&p, et - x, 1.0));
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn purity_kept_by_pulses_and_lost_in_the_dark(gt in 0.01f64..3.0, et in -1.0f64..1.0, area in 0.1f64..3.0) {
        let cfg = RamseyConfig::with_pulse_area(area, 1.0, 1e-3, 0.0).unwrap();
        let p = FringeParams::new(gt, et, area).unwrap();
        let tr = ramsey_sequence_params(&p, &cfg).unwrap();
        prop_assert!((tr.after_pulse1.purity() - 1.0).abs() < 1e-12);
        prop_assert!((tr.final_state.purity() - tr.after_free.purity()).abs() < 1e-12);
        prop_assert!(tr.after_free.purity() <= tr.after_pulse1.purity() + 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fit_round_trip(gt in 0.01f64..3.0, et in -1.0f64..1.0) {
        let cfg = RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0).unwrap();
        let p = FringeParams::new(gt, et, FRAC_PI_2).unwrap();
        let grid = linear_grid(0.0, 4.0 * PI, 401).unwrap();
        let f = fit_fringe(&scan_fringe(&FringeSource::Params(p), &cfg, &grid, None).unwrap(), None).unwrap();
        prop_assert!(f.converged);
        prop_assert!((f.gamma_rad_s - gt).abs() / gt < 1e-8, "{f:?}");
        prop_assert!((f.eshift_rad_s - et).abs() < 1e-8 * et.abs().max(1.0), "{f:?}");
    }

    #[test]
    fn shape_metrics_match_closed_forms(gt in 0.0f64..3.0, et in -1.0f64..1.0) {
        let cfg = RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0).unwrap();
        let p = FringeParams::new(gt, et, FRAC_PI_2).unwrap();
        let grid = linear_grid(0.0, 4.0 * PI, 1001).unwrap();
        let m = shape_metrics(&scan_fringe(&FringeSource::Params(p), &cfg, &grid, None).unwrap()).unwrap();
        let (mm, sp) = predicted_ratios(gt);
        prop_assert!((m.min_max_ratio - mm).abs() < 1e-3);
        prop_assert!((m.slope_point_ratio - sp).abs() < 1e-3);
    }

    #[test]
    fn closure_invariant_under_common_phase(seed: u64, theta in 0.0f64..(2.0 * PI)) {
        let model = random_stable_model(&mut seeded(seed), 3, 2, 2.0);
        let phase = C64::from_polar(1.0, theta);
        let rotated: Vec<Vec<C64>> = model
            .jump_eigenvalues()
            .iter()
            .enumerate()
            .map(|(a, row)| if a == 0 { row.iter().map(|z| z * phase).collect() } else { row.clone() })
            .collect();
        let turned = StableBasisModel::new(model.energies().to_vec(), rotated).unwrap();
        let a = three_level_closure(&model, [0, 1, 2]).unwrap().closure_sum;
        let b = three_level_closure(&turned, [0, 1, 2]).unwrap().closure_sum;
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((coherence_decay_matrix(&model).unwrap().matrix() - coherence_decay_matrix(&turned).unwrap().matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn bound_scales_inversely_with_time(t1 in 1e-3f64..1e4, t2 in 1e-3f64..1e4) {
        let r = gamma_bound_ev(t1).unwrap() / gamma_bound_ev(t2).unwrap();
        prop_assert!((r - t2 / t1).abs() <= 4.0 * f64::EPSILON * (t2 / t1));
    }

    #[test]
    fn scan_file_round_trip(seed: u64, sigma in 0.0f64..0.05, points in 2usize..300) {
        let cfg = RamseyConfig::with_pulse_area(1.0, 2.0, 0.01, 0.0).unwrap();
        let p = FringeParams::new(0.3, 0.1, 1.0).unwrap();
        let grid = linear_grid(0.0, 7.0, points).unwrap();
        let scan = scan_fringe(&FringeSource::Params(p), &cfg, &grid, Some(NoiseSpec { seed, sigma })).unwrap();
        let dir = tempdir();
        let path = dir.join(format!("scan-{seed}-{points}.csv"));
        write_scan(&scan, &path).unwrap();
        prop_assert_eq!(read_scan(&path).unwrap(), scan);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Checked at the converged point of fits to random noisy fringes.
    #[test]
    fn jacobian_matches_finite_differences(seed: u64, gt in 0.05f64..3.0, et in -1.0f64..1.0) {
        let cfg = RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0).unwrap();
        let p = FringeParams::new(gt, et, FRAC_PI_2).unwrap();
        let grid = linear_grid(0.0, 4.0 * PI, 200).unwrap();
        let scan = scan_fringe(&FringeSource::Params(p), &cfg, &grid, Some(NoiseSpec { seed, sigma: 0.01 })).unwrap();
        let f = fit_fringe(&scan, None).unwrap();
        prop_assert!(f.jacobian_rel_error < 1e-6, "{}", f.jacobian_rel_error);
    }
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("clock-props-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
