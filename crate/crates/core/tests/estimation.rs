// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

use mzi_thermo_core::analytic::{dp0_dt, p0_closed, qfi_closed};
use mzi_thermo_core::estimation::{
    cfi_from_counts, cfi_from_counts_with, fit_linear_origin, fit_quadratic_origin, log_log_slope, mean_std,
    run_experiment, scaling_study, DerivativeStep, ExperimentConfig, ScalingOptions, ShotModel, SlopeMode,
};
use mzi_thermo_core::simulator::{PortCounts, RngSeed};
use mzi_thermo_core::MziConfig;

fn cfg(n_eff: f64, m: usize) -> MziConfig {
    MziConfig::from_neff(n_eff, 1.0, m).unwrap()
}

/// Two-outcome Fisher information of the exact fringe.
fn exact_cfi(c: &MziConfig, t: f64) -> f64 {
    let p = p0_closed(c, t).unwrap();
    let s = dp0_dt(c, t).unwrap();
    s * s / (p * (1.0 - p))
}

fn noiseless(c: MziConfig, t: f64, step: DerivativeStep) -> f64 {
    let ec = ExperimentConfig {
        shot_model: ShotModel::Exact,
        repetitions: 1,
        step,
        ..ExperimentConfig::new(c, t)
    };
    run_experiment(&ec).unwrap().mean.unwrap()
}

#[test]
fn noiseless_estimate_converges_quadratically() {
    let c = cfg(1.2, 2);
    let t = 0.8;
    let target = exact_cfi(&c, t);
    let coarse = (noiseless(c, t, DerivativeStep::Absolute(0.02)) - target).abs();
    let fine = (noiseless(c, t, DerivativeStep::Absolute(0.002)) - target).abs();
    let ratio = coarse / fine;
    assert!((70.0..130.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn analytic_slope_in_exact_model_is_the_fisher_information() {
    let c = cfg(0.7, 3);
    let t = 1.3;
    let ec = ExperimentConfig {
        shot_model: ShotModel::Exact,
        slope: SlopeMode::AnalyticSlope,
        repetitions: 3,
        ..ExperimentConfig::new(c, t)
    };
    let est = run_experiment(&ec).unwrap();
    assert!((est.mean.unwrap() / exact_cfi(&c, t) - 1.0).abs() < 1e-9);
    assert_eq!(est.std, Some(0.0));
}

#[test]
fn large_shot_counts_agree_with_exact_expectation() {
    let c = cfg(1.0, 2);
    let t = 1.0;
    let ec = ExperimentConfig {
        shots: 1_000_000,
        repetitions: 8,
        step: DerivativeStep::Relative(0.1),
        seed: RngSeed::new(17),
        ..ExperimentConfig::new(c, t)
    };
    let sampled = run_experiment(&ec).unwrap();
    let exact = noiseless(c, t, DerivativeStep::Relative(0.1));
    let mean = sampled.mean.unwrap();
    let sem = sampled.sem.unwrap();
    assert!(
        (mean - exact).abs() < 4.0 * sem + 1e-3 * exact,
        "{mean} ± {sem} vs {exact}"
    );
    assert_eq!(sampled.defined(), 8);
}

#[test]
fn error_shrinks_with_shots() {
    let c = cfg(1.0, 1);
    let t = 1.5;
    let exact = noiseless(c, t, DerivativeStep::Relative(0.1));
    let median_error = |shots: u64| {
        let mut errs: Vec<f64> = (0..10u64)
            .map(|s| {
                let ec = ExperimentConfig {
                    shots,
                    repetitions: 1,
                    step: DerivativeStep::Relative(0.1),
                    seed: RngSeed::new(100 + s),
                    ..ExperimentConfig::new(c, t)
                };
                (run_experiment(&ec).unwrap().mean.unwrap() - exact).abs()
            })
            .collect();
        errs.sort_by(f64::total_cmp);
        0.5 * (errs[4] + errs[5])
    };
    let small = median_error(1_000);
    let large = median_error(100_000);
    assert!(large < small / 3.0, "{large} vs {small}");
}

#[test]
fn classical_information_respects_the_quantum_bound() {
    for &(n_eff, m, t) in &[(0.5, 1, 0.6), (1.4, 2, 1.1), (2.2, 3, -0.9)] {
        let c = cfg(n_eff, m);
        let q = qfi_closed(&c, t).unwrap().value;
        assert!(exact_cfi(&c, t) <= q * (1.0 + 1e-9));
        let ec = ExperimentConfig {
            shots: 20_000,
            repetitions: 20,
            step: DerivativeStep::Relative(0.05),
            seed: RngSeed::new(9),
            ..ExperimentConfig::new(c, t)
        };
        let est = run_experiment(&ec).unwrap();
        let (mean, std) = (est.mean.unwrap(), est.std.unwrap());
        assert!(mean <= q + 3.0 * std + 1e-3 * q, "{mean} ± {std} vs {q}");
    }
}

#[test]
fn repetitions_use_distinct_derived_seeds() {
    let ec = ExperimentConfig {
        shots: 100,
        repetitions: 4,
        ..ExperimentConfig::new(cfg(1.0, 1), 1.0)
    };
    let est = run_experiment(&ec).unwrap();
    let base = ec.seed;
    let expected: Vec<RngSeed> = (0..4).map(|r| base.derive(2 * r)).collect();
    assert_eq!(est.seeds, expected);
    assert_eq!(run_experiment(&ec).unwrap(), est);
}

#[test]
fn degenerate_counts_are_undefined_and_smoothing_rescues_them() {
    let all_dark = PortCounts { n0: 100, n_n: 0 };
    assert_eq!(cfi_from_counts(all_dark, all_dark, 0.1).unwrap(), None);
    let fixed = cfi_from_counts_with(all_dark, all_dark, 0.1, true).unwrap();
    assert_eq!(fixed, Some(0.0));
    let half = PortCounts { n0: 50, n_n: 50 };
    let more = PortCounts { n0: 60, n_n: 40 };
    // Slope 0.1 / 0.2 = 0.5, midpoint 0.55.
    let v = cfi_from_counts(half, more, 0.1).unwrap().unwrap();
    assert!((v - 0.25 / (0.55 * 0.45)).abs() < 1e-12);
    assert!(cfi_from_counts(PortCounts::default(), half, 0.1).is_err());
}

#[test]
fn sample_standard_deviation_uses_bessel_correction() {
    let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_eq!(m, 2.5);
    assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert_eq!(mean_std(&[]), None);
}

#[test]
fn fits_recover_known_coefficients() {
    let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
    let lin: Vec<f64> = xs.iter().map(|x| 2.5 * x).collect();
    let f = fit_linear_origin(&xs, &lin).unwrap();
    assert!((f.c1 - 2.5).abs() < 1e-14);
    assert!((f.r_squared - 1.0).abs() < 1e-14);
    let quad: Vec<f64> = xs.iter().map(|x| 0.3 * x + 1.7 * x * x).collect();
    let (c1, c2) = fit_quadratic_origin(&xs, &quad).unwrap();
    assert!((c1 - 0.3).abs() < 1e-10 && (c2 - 1.7).abs() < 1e-11);
    let sq: Vec<f64> = xs.iter().map(|x| 4.0 * x * x).collect();
    assert!((log_log_slope(&xs, &sq).unwrap() - 2.0).abs() < 1e-13);
    assert!(log_log_slope(&xs, &[1.0, -1.0, 1.0, 1.0, 1.0]).is_err());
}

#[test]
fn scaling_rows_cover_the_grid() {
    let opts = ScalingOptions {
        epsilon: 1.0,
        neff_range: (0.0, core::f64::consts::TAU),
        experiment: None,
    };
    let rows = scaling_study(0.5, &[1, 2], &[1, 3], &opts).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(r.qfi_analytic > 0.0 && r.cfi.is_none());
    }
    // The optimum is photon-number independent at fixed M.
    assert!((rows[0].qfi_analytic - rows[2].qfi_analytic).abs() < 1e-9 * rows[0].qfi_analytic);
}
