// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

use core::f64::consts::PI;

use mzi_thermo_core::analytic::{p0_binomial, qfi_closed};
use mzi_thermo_core::eigen::eig_hermitian;
use mzi_thermo_core::hilbert::partial_trace;
use mzi_thermo_core::oracle::{
    build_initial, evolve, gibbs_spectral_qfi, mean_field_phase_factor, oracle_p0, oracle_qfi, output_mode_state,
    second_bs_and_reduce, thermal_phase_average, DepolarizingChannel,
};
use mzi_thermo_core::thermal::{gibbs_density, gibbs_qfi};
use mzi_thermo_core::{kron, ComplexMatrix, HilbertLabel, MziConfig, SubsystemTag, ThermalEnsemble, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(n_eff: f64, m: usize) -> MziConfig {
    MziConfig::from_neff(n_eff, 1.0, m).unwrap()
}

fn random_temperature(rng: &mut ChaCha8Rng) -> f64 {
    let t = rng.random_range(0.05..10.0);
    if rng.random::<bool>() {
        t
    } else {
        -t
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(rng, dim, dim);
    let rho = &a * &a.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

/// Independent reference: full matrices, explicit unitaries, generic partial trace.
fn dense_reference(c: &MziConfig, t: f64) -> ComplexMatrix {
    let m = c.m();
    let ens = c.ensemble(t).unwrap();
    let s = 1.0 / 2.0f64.sqrt();
    // BS on (a, b), basis 00, 01, 10, 11.
    let bs = ComplexMatrix::from_real(
        4,
        4,
        &[1.0, 0.0, 0.0, 0.0, 0.0, s, s, 0.0, 0.0, -s, s, 0.0, 0.0, 0.0, 0.0, 1.0],
    )
    .unwrap();
    let bs_full = kron(&bs, &ComplexMatrix::identity(1 << m));
    let mut input = ComplexMatrix::zeros(4, 4);
    input[(2, 2)] = C64::new(1.0, 0.0);
    let rho = kron(&input, &gibbs_density(&ens).unwrap());
    let rho = &(&bs_full * &rho) * &bs_full.adjoint();

    let dim = 4usize << m;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let a = (i >> (m + 1)) & 1;
        let q = (i & ((1 << m) - 1)).count_ones();
        let phi = c.phase_per_excitation() * (c.n() as f64) / (c.n() as f64) * (a as f64) * q as f64;
        u[(i, i)] = C64::new(0.0, -phi).exp();
    }
    let rho = &(&u * &rho) * &u.adjoint();
    let rho = &(&bs_full * &rho) * &bs_full.adjoint();
    let label = HilbertLabel::layout(1, 1, m, 0);
    partial_trace(&rho, &label, &[SubsystemTag::ArmA(0)]).unwrap()
}

#[test]
fn kron_matches_index_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_matrix(&mut rng, 2, 2);
    let b = random_matrix(&mut rng, 2, 2);
    let k = kron(&a, &b);
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    assert_eq!(k[(2 * i + p, 2 * j + q)], a[(i, j)] * b[(p, q)]);
                }
            }
        }
    }
    let c = random_matrix(&mut rng, 2, 2);
    assert!(kron(&kron(&a, &b), &c).max_abs_diff(&kron(&a, &kron(&b, &c))) < 1e-15);
}

#[test]
fn partial_trace_matches_element_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rho = random_density(&mut rng, 8);
    let label = HilbertLabel::layout(3, 0, 0, 0);
    let r = partial_trace(&rho, &label, &[SubsystemTag::ArmA(1)]).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                for c in 0..2 {
                    acc += rho[((a << 2) | (i << 1) | c, (a << 2) | (j << 1) | c)];
                }
            }
            assert!((r[(i, j)] - acc).norm() < 1e-15);
        }
    }
    assert!((r.trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn partial_trace_composition_is_order_independent() {
    use SubsystemTag::*;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rho = random_density(&mut rng, 16);
    let label = HilbertLabel::layout(2, 2, 0, 0);
    let direct = partial_trace(&rho, &label, &[ArmA(0)]).unwrap();
    let l1 = label.restrict(&[ArmA(0), ArmB(0)]).unwrap();
    let step = partial_trace(
        &partial_trace(&rho, &label, &[ArmA(0), ArmB(0)]).unwrap(),
        &l1,
        &[ArmA(0)],
    )
    .unwrap();
    let l2 = label.restrict(&[ArmA(0), ArmA(1), ArmB(1)]).unwrap();
    let other = partial_trace(
        &partial_trace(&rho, &label, &[ArmA(0), ArmA(1), ArmB(1)]).unwrap(),
        &l2,
        &[ArmA(0)],
    )
    .unwrap();
    assert!(direct.max_abs_diff(&step) < 1e-12);
    assert!(direct.max_abs_diff(&other) < 1e-12);
}

#[test]
fn random_hermitian_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let a = random_matrix(&mut rng, 8, 8);
        let h = (&a + &a.adjoint()).scale_real(0.5);
        let e = eig_hermitian(&h).unwrap();
        assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let d = &(&e.vectors.adjoint() * &h) * &e.vectors;
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert!(d[(i, j)].norm() < 1e-10);
                }
            }
        }
    }
    let rho = random_density(&mut rng, 8);
    assert!(eig_hermitian(&rho).unwrap().values[0] >= -1e-12);
}

#[test]
fn block_oracle_matches_dense_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let m = rng.random_range(1..=4);
        let c = cfg(rng.random_range(0.0..2.0 * PI), m);
        let t = random_temperature(&mut rng);
        let block = output_mode_state(&c, t).unwrap();
        let dense = dense_reference(&c, t);
        assert!(block.max_abs_diff(&dense) < 1e-14);
    }
}

#[test]
fn initial_state_matches_hand_assembly() {
    let c = cfg(0.6, 2);
    let ens = c.ensemble(0.8).unwrap();
    let st = build_initial(&c, &ens).unwrap();
    let dense = st.to_dense().unwrap();
    let (pe, pg) = ens.populations();
    for s in 0..4usize {
        let q = s.count_ones() as i32;
        let w = pe.powi(q) * pg.powi(2 - q);
        for (i, j) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
            assert!((dense[((i << 2) | s, (j << 2) | s)].re - 0.5 * w).abs() < 1e-16);
        }
    }
    let nonzero = dense.as_slice().iter().filter(|z| z.norm() > 0.0).count();
    assert_eq!(nonzero, 16);
}

#[test]
fn evolution_preserves_spectrum() {
    let c = cfg(1.3, 3);
    let st = build_initial(&c, &c.ensemble(0.4).unwrap()).unwrap();
    let ev = evolve(&st, &c);
    let a = eig_hermitian(&st.to_dense().unwrap()).unwrap().values;
    let b = eig_hermitian(&ev.to_dense().unwrap()).unwrap().values;
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-14);
    }
    assert!((ev.trace() - 1.0).abs() < 1e-12);
    let rho = ev.to_dense().unwrap();
    assert!(rho.is_hermitian(1e-12));
    let out = second_bs_and_reduce(&ev);
    assert!((out.trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn oracle_agrees_with_analytics_on_random_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_p0: f64 = 0.0;
    let mut worst_q: f64 = 0.0;
    for _ in 0..500 {
        let m = rng.random_range(1..=6);
        let c = cfg(rng.random_range(0.0..2.0 * PI), m);
        let t = random_temperature(&mut rng);
        let dp = (oracle_p0(&c, t).unwrap() - p0_binomial(&c, t).unwrap()).abs();
        worst_p0 = worst_p0.max(dp);
        let q = qfi_closed(&c, t).unwrap().value;
        if q > 1e-8 {
            let s = oracle_qfi(&c, t, None).unwrap();
            worst_q = worst_q.max(((s - q) / q).abs());
        }
    }
    assert!(worst_p0 < 1e-10, "worst |Δp₀| = {worst_p0:e}");
    assert!(worst_q < 1e-6, "worst relative ΔQ = {worst_q:e}");
}

#[test]
fn gibbs_spectral_matches_closed_form() {
    for &(m, t) in &[(1usize, 0.5), (1, -0.5), (2, 0.3), (3, 2.0)] {
        let ens = ThermalEnsemble::at(m, 1.0, t).unwrap();
        let s = gibbs_spectral_qfi(&ens).unwrap();
        let q = gibbs_qfi(&ens);
        assert!(((s - q) / q).abs() < 1e-6, "M={m} T={t}: {s} vs {q}");
    }
}

#[test]
fn depolarizing_never_increases_qfi() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let c = cfg(rng.random_range(0.0..2.0 * PI), rng.random_range(1..=3));
        let t = random_temperature(&mut rng);
        let ch = DepolarizingChannel::new(rng.random_range(0.0..=1.0)).unwrap();
        let clean = oracle_qfi(&c, t, None).unwrap();
        let noisy = oracle_qfi(&c, t, Some(ch)).unwrap();
        assert!(noisy <= clean * (1.0 + 1e-9) + 1e-15, "{noisy} > {clean}");
    }
}

#[test]
fn thermal_phase_average_is_strictly_inside_unit_circle() {
    for &(m, t, phase) in &[(1usize, 0.5, 0.3), (4, 1.2, 2.0), (6, -0.8, 0.01)] {
        let ens = ThermalEnsemble::at(m, 1.0, t).unwrap();
        let avg = thermal_phase_average(&ens, phase).unwrap();
        assert!(avg.norm() < 1.0 - 1e-6);
        assert!((mean_field_phase_factor(&ens, phase).norm() - 1.0).abs() < 1e-15);
    }
}
