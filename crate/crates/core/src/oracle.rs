// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact density-matrix reference for the interferometer.
//!
//! Each optical mode only ever holds 0 or N photons, so it is one effective
//! qubit whose excited level carries `n̂ = N`. The layout is
//! `[a, b, s_0 … s_{M-1}]`.
//!
//! The sample starts diagonal and every operator in the protocol is either
//! diagonal on the sample (the dispersive coupling) or the identity on it
//! (the beam splitters). The joint state therefore stays block diagonal in
//! the sample configuration `s`, and is stored exactly as one 4×4 mode block
//! per configuration. [`JointState::to_dense`] materializes the full matrix
//! for small M.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::analytic::MziConfig;
use crate::eigen::eig_hermitian;
use crate::error::{invalid, Error, Result};
use crate::hilbert::HilbertLabel;
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::thermal::{excited_population, gibbs_diagonal, ThermalEnsemble};

/// Largest sample the oracle accepts.
pub const ORACLE_MAX_M: usize = 14;

/// Largest sample [`JointState::to_dense`] will expand (2^10 × 2^10 entries).
pub const DENSE_MAX_M: usize = 8;

/// Eigenvalue pairs with `λ_j + λ_k` at or below this are dropped from the
/// spectral QFI sum.
pub const EIGEN_PAIR_CUTOFF: f64 = 1e-12;

/// Relative two-step discrepancy above which the derivative is Richardson-extrapolated.
pub const RICHARDSON_TRIGGER: f64 = 1e-7;

/// `√2 · BS` on the mode pair, basis `|ab⟩` = {00, 01, 10, 11}:
/// `|N,0⟩ → (|N,0⟩ + |0,N⟩)/√2`, `|0,N⟩ → (|0,N⟩ − |N,0⟩)/√2`. Keeping the
/// middle block integral makes the bright-port cancellation exact.
const SQRT2: f64 = core::f64::consts::SQRT_2;
const BS_SCALED: [[f64; 4]; 4] = [
    [SQRT2, 0.0, 0.0, 0.0],
    [0.0, 1.0, 1.0, 0.0],
    [0.0, -1.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, SQRT2],
];

type Block = [[C64; 4]; 4];

/// `BS ρ BS†` on one mode block.
fn beam_splitter(rho: &Block) -> Block {
    let mut tmp = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = ZERO;
            for k in 0..4 {
                if BS_SCALED[i][k] != 0.0 {
                    acc += rho[k][j] * BS_SCALED[i][k];
                }
            }
            tmp[i][j] = acc;
        }
    }
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = ZERO;
            for k in 0..4 {
                if BS_SCALED[j][k] != 0.0 {
                    acc += tmp[i][k] * BS_SCALED[j][k];
                }
            }
            out[i][j] = acc * 0.5;
        }
    }
    out
}

/// Joint mode ⊗ sample state, block diagonal in the sample configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    label: HilbertLabel,
    m: usize,
    /// `blocks[s]` is the (unnormalized) mode state for sample configuration `s`.
    blocks: Vec<Block>,
}

impl JointState {
    pub fn label(&self) -> &HilbertLabel {
        &self.label
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// 4×4 mode block paired with sample configuration `s`.
    pub fn mode_block(&self, s: usize) -> ComplexMatrix {
        block_matrix(&self.blocks[s])
    }

    pub fn trace(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (0..4).map(|i| b[i][i].re).sum::<f64>())
            .sum()
    }

    /// Reduced state of the two modes.
    pub fn mode_state(&self) -> ComplexMatrix {
        let mut acc = [[ZERO; 4]; 4];
        for b in &self.blocks {
            for i in 0..4 {
                for j in 0..4 {
                    acc[i][j] += b[i][j];
                }
            }
        }
        block_matrix(&acc)
    }

    /// Reduced state of the sample (diagonal by construction).
    pub fn sample_state(&self) -> ComplexMatrix {
        let diag: Vec<f64> = self.blocks.iter().map(|b| (0..4).map(|i| b[i][i].re).sum()).collect();
        ComplexMatrix::from_real_diagonal(&diag)
    }

    /// Full density matrix over [`label`](Self::label).
    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        if self.m > DENSE_MAX_M {
            return Err(Error::CapExceeded {
                what: "M (dense oracle)",
                requested: self.m,
                cap: DENSE_MAX_M,
            });
        }
        let dim = self.label.dim();
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for (s, b) in self.blocks.iter().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    rho[((i << self.m) | s, (j << self.m) | s)] = b[i][j];
                }
            }
        }
        Ok(rho)
    }
}

fn block_matrix(b: &Block) -> ComplexMatrix {
    let data = b.iter().flat_map(|row| row.iter().copied()).collect();
    ComplexMatrix::from_vec(4, 4, data).expect("4×4 block")
}

fn check_cap(m: usize) -> Result<()> {
    if m > ORACLE_MAX_M {
        return Err(Error::CapExceeded {
            what: "M",
            requested: m,
            cap: ORACLE_MAX_M,
        });
    }
    Ok(())
}

/// `BS |N,0⟩⟨N,0| BS† ⊗ ρ_T`, i.e. the N00N state `(|N,0⟩ + |0,N⟩)/√2`
/// next to the thermal sample.
pub fn build_initial(cfg: &MziConfig, ens: &ThermalEnsemble) -> Result<JointState> {
    if ens.m() != cfg.m() {
        return Err(invalid(
            "ensemble",
            alloc::format!("sample has M = {} but the interferometer expects {}", ens.m(), cfg.m()),
        ));
    }
    check_cap(ens.m())?;
    let mut input = [[ZERO; 4]; 4];
    input[2][2] = C64::new(1.0, 0.0);
    let noon = beam_splitter(&input);
    let blocks = gibbs_diagonal(ens)
        .into_iter()
        .map(|p| {
            let mut b = noon;
            for row in b.iter_mut() {
                for z in row.iter_mut() {
                    *z *= p;
                }
            }
            b
        })
        .collect();
    Ok(JointState {
        label: HilbertLabel::layout(1, 1, ens.m(), 0),
        m: ens.m(),
        blocks,
    })
}

/// Conjugation by `exp(−i εχt n̂_a M̂)`: entry (j, k) picks up
/// `e^{−i(φ_j − φ_k)}` with `φ = εχt · N a · q(s)`.
pub fn evolve(state: &JointState, cfg: &MziConfig) -> JointState {
    let kappa = cfg.phase_per_excitation();
    let mut out = state.clone();
    for (s, b) in out.blocks.iter_mut().enumerate() {
        let q = s.count_ones() as f64;
        if q == 0.0 {
            continue;
        }
        // Only the mode-a occupation differs between rows, so one phase
        // per (a, a') pair suffices.
        let (sin, cos) = (kappa * q).sin_cos();
        let down = C64::new(cos, -sin);
        for (i, row) in b.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                let (ai, aj) = (i >> 1, j >> 1);
                if ai > aj {
                    *z *= down;
                } else if ai < aj {
                    *z *= down.conj();
                }
            }
        }
    }
    out
}

/// Second beam splitter (the same map as the first, which returns an
/// unperturbed N00N state to `|0,N⟩`), then the trace over mode b and the
/// sample. The result is `diag(p₀, p_N)` in the basis {|0⟩, |N⟩} of mode a.
pub fn second_bs_and_reduce(state: &JointState) -> ComplexMatrix {
    let mut rho_a = [[ZERO; 2]; 2];
    for b in &state.blocks {
        let out = beam_splitter(b);
        for a in 0..2 {
            for a2 in 0..2 {
                for bb in 0..2 {
                    rho_a[a][a2] += out[(a << 1) | bb][(a2 << 1) | bb];
                }
            }
        }
    }
    ComplexMatrix::from_vec(2, 2, alloc::vec![rho_a[0][0], rho_a[0][1], rho_a[1][0], rho_a[1][1]]).expect("2×2")
}

/// Reduced mode-a state at the interferometer output.
pub fn output_mode_state(cfg: &MziConfig, temperature: f64) -> Result<ComplexMatrix> {
    let ens = cfg.ensemble(temperature)?;
    let initial = build_initial(cfg, &ens)?;
    Ok(second_bs_and_reduce(&evolve(&initial, cfg)))
}

/// Bright-port probability from the density-matrix evolution.
pub fn oracle_p0(cfg: &MziConfig, temperature: f64) -> Result<f64> {
    Ok(output_mode_state(cfg, temperature)?[(0, 0)].re)
}

/// Global depolarizing map `ρ → p_γ ρ + (1 − p_γ) I/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepolarizingChannel {
    p_gamma: f64,
}

impl DepolarizingChannel {
    pub fn new(p_gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_gamma) {
            return Err(invalid("p_gamma", "must lie in [0, 1]"));
        }
        Ok(Self { p_gamma })
    }

    pub fn p_gamma(&self) -> f64 {
        self.p_gamma
    }
}

pub fn apply_depolarizing(rho_a: &ComplexMatrix, ch: DepolarizingChannel) -> Result<ComplexMatrix> {
    if rho_a.rows() != 2 || rho_a.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho_a.rows().max(rho_a.cols()),
        });
    }
    let p = ch.p_gamma;
    let mut out = rho_a.scale_real(p);
    out[(0, 0)] += (1.0 - p) * 0.5;
    out[(1, 1)] += (1.0 - p) * 0.5;
    Ok(out)
}

/// `1e-5 · max(|T|, ε)`.
pub fn default_step(temperature: f64, epsilon: f64) -> f64 {
    1e-5 * temperature.abs().max(epsilon)
}

fn central_difference(rho_of_t: &impl Fn(f64) -> Result<ComplexMatrix>, t: f64, h: f64) -> Result<ComplexMatrix> {
    let plus = rho_of_t(t + h)?;
    let minus = rho_of_t(t - h)?;
    if plus.rows() != minus.rows() || plus.cols() != minus.cols() {
        return Err(Error::DimensionMismatch {
            expected: plus.rows(),
            found: minus.rows(),
        });
    }
    Ok((&plus - &minus).scale_real(0.5 / h))
}

/// `∂ρ/∂T` by central differences, Richardson-extrapolated from steps h and
/// 2h when the two disagree by more than [`RICHARDSON_TRIGGER`] (relative).
pub fn density_derivative(rho_of_t: &impl Fn(f64) -> Result<ComplexMatrix>, t: f64, h: f64) -> Result<ComplexMatrix> {
    let d1 = central_difference(rho_of_t, t, h)?;
    let d2 = central_difference(rho_of_t, t, 2.0 * h)?;
    let scale = d1.max_abs().max(f64::MIN_POSITIVE);
    if d1.max_abs_diff(&d2) > RICHARDSON_TRIGGER * scale {
        Ok((&d1.scale_real(4.0) - &d2).scale_real(1.0 / 3.0))
    } else {
        Ok(d1)
    }
}

/// `Q = 2 Σ_{j,k} |⟨λ_j|∂_T ρ|λ_k⟩|² / (λ_j + λ_k)` with a numerical derivative
/// of step `dt`. The evaluation points `T ± 2 dt` must stay on one side of zero.
pub fn spectral_qfi(rho_of_t: impl Fn(f64) -> Result<ComplexMatrix>, temperature: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dT", "step must be positive and finite"));
    }
    if temperature.abs() <= 2.0 * dt {
        return Err(invalid("dT", "stencil T ± 2dT would cross T = 0"));
    }
    let rho = rho_of_t(temperature)?;
    rho.check_density(1e-10)?;
    let drho = density_derivative(&rho_of_t, temperature, dt)?;
    let eig = eig_hermitian(&rho)?;
    if eig.values[0] < -1e-10 {
        return Err(Error::NotDensityMatrix(alloc::format!(
            "negative eigenvalue {:e}",
            eig.values[0]
        )));
    }
    let v = &eig.vectors;
    let rotated = &(&v.adjoint() * &drho) * v;
    let n = rho.rows();
    let mut q = 0.0;
    for j in 0..n {
        for k in 0..n {
            let denom = eig.values[j] + eig.values[k];
            if denom > EIGEN_PAIR_CUTOFF {
                q += 2.0 * rotated[(j, k)].norm_sqr() / denom;
            }
        }
    }
    Ok(q.max(0.0))
}

/// Spectral QFI of the (optionally depolarized) output mode-a state.
pub fn oracle_qfi(cfg: &MziConfig, temperature: f64, channel: Option<DepolarizingChannel>) -> Result<f64> {
    let dt = default_step(temperature, cfg.epsilon());
    spectral_qfi(
        |t| {
            let rho = output_mode_state(cfg, t)?;
            match channel {
                Some(ch) => apply_depolarizing(&rho, ch),
                None => Ok(rho),
            }
        },
        temperature,
        dt,
    )
}

/// Spectral QFI of the bare thermal sample `⊗ diag(p_g, p_e)`.
pub fn gibbs_spectral_qfi(ens: &ThermalEnsemble) -> Result<f64> {
    let t = ens.temperature().value();
    let (m, eps) = (ens.m(), ens.epsilon());
    spectral_qfi(
        |t| crate::thermal::gibbs_density(&ThermalEnsemble::at(m, eps, t)?),
        t,
        default_step(t, eps),
    )
}

/// `⟨e^{iφM̂}⟩ = Tr(ρ_T e^{iφM̂})` summed over every sample configuration.
pub fn thermal_phase_average(ens: &ThermalEnsemble, phase: f64) -> Result<C64> {
    check_cap(ens.m())?;
    Ok(gibbs_diagonal(ens).into_iter().enumerate().fold(ZERO, |acc, (s, p)| {
        let (sin, cos) = (phase * s.count_ones() as f64).sin_cos();
        acc + C64::new(cos, sin) * p
    }))
}

/// `e^{iφ⟨M̂⟩}`, the phase a mean-field treatment would assign.
pub fn mean_field_phase_factor(ens: &ThermalEnsemble, phase: f64) -> C64 {
    let mean = ens.m() as f64 * excited_population(ens);
    let (sin, cos) = (phase * mean).sin_cos();
    C64::new(cos, sin)
}
