// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical Fisher information estimated from simulated photon counts.
//!
//! One repetition samples the bright-port fraction at `T − δ` and `T + δ`
//! and forms `(Δp̂₀ / 2δ)² / (p̄₀ (1 − p̄₀))`. Repetitions use independent
//! RNG streams derived from one root seed, so results do not depend on
//! evaluation order.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::analytic::{dp0_dt, qfi_closed, qfi_max_over_neff, MziConfig};
use crate::circuit::{build_thermometry_circuit_with, CircuitOptions, NoonInput};
use crate::error::{invalid, Error, Result};
use crate::hilbert::SubsystemTag;
use crate::simulator::{classify_ports, run_statevector, sample_from_probabilities, PortCounts, RngSeed};

/// How `∂p₀/∂T` is obtained in each repetition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlopeMode {
    /// Two sampled circuits at `T ± δ`.
    #[default]
    FiniteDifference,
    /// Closed-form slope with the empirical `p̂₀` of one circuit at `T`.
    AnalyticSlope,
}

/// Finite-difference half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DerivativeStep {
    /// `δ = value · ε`.
    Absolute(f64),
    /// `δ = value · |T|`.
    Relative(f64),
}

impl Default for DerivativeStep {
    fn default() -> Self {
        DerivativeStep::Absolute(0.01)
    }
}

impl DerivativeStep {
    pub fn resolve(self, temperature: f64, epsilon: f64) -> f64 {
        match self {
            DerivativeStep::Absolute(d) => d * epsilon,
            DerivativeStep::Relative(f) => f * temperature.abs(),
        }
    }
}

/// Whether counts are drawn or replaced by their exact expectation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShotModel {
    #[default]
    Sampled,
    /// Born probabilities stand in for empirical frequencies (the infinite-shot limit).
    Exact,
}

/// Empirical bright-port fraction with optional add-half smoothing.
fn bright_fraction(bright: f64, shots: f64, smoothing: bool) -> f64 {
    if smoothing {
        (bright + 0.5) / (shots + 1.0)
    } else {
        bright / shots
    }
}

fn cfi_from_fractions(p_minus: f64, p_plus: f64, delta_t: f64) -> Option<f64> {
    let mid = 0.5 * (p_minus + p_plus);
    if mid <= 0.0 || mid >= 1.0 {
        return None;
    }
    let slope = (p_plus - p_minus) / (2.0 * delta_t);
    Some(slope * slope / (mid * (1.0 - mid)))
}

/// Two-outcome CFI from bright-port counts at `T − δ` and `T + δ`. `None`
/// when the pooled bright fraction is exactly 0 or 1, where the CFI is
/// undefined.
pub fn cfi_from_counts(minus: PortCounts, plus: PortCounts, delta_t: f64) -> Result<Option<f64>> {
    cfi_from_counts_with(minus, plus, delta_t, false)
}

/// As [`cfi_from_counts`], optionally with Krichevsky–Trofimov (add-half)
/// smoothing of each bright fraction.
pub fn cfi_from_counts_with(minus: PortCounts, plus: PortCounts, delta_t: f64, smoothing: bool) -> Result<Option<f64>> {
    if minus.shots() == 0 || plus.shots() == 0 {
        return Err(Error::ZeroShots);
    }
    if !(delta_t != 0.0 && delta_t.is_finite()) {
        return Err(invalid("delta_T", "must be nonzero and finite"));
    }
    let pm = bright_fraction(minus.n0 as f64, minus.shots() as f64, smoothing);
    let pp = bright_fraction(plus.n0 as f64, plus.shots() as f64, smoothing);
    Ok(cfi_from_fractions(pm, pp, delta_t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mzi: MziConfig,
    pub temperature: f64,
    pub shots: u64,
    pub repetitions: usize,
    pub step: DerivativeStep,
    pub seed: RngSeed,
    pub slope: SlopeMode,
    pub shot_model: ShotModel,
    pub input: NoonInput,
    pub smoothing: bool,
    pub max_qubits: usize,
}

impl ExperimentConfig {
    /// 5000 shots, 30 repetitions, `δ = 0.01 ε`, seed 0.
    pub fn new(mzi: MziConfig, temperature: f64) -> Self {
        Self {
            mzi,
            temperature,
            shots: 5000,
            repetitions: 30,
            step: DerivativeStep::default(),
            seed: RngSeed::new(0),
            slope: SlopeMode::default(),
            shot_model: ShotModel::default(),
            input: NoonInput::default(),
            smoothing: false,
            max_qubits: CircuitOptions::default().max_qubits,
        }
    }

    pub fn delta_t(&self) -> f64 {
        self.step.resolve(self.temperature, self.mzi.epsilon())
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::ZeroShots);
        }
        if self.repetitions == 0 {
            return Err(invalid("repetitions", "need at least one"));
        }
        if !self.temperature.is_finite() || self.temperature == 0.0 {
            return Err(invalid("temperature", "must be finite and nonzero"));
        }
        let d = self.delta_t();
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid("delta_T", "must be positive and finite"));
        }
        if self.slope == SlopeMode::FiniteDifference && self.temperature.abs() <= d {
            return Err(invalid("delta_T", "|T| must exceed the finite-difference step"));
        }
        Ok(())
    }
}

/// Aggregate of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfiEstimate {
    pub temperature: f64,
    pub n_eff: f64,
    pub delta_t: f64,
    /// Mean over repetitions with a defined CFI.
    pub mean: Option<f64>,
    /// Sample standard deviation across those repetitions.
    pub std: Option<f64>,
    /// `std / √(defined repetitions)`.
    pub sem: Option<f64>,
    /// `None` where the CFI was undefined.
    pub per_repetition: Vec<Option<f64>>,
    /// Seed of each repetition's first (or only) circuit.
    pub seeds: Vec<RngSeed>,
}

impl CfiEstimate {
    pub fn defined(&self) -> usize {
        self.per_repetition.iter().filter(|v| v.is_some()).count()
    }
}

/// Mean and sample standard deviation (n − 1 denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

/// Born probability of the bright port at one temperature.
fn born_bright(ec: &ExperimentConfig, temperature: f64) -> Result<(Vec<SubsystemTag>, Vec<f64>)> {
    let ens = ec.mzi.ensemble(temperature)?;
    let opts = CircuitOptions {
        input: ec.input,
        max_qubits: ec.max_qubits,
    };
    let circ = build_thermometry_circuit_with(&ec.mzi, &ens, opts)?;
    let measured = circ.measured();
    let probs = run_statevector(&circ)?.marginal_probabilities(&measured)?;
    Ok((measured, probs))
}

struct Side {
    measured: Vec<SubsystemTag>,
    probs: Vec<f64>,
}

impl Side {
    fn new(ec: &ExperimentConfig, temperature: f64) -> Result<Self> {
        let (measured, probs) = born_bright(ec, temperature)?;
        Ok(Self { measured, probs })
    }

    /// Bright-port fraction for one repetition.
    fn fraction(&self, ec: &ExperimentConfig, seed: RngSeed) -> Result<f64> {
        let bright_zero = ec.input.bright_is_all_zeros();
        match ec.shot_model {
            ShotModel::Exact => {
                let p = if bright_zero {
                    self.probs[0]
                } else {
                    self.probs[self.probs.len() - 1]
                };
                Ok(p)
            }
            ShotModel::Sampled => {
                let rec = sample_from_probabilities(&self.measured, &self.probs, ec.shots, seed)?;
                let mut pc = classify_ports(&rec, &self.measured)?;
                if !bright_zero {
                    pc = pc.swapped();
                }
                Ok(bright_fraction(pc.n0 as f64, pc.shots() as f64, ec.smoothing))
            }
        }
    }
}

/// Runs the repeated two-point protocol.
pub fn run_experiment(ec: &ExperimentConfig) -> Result<CfiEstimate> {
    ec.validate()?;
    let t = ec.temperature;
    let delta = ec.delta_t();
    let mut per_repetition = Vec::with_capacity(ec.repetitions);
    let mut seeds = Vec::with_capacity(ec.repetitions);

    match ec.slope {
        SlopeMode::FiniteDifference => {
            let minus = Side::new(ec, t - delta)?;
            let plus = Side::new(ec, t + delta)?;
            for r in 0..ec.repetitions as u64 {
                let (sm, sp) = (ec.seed.derive(2 * r), ec.seed.derive(2 * r + 1));
                let pm = minus.fraction(ec, sm)?;
                let pp = plus.fraction(ec, sp)?;
                per_repetition.push(cfi_from_fractions(pm, pp, delta));
                seeds.push(sm);
            }
        }
        SlopeMode::AnalyticSlope => {
            let here = Side::new(ec, t)?;
            let slope = dp0_dt(&ec.mzi, t)?;
            for r in 0..ec.repetitions as u64 {
                let s = ec.seed.derive(2 * r);
                let p = here.fraction(ec, s)?;
                per_repetition.push(if p <= 0.0 || p >= 1.0 {
                    None
                } else {
                    Some(slope * slope / (p * (1.0 - p)))
                });
                seeds.push(s);
            }
        }
    }

    let defined: Vec<f64> = per_repetition.iter().flatten().copied().collect();
    let stats = mean_std(&defined);
    Ok(CfiEstimate {
        temperature: t,
        n_eff: ec.mzi.n_eff(),
        delta_t: delta,
        mean: stats.map(|s| s.0),
        std: stats.map(|s| s.1),
        sem: stats.map(|s| s.1 / (defined.len() as f64).sqrt()),
        per_repetition,
        seeds,
    })
}

/// Settings shared by every row of a scaling study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    pub epsilon: f64,
    pub neff_range: (f64, f64),
    /// Circuit experiment run at each optimum; `None` for analytics only.
    pub experiment: Option<ExperimentConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: u32,
    pub m: usize,
    pub n_eff_star: f64,
    pub qfi_analytic: f64,
    /// Absent when not requested or when the circuit exceeds the qubit budget.
    pub cfi: Option<CfiEstimate>,
}

/// Max-over-n_eff QFI for every (N, M) pair, optionally with a shot-noise
/// circuit estimate at the optimum.
pub fn scaling_study(
    temperature: f64,
    n_list: &[u32],
    m_list: &[usize],
    opts: &ScalingOptions,
) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::with_capacity(n_list.len() * m_list.len());
    for &n in n_list {
        for &m in m_list {
            let template = MziConfig::new(n, 1.0, 0.0, opts.epsilon, m)?;
            let opt = qfi_max_over_neff(&template, temperature, opts.neff_range)?;
            let cfg = template.with_neff(opt.n_eff)?;
            let cfi = match &opts.experiment {
                Some(base) if 2 * (n as usize + m) <= base.max_qubits => {
                    let ec = ExperimentConfig {
                        mzi: cfg,
                        temperature,
                        seed: base.seed.derive(((n as u64) << 32) | m as u64),
                        ..base.clone()
                    };
                    Some(run_experiment(&ec)?)
                }
                _ => None,
            };
            rows.push(ScalingRow {
                n,
                m,
                n_eff_star: opt.n_eff,
                qfi_analytic: qfi_closed(&cfg, temperature)?.value.max(opt.value),
                cfi,
            });
        }
    }
    Ok(rows)
}

/// Least-squares fit through the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginFit {
    /// Linear coefficient of `y ≈ c₁ x`.
    pub c1: f64,
    /// `1 − SS_res / SS_tot`, with `SS_tot` taken about the mean of y.
    pub r_squared: f64,
}

pub fn fit_linear_origin(xs: &[f64], ys: &[f64]) -> Result<OriginFit> {
    check_fit_input(xs, ys, 1)?;
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let c1 = sxy / sxx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - c1 * x).powi(2)).sum();
    Ok(OriginFit {
        c1,
        r_squared: 1.0 - ss_res / total_sum_of_squares(ys),
    })
}

/// `(c₁, c₂)` of `y ≈ c₁ x + c₂ x²`.
pub fn fit_quadratic_origin(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    check_fit_input(xs, ys, 2)?;
    let s = |p: i32| xs.iter().map(|x| x.powi(p)).sum::<f64>();
    let sy = |p: i32| xs.iter().zip(ys).map(|(x, y)| x.powi(p) * y).sum::<f64>();
    let (a, b, d) = (s(2), s(3), s(4));
    let det = a * d - b * b;
    if det == 0.0 {
        return Err(invalid("fit", "degenerate abscissae"));
    }
    let (r1, r2) = (sy(1), sy(2));
    Ok(((d * r1 - b * r2) / det, (a * r2 - b * r1) / det))
}

/// Ordinary least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_fit_input(xs, ys, 2)?;
    if xs.iter().chain(ys).any(|v| *v <= 0.0) {
        return Err(invalid("fit", "log-log fit needs positive data"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("fit", "degenerate abscissae"));
    }
    Ok(sxy / sxx)
}

fn total_sum_of_squares(ys: &[f64]) -> f64 {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    ys.iter().map(|y| (y - mean) * (y - mean)).sum()
}

fn check_fit_input(xs: &[f64], ys: &[f64], min: usize) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < min {
        return Err(invalid("fit", "not enough points"));
    }
    Ok(())
}
