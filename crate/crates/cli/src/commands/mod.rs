// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

pub mod curve;
pub mod experiment;
pub mod naive;
pub mod optimize;
pub mod oracle_check;
pub mod scaling;
pub mod surface;

use std::f64::consts::TAU;

use mzi_thermo_core::circuit::{NoonInput, DEFAULT_MAX_QUBITS};
use mzi_thermo_core::estimation::{DerivativeStep, ExperimentConfig, ShotModel, SlopeMode};
use mzi_thermo_core::simulator::RngSeed;
use mzi_thermo_core::{MziConfig, ThermalEnsemble};
use serde::Serialize;

use crate::error::{usage, Result};
use crate::grid;
use crate::params::{InputArg, Params, ShotArg, SlopeArg};

pub const DEFAULT_NEFF: f64 = 0.5;
pub const DEFAULT_MAX_POINTS: usize = 250_000;

fn list_reals(name: &str, value: Option<&crate::params::ListArg>, default: &str) -> Result<Vec<f64>> {
    grid::reals(name, value.map_or(default, |v| v.0.as_str()))
}

fn list_counts(name: &str, value: Option<&crate::params::ListArg>, default: &str) -> Result<Vec<u64>> {
    grid::counts(name, value.map_or(default, |v| v.0.as_str()))
}

pub(crate) fn temperatures(p: &Params, default: &str) -> Result<Vec<f64>> {
    list_reals("T", p.temperature.as_ref(), default)
}

pub(crate) fn atoms(p: &Params, default: &str) -> Result<Vec<usize>> {
    let v = list_counts("M", p.atoms.as_ref(), default)?;
    if v.contains(&0) {
        return Err(usage("--M: need at least one atom"));
    }
    Ok(v.into_iter().map(|m| m as usize).collect())
}

pub(crate) fn photons(p: &Params, default: &str) -> Result<Vec<u32>> {
    let v = list_counts("N", p.photons.as_ref(), default)?;
    v.into_iter()
        .map(|n| match u32::try_from(n) {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(usage(format!("--N: `{n}` is not a positive photon number"))),
        })
        .collect()
}

pub(crate) fn single<T: Copy + std::fmt::Display>(name: &str, v: &[T]) -> Result<T> {
    match v {
        [x] => Ok(*x),
        _ => Err(usage(format!("--{name}: expected a single value, got {}", v.len()))),
    }
}

pub(crate) fn epsilon(p: &Params) -> f64 {
    p.epsilon.unwrap_or(1.0)
}

pub(crate) fn neff_range(p: &Params) -> Result<(f64, f64)> {
    match &p.neff_range {
        Some(s) => grid::pair("neff-range", s),
        None => Ok((0.0, TAU)),
    }
}

pub(crate) fn max_points(p: &Params) -> usize {
    p.max_points.unwrap_or(DEFAULT_MAX_POINTS)
}

pub(crate) fn check_points(what: &str, count: usize, cap: usize) -> Result<()> {
    if count > cap {
        return Err(usage(format!(
            "{what} has {count} points, above the cap of {cap} (raise --max-points)"
        )));
    }
    Ok(())
}

/// Rejects temperatures the thermal model cannot represent.
pub(crate) fn check_temperatures(ts: &[f64], eps: f64) -> Result<()> {
    for &t in ts {
        ThermalEnsemble::at(1, eps, t)?;
    }
    Ok(())
}

/// How the interaction strength is specified.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    /// Explicit n_eff values; the interaction time absorbs N.
    Neff(Vec<f64>),
    /// Fixed χ and t, so n_eff = εNχt/2 grows with N.
    Interaction { chi: f64, t: f64 },
}

impl Coupling {
    pub fn resolve(p: &Params) -> Result<Self> {
        match (&p.neff, p.chi, p.time) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => Err(usage("give either --neff or --chi/--t, not both")),
            (Some(v), None, None) => Ok(Coupling::Neff(grid::reals("neff", &v.0)?)),
            (None, None, None) => Ok(Coupling::Neff(vec![DEFAULT_NEFF])),
            (None, chi, t) => Ok(Coupling::Interaction {
                chi: chi.unwrap_or(1.0),
                t: t.unwrap_or(1.0),
            }),
        }
    }

    pub fn configs(&self, n: u32, epsilon: f64, m: usize) -> Result<Vec<MziConfig>> {
        match self {
            Coupling::Neff(values) => values
                .iter()
                .map(|&v| Ok(MziConfig::new(n, 1.0, 0.0, epsilon, m)?.with_neff(v)?))
                .collect(),
            Coupling::Interaction { chi, t } => Ok(vec![MziConfig::new(n, *chi, *t, epsilon, m)?]),
        }
    }

    pub fn single(&self, n: u32, epsilon: f64, m: usize) -> Result<MziConfig> {
        let v = self.configs(n, epsilon, m)?;
        match v.as_slice() {
            [c] => Ok(*c),
            _ => Err(usage("--neff: expected a single value")),
        }
    }
}

/// Sampling settings shared by `experiment` and `scaling`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSettings {
    pub shots: u64,
    pub repetitions: usize,
    pub step: DerivativeStep,
    pub seed: u64,
    pub stream: u64,
    pub slope: SlopeMode,
    pub shot_model: ShotModel,
    pub input: NoonInput,
    pub smoothing: bool,
    pub max_qubits: usize,
}

impl ExperimentSettings {
    pub fn resolve(p: &Params) -> Result<Self> {
        let step = match (p.delta_t, p.delta_rel) {
            (Some(_), Some(_)) => return Err(usage("give either --delta-T or --delta-rel, not both")),
            (Some(d), None) => DerivativeStep::Absolute(d / epsilon(p)),
            (None, Some(f)) => DerivativeStep::Relative(f),
            (None, None) => DerivativeStep::default(),
        };
        let delta_ok = match step {
            DerivativeStep::Absolute(d) | DerivativeStep::Relative(d) => d > 0.0 && d.is_finite(),
        };
        if !delta_ok {
            return Err(usage("finite-difference step must be positive"));
        }
        let shots = p.shots.unwrap_or(5000);
        let repetitions = p.reps.unwrap_or(30);
        if shots == 0 || repetitions == 0 {
            return Err(usage("--shots and --reps must be positive"));
        }
        Ok(Self {
            shots,
            repetitions,
            step,
            seed: p.seed.unwrap_or(0),
            stream: p.stream.unwrap_or(0),
            slope: match p.slope.unwrap_or(SlopeArg::FiniteDifference) {
                SlopeArg::FiniteDifference => SlopeMode::FiniteDifference,
                SlopeArg::Analytic => SlopeMode::AnalyticSlope,
            },
            shot_model: match p.shot_model.unwrap_or(ShotArg::Sampled) {
                ShotArg::Sampled => ShotModel::Sampled,
                ShotArg::Exact => ShotModel::Exact,
            },
            input: match p.input.unwrap_or(InputArg::ArmB) {
                InputArg::ArmB => NoonInput::ArmB,
                InputArg::ArmA => NoonInput::ArmA,
            },
            smoothing: p.smoothing.unwrap_or(false),
            max_qubits: p.max_qubits.unwrap_or(DEFAULT_MAX_QUBITS),
        })
    }

    pub fn base_seed(&self) -> RngSeed {
        RngSeed::new(self.seed).with_stream(self.stream)
    }

    pub fn config(&self, mzi: MziConfig, temperature: f64, seed: RngSeed) -> ExperimentConfig {
        ExperimentConfig {
            shots: self.shots,
            repetitions: self.repetitions,
            step: self.step,
            seed,
            slope: self.slope,
            shot_model: self.shot_model,
            input: self.input,
            smoothing: self.smoothing,
            max_qubits: self.max_qubits,
            ..ExperimentConfig::new(mzi, temperature)
        }
    }
}

pub(crate) fn seed_json(seed: RngSeed, context: serde_json::Value) -> serde_json::Value {
    let mut v = context;
    v["seed"] = seed.seed.into();
    v["stream"] = seed.stream.into();
    v
}

pub(crate) fn spec_json(spec: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(spec).expect("specs serialize to JSON")
}
