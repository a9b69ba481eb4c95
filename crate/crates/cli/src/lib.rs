// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: parameter sweeps, the cross-validation suite and
//! shot-noise experiments, emitting CSV (canonical), JSON and SVG.

pub mod commands;
pub mod error;
pub mod grid;
pub mod params;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{curve, experiment, naive, optimize, oracle_check, scaling, surface};
use crate::error::{CliError, Result};
use crate::params::Params;
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "mzi-thermo",
    version,
    about = "Thermometry with a N00N-state Mach-Zehnder interferometer"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// QFI along T, M or n_eff with the other parameters fixed.
    QfiCurve(Params),
    /// QFI over a (T, n_eff) grid with the ridge of maximisers.
    QfiSurface(Params),
    /// Max-over-n_eff QFI and the optimal n_eff along T.
    OptimizeNeff(Params),
    /// Optimised QFI over (N, M) with linear/quadratic fits in M.
    Scaling(Params),
    /// Repeated shot-noise CFI estimates from the sampled circuit.
    Experiment(Params),
    /// Random-point agreement of closed form, oracle and circuit.
    OracleCheck(Params),
    /// Naive N² error propagation against the exact QFI.
    NaiveCompare(Params),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::QfiCurve(_) => "qfi-curve",
            Command::QfiSurface(_) => "qfi-surface",
            Command::OptimizeNeff(_) => "optimize-neff",
            Command::Scaling(_) => "scaling",
            Command::Experiment(_) => "experiment",
            Command::OracleCheck(_) => "oracle-check",
            Command::NaiveCompare(_) => "naive-compare",
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Command::QfiCurve(p)
            | Command::QfiSurface(p)
            | Command::OptimizeNeff(p)
            | Command::Scaling(p)
            | Command::Experiment(p)
            | Command::OracleCheck(p)
            | Command::NaiveCompare(p) => p,
        }
    }
}

/// Resolves and validates every parameter, then computes the report.
pub fn build_report(command: &Command, params: &Params) -> Result<Report> {
    match command {
        Command::QfiCurve(_) => curve::run(&curve::CurveSpec::resolve(params)?),
        Command::QfiSurface(_) => surface::run(&surface::SurfaceSpec::resolve(params)?),
        Command::OptimizeNeff(_) => optimize::run(&optimize::OptimizeSpec::resolve(params)?),
        Command::Scaling(_) => scaling::run(&scaling::ScalingSpec::resolve(params)?),
        Command::Experiment(_) => experiment::run(&experiment::ExperimentSpec::resolve(params)?),
        Command::OracleCheck(_) => oracle_check::run(&oracle_check::CheckSpec::resolve(params)?),
        Command::NaiveCompare(_) => naive::run(&naive::NaiveSpec::resolve(params)?),
    }
}

/// Full run: merge the config file, compute, write artifacts. Returns the
/// written paths, or the tolerance failure after the artifacts are on disk.
pub fn execute(command: &Command) -> Result<Vec<PathBuf>> {
    let name = command.name();
    let params = command.params().clone().resolve(name)?;
    let report = build_report(command, &params)?;
    let dir = params.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let base = params.name.clone().unwrap_or_else(|| name.to_owned());
    let written = report.write(&dir, &base, !params.no_svg.unwrap_or(false))?;
    match report.failure {
        Some(msg) => Err(CliError::Tolerance(msg)),
        None => Ok(written),
    }
}
