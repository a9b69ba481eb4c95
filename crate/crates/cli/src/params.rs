// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Flag/config-file parameter set. Every field is optional so a JSON config
//! can supply defaults that explicit flags then override.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A list-valued parameter kept in its textual form until a command knows
/// whether it wants reals or integers.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(into = "String")]
pub struct ListArg(pub String);

impl FromStr for ListArg {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(ListArg(s.to_owned()))
    }
}

impl fmt::Display for ListArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<ListArg> for String {
    fn from(v: ListArg) -> String {
        v.0
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Num(f64),
    Str(String),
}

impl Scalar {
    fn text(self) -> String {
        match self {
            Scalar::Int(v) => v.to_string(),
            // Shortest round-trip form, so the grid parser recovers the value exactly.
            Scalar::Num(v) => format!("{v:?}"),
            Scalar::Str(s) => s,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ListForm {
    One(Scalar),
    Many(Vec<Scalar>),
}

impl<'de> Deserialize<'de> for ListArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match ListForm::deserialize(d)? {
            ListForm::One(s) => ListArg(s.text()),
            ListForm::Many(v) => ListArg(v.into_iter().map(Scalar::text).collect::<Vec<_>>().join(",")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SweepVar {
    #[value(name = "T")]
    #[serde(rename = "T")]
    Temperature,
    #[value(name = "M")]
    #[serde(rename = "M")]
    Atoms,
    #[value(name = "neff")]
    #[serde(rename = "neff")]
    Neff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeArg {
    /// Two circuits at T ± δ.
    FiniteDifference,
    /// Closed-form slope, one circuit at T.
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShotArg {
    Sampled,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputArg {
    ArmB,
    ArmA,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// JSON file of parameter values; explicit flags take precedence.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Command the config file was written for (config files only).
    #[arg(skip)]
    pub command: Option<String>,

    /// Variable along the x axis of `qfi-curve`.
    #[arg(long, value_enum)]
    pub sweep: Option<SweepVar>,

    /// Temperature(s) in units of the gap.
    #[arg(long = "T", value_name = "LIST", allow_hyphen_values = true)]
    #[serde(rename = "T")]
    pub temperature: Option<ListArg>,

    /// Number(s) of sample atoms.
    #[arg(long = "M", value_name = "LIST")]
    #[serde(rename = "M")]
    pub atoms: Option<ListArg>,

    /// Photon number(s) of the N00N probe.
    #[arg(long = "N", value_name = "LIST")]
    #[serde(rename = "N")]
    pub photons: Option<ListArg>,

    /// Effective excitation parameter(s) εNχt/2.
    #[arg(long, value_name = "LIST")]
    pub neff: Option<ListArg>,

    /// Search interval lo:hi for n_eff optimisation.
    #[arg(long, value_name = "LO:HI")]
    pub neff_range: Option<String>,

    /// Maximise over n_eff at every point.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub optimize_neff: Option<bool>,

    /// Dispersive coupling χ (alternative to --neff).
    #[arg(long)]
    pub chi: Option<f64>,

    /// Interaction time t (alternative to --neff).
    #[arg(long = "t")]
    #[serde(rename = "t")]
    pub time: Option<f64>,

    /// Level splitting ε.
    #[arg(long)]
    pub epsilon: Option<f64>,

    #[arg(long)]
    pub shots: Option<u64>,

    #[arg(long)]
    pub reps: Option<usize>,

    /// Absolute finite-difference half-width δ.
    #[arg(long = "delta-T", value_name = "DELTA")]
    #[serde(rename = "delta-T")]
    pub delta_t: Option<f64>,

    /// Finite-difference half-width as a fraction of |T|.
    #[arg(long, value_name = "FRACTION")]
    pub delta_rel: Option<f64>,

    #[arg(long, value_enum)]
    pub slope: Option<SlopeArg>,

    #[arg(long, value_enum)]
    pub shot_model: Option<ShotArg>,

    #[arg(long, value_enum)]
    pub input: Option<InputArg>,

    /// Add-half smoothing of bright-port fractions.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub smoothing: Option<bool>,

    /// Depolarizing parameter p_γ applied to the output mode.
    #[arg(long)]
    pub p_gamma: Option<f64>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub stream: Option<u64>,

    /// Also run the sampled circuit experiment (`scaling`).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub with_circuit: Option<bool>,

    /// Number of random points (`oracle-check`).
    #[arg(long)]
    pub points: Option<usize>,

    /// Perturb α by 1e-6 to confirm the checker catches it (`oracle-check`).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub inject_fault: Option<bool>,

    /// Largest grid a command will evaluate.
    #[arg(long)]
    pub max_points: Option<usize>,

    /// Largest circuit to simulate.
    #[arg(long)]
    pub max_qubits: Option<usize>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    /// Base name of the output files (defaults to the command name).
    #[arg(long)]
    pub name: Option<String>,

    /// Skip SVG output.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_svg: Option<bool>,
}

macro_rules! overlay {
    ($top:ident, $base:ident; $($f:ident),* $(,)?) => {
        Params { $($f: $top.$f.or($base.$f),)* }
    };
}

impl Params {
    /// Field-wise `self` over `base`.
    pub fn over(self, base: Params) -> Params {
        let top = self;
        overlay!(top, base;
            config, command, sweep, temperature, atoms, photons, neff, neff_range,
            optimize_neff, chi, time, epsilon, shots, reps, delta_t, delta_rel, slope,
            shot_model, input, smoothing, p_gamma, seed, stream, with_circuit, points,
            inject_fault, max_points, max_qubits, out_dir, name, no_svg,
        )
    }

    pub fn from_file(path: &Path) -> Result<Params> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.to_owned(),
            reason: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_owned(),
            reason: e.to_string(),
        })
    }

    /// Flags over the config file named by `--config`, if any.
    pub fn resolve(self, command: &str) -> Result<Params> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = Params::from_file(&path)?;
        if let Some(c) = &file.command {
            if c != command {
                return Err(CliError::Config {
                    path,
                    reason: format!("written for `{c}`, not `{command}`"),
                });
            }
        }
        Ok(self.over(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: Params = serde_json::from_str(r#"{"T": [0.1, 0.2], "M": "1..3", "seed": 4, "chi": 1}"#).unwrap();
        let flags = Params {
            seed: Some(9),
            ..Params::default()
        };
        let p = flags.over(file);
        assert_eq!(p.seed, Some(9));
        assert_eq!(p.temperature, Some(ListArg("0.1,0.2".into())));
        assert_eq!(p.atoms, Some(ListArg("1..3".into())));
        assert_eq!(p.chi, Some(1.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Params>(r#"{"tempreature": 1}"#).is_err());
    }

    #[test]
    fn numeric_list_items_round_trip() {
        let p: Params = serde_json::from_str(r#"{"neff": 0.1}"#).unwrap();
        assert_eq!(p.neff.unwrap().0.parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn integer_items_stay_integers() {
        let p: Params = serde_json::from_str(r#"{"M": 9, "N": [1, 2], "T": -2}"#).unwrap();
        assert_eq!(p.atoms, Some(ListArg("9".into())));
        assert_eq!(p.photons, Some(ListArg("1,2".into())));
        assert_eq!(p.temperature, Some(ListArg("-2".into())));
    }
}
