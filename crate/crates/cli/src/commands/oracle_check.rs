// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! `oracle-check`: closed form, binomial sum, exact density-matrix oracle and
//! circuit Born probabilities compared on random operating points.

use std::f64::consts::TAU;

use mzi_thermo_core::analytic::{demoivre_terms, p0_binomial, p0_closed, qfi_closed};
use mzi_thermo_core::circuit::{build_thermometry_circuit_with, CircuitOptions, DEFAULT_MAX_QUBITS};
use mzi_thermo_core::oracle::{oracle_p0, oracle_qfi, ORACLE_MAX_M};
use mzi_thermo_core::simulator::{run_statevector, RngSeed};
use mzi_thermo_core::{Error, MziConfig, SubsystemTag};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{atoms, photons, seed_json, single, spec_json};
use crate::error::{usage, Result};
use crate::params::Params;
use crate::report::{Report, Table};

pub const P0_TOLERANCE: f64 = 1e-10;
pub const QFI_TOLERANCE: f64 = 1e-6;
/// Below this the relative QFI comparison is meaningless.
pub const QFI_FLOOR: f64 = 1e-8;
pub const FAULT_SIZE: f64 = 1e-6;
const MAX_LISTED: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSpec {
    pub points: usize,
    pub max_m: usize,
    pub max_n: u32,
    /// Range of |T|; the sign is drawn uniformly.
    pub abs_temperature: (f64, f64),
    pub neff_range: (f64, f64),
    pub seed: u64,
    pub stream: u64,
    pub inject_fault: bool,
    pub max_qubits: usize,
    pub p0_tolerance: f64,
    pub qfi_tolerance: f64,
    pub qfi_floor: f64,
}

impl Default for CheckSpec {
    fn default() -> Self {
        Self {
            points: 500,
            max_m: 6,
            max_n: 3,
            abs_temperature: (0.05, 10.0),
            neff_range: (0.0, TAU),
            seed: 0,
            stream: 0,
            inject_fault: false,
            max_qubits: DEFAULT_MAX_QUBITS,
            p0_tolerance: P0_TOLERANCE,
            qfi_tolerance: QFI_TOLERANCE,
            qfi_floor: QFI_FLOOR,
        }
    }
}

impl CheckSpec {
    pub fn resolve(p: &Params) -> Result<Self> {
        let d = CheckSpec::default();
        let spec = Self {
            points: p.points.unwrap_or(d.points),
            max_m: single("M", &atoms(p, &d.max_m.to_string())?)?,
            max_n: single("N", &photons(p, &d.max_n.to_string())?)?,
            seed: p.seed.unwrap_or(d.seed),
            stream: p.stream.unwrap_or(d.stream),
            inject_fault: p.inject_fault.unwrap_or(false),
            max_qubits: p.max_qubits.unwrap_or(d.max_qubits),
            ..d
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(usage("--points must be positive"));
        }
        if self.max_m > ORACLE_MAX_M {
            return Err(Error::CapExceeded {
                what: "M (exact oracle)",
                requested: self.max_m,
                cap: ORACLE_MAX_M,
            }
            .into());
        }
        Ok(())
    }

    fn seed_base(&self) -> RngSeed {
        RngSeed::new(self.seed).with_stream(self.stream)
    }

    /// The random operating points, drawn sequentially so the set depends
    /// only on the seed.
    pub fn draw(&self) -> Vec<CheckPoint> {
        let mut rng = self.seed_base().rng();
        (0..self.points)
            .map(|index| {
                let m = rng.random_range(1..=self.max_m);
                let n = rng.random_range(1..=self.max_n);
                let mag = rng.random_range(self.abs_temperature.0..=self.abs_temperature.1);
                let t = if rng.random::<bool>() { mag } else { -mag };
                let n_eff = rng.random_range(self.neff_range.0..self.neff_range.1);
                CheckPoint { index, m, n, t, n_eff }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckPoint {
    pub index: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "T")]
    pub t: f64,
    pub n_eff: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated {
    pub point: CheckPoint,
    pub p0_binomial: f64,
    pub p0_closed: f64,
    pub p0_oracle: f64,
    /// `None` when the circuit exceeds the qubit budget.
    pub p0_circuit: Option<f64>,
    pub qfi_closed: f64,
    /// `None` where the closed-form QFI is below the comparison floor.
    pub qfi_spectral: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub measure: &'static str,
    pub tolerance: f64,
    pub evaluated: usize,
    pub worst: f64,
    pub worst_index: Option<usize>,
    pub pass: bool,
    pub failures: usize,
    pub offending: Vec<serde_json::Value>,
}

fn evaluate_point(spec: &CheckSpec, pt: CheckPoint) -> Result<Evaluated> {
    let cfg = MziConfig::new(pt.n, 1.0, 0.0, 1.0, pt.m)?.with_neff(pt.n_eff)?;
    let p0_closed = if spec.inject_fault {
        let mut terms = demoivre_terms(&cfg, pt.t)?;
        terms.alpha += FAULT_SIZE;
        terms.p0(pt.m)
    } else {
        p0_closed(&cfg, pt.t)?
    };
    let qubits = 2 * (pt.n as usize + pt.m);
    let p0_circuit = if qubits <= spec.max_qubits {
        let opts = CircuitOptions {
            max_qubits: spec.max_qubits,
            ..CircuitOptions::default()
        };
        let circ = build_thermometry_circuit_with(&cfg, &cfg.ensemble(pt.t)?, opts)?;
        let arm: Vec<SubsystemTag> = (0..pt.n as u16).map(SubsystemTag::ArmA).collect();
        Some(run_statevector(&circ)?.marginal_probabilities(&arm)?[0])
    } else {
        None
    };
    let qfi_closed = qfi_closed(&cfg, pt.t)?.value;
    let qfi_spectral = if qfi_closed > spec.qfi_floor {
        Some(oracle_qfi(&cfg, pt.t, None)?)
    } else {
        None
    };
    Ok(Evaluated {
        point: pt,
        p0_binomial: p0_binomial(&cfg, pt.t)?,
        p0_closed,
        p0_oracle: oracle_p0(&cfg, pt.t)?,
        p0_circuit,
        qfi_closed,
        qfi_spectral,
    })
}

pub fn evaluate(spec: &CheckSpec) -> Result<Vec<Evaluated>> {
    spec.validate()?;
    spec.draw().into_par_iter().map(|pt| evaluate_point(spec, pt)).collect()
}

fn outcome(
    check: &'static str,
    measure: &'static str,
    tolerance: f64,
    devs: impl Iterator<Item = (CheckPoint, f64)>,
) -> CheckOutcome {
    let mut o = CheckOutcome {
        check,
        measure,
        tolerance,
        evaluated: 0,
        worst: 0.0,
        worst_index: None,
        pass: true,
        failures: 0,
        offending: Vec::new(),
    };
    for (pt, d) in devs {
        o.evaluated += 1;
        // NaN counts as a failure and as the worst deviation.
        if d.is_nan() || d > o.worst {
            o.worst = if d.is_nan() { f64::INFINITY } else { d };
            o.worst_index = Some(pt.index);
        }
        if d.is_nan() || d >= tolerance {
            o.failures += 1;
            if o.offending.len() < MAX_LISTED {
                let mut v = serde_json::to_value(pt).expect("points serialize");
                v["deviation"] = serde_json::Number::from_f64(d).map_or(serde_json::Value::Null, Into::into);
                o.offending.push(v);
            }
        }
    }
    o.pass = o.failures == 0;
    o
}

pub fn outcomes(spec: &CheckSpec, rows: &[Evaluated]) -> Vec<CheckOutcome> {
    vec![
        outcome(
            "binomial-vs-closed-form",
            "absolute p0",
            spec.p0_tolerance,
            rows.iter().map(|r| (r.point, (r.p0_binomial - r.p0_closed).abs())),
        ),
        outcome(
            "binomial-vs-oracle",
            "absolute p0",
            spec.p0_tolerance,
            rows.iter().map(|r| (r.point, (r.p0_binomial - r.p0_oracle).abs())),
        ),
        outcome(
            "binomial-vs-circuit",
            "absolute p0",
            spec.p0_tolerance,
            rows.iter()
                .filter_map(|r| Some((r.point, (r.p0_binomial - r.p0_circuit?).abs()))),
        ),
        outcome(
            "closed-form-vs-spectral-qfi",
            "relative QFI",
            spec.qfi_tolerance,
            rows.iter()
                .filter_map(|r| Some((r.point, ((r.qfi_spectral? - r.qfi_closed) / r.qfi_closed).abs()))),
        ),
    ]
}

pub fn run(spec: &CheckSpec) -> Result<Report> {
    let rows = evaluate(spec)?;
    let checks = outcomes(spec, &rows);

    let mut table = Table::new(
        "",
        &[
            "index",
            "M",
            "N",
            "T",
            "n_eff",
            "p0_binomial",
            "p0_closed",
            "p0_oracle",
            "p0_circuit",
            "qfi_closed",
            "qfi_spectral",
        ],
    );
    for r in &rows {
        let p = r.point;
        table.push(vec![
            p.index.into(),
            p.m.into(),
            p.n.into(),
            p.t.into(),
            p.n_eff.into(),
            r.p0_binomial.into(),
            r.p0_closed.into(),
            r.p0_oracle.into(),
            r.p0_circuit.into(),
            r.qfi_closed.into(),
            r.qfi_spectral.into(),
        ]);
    }

    let mut report = Report::new("oracle-check", spec_json(spec));
    report
        .seeds
        .push(seed_json(spec.seed_base(), json!({ "use": "point sampling" })));
    let all = checks.iter().all(|c| c.pass);
    report.summary.push(json!({ "check": "all", "pass": all }));
    for c in &checks {
        report
            .summary
            .push(serde_json::to_value(c).expect("outcomes serialize"));
    }
    if !all {
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| {
                format!(
                    "{} ({} of {} points, worst {:e} at point {})",
                    c.check,
                    c.failures,
                    c.evaluated,
                    c.worst,
                    c.worst_index.map_or("-".into(), |i| i.to_string())
                )
            })
            .collect();
        report.failure = Some(failed.join("; "));
    }
    report.tables.push(table);
    Ok(report)
}
