// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! `experiment`: repeated shot-noise CFI estimates against the QFI curve.

use mzi_thermo_core::analytic::{qfi_closed, qfi_max_over_neff};
use mzi_thermo_core::estimation::run_experiment;
use mzi_thermo_core::oracle::{oracle_qfi, DepolarizingChannel, ORACLE_MAX_M};
use mzi_thermo_core::{Error, MziConfig};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{
    atoms, check_points, check_temperatures, epsilon, max_points, neff_range, photons, seed_json, single, spec_json,
    temperatures, Coupling, ExperimentSettings,
};
use crate::error::Result;
use crate::params::Params;
use crate::report::{Report, Table};
use crate::svg::{LinePlot, Series, Style};

const CURVE_POINTS: usize = 401;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSpec {
    #[serde(rename = "T")]
    pub temperatures: Vec<f64>,
    #[serde(rename = "M")]
    pub atoms: usize,
    #[serde(rename = "N")]
    pub photons: u32,
    pub coupling: Coupling,
    pub optimize_neff: bool,
    pub neff_range: (f64, f64),
    pub epsilon: f64,
    pub p_gamma: Option<f64>,
    pub sampling: ExperimentSettings,
}

impl ExperimentSpec {
    pub fn resolve(p: &Params) -> Result<Self> {
        let spec = Self {
            temperatures: temperatures(p, "-3:-0.3:10,0.3:3:10")?,
            atoms: single("M", &atoms(p, "1")?)?,
            photons: single("N", &photons(p, "1")?)?,
            coupling: Coupling::resolve(p)?,
            optimize_neff: p.optimize_neff.unwrap_or(false),
            neff_range: neff_range(p)?,
            epsilon: epsilon(p),
            p_gamma: p.p_gamma,
            sampling: ExperimentSettings::resolve(p)?,
        };
        check_points("temperature grid", spec.temperatures.len(), max_points(p))?;
        check_temperatures(&spec.temperatures, spec.epsilon)?;
        spec.coupling.single(spec.photons, spec.epsilon, spec.atoms)?;
        if let Some(pg) = spec.p_gamma {
            DepolarizingChannel::new(pg)?;
            if spec.atoms > ORACLE_MAX_M {
                return Err(Error::CapExceeded {
                    what: "M (depolarized QFI)",
                    requested: spec.atoms,
                    cap: ORACLE_MAX_M,
                }
                .into());
            }
        }
        // Surface step/T conflicts and the qubit budget before any sampling.
        let base = spec.coupling.single(spec.photons, spec.epsilon, spec.atoms)?;
        for &t in &spec.temperatures {
            spec.sampling.config(base, t, spec.sampling.base_seed()).validate()?;
        }
        let qubits = 2 * (spec.photons as usize + spec.atoms);
        if qubits > spec.sampling.max_qubits {
            return Err(Error::CapExceeded {
                what: "qubits",
                requested: qubits,
                cap: spec.sampling.max_qubits,
            }
            .into());
        }
        Ok(spec)
    }

    fn config_at(&self, t: f64) -> Result<MziConfig> {
        let base = self.coupling.single(self.photons, self.epsilon, self.atoms)?;
        if self.optimize_neff {
            let o = qfi_max_over_neff(&base, t, self.neff_range)?;
            Ok(base.with_neff(o.n_eff)?)
        } else {
            Ok(base)
        }
    }

    fn depolarized(&self, cfg: &MziConfig, t: f64) -> Result<Option<f64>> {
        match self.p_gamma {
            Some(pg) => Ok(Some(oracle_qfi(cfg, t, Some(DepolarizingChannel::new(pg)?))?)),
            None => Ok(None),
        }
    }
}

struct Row {
    cfg: MziConfig,
    qfi: f64,
    depolarized: Option<f64>,
    estimate: mzi_thermo_core::estimation::CfiEstimate,
}

pub fn run(spec: &ExperimentSpec) -> Result<Report> {
    let base_seed = spec.sampling.base_seed();
    let rows: Vec<Row> = spec
        .temperatures
        .par_iter()
        .enumerate()
        .map(|(i, &t)| -> Result<Row> {
            let cfg = spec.config_at(t)?;
            let ec = spec.sampling.config(cfg, t, base_seed.derive(i as u64));
            Ok(Row {
                cfg,
                qfi: qfi_closed(&cfg, t)?.value,
                depolarized: spec.depolarized(&cfg, t)?,
                estimate: run_experiment(&ec)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(
        "",
        &[
            "T",
            "n_eff",
            "M",
            "N",
            "shots",
            "reps",
            "delta_T",
            "qfi_analytic",
            "qfi_depolarized",
            "cfi_mean",
            "cfi_std",
            "cfi_sem",
            "defined",
        ],
    );
    let mut report = Report::new("experiment", spec_json(spec));
    for (i, (&t, r)) in spec.temperatures.iter().zip(&rows).enumerate() {
        let e = &r.estimate;
        table.push(vec![
            t.into(),
            r.cfg.n_eff().into(),
            spec.atoms.into(),
            spec.photons.into(),
            spec.sampling.shots.into(),
            spec.sampling.repetitions.into(),
            e.delta_t.into(),
            r.qfi.into(),
            r.depolarized.into(),
            e.mean.into(),
            e.std.into(),
            e.sem.into(),
            e.defined().into(),
        ]);
        report
            .seeds
            .push(seed_json(base_seed.derive(i as u64), json!({ "T": t })));
        report.summary.push(json!({
            "T": t,
            "cfi_per_repetition": e.per_repetition,
            "repetition_seeds": e.seeds,
        }));
    }
    report.plots.push((String::new(), plot(spec, &rows)?.render()));
    report.tables.push(table);
    Ok(report)
}

fn plot(spec: &ExperimentSpec, rows: &[Row]) -> Result<LinePlot> {
    let lo = spec.temperatures.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = spec.temperatures.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = 1e-3 * lo.abs().max(hi.abs());
    let grid: Vec<f64> = (0..CURVE_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / (CURVE_POINTS - 1) as f64)
        .filter(|t| t.abs() > floor)
        .collect();
    let theory: Vec<(f64, Option<f64>, f64)> = grid
        .par_iter()
        .map(|&t| {
            let cfg = spec.config_at(t)?;
            Ok((t, spec.depolarized(&cfg, t)?, qfi_closed(&cfg, t)?.value))
        })
        .collect::<Result<_>>()?;

    let mut series = vec![Series::line("QFI", theory.iter().map(|&(t, _, q)| (t, q)).collect())];
    if let Some(pg) = spec.p_gamma {
        series.push(
            Series::line(
                format!("QFI, p_γ={pg}"),
                theory.iter().filter_map(|&(t, d, _)| d.map(|d| (t, d))).collect(),
            )
            .styled(Style::Dashed),
        );
    }
    let (pts, errs): (Vec<_>, Vec<_>) = spec
        .temperatures
        .iter()
        .zip(rows)
        .filter_map(|(&t, r)| Some(((t, r.estimate.mean?), r.estimate.std.unwrap_or(0.0))))
        .unzip();
    series.push(
        Series::line("CFI (shots)", pts)
            .styled(Style::Markers)
            .with_errors(errs),
    );
    Ok(LinePlot {
        title: format!("Shot-noise CFI, N = {}, M = {}", spec.photons, spec.atoms),
        x_label: "T / ε".into(),
        y_label: "Fisher information".into(),
        series,
        ..LinePlot::default()
    })
}
