// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! `optimize-neff`: max-over-n_eff QFI and its maximiser along T.

use mzi_thermo_core::analytic::qfi_max_over_neff;
use mzi_thermo_core::MziConfig;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    atoms, check_points, check_temperatures, epsilon, max_points, neff_range, photons, single, spec_json, temperatures,
};
use crate::error::Result;
use crate::params::Params;
use crate::report::{Report, Table};
use crate::svg::{LinePlot, Series};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizeSpec {
    #[serde(rename = "T")]
    pub temperatures: Vec<f64>,
    #[serde(rename = "M")]
    pub atoms: Vec<usize>,
    #[serde(rename = "N")]
    pub photons: u32,
    pub neff_range: (f64, f64),
    pub epsilon: f64,
}

impl OptimizeSpec {
    pub fn resolve(p: &Params) -> Result<Self> {
        let spec = Self {
            temperatures: temperatures(p, "0.05:3:60")?,
            atoms: atoms(p, "1,5,9")?,
            photons: single("N", &photons(p, "1")?)?,
            neff_range: neff_range(p)?,
            epsilon: epsilon(p),
        };
        check_points(
            "optimisation grid",
            spec.temperatures.len() * spec.atoms.len(),
            max_points(p),
        )?;
        check_temperatures(&spec.temperatures, spec.epsilon)?;
        for &m in &spec.atoms {
            MziConfig::new(spec.photons, 1.0, 0.0, spec.epsilon, m)?;
        }
        Ok(spec)
    }
}

pub fn run(spec: &OptimizeSpec) -> Result<Report> {
    let jobs: Vec<(usize, f64)> = spec
        .atoms
        .iter()
        .flat_map(|&m| spec.temperatures.iter().map(move |&t| (m, t)))
        .collect();
    let optima: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(m, t)| {
            let template = MziConfig::new(spec.photons, 1.0, 0.0, spec.epsilon, m)?;
            let o = qfi_max_over_neff(&template, t, spec.neff_range)?;
            Ok((o.n_eff, o.value))
        })
        .collect::<std::result::Result<_, mzi_thermo_core::Error>>()?;

    let mut table = Table::new("", &["M", "T", "n_eff_star", "qfi_max"]);
    let mut q_series: Vec<Series> = Vec::new();
    let mut n_series: Vec<Series> = Vec::new();
    for (k, &m) in spec.atoms.iter().enumerate() {
        let rows = &optima[k * spec.temperatures.len()..(k + 1) * spec.temperatures.len()];
        let mut q = Vec::new();
        let mut n = Vec::new();
        for (&t, &(n_eff, value)) in spec.temperatures.iter().zip(rows) {
            table.push(vec![m.into(), t.into(), n_eff.into(), value.into()]);
            q.push((t, value));
            n.push((t, n_eff));
        }
        q_series.push(Series::line(format!("M={m}"), q));
        n_series.push(Series::line(format!("M={m}"), n));
    }

    let mut report = Report::new("optimize-neff", spec_json(spec));
    report.plots.push((
        String::new(),
        LinePlot {
            title: "QFI maximised over n_eff".into(),
            x_label: "T / ε".into(),
            y_label: "max Q(T)".into(),
            series: q_series,
            ..LinePlot::default()
        }
        .render(),
    ));
    report.plots.push((
        "_neff".into(),
        LinePlot {
            title: "Optimal n_eff".into(),
            x_label: "T / ε".into(),
            y_label: "n_eff*".into(),
            series: n_series,
            ..LinePlot::default()
        }
        .render(),
    ));
    report.tables.push(table);
    Ok(report)
}
