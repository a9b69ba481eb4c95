// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! `naive-compare`: phase-error-propagation QFI (∝ N²) beside the exact,
//! n_eff-optimised QFI (flat in N).

use mzi_thermo_core::analytic::{qfi_max_over_neff, qfi_naive_phase};
use mzi_thermo_core::estimation::log_log_slope;
use mzi_thermo_core::MziConfig;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{
    atoms, check_points, check_temperatures, epsilon, max_points, neff_range, photons, single, spec_json, temperatures,
};
use crate::error::{usage, Result};
use crate::params::Params;
use crate::report::{Report, Table};
use crate::svg::{LinePlot, Series, Style};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NaiveSpec {
    #[serde(rename = "N")]
    pub photons: Vec<u32>,
    #[serde(rename = "M")]
    pub atoms: usize,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub chi: f64,
    pub t: f64,
    pub epsilon: f64,
    pub neff_range: (f64, f64),
}

impl NaiveSpec {
    pub fn resolve(p: &Params) -> Result<Self> {
        if p.neff.is_some() {
            return Err(usage("naive-compare fixes χ and t; use --chi/--t instead of --neff"));
        }
        let spec = Self {
            photons: photons(p, "1..8")?,
            atoms: single("M", &atoms(p, "1")?)?,
            temperature: single("T", &temperatures(p, "0.5")?)?,
            chi: p.chi.unwrap_or(1.0),
            t: p.time.unwrap_or(1.0),
            epsilon: epsilon(p),
            neff_range: neff_range(p)?,
        };
        check_points("photon list", spec.photons.len(), max_points(p))?;
        check_temperatures(&[spec.temperature], spec.epsilon)?;
        for &n in &spec.photons {
            MziConfig::new(n, spec.chi, spec.t, spec.epsilon, spec.atoms)?;
        }
        Ok(spec)
    }
}

/// Log-log slopes of both columns against N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Slopes {
    pub naive: Option<f64>,
    pub exact: Option<f64>,
}

pub fn run(spec: &NaiveSpec) -> Result<Report> {
    let rows: Vec<(f64, f64, f64)> = spec
        .photons
        .par_iter()
        .map(|&n| {
            let cfg = MziConfig::new(n, spec.chi, spec.t, spec.epsilon, spec.atoms)?;
            let naive = qfi_naive_phase(&cfg, spec.temperature)?;
            let best = qfi_max_over_neff(&cfg, spec.temperature, spec.neff_range)?;
            Ok((naive, best.value, best.n_eff))
        })
        .collect::<std::result::Result<_, mzi_thermo_core::Error>>()?;

    let ns: Vec<f64> = spec.photons.iter().map(|&n| n as f64).collect();
    let naive: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let exact: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let slopes = Slopes {
        naive: log_log_slope(&ns, &naive).ok(),
        exact: log_log_slope(&ns, &exact).ok(),
    };

    let mut table = Table::new("", &["N", "qfi_naive", "qfi_exact", "n_eff_star", "n_eff_fixed"]);
    for (&n, r) in spec.photons.iter().zip(&rows) {
        let fixed = 0.5 * spec.epsilon * n as f64 * spec.chi * spec.t;
        table.push(vec![n.into(), r.0.into(), r.1.into(), r.2.into(), fixed.into()]);
    }
    let mut fits = Table::new("slopes", &["column", "log_log_slope"]);
    fits.push(vec!["qfi_naive".into(), slopes.naive.into()]);
    fits.push(vec!["qfi_exact".into(), slopes.exact.into()]);

    let mut report = Report::new("naive-compare", spec_json(spec));
    report.summary.push(json!({ "log_log_slopes": slopes }));
    report.plots.push((
        String::new(),
        LinePlot {
            title: format!("Naive vs exact QFI, M = {}, T = {}", spec.atoms, spec.temperature),
            x_label: "N".into(),
            y_label: "Q(T)".into(),
            series: vec![
                Series::line("naive (∝ N²)", ns.iter().copied().zip(naive).collect()).styled(Style::Dashed),
                Series::line("exact, max over n_eff", ns.iter().copied().zip(exact).collect()),
            ],
            log_x: true,
            log_y: true,
        }
        .render(),
    ));
    report.tables.push(table);
    report.tables.push(fits);
    Ok(report)
}

pub fn slopes_of(report: &Report) -> Option<Slopes> {
    let t = report.table("slopes")?;
    let col = t.column("log_log_slope")?;
    Some(Slopes {
        naive: col[0],
        exact: col[1],
    })
}
