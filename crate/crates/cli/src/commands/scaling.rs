// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! `scaling`: optimised QFI over an (N, M) grid, with fits in M.

use mzi_thermo_core::estimation::{
    fit_linear_origin, fit_quadratic_origin, log_log_slope, scaling_study, ScalingOptions, ScalingRow,
};
use mzi_thermo_core::MziConfig;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{
    atoms, check_points, check_temperatures, epsilon, max_points, neff_range, photons, seed_json, spec_json,
    temperatures, ExperimentSettings,
};
use crate::error::Result;
use crate::params::Params;
use crate::report::{Cell, Report, Table};
use crate::svg::{tick_label, LinePlot, Series, Style};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingSpec {
    #[serde(rename = "T")]
    pub temperatures: Vec<f64>,
    #[serde(rename = "N")]
    pub photons: Vec<u32>,
    #[serde(rename = "M")]
    pub atoms: Vec<usize>,
    pub neff_range: (f64, f64),
    pub epsilon: f64,
    /// Circuit sampling at each optimum; `None` for analytics only.
    pub circuit: Option<ExperimentSettings>,
}

impl ScalingSpec {
    pub fn resolve(p: &Params) -> Result<Self> {
        let spec = Self {
            temperatures: temperatures(p, "0.2")?,
            photons: photons(p, "1")?,
            atoms: atoms(p, "1..9")?,
            neff_range: neff_range(p)?,
            epsilon: epsilon(p),
            circuit: if p.with_circuit.unwrap_or(false) {
                Some(ExperimentSettings::resolve(p)?)
            } else {
                None
            },
        };
        let count = spec.temperatures.len() * spec.photons.len() * spec.atoms.len();
        check_points("scaling grid", count, max_points(p))?;
        check_temperatures(&spec.temperatures, spec.epsilon)?;
        for &n in &spec.photons {
            for &m in &spec.atoms {
                MziConfig::new(n, 1.0, 0.0, spec.epsilon, m)?;
            }
        }
        if let Some(s) = &spec.circuit {
            let probe = MziConfig::new(1, 1.0, 0.0, spec.epsilon, 1)?;
            for &t in &spec.temperatures {
                s.config(probe, t, s.base_seed()).validate()?;
            }
        }
        Ok(spec)
    }
}

pub fn run(spec: &ScalingSpec) -> Result<Report> {
    let mut report = Report::new("scaling", spec_json(spec));
    let per_t: Vec<Vec<ScalingRow>> = spec
        .temperatures
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let experiment = spec.circuit.as_ref().map(|s| {
                let probe = MziConfig::new(1, 1.0, 0.0, spec.epsilon, 1).expect("validated");
                s.config(probe, t, s.base_seed().derive(i as u64))
            });
            let opts = ScalingOptions {
                epsilon: spec.epsilon,
                neff_range: spec.neff_range,
                experiment,
            };
            scaling_study(t, &spec.photons, &spec.atoms, &opts)
        })
        .collect::<std::result::Result<_, mzi_thermo_core::Error>>()?;

    let mut table = Table::new(
        "",
        &["T", "N", "M", "n_eff_star", "qfi", "cfi_mean", "cfi_std", "cfi_sem"],
    );
    let mut fits = Table::new(
        "fits",
        &[
            "T",
            "N",
            "c1_linear",
            "r_squared",
            "c1_quadratic",
            "c2_quadratic",
            "log_log_slope",
        ],
    );
    let mut series = Vec::new();
    for (i, (&t, rows)) in spec.temperatures.iter().zip(&per_t).enumerate() {
        if let Some(s) = &spec.circuit {
            report
                .seeds
                .push(seed_json(s.base_seed().derive(i as u64), json!({ "T": t })));
        }
        for &n in &spec.photons {
            let group: Vec<&ScalingRow> = rows.iter().filter(|r| r.n == n).collect();
            for r in &group {
                let cfi = r.cfi.as_ref();
                table.push(vec![
                    t.into(),
                    r.n.into(),
                    r.m.into(),
                    r.n_eff_star.into(),
                    r.qfi_analytic.into(),
                    cfi.and_then(|c| c.mean).into(),
                    cfi.and_then(|c| c.std).into(),
                    cfi.and_then(|c| c.sem).into(),
                ]);
            }
            let xs: Vec<f64> = group.iter().map(|r| r.m as f64).collect();
            let ys: Vec<f64> = group.iter().map(|r| r.qfi_analytic).collect();
            let lin = fit_linear_origin(&xs, &ys).ok();
            let quad = fit_quadratic_origin(&xs, &ys).ok();
            fits.push(vec![
                t.into(),
                n.into(),
                lin.map(|f| f.c1).into(),
                lin.map(|f| f.r_squared).into(),
                quad.map(|q| q.0).into(),
                quad.map(|q| q.1).into(),
                log_log_slope(&xs, &ys).ok().into(),
            ]);

            let label = format!("T={} N={n}", tick_label(t));
            series.push(Series::line(
                format!("QFI {label}"),
                xs.iter().copied().zip(ys).collect(),
            ));
            let (pts, errs): (Vec<_>, Vec<_>) = group
                .iter()
                .filter_map(|r| {
                    let c = r.cfi.as_ref()?;
                    Some(((r.m as f64, c.mean?), c.std.unwrap_or(0.0)))
                })
                .unzip();
            if !pts.is_empty() {
                series.push(
                    Series::line(format!("CFI {label}"), pts)
                        .styled(Style::Markers)
                        .with_errors(errs),
                );
            }
        }
    }
    report.plots.push((
        String::new(),
        LinePlot {
            title: "Optimised QFI vs M".into(),
            x_label: "M".into(),
            y_label: "max Q(T)".into(),
            series,
            ..LinePlot::default()
        }
        .render(),
    ));
    report.tables.push(table);
    report.tables.push(fits);
    Ok(report)
}

/// Fits for one `(T, N)` group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MFit {
    pub c1_linear: f64,
    pub r_squared: f64,
    pub c1_quadratic: f64,
    pub c2_quadratic: f64,
}

pub fn fit_of(report: &Report, t: f64, n: u32) -> Option<MFit> {
    let fits = report.table("fits")?;
    let r = fits
        .rows
        .iter()
        .find(|r| r[0] == Cell::Real(t) && r[1] == Cell::Int(n as i64))?;
    Some(MFit {
        c1_linear: r[2].as_f64()?,
        r_squared: r[3].as_f64()?,
        c1_quadratic: r[4].as_f64()?,
        c2_quadratic: r[5].as_f64()?,
    })
}
