// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! `qfi-surface`: Q over a (T, n_eff) grid plus the per-T maximisers.

use mzi_thermo_core::analytic::{qfi_closed, qfi_local_maxima_over_neff};
use mzi_thermo_core::MziConfig;
use rayon::prelude::*;
use serde::Serialize;

use super::{atoms, check_points, check_temperatures, epsilon, max_points, photons, single, spec_json, temperatures};
use crate::error::{usage, Result};
use crate::grid;
use crate::params::Params;
use crate::report::{Report, Table};
use crate::svg::HeatMap;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceSpec {
    #[serde(rename = "T")]
    pub temperatures: Vec<f64>,
    pub neff: Vec<f64>,
    #[serde(rename = "M")]
    pub atoms: Vec<usize>,
    #[serde(rename = "N")]
    pub photons: u32,
    pub epsilon: f64,
    /// Interval searched for ridge maximisers; `None` for a single-column grid.
    pub ridge_range: Option<(f64, f64)>,
}

impl SurfaceSpec {
    pub fn resolve(p: &Params) -> Result<Self> {
        if p.chi.is_some() || p.time.is_some() {
            return Err(usage("qfi-surface sweeps n_eff; use --neff instead of --chi/--t"));
        }
        let temperatures = temperatures(p, "0.05:3:60")?;
        let neff = grid::reals("neff", p.neff.as_ref().map_or("0:2pi:121", |v| v.0.as_str()))?;
        if neff.iter().any(|v| *v < 0.0) {
            return Err(usage("--neff: values must be non-negative"));
        }
        let atoms = atoms(p, "1")?;
        let count = temperatures.len() * neff.len() * atoms.len();
        check_points("surface", count, max_points(p))?;
        let ridge_range = match &p.neff_range {
            Some(s) => Some(grid::pair("neff-range", s)?),
            None => {
                let lo = neff.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = neff.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (hi > lo).then_some((lo, hi))
            }
        };
        let spec = Self {
            temperatures,
            neff,
            atoms,
            photons: single("N", &photons(p, "1")?)?,
            epsilon: epsilon(p),
            ridge_range,
        };
        check_temperatures(&spec.temperatures, spec.epsilon)?;
        for &m in &spec.atoms {
            MziConfig::new(spec.photons, 1.0, 0.0, spec.epsilon, m)?;
        }
        Ok(spec)
    }
}

pub fn run(spec: &SurfaceSpec) -> Result<Report> {
    let mut table = Table::new("", &["M", "T", "n_eff", "qfi"]);
    let mut ridge = Table::new("ridge", &["M", "T", "n_eff_star", "qfi_max"]);
    let mut report = Report::new("qfi-surface", spec_json(spec));

    for &m in &spec.atoms {
        let template = MziConfig::new(spec.photons, 1.0, 0.0, spec.epsilon, m)?;
        // Row-major in n_eff so the heat map can index z[iy * nx + ix].
        let cells: Vec<(usize, usize)> = (0..spec.neff.len())
            .flat_map(|iy| (0..spec.temperatures.len()).map(move |ix| (iy, ix)))
            .collect();
        let z: Vec<f64> = cells
            .par_iter()
            .map(|&(iy, ix)| {
                let cfg = template.with_neff(spec.neff[iy])?;
                Ok(qfi_closed(&cfg, spec.temperatures[ix])?.value)
            })
            .collect::<std::result::Result<_, mzi_thermo_core::Error>>()?;
        for (ix, &t) in spec.temperatures.iter().enumerate() {
            for (iy, &n) in spec.neff.iter().enumerate() {
                table.push(vec![
                    m.into(),
                    t.into(),
                    n.into(),
                    z[iy * spec.temperatures.len() + ix].into(),
                ]);
            }
        }

        let peaks: Vec<Vec<(f64, f64)>> = match spec.ridge_range {
            Some(range) => spec
                .temperatures
                .par_iter()
                .map(|&t| {
                    Ok(qfi_local_maxima_over_neff(&template, t, range)?
                        .into_iter()
                        .map(|o| (o.n_eff, o.value))
                        .collect())
                })
                .collect::<std::result::Result<_, mzi_thermo_core::Error>>()?,
            None => vec![Vec::new(); spec.temperatures.len()],
        };
        let mut overlay = Vec::new();
        for (&t, ps) in spec.temperatures.iter().zip(&peaks) {
            for &(n, q) in ps {
                ridge.push(vec![m.into(), t.into(), n.into(), q.into()]);
                overlay.push((t, n));
            }
        }

        if ascending(&spec.temperatures) && ascending(&spec.neff) {
            let map = HeatMap {
                title: format!("QFI over (T, n_eff), M = {m}"),
                x_label: "T / ε".into(),
                y_label: "n_eff".into(),
                xs: spec.temperatures.clone(),
                ys: spec.neff.clone(),
                z,
                overlay,
            };
            let suffix = if spec.atoms.len() > 1 {
                format!("_M{m}")
            } else {
                String::new()
            };
            report.plots.push((suffix, map.render()));
        }
    }
    report.tables.push(table);
    report.tables.push(ridge);
    Ok(report)
}

fn ascending(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}
