// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! `qfi-curve`: closed-form QFI along one of T, M or n_eff.

use std::collections::BTreeSet;

use mzi_thermo_core::analytic::{qfi_closed, qfi_max_over_neff};
use mzi_thermo_core::MziConfig;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    atoms, check_points, check_temperatures, epsilon, max_points, neff_range, photons, spec_json, temperatures,
    Coupling,
};
use crate::error::{usage, Result};
use crate::params::{Params, SweepVar};
use crate::report::{Report, Table};
use crate::svg::{tick_label, LinePlot, Series};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSpec {
    pub sweep: SweepVar,
    #[serde(rename = "T")]
    pub temperatures: Vec<f64>,
    #[serde(rename = "M")]
    pub atoms: Vec<usize>,
    #[serde(rename = "N")]
    pub photons: Vec<u32>,
    pub coupling: Coupling,
    pub optimize_neff: bool,
    pub neff_range: (f64, f64),
    pub epsilon: f64,
}

impl CurveSpec {
    pub fn resolve(p: &Params) -> Result<Self> {
        let sweep = p.sweep.ok_or_else(|| usage("qfi-curve needs --sweep T, M or neff"))?;
        let optimize_neff = p.optimize_neff.unwrap_or(false);
        let coupling = Coupling::resolve(p)?;
        if sweep == SweepVar::Neff {
            if optimize_neff {
                return Err(usage("cannot both sweep and optimise n_eff"));
            }
            if !matches!(coupling, Coupling::Neff(_)) {
                return Err(usage("--sweep neff needs an --neff grid"));
            }
        }
        let spec = Self {
            sweep,
            temperatures: temperatures(p, "0.5")?,
            atoms: atoms(p, "1")?,
            photons: photons(p, "1")?,
            coupling,
            optimize_neff,
            neff_range: neff_range(p)?,
            epsilon: epsilon(p),
        };
        check_temperatures(&spec.temperatures, spec.epsilon)?;
        let per_config = match &spec.coupling {
            Coupling::Neff(v) if !optimize_neff => v.len(),
            _ => 1,
        };
        let count = spec.temperatures.len() * spec.atoms.len() * spec.photons.len() * per_config;
        check_points("curve", count, max_points(p))?;
        for &n in &spec.photons {
            for &m in &spec.atoms {
                spec.coupling.configs(n, spec.epsilon, m)?;
            }
        }
        Ok(spec)
    }

    fn configs(&self, n: u32, m: usize) -> Result<Vec<MziConfig>> {
        if self.optimize_neff {
            Ok(vec![MziConfig::new(n, 1.0, 0.0, self.epsilon, m)?])
        } else {
            self.coupling.configs(n, self.epsilon, m)
        }
    }

    /// Every evaluation point, grouped so the swept variable runs fastest.
    fn points(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        let mut push = |series: usize, t: f64, cfg: MziConfig| out.push(Point { series, t, cfg });
        let mut series = 0;
        match self.sweep {
            SweepVar::Temperature => {
                for &m in &self.atoms {
                    for &n in &self.photons {
                        for cfg in self.configs(n, m)? {
                            for &t in &self.temperatures {
                                push(series, t, cfg);
                            }
                            series += 1;
                        }
                    }
                }
            }
            SweepVar::Atoms => {
                for &t in &self.temperatures {
                    for &n in &self.photons {
                        let per_m: Vec<Vec<MziConfig>> =
                            self.atoms.iter().map(|&m| self.configs(n, m)).collect::<Result<_>>()?;
                        for k in 0..per_m[0].len() {
                            for cfgs in &per_m {
                                push(series, t, cfgs[k]);
                            }
                            series += 1;
                        }
                    }
                }
            }
            SweepVar::Neff => {
                for &t in &self.temperatures {
                    for &m in &self.atoms {
                        for &n in &self.photons {
                            for cfg in self.configs(n, m)? {
                                push(series, t, cfg);
                            }
                            series += 1;
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

struct Point {
    series: usize,
    t: f64,
    cfg: MziConfig,
}

pub fn run(spec: &CurveSpec) -> Result<Report> {
    let points = spec.points()?;
    let values: Vec<(f64, f64)> = points
        .par_iter()
        .map(|pt| {
            if spec.optimize_neff {
                let o = qfi_max_over_neff(&pt.cfg, pt.t, spec.neff_range)?;
                Ok((o.n_eff, o.value))
            } else {
                Ok((pt.cfg.n_eff(), qfi_closed(&pt.cfg, pt.t)?.value))
            }
        })
        .collect::<std::result::Result<_, mzi_thermo_core::Error>>()?;

    let mut table = Table::new("", &["T", "M", "N", "n_eff", "qfi"]);
    for (pt, &(n_eff, q)) in points.iter().zip(&values) {
        table.push(vec![
            pt.t.into(),
            pt.cfg.m().into(),
            pt.cfg.n().into(),
            n_eff.into(),
            q.into(),
        ]);
    }

    let mut report = Report::new("qfi-curve", spec_json(spec));
    report
        .plots
        .push((String::new(), plot(spec, &points, &values).render()));
    report.tables.push(table);
    Ok(report)
}

fn plot(spec: &CurveSpec, points: &[Point], values: &[(f64, f64)]) -> LinePlot {
    let varies = |f: &dyn Fn(&Point) -> String| points.iter().map(f).collect::<BTreeSet<_>>().len() > 1;
    let show_t = spec.sweep != SweepVar::Temperature && varies(&|p| format!("{:?}", p.t));
    let show_m = spec.sweep != SweepVar::Atoms && varies(&|p| p.cfg.m().to_string());
    let show_n = varies(&|p| p.cfg.n().to_string());
    let show_neff = spec.sweep != SweepVar::Neff && !spec.optimize_neff && varies(&|p| format!("{:?}", p.cfg.n_eff()));

    let mut series: Vec<Series> = Vec::new();
    for (pt, &(n_eff, q)) in points.iter().zip(values) {
        if series.len() <= pt.series {
            let mut parts = Vec::new();
            if show_t {
                parts.push(format!("T={}", tick_label(pt.t)));
            }
            if show_m {
                parts.push(format!("M={}", pt.cfg.m()));
            }
            if show_n {
                parts.push(format!("N={}", pt.cfg.n()));
            }
            if show_neff {
                parts.push(format!("n_eff={}", tick_label(pt.cfg.n_eff())));
            }
            let label = if parts.is_empty() {
                "QFI".to_owned()
            } else {
                parts.join(" ")
            };
            series.push(Series::line(label, Vec::new()));
        }
        let x = match spec.sweep {
            SweepVar::Temperature => pt.t,
            SweepVar::Atoms => pt.cfg.m() as f64,
            SweepVar::Neff => n_eff,
        };
        series[pt.series].points.push((x, q));
    }
    let (x_label, what) = match spec.sweep {
        SweepVar::Temperature => ("T / ε", "T"),
        SweepVar::Atoms => ("M", "M"),
        SweepVar::Neff => ("n_eff", "n_eff"),
    };
    LinePlot {
        title: if spec.optimize_neff {
            format!("QFI maximised over n_eff vs {what}")
        } else {
            format!("QFI vs {what}")
        },
        x_label: x_label.into(),
        y_label: "Q(T)".into(),
        series,
        ..LinePlot::default()
    }
}
