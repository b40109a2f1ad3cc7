// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! One-parameter sweeps with growth-rate normalizations.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::{Counter, ExperimentConfig, GraphSpec};
use crate::error::{ExperimentError, Result};
use crate::trials::{finish, run_trials, write_file};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Vertex count of clique, cycle and Erdős–Rényi graphs; both sides of a
    /// complete bipartite graph.
    N,
    /// Δ of `bad_bipartite`; both sides of a complete bipartite graph.
    Delta,
    Palette,
    /// Edge probability of an Erdős–Rényi graph.
    P,
    /// Generator seed of an Erdős–Rényi graph.
    GraphSeed,
    /// Master seed of the trials.
    Seed,
    Trials,
}

impl FromStr for SweepAxis {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n" => SweepAxis::N,
            "delta" => SweepAxis::Delta,
            "palette" | "d" | "D" => SweepAxis::Palette,
            "p" => SweepAxis::P,
            "graph_seed" | "graph-seed" => SweepAxis::GraphSeed,
            "seed" => SweepAxis::Seed,
            "trials" => SweepAxis::Trials,
            other => {
                return Err(ExperimentError::Config(format!(
                    "unknown sweep axis {other:?}"
                )))
            }
        })
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SweepAxis::N => "n",
            SweepAxis::Delta => "delta",
            SweepAxis::Palette => "palette",
            SweepAxis::P => "p",
            SweepAxis::GraphSeed => "graph_seed",
            SweepAxis::Seed => "seed",
            SweepAxis::Trials => "trials",
        };
        f.write_str(name)
    }
}

fn parse<T: FromStr>(axis: SweepAxis, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| ExperimentError::Config(format!("bad value {value:?} for sweep axis {axis}")))
}

/// `base` with `axis` set to `value`.
pub fn apply_axis(
    base: &ExperimentConfig,
    axis: SweepAxis,
    value: &str,
) -> Result<ExperimentConfig> {
    let mut cfg = base.clone();
    let unsupported =
        || ExperimentError::Config(format!("sweep axis {axis} does not apply to this graph"));
    match axis {
        SweepAxis::N => {
            let v: usize = parse(axis, value)?;
            match &mut cfg.graph {
                GraphSpec::Clique { n }
                | GraphSpec::Cycle { n }
                | GraphSpec::ErdosRenyi { n, .. } => *n = v,
                GraphSpec::CompleteBipartite { a, b } => (*a, *b) = (v, v),
                _ => return Err(unsupported()),
            }
        }
        SweepAxis::Delta => {
            let v: usize = parse(axis, value)?;
            match &mut cfg.graph {
                GraphSpec::BadBipartite { delta } => *delta = v,
                GraphSpec::CompleteBipartite { a, b } => (*a, *b) = (v, v),
                _ => return Err(unsupported()),
            }
        }
        SweepAxis::Palette => cfg.palette = Some(parse(axis, value)?),
        SweepAxis::P => match &mut cfg.graph {
            GraphSpec::ErdosRenyi { p, .. } => *p = parse(axis, value)?,
            _ => return Err(unsupported()),
        },
        SweepAxis::GraphSeed => match &mut cfg.graph {
            GraphSpec::ErdosRenyi { seed, .. } => *seed = parse(axis, value)?,
            _ => return Err(unsupported()),
        },
        SweepAxis::Seed => cfg.seed = parse(axis, value)?,
        SweepAxis::Trials => cfg.trials = parse(axis, value)?,
    }
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub config_hash: String,
    pub master_seed: u64,
    pub axis: SweepAxis,
    pub value: String,
    pub n: usize,
    pub max_degree: usize,
    pub palette: u32,
    pub counter: &'static str,
    pub trials: u64,
    pub mean: f64,
    pub se: f64,
    pub cap_hits: u64,
    /// mean / (n·Δ); absent when Δ = 0.
    pub mean_over_n_delta: Option<f64>,
    /// mean / (n·ln Δ); absent when Δ ≤ 1.
    pub mean_over_n_ln_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Runs `base` once per value of `axis`, reporting `metric` (total or
/// step-3 draws). Per-value outputs are not written; the table is written
/// to `base.output` as `sweep.csv` and `sweep.json`.
pub fn sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[String],
    metric: Counter,
) -> Result<SweepTable> {
    if metric == Counter::PerVertex {
        return Err(ExperimentError::Config(
            "sweep metric must be total_draws or step3_draws".into(),
        ));
    }
    if values.is_empty() {
        return Err(ExperimentError::Config(
            "sweep needs at least one value".into(),
        ));
    }
    let mut rows = Vec::with_capacity(values.len());
    for value in values {
        let mut cfg = apply_axis(base, axis, value)?;
        cfg.output = None;
        cfg.per_trial = false;
        log::info!("sweep {axis}={value}");
        let report = run_trials(&cfg)?;
        let stats = match metric {
            Counter::TotalDraws => &report.outcome.total_draws,
            _ => &report.outcome.step3_draws,
        };
        let (n, delta) = (report.vertices as f64, report.max_degree as f64);
        rows.push(SweepRow {
            config_hash: report.config_hash.clone(),
            master_seed: report.master_seed,
            axis,
            value: value.clone(),
            n: report.vertices,
            max_degree: report.max_degree,
            palette: report.palette,
            counter: metric.name(),
            trials: stats.trials,
            mean: stats.mean,
            se: stats.se,
            cap_hits: stats.cap_hits,
            mean_over_n_delta: (delta > 0.0).then(|| stats.mean / (n * delta)),
            mean_over_n_ln_delta: (delta > 1.0).then(|| stats.mean / (n * delta.ln())),
        });
    }
    let table = SweepTable { rows };
    if let Some(dir) = &base.output {
        write_file(dir, "sweep.csv", &table.to_csv()?)?;
        write_file(
            dir,
            "sweep.json",
            &(serde_json::to_string_pretty(&table)? + "\n"),
        )?;
    }
    Ok(table)
}

impl SweepTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        finish(w)
    }
}
