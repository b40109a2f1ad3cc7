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

//! Parallel trial execution with index-ordered, exact reduction.

use std::fs;
use std::path::Path;

use dcolor_core::engine::{run_decentralized, run_persistent, RunOptions};
use dcolor_core::rng::{for_trial, trial_seed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, Counter, ExperimentConfig, Instance};
use crate::error::{ExperimentError, Result};
use crate::stats::{Accumulator, SummaryStats};

/// Trials handed to a worker at a time.
const CHUNK: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOptions {
    pub trials: u64,
    pub seed: u64,
    pub step_cap: Option<u64>,
    pub exclude_capped: bool,
    pub per_vertex: bool,
    pub per_trial: bool,
    pub threads: Option<usize>,
}

impl TrialOptions {
    pub fn new(trials: u64, seed: u64) -> Self {
        TrialOptions {
            trials,
            seed,
            step_cap: None,
            exclude_capped: false,
            per_vertex: false,
            per_trial: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: u64,
    pub trial_seed: u64,
    pub total_draws: u64,
    pub step3_draws: u64,
    pub selections: u64,
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub total_draws: SummaryStats,
    pub step3_draws: SummaryStats,
    /// Step-3 draws of each vertex, when requested.
    pub per_vertex: Option<Vec<SummaryStats>>,
    pub rows: Option<Vec<TrialRow>>,
}

#[derive(Default)]
struct Partial {
    total: Accumulator,
    step3: Accumulator,
    per_vertex: Vec<Accumulator>,
    rows: Vec<TrialRow>,
    cap_hits: u64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.total = self.total.merge(other.total);
        self.step3 = self.step3.merge(other.step3);
        if self.per_vertex.is_empty() {
            self.per_vertex = other.per_vertex;
        } else {
            for (a, b) in self.per_vertex.iter_mut().zip(other.per_vertex) {
                *a = a.merge(b);
            }
        }
        self.rows.extend(other.rows);
        self.cap_hits += other.cap_hits;
        self
    }
}

fn run_chunk(inst: &Instance, opts: &TrialOptions, range: std::ops::Range<u64>) -> Result<Partial> {
    let n = inst.graph.vertex_count();
    let run_opts = RunOptions {
        step_cap: opts.step_cap,
        trace: false,
    };
    let mut part = Partial {
        per_vertex: if opts.per_vertex {
            vec![Accumulator::default(); n]
        } else {
            Vec::new()
        },
        ..Partial::default()
    };
    for i in range {
        let mut rng = for_trial(opts.seed, i);
        let res = match inst.algorithm {
            Algorithm::Dc => run_decentralized(
                &inst.graph,
                inst.palette,
                &inst.start,
                &inst.scheduler,
                &mut rng,
                &run_opts,
            ),
            Algorithm::Persistent => run_persistent(
                &inst.graph,
                inst.palette,
                &inst.start,
                &inst.scheduler,
                &mut rng,
                &run_opts,
            ),
        }?;
        if !res.terminated {
            part.cap_hits += 1;
        }
        if opts.per_trial {
            part.rows.push(TrialRow {
                trial: i,
                trial_seed: trial_seed(opts.seed, i),
                total_draws: res.total_draws,
                step3_draws: res.step3_draws,
                selections: res.selections,
                terminated: res.terminated,
            });
        }
        if res.terminated || !opts.exclude_capped {
            part.total.push(res.total_draws);
            part.step3.push(res.step3_draws);
            for (acc, &d) in part.per_vertex.iter_mut().zip(&res.per_vertex_draws) {
                acc.push(d);
            }
        }
    }
    Ok(part)
}

/// Runs `opts.trials` independent trials of `inst`. The result is a pure
/// function of the instance and options, whatever the thread count.
pub fn run_instance(inst: &Instance, opts: &TrialOptions) -> Result<TrialOutcome> {
    if opts.trials == 0 {
        return Err(ExperimentError::Config("trials must be at least 1".into()));
    }
    let chunks: Vec<_> = (0..opts.trials.div_ceil(CHUNK))
        .map(|k| k * CHUNK..((k + 1) * CHUNK).min(opts.trials))
        .collect();
    let work = || -> Result<Vec<Partial>> {
        chunks
            .par_iter()
            .map(|r| run_chunk(inst, opts, r.clone()))
            .collect()
    };
    let parts = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| ExperimentError::Config(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let all = parts.into_iter().fold(Partial::default(), Partial::merge);
    if all.cap_hits > 0 {
        let how = if opts.exclude_capped {
            "excluded from"
        } else {
            "included in"
        };
        log::warn!(
            "{} of {} trials hit the step cap ({how} the statistics)",
            all.cap_hits,
            opts.trials
        );
    }
    Ok(TrialOutcome {
        total_draws: all.total.summarize(all.cap_hits),
        step3_draws: all.step3.summarize(all.cap_hits),
        per_vertex: opts.per_vertex.then(|| {
            all.per_vertex
                .iter()
                .map(|a| a.summarize(all.cap_hits))
                .collect()
        }),
        rows: opts.per_trial.then_some(all.rows),
    })
}

/// Result of [`run_trials`], with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub master_seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub palette: u32,
    pub degrees: Vec<usize>,
    pub outcome: TrialOutcome,
}

pub fn run_trials(cfg: &ExperimentConfig) -> Result<TrialReport> {
    let inst = cfg.resolve()?;
    let opts = TrialOptions {
        trials: cfg.trials,
        seed: cfg.seed,
        step_cap: cfg.step_cap,
        exclude_capped: cfg.exclude_capped,
        per_vertex: cfg.counters.contains(&Counter::PerVertex),
        per_trial: cfg.per_trial,
        threads: cfg.threads,
    };
    let outcome = run_instance(&inst, &opts)?;
    let report = TrialReport {
        config: cfg.clone(),
        config_hash: cfg.hash()?,
        master_seed: cfg.seed,
        vertices: inst.graph.vertex_count(),
        edges: inst.graph.edge_count(),
        max_degree: inst.graph.max_degree(),
        palette: inst.palette,
        degrees: inst
            .graph
            .vertices()
            .map(|v| inst.graph.degree(v))
            .collect(),
        outcome,
    };
    if let Some(dir) = &cfg.output {
        write_report(&report, dir)?;
    }
    Ok(report)
}

const STATS_HEADER: [&str; 9] = [
    "trials", "mean", "sd", "se", "ci_low", "ci_high", "min", "max", "cap_hits",
];

fn stats_fields(s: &SummaryStats) -> [String; 9] {
    [
        s.trials.to_string(),
        s.mean.to_string(),
        s.sd.to_string(),
        s.se.to_string(),
        s.ci_low.to_string(),
        s.ci_high.to_string(),
        s.min.to_string(),
        s.max.to_string(),
        s.cap_hits.to_string(),
    ]
}

#[derive(Serialize)]
struct SummaryDocument<'a> {
    config_hash: &'a str,
    master_seed: u64,
    config: ExperimentConfig,
    vertices: usize,
    edges: usize,
    max_degree: usize,
    palette: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_draws: Option<&'a SummaryStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step3_draws: Option<&'a SummaryStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_vertex: Option<&'a [SummaryStats]>,
}

impl TrialReport {
    fn wants(&self, c: Counter) -> bool {
        self.config.counters.contains(&c)
    }

    pub fn summary_rows(&self) -> Vec<(Counter, &SummaryStats)> {
        let mut rows = Vec::new();
        if self.wants(Counter::TotalDraws) {
            rows.push((Counter::TotalDraws, &self.outcome.total_draws));
        }
        if self.wants(Counter::Step3Draws) {
            rows.push((Counter::Step3Draws, &self.outcome.step3_draws));
        }
        rows
    }

    pub fn summary_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(
            ["config_hash", "master_seed", "counter"]
                .into_iter()
                .chain(STATS_HEADER),
        )?;
        for (counter, stats) in self.summary_rows() {
            let head = [
                self.config_hash.clone(),
                self.master_seed.to_string(),
                counter.name().to_string(),
            ];
            w.write_record(head.into_iter().chain(stats_fields(stats)))?;
        }
        finish(w)
    }

    pub fn summary_json(&self) -> Result<String> {
        let doc = SummaryDocument {
            config_hash: &self.config_hash,
            master_seed: self.master_seed,
            config: self.config.canonical(),
            vertices: self.vertices,
            edges: self.edges,
            max_degree: self.max_degree,
            palette: self.palette,
            total_draws: self
                .wants(Counter::TotalDraws)
                .then_some(&self.outcome.total_draws),
            step3_draws: self
                .wants(Counter::Step3Draws)
                .then_some(&self.outcome.step3_draws),
            per_vertex: self.outcome.per_vertex.as_deref(),
        };
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        Ok(text)
    }

    pub fn trials_csv(&self) -> Result<Option<String>> {
        let Some(rows) = &self.outcome.rows else {
            return Ok(None);
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "config_hash",
            "master_seed",
            "trial",
            "trial_seed",
            "total_draws",
            "step3_draws",
            "selections",
            "terminated",
        ])?;
        for row in rows {
            w.write_record([
                self.config_hash.clone(),
                self.master_seed.to_string(),
                row.trial.to_string(),
                row.trial_seed.to_string(),
                row.total_draws.to_string(),
                row.step3_draws.to_string(),
                row.selections.to_string(),
                row.terminated.to_string(),
            ])?;
        }
        finish(w).map(Some)
    }

    pub fn per_vertex_csv(&self) -> Result<Option<String>> {
        let Some(stats) = &self.outcome.per_vertex else {
            return Ok(None);
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(
            [
                "config_hash",
                "master_seed",
                "vertex",
                "degree",
                "harmonic_degree",
            ]
            .into_iter()
            .chain(STATS_HEADER),
        )?;
        for (v, s) in stats.iter().enumerate() {
            let head = [
                self.config_hash.clone(),
                self.master_seed.to_string(),
                v.to_string(),
                self.degrees[v].to_string(),
                harmonic(self.degrees[v]).to_string(),
            ];
            w.write_record(head.into_iter().chain(stats_fields(s)))?;
        }
        finish(w).map(Some)
    }
}

pub(crate) fn harmonic(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 / i as f64).sum()
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| ExperimentError::io("<csv buffer>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| ExperimentError::io(&path, e))
}

/// Writes `summary.csv`, `summary.json` and, when present, `trials.csv` and
/// `per_vertex.csv` into `dir`.
pub fn write_report(report: &TrialReport, dir: &Path) -> Result<()> {
    write_file(dir, "summary.csv", &report.summary_csv()?)?;
    write_file(dir, "summary.json", &report.summary_json()?)?;
    if let Some(text) = report.trials_csv()? {
        write_file(dir, "trials.csv", &text)?;
    }
    if let Some(text) = report.per_vertex_csv()? {
        write_file(dir, "per_vertex.csv", &text)?;
    }
    Ok(())
}
