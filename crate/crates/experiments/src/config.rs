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

//! JSON experiment configuration and its resolution into engine inputs.

use std::fs;
use std::path::{Path, PathBuf};

use dcolor_core::graph::{self, Graph};
use dcolor_core::{
    bad_bipartite_start, AdversaryStrategy, Coloring, MimicMode, Permutation, SchedulerPolicy,
    StartPolicy, Vertex,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Clique {
        n: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    Cycle {
        n: usize,
    },
    ErdosRenyi {
        n: usize,
        p: f64,
        seed: u64,
    },
    /// Five-vertex gadget with its bundled coloring.
    Fig2,
    /// K_{Δ,Δ} with its bundled adversarial coloring.
    BadBipartite {
        delta: usize,
    },
    /// Edge list in the `n m` / `u v` text format.
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Dc,
    Persistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StartSpec {
    #[default]
    Random,
    /// Every vertex gets color 1.
    Monochromatic,
    /// The coloring bundled with `fig2` or `bad_bipartite`.
    Generator,
    /// Coloring in the `D=<palette> c0 c1 ...` text format.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OrderSpec {
    /// Uniform over conflicted vertices (a uniform random permutation for
    /// the persistent variant).
    #[default]
    Uniform,
    Identity,
    /// Whitespace-separated vertex ids.
    Permutation {
        path: PathBuf,
    },
    Mimic {
        #[serde(default)]
        mode: MimicMode,
    },
    MinDrift,
    MaxConflicted,
    /// Whitespace-separated selections, consumed in order.
    Script {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Counter {
    TotalDraws,
    Step3Draws,
    PerVertex,
}

impl Counter {
    pub fn name(self) -> &'static str {
        match self {
            Counter::TotalDraws => "total_draws",
            Counter::Step3Draws => "step3_draws",
            Counter::PerVertex => "per_vertex",
        }
    }
}

fn default_counters() -> Vec<Counter> {
    vec![Counter::TotalDraws, Counter::Step3Draws]
}

fn default_trials() -> u64 {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub algorithm: Algorithm,
    /// Palette size; defaults to the bundled coloring's palette for
    /// `start: generator`, else Δ+1.
    #[serde(default)]
    pub palette: Option<u32>,
    #[serde(default)]
    pub start: StartSpec,
    #[serde(default)]
    pub order: OrderSpec,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub step_cap: Option<u64>,
    /// Directory for `summary.csv`, `summary.json` and optional per-trial
    /// and per-vertex tables.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_counters")]
    pub counters: Vec<Counter>,
    /// Write one CSV row per trial as well.
    #[serde(default)]
    pub per_trial: bool,
    /// Drop trials that hit the step cap from the statistics.
    #[serde(default)]
    pub exclude_capped: bool,
    /// Worker threads; defaults to the available parallelism.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(graph: GraphSpec, algorithm: Algorithm) -> Self {
        ExperimentConfig {
            graph,
            algorithm,
            palette: None,
            start: StartSpec::Random,
            order: OrderSpec::Uniform,
            trials: default_trials(),
            seed: 0,
            step_cap: None,
            output: None,
            counters: default_counters(),
            per_trial: false,
            exclude_capped: false,
            threads: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        Self::from_json(&text)
    }

    fn referenced_files(&self) -> Vec<&Path> {
        let mut files = Vec::new();
        if let GraphSpec::File { path } = &self.graph {
            files.push(path.as_path());
        }
        if let StartSpec::File { path } = &self.start {
            files.push(path.as_path());
        }
        if let OrderSpec::Permutation { path } | OrderSpec::Script { path } = &self.order {
            files.push(path.as_path());
        }
        files
    }

    /// Copy without the fields that cannot affect results (`output`,
    /// `threads`).
    pub fn canonical(&self) -> ExperimentConfig {
        ExperimentConfig {
            output: None,
            threads: None,
            ..self.clone()
        }
    }

    /// SHA-256 over [`Self::canonical`] and the contents of every referenced
    /// file.
    pub fn hash(&self) -> Result<String> {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&self.canonical())?);
        for path in self.referenced_files() {
            let bytes = fs::read(path).map_err(|e| ExperimentError::io(path, e))?;
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(&bytes);
        }
        Ok(hex::encode(hasher.finalize()))
    }

    /// Validates the config and builds the engine inputs.
    pub fn resolve(&self) -> Result<Instance> {
        if self.trials == 0 {
            return Err(ExperimentError::Config("trials must be at least 1".into()));
        }
        if self.counters.is_empty() {
            return Err(ExperimentError::Config(
                "at least one counter is required".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(ExperimentError::Config("threads must be at least 1".into()));
        }
        let (graph, bundled) = self.graph.build()?;
        let n = graph.vertex_count();
        let palette = match (self.palette, &self.start, &bundled) {
            (Some(d), _, _) => d,
            (None, StartSpec::Generator, Some(c)) => c.palette(),
            _ => graph.max_degree() as u32 + 1,
        };
        if palette == 0 {
            return Err(ExperimentError::Config("palette must be at least 1".into()));
        }
        let start = match &self.start {
            StartSpec::Random => StartPolicy::Random,
            StartSpec::Monochromatic => StartPolicy::Fixed(Coloring::monochromatic(n, palette, 1)?),
            StartSpec::Generator => {
                let c = bundled.ok_or_else(|| {
                    ExperimentError::Config(
                        "start \"generator\" needs the fig2 or bad_bipartite graph".into(),
                    )
                })?;
                StartPolicy::Fixed(Coloring::new(c.colors().to_vec(), palette)?)
            }
            StartSpec::File { path } => {
                let c = Coloring::from_text(&read(path)?)?;
                c.check_matches(&graph)?;
                StartPolicy::Fixed(Coloring::new(c.colors().to_vec(), palette)?)
            }
        };
        let scheduler = match &self.order {
            OrderSpec::Uniform => SchedulerPolicy::UniformRandom,
            OrderSpec::Identity => SchedulerPolicy::FixedPermutation(Permutation::identity(n)),
            OrderSpec::Permutation { path } => {
                let order = parse_vertices(path)?;
                if order.len() != n {
                    return Err(ExperimentError::Config(format!(
                        "{}: permutation has {} entries, graph has {n} vertices",
                        path.display(),
                        order.len()
                    )));
                }
                SchedulerPolicy::FixedPermutation(Permutation::new(order)?)
            }
            OrderSpec::Mimic { mode } => {
                SchedulerPolicy::Adversary(AdversaryStrategy::MimicPersistent(*mode))
            }
            OrderSpec::MinDrift => SchedulerPolicy::Adversary(AdversaryStrategy::MinPhiDrift),
            OrderSpec::MaxConflicted => {
                SchedulerPolicy::Adversary(AdversaryStrategy::MaxConflicted)
            }
            OrderSpec::Script { path } => {
                let strategy = AdversaryStrategy::Scripted(parse_vertices(path)?);
                strategy.validate(n)?;
                SchedulerPolicy::Adversary(strategy)
            }
        };
        Ok(Instance {
            graph,
            palette,
            start,
            scheduler,
            algorithm: self.algorithm,
        })
    }
}

impl GraphSpec {
    /// The graph and, for `fig2` and `bad_bipartite`, its bundled coloring.
    pub fn build(&self) -> Result<(Graph, Option<Coloring>)> {
        let bad = |what: &str| ExperimentError::Config(what.to_string());
        Ok(match self {
            GraphSpec::Clique { n } => {
                if *n == 0 {
                    return Err(bad("clique needs n >= 1"));
                }
                (graph::gen_clique(*n)?, None)
            }
            GraphSpec::CompleteBipartite { a, b } => {
                if *a == 0 || *b == 0 {
                    return Err(bad("complete_bipartite needs a, b >= 1"));
                }
                (graph::gen_complete_bipartite(*a, *b)?, None)
            }
            GraphSpec::Cycle { n } => {
                if *n < 3 {
                    return Err(bad("cycle needs n >= 3"));
                }
                (graph::gen_cycle(*n)?, None)
            }
            GraphSpec::ErdosRenyi { n, p, seed } => {
                if *n == 0 || !(0.0..=1.0).contains(p) {
                    return Err(bad("erdos_renyi needs n >= 1 and 0 <= p <= 1"));
                }
                (graph::gen_erdos_renyi(*n, *p, *seed)?, None)
            }
            GraphSpec::Fig2 => {
                let (g, c, _) = graph::gen_fig2_like();
                (g, Some(c))
            }
            GraphSpec::BadBipartite { delta } => {
                if *delta == 0 {
                    return Err(bad("bad_bipartite needs delta >= 1"));
                }
                let (g, c) = bad_bipartite_start(*delta)?;
                (g, Some(c))
            }
            GraphSpec::File { path } => (Graph::from_text(&read(path)?)?, None),
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))
}

fn parse_vertices(path: &Path) -> Result<Vec<Vertex>> {
    read(path)?
        .split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| {
                ExperimentError::Config(format!("{}: bad vertex id {t:?}", path.display()))
            })
        })
        .collect()
}

/// Everything the engine needs for one trial.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub palette: u32,
    pub start: StartPolicy,
    pub scheduler: SchedulerPolicy,
    pub algorithm: Algorithm,
}
