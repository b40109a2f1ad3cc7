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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use dcolor_core::engine::{run_decentralized, run_persistent, RunOptions};
use dcolor_core::rng::for_trial;
use dcolor_core::StartPolicy;
use dcolor_experiments::{
    drift_check, expected_draws, run_suite, run_trials, sweep, AcceptanceOptions, Algorithm,
    Counter, DriftCheckOptions, ExperimentConfig, GraphSpec, StartSpec, Suite, SweepAxis,
};

/// Exit code for a failed acceptance criterion or drift violation.
const CRITERION_FAILED: u8 = 1;
/// Exit code for bad arguments, configs or inputs.
const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "dcolor",
    version,
    about = "Decentralized graph coloring experiments"
)]
struct Cli {
    /// Default directory for result files.
    #[arg(long, env = "DCOLOR_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Clique,
    Bipartite,
    Cycle,
    Er,
    Fig2,
    BadBipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Total,
    Step3,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in edge-list text format.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        /// Left side of a complete bipartite graph.
        #[arg(long)]
        a: Option<usize>,
        /// Right side of a complete bipartite graph.
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        delta: Option<usize>,
        /// Graph file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the bundled coloring of fig2 / bad-bipartite.
        #[arg(long)]
        coloring_out: Option<PathBuf>,
    },
    /// Run the trials described by a JSON config.
    Run {
        config: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Override the start with a coloring file.
        #[arg(long)]
        start_file: Option<PathBuf>,
        /// Run trial 0 only and print its selections and draws.
        #[arg(long)]
        trace: bool,
    },
    /// Run a config once per value of one parameter.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, value_enum, default_value = "step3")]
        metric: Metric,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Exact expected number of recolor draws for a config.
    Oracle {
        config: PathBuf,
        /// Largest chain solved by exact elimination.
        #[arg(long)]
        exact_limit: Option<usize>,
    },
    /// Check the one-step potential drift bounds on random instances.
    DriftCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 6)]
        d_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the five-vertex gadget.
        #[arg(long)]
        no_fig2: bool,
    },
    /// Run an acceptance suite.
    Accept {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn execute(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            a,
            b,
            p,
            seed,
            delta,
            out,
            coloring_out,
        } => {
            let need =
                |v: Option<usize>, flag: &str| v.with_context(|| format!("--{flag} is required"));
            let spec = match kind {
                Kind::Clique => GraphSpec::Clique { n: need(n, "n")? },
                Kind::Cycle => GraphSpec::Cycle { n: need(n, "n")? },
                Kind::Bipartite => GraphSpec::CompleteBipartite {
                    a: need(a, "a")?,
                    b: need(b, "b")?,
                },
                Kind::Er => GraphSpec::ErdosRenyi {
                    n: need(n, "n")?,
                    p: p.context("--p is required")?,
                    seed,
                },
                Kind::Fig2 => GraphSpec::Fig2,
                Kind::BadBipartite => GraphSpec::BadBipartite {
                    delta: need(delta, "delta")?,
                },
            };
            let (graph, bundled) = spec.build()?;
            match out {
                Some(path) => write(&path, &graph.to_text())?,
                None => print!("{}", graph.to_text()),
            }
            if let Some(path) = coloring_out {
                let c = bundled.context("only fig2 and bad-bipartite have a bundled coloring")?;
                write(&path, &c.to_text())?;
            }
            Ok(0)
        }
        Command::Run {
            config,
            trials,
            seed,
            threads,
            start_file,
            trace,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.threads = threads.or(cfg.threads);
            if let Some(path) = start_file {
                cfg.start = StartSpec::File { path };
            }
            if cfg.output.is_none() {
                cfg.output = cli.out_dir;
            }
            if trace {
                return run_trace(&cfg);
            }
            let report = run_trials(&cfg)?;
            print!("{}", report.summary_json()?);
            Ok(0)
        }
        Command::Sweep {
            config,
            axis,
            values,
            metric,
            threads,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            cfg.threads = threads.or(cfg.threads);
            if cfg.output.is_none() {
                cfg.output = cli.out_dir;
            }
            let metric = match metric {
                Metric::Total => Counter::TotalDraws,
                Metric::Step3 => Counter::Step3Draws,
            };
            let table = sweep(&cfg, axis.parse::<SweepAxis>()?, &values, metric)?;
            print!("{}", table.to_csv()?);
            Ok(0)
        }
        Command::Oracle {
            config,
            exact_limit,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let answer = expected_draws(&cfg, exact_limit)?;
            println!("{}", answer.step3_draws);
            eprintln!(
                "method {}, error bound {:e}, total draws {}",
                answer.method, answer.error_bound, answer.total_draws
            );
            Ok(0)
        }
        Command::DriftCheck {
            samples,
            n_max,
            d_max,
            seed,
            no_fig2,
        } => {
            let mut opts = DriftCheckOptions::new(samples, n_max, d_max, seed);
            opts.include_fig2 = !no_fig2;
            let report = drift_check(&opts)?;
            let text = serde_json::to_string_pretty(&report)? + "\n";
            if let Some(dir) = cli.out_dir {
                write(&dir.join("drift.json"), &text)?;
            }
            print!("{text}");
            Ok(if report.passed() { 0 } else { CRITERION_FAILED })
        }
        Command::Accept { suite, threads } => {
            let suite: Suite = suite.parse()?;
            let opts = AcceptanceOptions {
                threads,
                ..AcceptanceOptions::default()
            };
            let report = run_suite(suite, &opts, |r| println!("{r}"));
            if let Some(dir) = cli.out_dir {
                report.write(&dir)?;
            }
            println!("digest {}", report.digest);
            Ok(if report.passed { 0 } else { CRITERION_FAILED })
        }
    }
}

fn run_trace(cfg: &ExperimentConfig) -> anyhow::Result<u8> {
    let inst = cfg.resolve()?;
    let options = RunOptions {
        step_cap: cfg.step_cap,
        trace: true,
    };
    let mut rng = for_trial(cfg.seed, 0);
    let run = match inst.algorithm {
        Algorithm::Dc => run_decentralized,
        Algorithm::Persistent => run_persistent,
    };
    let result = run(
        &inst.graph,
        inst.palette,
        &inst.start,
        &inst.scheduler,
        &mut rng,
        &options,
    )?;
    if !result.terminated {
        bail!(
            "trace run hit the step cap after {} draws",
            result.step3_draws
        );
    }
    if let StartPolicy::Fixed(c) = &inst.start {
        eprint!("start {}", c.to_text());
    }
    print!("{}", result.trace_text().unwrap_or_default());
    eprint!("final {}", result.final_coloring.to_text());
    eprintln!(
        "step3_draws {} total_draws {}",
        result.step3_draws, result.total_draws
    );
    if let Some(dir) = &cfg.output {
        write(
            &dir.join("trace.txt"),
            &result.trace_text().unwrap_or_default(),
        )?;
    }
    Ok(0)
}
