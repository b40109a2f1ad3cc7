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

//! Trial runner and sweep behaviour on the documented examples.

use dcolor_experiments::{
    run_trials, sweep, Algorithm, Counter, ExperimentConfig, GraphSpec, StartSpec, SweepAxis,
};

fn values(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn k8_mean_total_within_ci_of_harmonic_total() {
    let mut cfg = ExperimentConfig::new(GraphSpec::Clique { n: 8 }, Algorithm::Dc);
    cfg.seed = 21;
    let s = run_trials(&cfg).unwrap().outcome.total_draws;
    assert_eq!(s.trials, 100_000);
    let exact = 761.0 / 35.0;
    assert!(s.ci_low <= exact && exact <= s.ci_high, "{s:?}");
}

#[test]
fn bad_bipartite_sweep_grows_like_n_delta() {
    let mut base =
        ExperimentConfig::new(GraphSpec::BadBipartite { delta: 4 }, Algorithm::Persistent);
    base.start = StartSpec::Generator;
    base.trials = 5_000;
    base.seed = 8;
    let table = sweep(
        &base,
        SweepAxis::Delta,
        &values(&["4", "8", "16", "32"]),
        Counter::Step3Draws,
    )
    .unwrap();
    // mean/(nΔ) stays bounded away from zero: here it tends to 1/4.
    for row in &table.rows {
        let normalized = row.mean_over_n_delta.unwrap();
        assert!(normalized > 0.15, "{row:?}");
    }
}

#[test]
fn clique_sweep_normalized_by_harmonic_total() {
    let mut base = ExperimentConfig::new(GraphSpec::Clique { n: 4 }, Algorithm::Dc);
    base.trials = 20_000;
    base.seed = 9;
    let table = sweep(
        &base,
        SweepAxis::N,
        &values(&["4", "8", "16"]),
        Counter::TotalDraws,
    )
    .unwrap();
    for row in &table.rows {
        let n = row.n as f64;
        let target = n * (1..=row.n).map(|i| 1.0 / i as f64).sum::<f64>();
        let ratio = row.mean / target;
        let se_rel = row.se / target;
        assert!((ratio - 1.0).abs() <= 4.0 * se_rel, "{row:?}");
    }
}

#[test]
fn persistent_per_vertex_draws_below_harmonic_max_degree() {
    let mut base = ExperimentConfig::new(
        GraphSpec::ErdosRenyi {
            n: 64,
            p: 0.1,
            seed: 0,
        },
        Algorithm::Persistent,
    );
    base.trials = 5_000;
    base.counters = vec![Counter::PerVertex];
    for graph_seed in 0..3u64 {
        base.graph = GraphSpec::ErdosRenyi {
            n: 64,
            p: 0.1,
            seed: graph_seed,
        };
        let report = run_trials(&base).unwrap();
        let h_delta: f64 = (1..=report.max_degree).map(|i| 1.0 / i as f64).sum();
        for s in report.outcome.per_vertex.as_ref().unwrap() {
            assert!(s.mean <= h_delta + 4.0 * s.se, "{s:?} vs {h_delta}");
        }
    }
}

#[test]
fn json_config_round_trips() {
    let mut cfg = ExperimentConfig::new(
        GraphSpec::ErdosRenyi {
            n: 10,
            p: 0.5,
            seed: 3,
        },
        Algorithm::Dc,
    );
    cfg.palette = Some(9);
    cfg.step_cap = Some(1000);
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
}
