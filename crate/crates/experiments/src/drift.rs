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

//! Exhaustive one-step drift checks on random small instances.

use dcolor_core::coloring::{self, Coloring};
use dcolor_core::graph::{gen_fig2_like, Graph};
use dcolor_core::oracle::{
    exact_expected_conflict_deltas, expected_delta_with, verify_fig2_deltas, ExactValue,
};
use dcolor_core::rng::seeded;
use dcolor_core::{Rational, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{ExperimentError, Result};

/// The Φ implementation under test.
pub type PotentialFn = fn(&Graph, &Coloring) -> usize;

#[derive(Debug, Clone)]
pub struct DriftCheckOptions {
    pub samples: usize,
    pub n_max: usize,
    pub d_max: u32,
    pub seed: u64,
    /// Also check the five-vertex gadget.
    pub include_fig2: bool,
    pub potential: PotentialFn,
}

impl DriftCheckOptions {
    pub fn new(samples: usize, n_max: usize, d_max: u32, seed: u64) -> Self {
        DriftCheckOptions {
            samples,
            n_max,
            d_max,
            seed,
            include_fig2: true,
            potential: coloring::monochromatic_component_count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftKind {
    Phi,
    ConflictedEdges,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Sample index, or `None` for the gadget.
    pub sample: Option<usize>,
    pub vertex: Vertex,
    pub palette: u32,
    pub kind: DriftKind,
    pub drift: String,
    pub graph: String,
    pub coloring: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig2Result {
    pub vertex: Vertex,
    pub phi_drift: String,
    /// Drift equals exactly 1/D.
    pub tight: bool,
    pub conflicted_vertex_drift: String,
    pub table_verified: bool,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub samples: usize,
    pub vertices_checked: usize,
    /// Smallest Φ drift seen, as `p/q (≈ x)`.
    pub min_phi_drift: Option<String>,
    /// Smallest D·(Φ drift); at least 1 when the bound holds.
    pub min_scaled_phi_drift: Option<f64>,
    /// Largest D·(conflicted-edge drift); at most −1 when the bound holds.
    pub max_scaled_edge_drift: Option<f64>,
    pub violations: Vec<Violation>,
    pub fig2: Option<Fig2Result>,
    pub warnings: Vec<String>,
}

impl DriftReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self
                .fig2
                .as_ref()
                .is_none_or(|f| f.tight && f.table_verified)
    }

    pub fn violations_of(&self, kind: DriftKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Random graph with max degree ≤ D−1 and a coloring with a conflict.
fn random_sample<R: Rng>(rng: &mut R, n_max: usize, d_max: u32) -> (Graph, Coloring) {
    let n = rng.gen_range(2..=n_max);
    let palette = rng.gen_range(2..=d_max);
    let cap = palette as usize - 1;
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    let target = rng.gen_range(1..=pairs.len());
    let mut degree = vec![0; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if edges.len() == target {
            break;
        }
        if degree[u] < cap && degree[v] < cap {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v));
        }
    }
    let graph = Graph::from_edge_list(n, &edges).expect("generated edges are simple");
    let mut c = Coloring::random(n, palette, rng).expect("palette is non-empty");
    if coloring::is_proper(&graph, &c) {
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        c.set(u, c.color(v));
    }
    (graph, c)
}

struct Tally<'a> {
    opts: &'a DriftCheckOptions,
    checked: usize,
    min_phi: Option<(Rational, f64)>,
    max_edge: Option<f64>,
    violations: Vec<Violation>,
}

impl Tally<'_> {
    fn check(&mut self, sample: Option<usize>, g: &Graph, c: &Coloring) -> Result<()> {
        let d = Rational::from_integer(c.palette().into());
        let bound = Rational::from_integer(1.into()) / d.clone();
        for v in coloring::conflicted_vertices(g, c) {
            self.checked += 1;
            let phi: Rational = expected_delta_with(g, c, v, self.opts.potential)?;
            let edges = exact_expected_conflict_deltas::<Rational>(g, c, v)?.conflicted_edges;
            let scaled_phi = ExactValue(phi.clone() * d.clone()).to_f64();
            let scaled_edges = ExactValue(edges.clone() * d.clone()).to_f64();
            if self.min_phi.as_ref().is_none_or(|(_, s)| scaled_phi < *s) {
                self.min_phi = Some((phi.clone(), scaled_phi));
            }
            self.max_edge = Some(self.max_edge.map_or(scaled_edges, |m| m.max(scaled_edges)));
            let flag = |kind, drift: &Rational| Violation {
                sample,
                vertex: v,
                palette: c.palette(),
                kind,
                drift: ExactValue(drift.clone()).to_string(),
                graph: g.to_text(),
                coloring: c.to_text(),
            };
            if phi < bound {
                let violation = flag(DriftKind::Phi, &phi);
                self.violations.push(violation);
            }
            if edges > -bound.clone() {
                let violation = flag(DriftKind::ConflictedEdges, &edges);
                self.violations.push(violation);
            }
        }
        Ok(())
    }
}

/// Checks Φ drift ≥ 1/D and conflicted-edge drift ≤ −1/D at every
/// conflicted vertex of `samples` random instances with n ≤ `n_max`,
/// Δ+1 ≤ D ≤ `d_max`.
pub fn drift_check(opts: &DriftCheckOptions) -> Result<DriftReport> {
    if opts.samples > 0 && (opts.n_max < 2 || opts.d_max < 2) {
        return Err(ExperimentError::Config(
            "drift check needs n_max >= 2 and d_max >= 2".into(),
        ));
    }
    let mut tally = Tally {
        opts,
        checked: 0,
        min_phi: None,
        max_edge: None,
        violations: Vec::new(),
    };
    let mut rng = seeded(opts.seed);
    for i in 0..opts.samples {
        let (g, c) = random_sample(&mut rng, opts.n_max, opts.d_max);
        tally.check(Some(i), &g, &c)?;
    }
    let mut warnings = Vec::new();
    if opts.samples == 0 {
        let msg =
            "no random samples requested; the random-instance check passes vacuously".to_string();
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let fig2 = if opts.include_fig2 {
        let (g, c, v) = gen_fig2_like();
        tally.check(None, &g, &c)?;
        let phi: Rational = expected_delta_with(&g, &c, v, opts.potential)?;
        let deltas = exact_expected_conflict_deltas::<Rational>(&g, &c, v)?;
        let quarter = Rational::new(1.into(), 4.into());
        Some(Fig2Result {
            vertex: v,
            tight: phi == quarter,
            phi_drift: ExactValue(phi).to_string(),
            conflicted_vertex_drift: ExactValue(deltas.conflicted_vertices).to_string(),
            table_verified: verify_fig2_deltas(&g, &c, v)?,
            components: (opts.potential)(&g, &c),
        })
    } else {
        None
    };
    Ok(DriftReport {
        samples: opts.samples,
        vertices_checked: tally.checked,
        min_phi_drift: tally
            .min_phi
            .as_ref()
            .map(|(p, _)| ExactValue(p.clone()).to_string()),
        min_scaled_phi_drift: tally.min_phi.map(|(_, s)| s),
        max_scaled_edge_drift: tally.max_edge,
        violations: tally.violations,
        fig2,
        warnings,
    })
}
