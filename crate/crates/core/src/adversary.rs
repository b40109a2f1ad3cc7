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

//! Adversarial starts and adversarial selection orders.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{Coloring, MonochromaticComponents};
use crate::engine::SchedulerView;
use crate::error::{Error, Result};
use crate::graph::{gen_complete_bipartite, Graph, Vertex};

/// How [`AdversaryStrategy::MimicPersistent`] picks once the vertex it was
/// following is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum MimicMode {
    /// Uniform over the conflicted vertices.
    #[default]
    Uniform,
    /// Smallest conflicted id.
    LowestId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdversaryStrategy {
    /// Keep selecting the previous vertex while it stays conflicted, which
    /// turns Decentralized Coloring into the persistent variant.
    MimicPersistent(MimicMode),
    /// Conflicted vertex with the smallest expected one-step gain in Φ.
    MinPhiDrift,
    /// Conflicted vertex with the most same-colored neighbors.
    MaxConflicted,
    /// Fixed list of selections, consumed in order. Fails if the list runs
    /// out or names a vertex that is not conflicted.
    Scripted(Vec<Vertex>),
}

impl AdversaryStrategy {
    pub fn validate(&self, n: usize) -> Result<()> {
        if let AdversaryStrategy::Scripted(list) = self {
            if let Some(&vertex) = list.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex, n });
            }
        }
        Ok(())
    }

    pub fn pick<R: Rng + ?Sized>(&self, view: &SchedulerView<'_>, rng: &mut R) -> Result<Vertex> {
        match self {
            AdversaryStrategy::MimicPersistent(mode) => Ok(mimic_persistent_pick(view, *mode, rng)),
            AdversaryStrategy::MinPhiDrift => Ok(min_phi_drift_pick(
                view.graph,
                view.coloring,
                view.conflicted,
            )),
            AdversaryStrategy::MaxConflicted => Ok(max_conflicted_pick(view)),
            AdversaryStrategy::Scripted(list) => {
                let i = view.history.selections as usize;
                list.get(i).copied().ok_or(Error::ScriptExhausted(i))
            }
        }
    }
}

/// K_{Δ,Δ} with every left vertex colored 1 ("green") and the right side
/// colored 1..=Δ, palette Δ+1. Only the green right vertex (id Δ) is
/// conflicted on the right, and every left vertex has a single free color.
pub fn bad_bipartite_start(delta: usize) -> Result<(Graph, Coloring)> {
    if delta == 0 {
        return Err(Error::InvalidParameter(
            "bad bipartite start needs Δ >= 1".into(),
        ));
    }
    let graph = gen_complete_bipartite(delta, delta)?;
    let colors = (0..2 * delta)
        .map(|v| if v < delta { 1 } else { (v - delta + 1) as u32 })
        .collect();
    let coloring = Coloring::new(colors, delta as u32 + 1)?;
    Ok((graph, coloring))
}

/// Same vertex as last time while it is still conflicted, otherwise a fresh
/// conflicted vertex chosen per `mode`.
pub fn mimic_persistent_pick<R: Rng + ?Sized>(
    view: &SchedulerView<'_>,
    mode: MimicMode,
    rng: &mut R,
) -> Vertex {
    if let Some(last) = view.history.last {
        if view.is_conflicted(last) {
            return last;
        }
    }
    match mode {
        MimicMode::Uniform => view.conflicted[rng.gen_range(0..view.conflicted.len())],
        MimicMode::LowestId => *view
            .conflicted
            .iter()
            .min()
            .expect("conflicted set is non-empty"),
    }
}

/// Conflicted vertex minimizing the expected change of Φ under a uniform
/// recolor; ties go to the lowest id.
pub fn min_phi_drift_pick(g: &Graph, c: &Coloring, conflicted: &[Vertex]) -> Vertex {
    let components = MonochromaticComponents::compute(g, c);
    conflicted
        .iter()
        .map(|&v| (components.recolor_delta_sum(g, c, v), v))
        .min()
        .map(|(_, v)| v)
        .expect("conflicted set is non-empty")
}

/// Conflicted vertex with the most same-colored neighbors; ties go to the
/// lowest id.
pub fn max_conflicted_pick(view: &SchedulerView<'_>) -> Vertex {
    view.conflicted
        .iter()
        .map(|&v| (std::cmp::Reverse(view.same_colored_neighbors(v)), v))
        .min()
        .map(|(_, v)| v)
        .expect("conflicted set is non-empty")
}
