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

//! The two recoloring processes as seeded state machines.
//!
//! Draw accounting: `total_draws` counts every uniform color draw, including
//! the `n` draws that produce the starting coloring; `step3_draws` counts only
//! recolor draws made after the start. Both are reported so callers can
//! compare against either convention.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::AdversaryStrategy;
use crate::coloring::{self, Color, Coloring, ConflictTracker};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StartPolicy {
    /// Independent uniform colors, drawn in vertex order.
    Random,
    Fixed(Coloring),
}

/// A validated ordering of `0..n` with O(1) rank lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<Vertex>,
    rank: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<Vertex>) -> Result<Permutation> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::NotAPermutation(n));
            }
            rank[v] = i;
        }
        Ok(Permutation { order, rank })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            order: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        let mut order: Vec<Vertex> = (0..n).collect();
        order.shuffle(rng);
        Permutation::new(order).expect("shuffle of 0..n")
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Member of `candidates` appearing first in this order.
    pub fn first_of(&self, candidates: &[Vertex]) -> Option<Vertex> {
        candidates.iter().copied().min_by_key(|&v| self.rank[v])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchedulerPolicy {
    UniformRandom,
    /// Always the conflicted vertex that comes first in the order.
    FixedPermutation(Permutation),
    Adversary(AdversaryStrategy),
}

/// Selection history visible to schedulers. Schedulers never see future
/// random bits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    pub last: Option<Vertex>,
    pub selections: u64,
}

/// Read-only state handed to a scheduler.
#[derive(Debug, Clone, Copy)]
pub struct SchedulerView<'a> {
    pub graph: &'a Graph,
    pub coloring: &'a Coloring,
    /// Non-empty list of the currently conflicted vertices.
    pub conflicted: &'a [Vertex],
    pub history: &'a History,
}

impl SchedulerView<'_> {
    pub fn is_conflicted(&self, v: Vertex) -> bool {
        coloring::is_conflicted(self.graph, self.coloring, v)
    }

    pub fn same_colored_neighbors(&self, v: Vertex) -> usize {
        let own = self.coloring.color(v);
        self.graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.coloring.color(u) == own)
            .count()
    }
}

/// Chooses the next vertex to recolor and checks that it is conflicted.
pub fn scheduler_pick<R: Rng + ?Sized>(
    policy: &SchedulerPolicy,
    view: &SchedulerView<'_>,
    rng: &mut R,
) -> Result<Vertex> {
    assert!(
        !view.conflicted.is_empty(),
        "scheduler called on a proper coloring"
    );
    let v = match policy {
        SchedulerPolicy::UniformRandom => view.conflicted[rng.gen_range(0..view.conflicted.len())],
        SchedulerPolicy::FixedPermutation(perm) => {
            perm.first_of(view.conflicted).expect("non-empty")
        }
        SchedulerPolicy::Adversary(strategy) => strategy.pick(view, rng)?,
    };
    if v >= view.graph.vertex_count() || !view.is_conflicted(v) {
        return Err(Error::NotConflicted(v));
    }
    Ok(v)
}

/// One Step-2 selection and the colors drawn for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub vertex: Vertex,
    pub draws: Vec<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub total_draws: u64,
    pub step3_draws: u64,
    pub per_vertex_draws: Vec<u64>,
    pub selections: u64,
    pub terminated: bool,
    pub final_coloring: Coloring,
    pub trace: Option<Vec<TraceEntry>>,
}

impl RunResult {
    /// `step vertex draw draw ...`, one line per selection.
    pub fn trace_text(&self) -> Option<String> {
        self.trace.as_ref().map(|entries| {
            let mut out = String::new();
            for (step, e) in entries.iter().enumerate() {
                let _ = write!(out, "{step} {}", e.vertex);
                for d in &e.draws {
                    let _ = write!(out, " {d}");
                }
                out.push('\n');
            }
            out
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Maximum number of recolor draws; `None` uses [`default_step_cap`].
    pub step_cap: Option<u64>,
    pub trace: bool,
}

/// 10 · n · D².
pub fn default_step_cap(n: usize, palette: Color) -> u64 {
    10 * n as u64 * u64::from(palette) * u64::from(palette)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Decentralized,
    Persistent,
}

struct Run<'g> {
    graph: &'g Graph,
    coloring: Coloring,
    tracker: ConflictTracker,
    per_vertex: Vec<u64>,
    step3: u64,
    cap: u64,
    history: History,
    trace: Option<Vec<TraceEntry>>,
}

impl<'g> Run<'g> {
    fn start<R: Rng + ?Sized>(
        graph: &'g Graph,
        palette: Color,
        start: &StartPolicy,
        rng: &mut R,
        options: &RunOptions,
    ) -> Result<Run<'g>> {
        let n = graph.vertex_count();
        let coloring = match start {
            StartPolicy::Random => Coloring::random(n, palette, rng)?,
            StartPolicy::Fixed(c) => {
                c.check_matches(graph)?;
                Coloring::new(c.colors().to_vec(), palette)?
            }
        };
        let tracker = ConflictTracker::new(graph, &coloring);
        Ok(Run {
            graph,
            coloring,
            tracker,
            per_vertex: vec![0; n],
            step3: 0,
            cap: options
                .step_cap
                .unwrap_or_else(|| default_step_cap(n, palette)),
            history: History::default(),
            trace: options.trace.then(Vec::new),
        })
    }

    fn pick<R: Rng + ?Sized>(&self, policy: &SchedulerPolicy, rng: &mut R) -> Result<Vertex> {
        let view = SchedulerView {
            graph: self.graph,
            coloring: &self.coloring,
            conflicted: self.tracker.members(),
            history: &self.history,
        };
        scheduler_pick(policy, &view, rng)
    }

    /// Draws one uniform color for `v`. Returns `false` once the cap is hit.
    fn draw<R: Rng + ?Sized>(&mut self, v: Vertex, rng: &mut R) -> bool {
        if self.step3 >= self.cap {
            return false;
        }
        let x = rng.gen_range(1..=self.coloring.palette());
        self.tracker.recolor(self.graph, &mut self.coloring, v, x);
        self.step3 += 1;
        self.per_vertex[v] += 1;
        if let Some(trace) = self.trace.as_mut() {
            trace.last_mut().expect("selection recorded").draws.push(x);
        }
        true
    }

    fn select(&mut self, v: Vertex) {
        self.history.last = Some(v);
        self.history.selections += 1;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceEntry {
                vertex: v,
                draws: Vec::new(),
            });
        }
    }

    fn finish(self) -> RunResult {
        let terminated = self.tracker.is_proper();
        debug_assert!(!terminated || coloring::is_proper(self.graph, &self.coloring));
        RunResult {
            total_draws: self.graph.vertex_count() as u64 + self.step3,
            step3_draws: self.step3,
            per_vertex_draws: self.per_vertex,
            selections: self.history.selections,
            terminated,
            final_coloring: self.coloring,
            trace: self.trace,
        }
    }
}

fn run<R: Rng + ?Sized>(
    variant: Variant,
    g: &Graph,
    palette: Color,
    start: &StartPolicy,
    sched: &SchedulerPolicy,
    rng: &mut R,
    options: &RunOptions,
) -> Result<RunResult> {
    if let SchedulerPolicy::FixedPermutation(p) = sched {
        if p.len() != g.vertex_count() {
            return Err(Error::NotAPermutation(g.vertex_count()));
        }
    }
    if let SchedulerPolicy::Adversary(s) = sched {
        s.validate(g.vertex_count())?;
    }
    let mut state = Run::start(g, palette, start, rng, options)?;

    // A uniformly random order of conflicted vertices in the persistent
    // process is the same as visiting them in the order of a uniformly
    // random permutation, because fixed vertices are never selected again.
    let sched = match (variant, sched) {
        (Variant::Persistent, SchedulerPolicy::UniformRandom) => {
            SchedulerPolicy::FixedPermutation(Permutation::random(g.vertex_count(), rng))
        }
        _ => sched.clone(),
    };

    let mut selected = vec![false; g.vertex_count()];
    'outer: while !state.tracker.is_proper() {
        if state.step3 >= state.cap {
            break;
        }
        let v = state.pick(&sched, rng)?;
        state.select(v);
        match variant {
            Variant::Decentralized => {
                state.draw(v, rng);
            }
            Variant::Persistent => {
                if std::mem::replace(&mut selected[v], true) {
                    return Err(Error::Reselected(v));
                }
                while state.tracker.is_conflicted(v) {
                    if !state.draw(v, rng) {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(state.finish())
}

/// Decentralized Coloring: pick a conflicted vertex, give it one uniform
/// color from `1..=palette`, repeat until proper or the cap is reached.
pub fn run_decentralized<R: Rng + ?Sized>(
    g: &Graph,
    palette: Color,
    start: &StartPolicy,
    sched: &SchedulerPolicy,
    rng: &mut R,
    options: &RunOptions,
) -> Result<RunResult> {
    run(
        Variant::Decentralized,
        g,
        palette,
        start,
        sched,
        rng,
        options,
    )
}

/// Persistent Decentralized Coloring: the selected vertex keeps drawing
/// uniform colors until it is no longer conflicted.
pub fn run_persistent<R: Rng + ?Sized>(
    g: &Graph,
    palette: Color,
    start: &StartPolicy,
    sched: &SchedulerPolicy,
    rng: &mut R,
    options: &RunOptions,
) -> Result<RunResult> {
    run(Variant::Persistent, g, palette, start, sched, rng, options)
}
