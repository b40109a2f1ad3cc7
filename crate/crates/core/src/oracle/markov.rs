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

//! Expected number of recolor draws of Decentralized Coloring, computed by
//! solving the absorbing Markov chain over colorings.
//!
//! For a transient state `s` with conflicted set `C`, the scheduler picks
//! `v ∈ C` with some probability and `v` takes each color with probability
//! `1/D`, so `E[s] = 1 + Σ P(s → t) E[t]` with `E = 0` on proper colorings.
//! States are colorings up to renaming of colors (plus the followed vertex
//! for the mimicking scheduler).
//!
//! Systems with at most [`SolveOptions::exact_state_limit`] transient states
//! are solved by sparse Gaussian elimination in the caller's scalar type,
//! which is exact for rationals. Larger systems use monotone value
//! iteration bracketed between a sub-solution (zero) and a super-solution,
//! `D · (n − Φ(s))`, which is valid because every recolor raises Φ by at least
//! `1/D` in expectation when `D ≥ Δ + 1`. Iteration stops once the bracket is
//! narrower than the requested tolerance.

use std::collections::HashMap;

use crate::adversary::{self, MimicMode};
use crate::coloring::{self, Color, Coloring, ConflictTracker};
use crate::engine::{Permutation, StartPolicy};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::scalar::Scalar;

use super::states::{canonical_classes, canonical_key, check_raw_states, coloring_of, decode_key};

/// Schedulers whose next choice depends only on the current state (and, for
/// mimicking, the vertex selected last), so the process is a finite chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainScheduler {
    UniformRandom,
    MimicPersistent(MimicMode),
    MinPhiDrift,
    MaxConflicted,
    FixedPermutation(Permutation),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMethod {
    ExactElimination,
    CertifiedIteration { iterations: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation<S> {
    pub value: S,
    /// Zero for elimination; otherwise half the width of the certified
    /// bracket around `value`.
    pub error_bound: f64,
    pub method: SolveMethod,
    pub transient_states: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub exact_state_limit: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            exact_state_limit: 300,
            tolerance: 1e-12,
            max_iterations: 10_000_000,
        }
    }
}

/// Expected Step-3 draws of Decentralized Coloring until proper.
pub fn exact_expected_recolorings_dc<S: Scalar>(
    g: &Graph,
    palette: Color,
    start: &StartPolicy,
    sched: &ChainScheduler,
) -> Result<Expectation<S>> {
    exact_expected_recolorings_dc_with(g, palette, start, sched, &SolveOptions::default())
}

pub fn exact_expected_recolorings_dc_with<S: Scalar>(
    g: &Graph,
    palette: Color,
    start: &StartPolicy,
    sched: &ChainScheduler,
    options: &SolveOptions,
) -> Result<Expectation<S>> {
    let n = g.vertex_count();
    check_raw_states(n, palette)?;
    if let ChainScheduler::FixedPermutation(p) = sched {
        if p.len() != n {
            return Err(Error::NotAPermutation(n));
        }
    }
    let starts: Vec<(u64, u64)> = match start {
        StartPolicy::Random => canonical_classes(n, palette)
            .into_iter()
            .map(|(colors, weight)| (canonical_key(&colors, palette) * (n as u64 + 1), weight))
            .collect(),
        StartPolicy::Fixed(c) => {
            c.check_matches(g)?;
            let c = Coloring::new(c.colors().to_vec(), palette)?;
            vec![(canonical_key(c.colors(), palette) * (n as u64 + 1), 1)]
        }
    };
    let chain = Chain::build(g, palette, sched, starts.iter().map(|&(k, _)| k))?;
    let total_weight: u64 = starts.iter().map(|&(_, w)| w).sum();

    let transient = chain.rows.len();
    let (values, error_bound, method): (Vec<S>, f64, SolveMethod) =
        if transient <= options.exact_state_limit {
            (chain.eliminate::<S>(), 0.0, SolveMethod::ExactElimination)
        } else {
            if (palette as usize) < g.max_degree() + 1 {
                return Err(Error::Unsupported(format!(
                    "{transient} transient states exceed the elimination limit and the iterative \
                 solver needs D >= Δ+1 for its error certificate"
                )));
            }
            let (lo, hi, iterations) = chain.bracket(g, palette, options)?;
            let mid: Vec<S> = lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| S::from_f64((a + b) / 2.0))
                .collect();
            let width = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
            (
                mid,
                width / 2.0,
                SolveMethod::CertifiedIteration { iterations },
            )
        };

    let mut sum = S::zero();
    for &(key, weight) in &starts {
        if let Some(&i) = chain.index.get(&key) {
            sum = sum + S::from_count(weight) * values[i].clone();
        }
    }
    Ok(Expectation {
        value: sum / S::from_count(total_weight),
        error_bound,
        method,
        transient_states: transient,
    })
}

/// Transient states and their outgoing transition counts. Row `i` reads
/// `denominator[i] · x_i − Σ count · x_j = denominator[i]`, where absorbed
/// mass is simply dropped.
struct Chain {
    index: HashMap<u64, usize>,
    keys: Vec<u64>,
    rows: Vec<Vec<(usize, u64)>>,
    denominator: Vec<u64>,
    n: usize,
    palette: Color,
}

impl Chain {
    fn build(
        g: &Graph,
        palette: Color,
        sched: &ChainScheduler,
        seeds: impl Iterator<Item = u64>,
    ) -> Result<Chain> {
        let n = g.vertex_count();
        let mut chain = Chain {
            index: HashMap::new(),
            keys: Vec::new(),
            rows: Vec::new(),
            denominator: Vec::new(),
            n,
            palette,
        };
        let mut absorbing: HashMap<u64, ()> = HashMap::new();
        let mut queue = Vec::new();
        for key in seeds {
            chain.visit(g, key, &mut absorbing, &mut queue);
        }
        let mut head = 0;
        while head < queue.len() {
            let i = queue[head];
            head += 1;
            let key = chain.keys[i];
            let (colors, focus) = chain.decode(key);
            let coloring = coloring_of(colors, palette);
            let tracker = ConflictTracker::new(g, &coloring);
            let conflicted = tracker.sorted();
            let (choices, per_choice) = choice_weights(g, &coloring, &conflicted, focus, sched);
            let mut targets: HashMap<u64, u64> = HashMap::new();
            for (v, w) in choices {
                for x in 1..=palette {
                    let next = coloring.with(v, x);
                    let keep = matches!(sched, ChainScheduler::MimicPersistent(_))
                        && coloring::is_conflicted(g, &next, v);
                    let next_key = chain.encode(next.colors(), keep.then_some(v));
                    *targets.entry(next_key).or_insert(0) += w;
                }
            }
            let mut row = Vec::with_capacity(targets.len());
            let mut sorted: Vec<_> = targets.into_iter().collect();
            sorted.sort_unstable();
            for (t, count) in sorted {
                if let Some(j) = chain.visit(g, t, &mut absorbing, &mut queue) {
                    row.push((j, count));
                }
            }
            chain.rows[i] = row;
            chain.denominator[i] = per_choice * u64::from(palette);
        }
        chain.check_absorbing()?;
        Ok(chain)
    }

    /// Every transient state must reach a proper coloring, otherwise the
    /// expectation is infinite.
    fn check_absorbing(&self) -> Result<()> {
        let size = self.rows.len();
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); size];
        let mut reaches = vec![false; size];
        let mut stack = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let kept: u64 = row.iter().map(|&(_, c)| c).sum();
            if kept < self.denominator[i] {
                reaches[i] = true;
                stack.push(i);
            }
            for &(j, _) in row {
                reverse[j].push(i);
            }
        }
        while let Some(j) = stack.pop() {
            for &i in &reverse[j] {
                if !reaches[i] {
                    reaches[i] = true;
                    stack.push(i);
                }
            }
        }
        match reaches.iter().position(|&r| !r) {
            None => Ok(()),
            Some(i) => Err(Error::Unsupported(format!(
                "the process never terminates from coloring {:?}",
                self.decode(self.keys[i]).0
            ))),
        }
    }

    fn encode(&self, colors: &[Color], focus: Option<Vertex>) -> u64 {
        canonical_key(colors, self.palette) * (self.n as u64 + 1)
            + focus.map_or(0, |v| v as u64 + 1)
    }

    fn decode(&self, key: u64) -> (Vec<Color>, Option<Vertex>) {
        let m = self.n as u64 + 1;
        let focus = (key % m).checked_sub(1).map(|v| v as Vertex);
        (decode_key(key / m, self.n, self.palette), focus)
    }

    /// Index of a transient state, registering it on first sight; `None`
    /// for proper colorings.
    fn visit(
        &mut self,
        g: &Graph,
        key: u64,
        absorbing: &mut HashMap<u64, ()>,
        queue: &mut Vec<usize>,
    ) -> Option<usize> {
        if let Some(&i) = self.index.get(&key) {
            return Some(i);
        }
        if absorbing.contains_key(&key) {
            return None;
        }
        let (colors, _) = self.decode(key);
        if coloring::is_proper(g, &coloring_of(colors, self.palette)) {
            absorbing.insert(key, ());
            return None;
        }
        let i = self.keys.len();
        self.index.insert(key, i);
        self.keys.push(key);
        self.rows.push(Vec::new());
        self.denominator.push(0);
        queue.push(i);
        Some(i)
    }

    /// Sparse Gaussian elimination without pivoting. The system matrix is a
    /// nonsingular M-matrix (every transient state reaches absorption), so
    /// all pivots stay positive.
    fn eliminate<S: Scalar>(&self) -> Vec<S> {
        let size = self.rows.len();
        let order = self.elimination_order();
        let mut position = vec![0; size];
        for (p, &i) in order.iter().enumerate() {
            position[i] = p;
        }
        let mut rows: Vec<Vec<(usize, S)>> = Vec::with_capacity(size);
        let mut rhs: Vec<S> = Vec::with_capacity(size);
        let mut column_rows: Vec<Vec<usize>> = vec![Vec::new(); size];
        for (i, &old) in order.iter().enumerate() {
            let d = self.denominator[old];
            let mut entries: Vec<(usize, S)> = Vec::with_capacity(self.rows[old].len() + 1);
            let mut diagonal = d as i64;
            for &(j, count) in &self.rows[old] {
                let j = position[j];
                if j == i {
                    diagonal -= count as i64;
                } else {
                    entries.push((j, S::zero() - S::from_count(count)));
                }
            }
            entries.push((i, S::from_count(diagonal as u64)));
            entries.sort_by_key(|e| e.0);
            for &(j, _) in &entries {
                if j < i {
                    column_rows[j].push(i);
                }
            }
            rows.push(entries);
            rhs.push(S::from_count(d));
        }

        for p in 0..size {
            let pivot_row = std::mem::take(&mut rows[p]);
            let pivot = pivot_row
                .iter()
                .find(|e| e.0 == p)
                .map(|e| e.1.clone())
                .expect("pivot present");
            let mut targets = std::mem::take(&mut column_rows[p]);
            targets.sort_unstable();
            targets.dedup();
            for r in targets {
                if r <= p {
                    continue;
                }
                let Some(pos) = rows[r].iter().position(|e| e.0 == p) else {
                    continue;
                };
                let factor = rows[r][pos].1.clone() / pivot.clone();
                let old = std::mem::take(&mut rows[r]);
                let mut merged = Vec::with_capacity(old.len() + pivot_row.len());
                let (mut a, mut b) = (old.into_iter().peekable(), pivot_row.iter().peekable());
                loop {
                    let take_left = match (a.peek(), b.peek()) {
                        (None, None) => break,
                        (Some(_), None) => true,
                        (None, Some(_)) => false,
                        (Some(x), Some(y)) => x.0 <= y.0,
                    };
                    if take_left {
                        let (j, v) = a.next().expect("peeked");
                        if b.peek().is_some_and(|y| y.0 == j) {
                            let (_, w) = b.next().expect("peeked");
                            let value = v - factor.clone() * w.clone();
                            if j != p && !value.is_zero() {
                                merged.push((j, value));
                            }
                        } else if j != p {
                            merged.push((j, v));
                        }
                    } else {
                        let &(j, ref w) = b.next().expect("peeked");
                        if j > p {
                            merged.push((j, S::zero() - factor.clone() * w.clone()));
                            if j < r {
                                column_rows[j].push(r);
                            }
                        }
                    }
                }
                rows[r] = merged;
                let update = factor * rhs[p].clone();
                rhs[r] = rhs[r].clone() - update;
            }
            rows[p] = pivot_row;
        }

        let mut x: Vec<S> = vec![S::zero(); size];
        for p in (0..size).rev() {
            let mut acc = rhs[p].clone();
            let mut diagonal = S::one();
            for (j, v) in &rows[p] {
                if *j == p {
                    diagonal = v.clone();
                } else {
                    acc = acc - v.clone() * x[*j].clone();
                }
            }
            x[p] = acc / diagonal;
        }
        let mut out = vec![S::zero(); size];
        for (p, value) in x.into_iter().enumerate() {
            out[order[p]] = value;
        }
        out
    }

    /// Sparsest rows first; a cheap static stand-in for minimum degree.
    fn elimination_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i].len());
        order
    }

    /// Gauss–Seidel iteration from the sub-solution 0 and the super-solution
    /// `D · (n − Φ)`; both sequences are monotone and meet at the solution.
    fn bracket(
        &self,
        g: &Graph,
        palette: Color,
        options: &SolveOptions,
    ) -> Result<(Vec<f64>, Vec<f64>, usize)> {
        let size = self.rows.len();
        let mut lo = vec![0.0f64; size];
        let mut hi: Vec<f64> = self
            .keys
            .iter()
            .map(|&k| {
                let (colors, _) = self.decode(k);
                let phi = coloring::monochromatic_component_count(g, &coloring_of(colors, palette));
                f64::from(palette) * (self.n - phi) as f64
            })
            .collect();
        let probabilities: Vec<Vec<(usize, f64)>> = self
            .rows
            .iter()
            .zip(&self.denominator)
            .map(|(row, &d)| row.iter().map(|&(j, c)| (j, c as f64 / d as f64)).collect())
            .collect();
        let sweep = |x: &mut Vec<f64>| {
            for i in 0..size {
                let mut stay = 0.0;
                let mut acc = 1.0;
                for &(j, p) in &probabilities[i] {
                    if j == i {
                        stay += p;
                    } else {
                        acc += p * x[j];
                    }
                }
                x[i] = acc / (1.0 - stay);
            }
        };
        for iteration in 1..=options.max_iterations {
            sweep(&mut lo);
            sweep(&mut hi);
            let width = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
            if width <= 2.0 * options.tolerance {
                return Ok((lo, hi, iteration));
            }
        }
        Err(Error::Unsupported(format!(
            "value iteration did not reach tolerance {} within {} sweeps",
            options.tolerance, options.max_iterations
        )))
    }
}

/// Scheduler choice distribution as integer weights over a common
/// denominator (the second return value).
fn choice_weights(
    g: &Graph,
    c: &Coloring,
    conflicted: &[Vertex],
    focus: Option<Vertex>,
    sched: &ChainScheduler,
) -> (Vec<(Vertex, u64)>, u64) {
    let uniform = || {
        (
            conflicted.iter().map(|&v| (v, 1)).collect(),
            conflicted.len() as u64,
        )
    };
    match sched {
        ChainScheduler::UniformRandom => uniform(),
        ChainScheduler::MimicPersistent(mode) => match focus {
            Some(v) => (vec![(v, 1)], 1),
            None => match mode {
                MimicMode::Uniform => uniform(),
                MimicMode::LowestId => (vec![(conflicted[0], 1)], 1),
            },
        },
        ChainScheduler::MinPhiDrift => (
            vec![(adversary::min_phi_drift_pick(g, c, conflicted), 1)],
            1,
        ),
        ChainScheduler::MaxConflicted => {
            let v = conflicted
                .iter()
                .map(|&v| {
                    let own = c.color(v);
                    let same = g
                        .neighbors(v)
                        .iter()
                        .filter(|&&u| c.color(u) == own)
                        .count();
                    (std::cmp::Reverse(same), v)
                })
                .min()
                .map(|(_, v)| v)
                .expect("non-empty");
            (vec![(v, 1)], 1)
        }
        ChainScheduler::FixedPermutation(p) => {
            (vec![(p.first_of(conflicted).expect("non-empty"), 1)], 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_clique;
    use crate::Rational;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn single_edge_monochromatic() {
        let g = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        let start = StartPolicy::Fixed(Coloring::new(vec![1, 1], 2).unwrap());
        let e = exact_expected_recolorings_dc::<Rational>(
            &g,
            2,
            &start,
            &ChainScheduler::UniformRandom,
        )
        .unwrap();
        assert_eq!(e.value, r(2, 1));
        assert_eq!(e.method, SolveMethod::ExactElimination);
    }

    #[test]
    fn clique_is_coupon_collecting() {
        let k3 = gen_clique(3).unwrap();
        let e = exact_expected_recolorings_dc::<Rational>(
            &k3,
            3,
            &StartPolicy::Random,
            &ChainScheduler::UniformRandom,
        )
        .unwrap();
        assert_eq!(e.value, r(5, 2));
        let k4 = gen_clique(4).unwrap();
        let e = exact_expected_recolorings_dc::<Rational>(
            &k4,
            4,
            &StartPolicy::Random,
            &ChainScheduler::UniformRandom,
        )
        .unwrap();
        assert_eq!(e.value, r(13, 3));
    }

    #[test]
    fn proper_start_is_zero() {
        let k3 = gen_clique(3).unwrap();
        let start = StartPolicy::Fixed(Coloring::new(vec![3, 1, 2], 3).unwrap());
        for sched in [ChainScheduler::UniformRandom, ChainScheduler::MinPhiDrift] {
            let e = exact_expected_recolorings_dc::<Rational>(&k3, 3, &start, &sched).unwrap();
            assert_eq!(e.value, r(0, 1));
            assert_eq!(e.transient_states, 0);
        }
    }

    #[test]
    fn iteration_agrees_with_elimination() {
        let g = crate::graph::gen_cycle(5).unwrap();
        let start = StartPolicy::Random;
        for sched in [
            ChainScheduler::UniformRandom,
            ChainScheduler::MimicPersistent(MimicMode::Uniform),
            ChainScheduler::MinPhiDrift,
        ] {
            let exact = exact_expected_recolorings_dc::<Rational>(&g, 3, &start, &sched).unwrap();
            let options = SolveOptions {
                exact_state_limit: 0,
                ..SolveOptions::default()
            };
            let approx =
                exact_expected_recolorings_dc_with::<f64>(&g, 3, &start, &sched, &options).unwrap();
            assert!(matches!(
                approx.method,
                SolveMethod::CertifiedIteration { .. }
            ));
            let diff = (approx.value - exact.value.to_f64()).abs();
            assert!(diff <= approx.error_bound + 1e-12, "{sched:?}: diff {diff}");
        }
    }

    #[test]
    fn guard_is_enforced() {
        let g = Graph::from_edge_list(12, &[]).unwrap();
        assert!(matches!(
            exact_expected_recolorings_dc::<f64>(
                &g,
                4,
                &StartPolicy::Random,
                &ChainScheduler::UniformRandom
            ),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
