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

use dcolor_core::coloring::{self, ConflictTracker, MonochromaticComponents};
use dcolor_core::engine::{
    run_decentralized, run_persistent, RunOptions, SchedulerPolicy, StartPolicy,
};
use dcolor_core::graph::{gen_clique, gen_complete_bipartite, gen_cycle, gen_erdos_renyi};
use dcolor_core::oracle::{exact_expected_conflict_deltas, exact_expected_phi_delta};
use dcolor_core::rng::seeded;
use dcolor_core::{AdversaryStrategy, Coloring, Graph, PotentialKind, Rational};
use proptest::prelude::*;

/// Random graph plus a random coloring with palette at least Δ+1 (plus
/// `extra` spare colors).
fn instance(max_n: usize, max_extra: u32) -> impl Strategy<Value = (Graph, Coloring)> {
    (1..=max_n, 0.0f64..=1.0, any::<u64>(), 0..=max_extra).prop_flat_map(|(n, p, seed, extra)| {
        let g = gen_erdos_renyi(n, p, seed).unwrap();
        let palette = g.max_degree() as u32 + 1 + extra;
        proptest::collection::vec(1..=palette, n)
            .prop_map(move |colors| (g.clone(), Coloring::new(colors, palette).unwrap()))
    })
}

/// Same, but with at least one conflicted vertex.
fn conflicted_instance(max_n: usize, max_extra: u32) -> impl Strategy<Value = (Graph, Coloring)> {
    instance(max_n, max_extra).prop_filter("needs a conflict", |(g, c)| !coloring::is_proper(g, c))
}

fn brute_force_phi(g: &Graph, c: &Coloring) -> usize {
    // Flood fill over monochromatic edges.
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] && c.color(w) == c.color(u) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generators_are_simple(n in 1usize..30, p in 0.0f64..=1.0, seed in any::<u64>(), a in 1usize..8, b in 1usize..8) {
        for g in [gen_erdos_renyi(n, p, seed).unwrap(), gen_clique(n).unwrap(), gen_complete_bipartite(a, b).unwrap()] {
            prop_assert!(g.validate().is_ok());
            let degree_sum: usize = g.vertices().map(|v| g.degree(v)).sum();
            prop_assert_eq!(degree_sum, 2 * g.edge_count());
            prop_assert_eq!(g.max_degree(), g.vertices().map(|v| g.degree(v)).max().unwrap_or(0));
        }
        if n >= 3 {
            let c = gen_cycle(n).unwrap();
            prop_assert!(c.vertices().all(|v| c.degree(v) == 2));
        }
        prop_assert_eq!(gen_clique(n).unwrap().edge_count(), n * (n - 1) / 2);
        prop_assert_eq!(gen_complete_bipartite(a, b).unwrap().edge_count(), a * b);
    }

    #[test]
    fn erdos_renyi_is_deterministic(n in 1usize..40, p in 0.0f64..=1.0, seed in any::<u64>()) {
        prop_assert_eq!(gen_erdos_renyi(n, p, seed).unwrap(), gen_erdos_renyi(n, p, seed).unwrap());
    }

    #[test]
    fn potentials_bound_and_detect_proper((g, c) in instance(14, 3)) {
        let n = g.vertex_count();
        let phi = coloring::monochromatic_component_count(&g, &c);
        prop_assert!(1 <= phi && phi <= n);
        prop_assert_eq!(phi, brute_force_phi(&g, &c));
        let proper = coloring::is_proper(&g, &c);
        prop_assert_eq!(phi == n, proper);
        prop_assert_eq!(coloring::conflicted_edge_count(&g, &c) == 0, proper);
        prop_assert_eq!(coloring::conflicted_vertices(&g, &c).is_empty(), proper);
        for kind in PotentialKind::ALL {
            let _ = kind.evaluate(&g, &c);
        }
    }

    #[test]
    fn free_colors_are_plentiful((g, c) in instance(14, 3)) {
        for v in g.vertices() {
            let free = coloring::free_colors(&g, &c, v);
            prop_assert!(free.len() >= c.palette() as usize - g.degree(v));
            prop_assert!(!free.is_empty());
            prop_assert_eq!(free.len(), coloring::free_color_count(&g, &c, v));
            for x in free {
                prop_assert!(g.neighbors(v).iter().all(|&u| c.color(u) != x));
            }
        }
    }

    #[test]
    fn tracker_matches_recomputation((g, c) in instance(12, 2), moves in proptest::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 0..40)) {
        let mut c = c;
        let mut tracker = ConflictTracker::new(&g, &c);
        for (vi, xi) in moves {
            let v = vi.index(g.vertex_count());
            let x = xi.index(c.palette() as usize) as u32 + 1;
            tracker.recolor(&g, &mut c, v, x);
            prop_assert_eq!(tracker.sorted(), coloring::conflicted_vertices(&g, &c));
            prop_assert_eq!(tracker.conflicted_edge_count(), coloring::conflicted_edge_count(&g, &c));
            prop_assert_eq!(tracker.is_proper(), coloring::is_proper(&g, &c));
        }
    }

    #[test]
    fn local_phi_delta_matches_recount((g, c) in instance(12, 2), vi in any::<prop::sample::Index>()) {
        let v = vi.index(g.vertex_count());
        let comps = MonochromaticComponents::compute(&g, &c);
        let base = brute_force_phi(&g, &c) as i64;
        prop_assert_eq!(comps.count() as i64, base);
        let mut sum = 0;
        for x in 1..=c.palette() {
            let after = brute_force_phi(&g, &c.with(v, x)) as i64;
            prop_assert_eq!(comps.recolor_delta(&g, &c, v, x), after - base);
            sum += after - base;
        }
        prop_assert_eq!(comps.recolor_delta_sum(&g, &c, v), sum);
    }

    #[test]
    fn drift_bounds_hold((g, c) in conflicted_instance(12, 3)) {
        let d = Rational::from_integer(c.palette().into());
        let inv = Rational::from_integer(1.into()) / d;
        for v in coloring::conflicted_vertices(&g, &c) {
            let phi: Rational = exact_expected_phi_delta(&g, &c, v).unwrap();
            prop_assert!(phi >= inv, "phi drift {} at {}", phi, v);
            let deltas = exact_expected_conflict_deltas::<Rational>(&g, &c, v).unwrap();
            prop_assert!(deltas.conflicted_edges <= -inv.clone());
            prop_assert_eq!(deltas.phi, phi);
        }
    }

    #[test]
    fn min_drift_pick_minimizes((g, c) in conflicted_instance(12, 2)) {
        let conflicted = coloring::conflicted_vertices(&g, &c);
        let pick = dcolor_core::adversary::min_phi_drift_pick(&g, &c, &conflicted);
        let at = |v| exact_expected_phi_delta::<Rational>(&g, &c, v).unwrap();
        let best = at(pick);
        for &v in &conflicted {
            prop_assert!(best <= at(v));
        }
    }

    #[test]
    fn text_round_trips((g, c) in instance(16, 3)) {
        prop_assert_eq!(Graph::from_text(&g.to_text()).unwrap(), g);
        prop_assert_eq!(Coloring::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn runs_end_proper_and_count_draws((g, c) in instance(12, 2), seed in any::<u64>()) {
        let start = StartPolicy::Fixed(c);
        let palette = start_palette(&start);
        let opts = RunOptions { step_cap: Some(u64::MAX), trace: true };
        for persistent in [false, true] {
            let res = if persistent {
                run_persistent(&g, palette, &start, &SchedulerPolicy::UniformRandom, &mut seeded(seed), &opts)
            } else {
                run_decentralized(&g, palette, &start, &SchedulerPolicy::UniformRandom, &mut seeded(seed), &opts)
            }.unwrap();
            prop_assert!(res.terminated);
            prop_assert!(coloring::is_proper(&g, &res.final_coloring));
            prop_assert_eq!(res.total_draws, g.vertex_count() as u64 + res.step3_draws);
            prop_assert_eq!(res.per_vertex_draws.iter().sum::<u64>(), res.step3_draws);
            let trace = res.trace.unwrap();
            prop_assert_eq!(trace.len() as u64, res.selections);
            prop_assert_eq!(trace.iter().map(|e| e.draws.len() as u64).sum::<u64>(), res.step3_draws);
            if persistent {
                // Each vertex is selected at most once and its last draw is free.
                let mut seen = vec![false; g.vertex_count()];
                for e in &trace {
                    prop_assert!(!seen[e.vertex]);
                    seen[e.vertex] = true;
                }
            } else {
                prop_assert!(trace.iter().all(|e| e.draws.len() == 1));
            }
        }
    }

    #[test]
    fn adversaries_terminate((g, c) in instance(10, 2), seed in any::<u64>()) {
        let start = StartPolicy::Fixed(c);
        let palette = start_palette(&start);
        let opts = RunOptions { step_cap: Some(u64::MAX), trace: false };
        for strategy in [AdversaryStrategy::MinPhiDrift, AdversaryStrategy::MaxConflicted] {
            let sched = SchedulerPolicy::Adversary(strategy);
            let res = run_decentralized(&g, palette, &start, &sched, &mut seeded(seed), &opts).unwrap();
            prop_assert!(res.terminated);
            prop_assert!(coloring::is_proper(&g, &res.final_coloring));
        }
    }
}

fn start_palette(start: &StartPolicy) -> u32 {
    match start {
        StartPolicy::Fixed(c) => c.palette(),
        StartPolicy::Random => unreachable!(),
    }
}
