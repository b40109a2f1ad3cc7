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

//! Exact expectations for Persistent Decentralized Coloring.
//!
//! With the visiting order fixed, the only randomness left is in the
//! recoloring loop. A conflicted vertex with `f` free colors draws a
//! Geometric(f/D) number of times (mean `D/f`) and stops at a color that is
//! uniform over its free colors, so the expectation is a finite recursion
//! over those final colors. A uniformly random order of conflicted vertices
//! is the same as a uniformly random permutation, so the random-order value
//! is the average over all `n!` permutations.

use std::collections::HashMap;

use crate::coloring::{self, Color, Coloring};
use crate::engine::{Permutation, StartPolicy};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

use super::states::{canonical_classes, canonical_key, check_raw_states};

/// Largest graph for which all permutations are enumerated.
pub const MAX_PERMUTATION_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PersistentOrder {
    AllPermutationsAverage,
    Fixed(Permutation),
}

/// Expected Step-3 draws of the persistent process.
pub fn exact_expected_recolorings_persistent<S: Scalar>(
    g: &Graph,
    palette: Color,
    start: &StartPolicy,
    order: &PersistentOrder,
) -> Result<S> {
    let n = g.vertex_count();
    let starts: Vec<(Coloring, u64)> = match start {
        StartPolicy::Random => {
            check_raw_states(n, palette)?;
            canonical_classes(n, palette)
                .into_iter()
                .map(|(colors, w)| (Coloring::new(colors, palette).expect("in range"), w))
                .collect()
        }
        StartPolicy::Fixed(c) => {
            c.check_matches(g)?;
            vec![(Coloring::new(c.colors().to_vec(), palette)?, 1)]
        }
    };
    let total_weight: u64 = starts.iter().map(|(_, w)| w).sum();

    let for_order = |perm: &Permutation| -> Result<S> {
        let mut memo = HashMap::new();
        let mut acc = S::zero();
        for (c, w) in &starts {
            acc = acc + S::from_count(*w) * expected_from(g, c, perm, &mut memo)?;
        }
        Ok(acc)
    };

    match order {
        PersistentOrder::Fixed(perm) => {
            if perm.len() != n {
                return Err(Error::NotAPermutation(n));
            }
            Ok(for_order(perm)? / S::from_count(total_weight))
        }
        PersistentOrder::AllPermutationsAverage => {
            if n > MAX_PERMUTATION_VERTICES {
                return Err(Error::GuardExceeded {
                    what: "vertices for permutation enumeration",
                    size: n as u128,
                    limit: MAX_PERMUTATION_VERTICES as u128,
                });
            }
            let mut order: Vec<usize> = (0..n).collect();
            let mut sum = S::zero();
            let mut count = 0u64;
            loop {
                sum = sum + for_order(&Permutation::new(order.clone())?)?;
                count += 1;
                if !next_permutation(&mut order) {
                    break;
                }
            }
            Ok(sum / (S::from_count(count) * S::from_count(total_weight)))
        }
    }
}

fn expected_from<S: Scalar>(
    g: &Graph,
    c: &Coloring,
    perm: &Permutation,
    memo: &mut HashMap<u64, S>,
) -> Result<S> {
    let key = canonical_key(c.colors(), c.palette());
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let next = perm
        .order()
        .iter()
        .copied()
        .find(|&v| coloring::is_conflicted(g, c, v));
    let value = match next {
        None => S::zero(),
        Some(v) => {
            let free = coloring::free_colors(g, c, v);
            if free.is_empty() {
                return Err(Error::Unsupported(format!(
                    "vertex {v} has no free color; the persistent process never terminates"
                )));
            }
            let f = free.len() as u64;
            let mut branches = S::zero();
            for x in free {
                branches = branches + expected_from(g, &c.with(v, x), perm, memo)?;
            }
            S::ratio(u64::from(c.palette()), f) + branches / S::from_count(f)
        }
    };
    memo.insert(key, value.clone());
    Ok(value)
}

/// Advances to the next permutation in lexicographic order; returns `false`
/// after the last one.
pub(crate) fn next_permutation(items: &mut [usize]) -> bool {
    let Some(i) = items.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = items
        .iter()
        .rposition(|&x| x > items[i])
        .expect("pivot has a successor");
    items.swap(i, j);
    items[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::bad_bipartite_start;
    use crate::Rational;

    #[test]
    fn permutations_are_enumerated_once() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }

    #[test]
    fn single_edge_both_orders() {
        let g = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        let start = StartPolicy::Fixed(Coloring::new(vec![1, 1], 2).unwrap());
        for order in [
            PersistentOrder::AllPermutationsAverage,
            PersistentOrder::Fixed(Permutation::new(vec![1, 0]).unwrap()),
        ] {
            let e: Rational = exact_expected_recolorings_persistent(&g, 2, &start, &order).unwrap();
            assert_eq!(e, Rational::from_integer(2.into()));
        }
    }

    #[test]
    fn proper_start_is_zero() {
        let (g, _) = bad_bipartite_start(2).unwrap();
        let start = StartPolicy::Fixed(Coloring::new(vec![1, 1, 2, 3], 3).unwrap());
        let e: Rational = exact_expected_recolorings_persistent(
            &g,
            3,
            &start,
            &PersistentOrder::AllPermutationsAverage,
        )
        .unwrap();
        assert_eq!(e, Rational::from_integer(0.into()));
    }

    #[test]
    fn bad_bipartite_two() {
        // K_{2,2}, left (1,1), right (1,2), D = 3. Conflicted: L0, L1, R0.
        //  - R0 first (prob 1/3): free {2,3}, 3/2 draws, then nothing is conflicted.
        //  - a left vertex first (prob 2/3): free {3}, 3 draws. Whichever of R0
        //    and the other left vertex comes next has one free color: 3 more
        //    draws, after which the coloring is proper.
        // (1/3)(3/2) + (2/3)(6) = 9/2.
        let (g, c) = bad_bipartite_start(2).unwrap();
        let e: Rational = exact_expected_recolorings_persistent(
            &g,
            3,
            &StartPolicy::Fixed(c),
            &PersistentOrder::AllPermutationsAverage,
        )
        .unwrap();
        assert_eq!(e, Rational::new(9.into(), 2.into()));
    }

    #[test]
    fn guards() {
        let g = crate::graph::gen_cycle(9).unwrap();
        let start = StartPolicy::Fixed(Coloring::monochromatic(9, 3, 1).unwrap());
        assert!(matches!(
            exact_expected_recolorings_persistent::<f64>(
                &g,
                3,
                &start,
                &PersistentOrder::AllPermutationsAverage
            ),
            Err(Error::GuardExceeded { .. })
        ));
        let k3 = crate::graph::gen_clique(3).unwrap();
        let mono = StartPolicy::Fixed(Coloring::monochromatic(3, 2, 1).unwrap());
        assert!(matches!(
            exact_expected_recolorings_persistent::<f64>(
                &k3,
                2,
                &mono,
                &PersistentOrder::AllPermutationsAverage
            ),
            Err(Error::Unsupported(_))
        ));
    }
}
