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

//! Colorings, conflict queries and the three potentials tracked by the
//! analysis: monochromatic components, conflicted edges, conflicted vertices.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub type Color = u32;

/// Assignment of a color in `1..=palette` to each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Color>,
    palette: Color,
}

impl Coloring {
    pub fn new(colors: Vec<Color>, palette: Color) -> Result<Coloring> {
        if palette == 0 {
            return Err(Error::EmptyPalette);
        }
        if let Some(&color) = colors.iter().find(|&&c| c == 0 || c > palette) {
            return Err(Error::ColorOutOfRange { color, palette });
        }
        Ok(Coloring { colors, palette })
    }

    /// Every vertex gets `color`.
    pub fn monochromatic(n: usize, palette: Color, color: Color) -> Result<Coloring> {
        Coloring::new(vec![color; n], palette)
    }

    /// Each vertex independently uniform on `1..=palette`, drawn in vertex
    /// order.
    pub fn random<R: Rng + ?Sized>(n: usize, palette: Color, rng: &mut R) -> Result<Coloring> {
        if palette == 0 {
            return Err(Error::EmptyPalette);
        }
        let colors = (0..n).map(|_| rng.gen_range(1..=palette)).collect();
        Ok(Coloring { colors, palette })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// D.
    pub fn palette(&self) -> Color {
        self.palette
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Panics if `color` is outside the palette.
    pub fn set(&mut self, v: Vertex, color: Color) {
        assert!(
            (1..=self.palette).contains(&color),
            "color {color} outside palette 1..={}",
            self.palette
        );
        self.colors[v] = color;
    }

    /// Copy with `v` recolored.
    pub fn with(&self, v: Vertex, color: Color) -> Coloring {
        let mut next = self.clone();
        next.set(v, color);
        next
    }

    pub fn check_matches(&self, g: &Graph) -> Result<()> {
        if self.len() != g.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: g.vertex_count(),
                got: self.len(),
            });
        }
        Ok(())
    }

    /// `D=<palette> c0 c1 ...` on one line.
    pub fn to_text(&self) -> String {
        let mut out = format!("D={}", self.palette);
        for c in &self.colors {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<Coloring> {
        let bad = |message: String| Error::Parse { line: 1, message };
        let mut tokens = text.split_whitespace();
        let head = tokens.next().ok_or_else(|| bad("empty coloring".into()))?;
        let palette = head
            .strip_prefix("D=")
            .ok_or_else(|| bad(format!("expected `D=<int>`, found `{head}`")))?
            .parse()
            .map_err(|e| bad(format!("bad palette size: {e}")))?;
        let colors = tokens
            .map(|t| t.parse().map_err(|e| bad(format!("bad color `{t}`: {e}"))))
            .collect::<Result<Vec<Color>>>()?;
        Coloring::new(colors, palette)
    }
}

/// The potentials considered when analysing drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PotentialKind {
    MonochromaticComponents,
    ConflictedEdges,
    ConflictedVertices,
}

impl PotentialKind {
    pub const ALL: [PotentialKind; 3] = [
        PotentialKind::MonochromaticComponents,
        PotentialKind::ConflictedEdges,
        PotentialKind::ConflictedVertices,
    ];

    pub fn evaluate(self, g: &Graph, c: &Coloring) -> usize {
        match self {
            PotentialKind::MonochromaticComponents => monochromatic_component_count(g, c),
            PotentialKind::ConflictedEdges => conflicted_edge_count(g, c),
            PotentialKind::ConflictedVertices => conflicted_vertices(g, c).len(),
        }
    }
}

pub fn is_conflicted(g: &Graph, c: &Coloring, v: Vertex) -> bool {
    let own = c.color(v);
    g.neighbors(v).iter().any(|&u| c.color(u) == own)
}

/// All conflicted vertices in ascending order.
pub fn conflicted_vertices(g: &Graph, c: &Coloring) -> Vec<Vertex> {
    g.vertices().filter(|&v| is_conflicted(g, c, v)).collect()
}

pub fn is_proper(g: &Graph, c: &Coloring) -> bool {
    g.edges().all(|(u, v)| c.color(u) != c.color(v))
}

/// Palette colors not used by any neighbor of `v`. The current color of `v`
/// is not excluded.
pub fn free_colors(g: &Graph, c: &Coloring, v: Vertex) -> Vec<Color> {
    let used = neighbor_color_mask(g, c, v);
    (1..=c.palette()).filter(|&x| !used[x as usize]).collect()
}

pub fn free_color_count(g: &Graph, c: &Coloring, v: Vertex) -> usize {
    let used = neighbor_color_mask(g, c, v);
    used[1..].iter().filter(|&&b| !b).count()
}

fn neighbor_color_mask(g: &Graph, c: &Coloring, v: Vertex) -> Vec<bool> {
    let mut used = vec![false; c.palette() as usize + 1];
    for &u in g.neighbors(v) {
        used[c.color(u) as usize] = true;
    }
    used
}

pub fn conflicted_edge_count(g: &Graph, c: &Coloring) -> usize {
    g.edges().filter(|&(u, v)| c.color(u) == c.color(v)).count()
}

/// Φ: connected components of the graph restricted to monochromatic edges,
/// singletons included.
pub fn monochromatic_component_count(g: &Graph, c: &Coloring) -> usize {
    let mut sets = DisjointSets::new(g.vertex_count());
    for (u, v) in g.edges() {
        if c.color(u) == c.color(v) {
            sets.union(u, v);
        }
    }
    sets.set_count()
}

/// Component labelling of the monochromatic subgraph, used to evaluate how a
/// single recoloring changes Φ without recomputing it from scratch.
#[derive(Debug, Clone)]
pub struct MonochromaticComponents {
    label: Vec<usize>,
    count: usize,
}

impl MonochromaticComponents {
    pub fn compute(g: &Graph, c: &Coloring) -> MonochromaticComponents {
        let n = g.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &y in g.neighbors(x) {
                    if label[y] == usize::MAX && c.color(y) == c.color(x) {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        MonochromaticComponents { label, count }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn label(&self, v: Vertex) -> usize {
        self.label[v]
    }

    /// Φ(c with v→x) − Φ(c).
    ///
    /// Removing `v` from its class splits its component into `k` pieces,
    /// one per component of the class left among `v`'s same-colored
    /// neighbors. Adding it to class `x` merges the `m` distinct
    /// `x`-components touching `v`. The change is `(k − 1) + (1 − m)`.
    pub fn recolor_delta(&self, g: &Graph, c: &Coloring, v: Vertex, x: Color) -> i64 {
        if x == c.color(v) {
            return 0;
        }
        let k = self.pieces_without(g, c, v) as i64;
        let mut touched: Vec<usize> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| c.color(u) == x)
            .map(|&u| self.label[u])
            .collect();
        touched.sort_unstable();
        touched.dedup();
        k - touched.len() as i64
    }

    /// Σ over all palette colors x of Φ(c with v→x) − Φ(c).
    pub fn recolor_delta_sum(&self, g: &Graph, c: &Coloring, v: Vertex) -> i64 {
        let own = c.color(v);
        let k = self.pieces_without(g, c, v) as i64;
        let mut touched: Vec<usize> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| c.color(u) != own)
            .map(|&u| self.label[u])
            .collect();
        touched.sort_unstable();
        touched.dedup();
        (i64::from(c.palette()) - 1) * k - touched.len() as i64
    }

    /// Number of components of `v`'s class after deleting `v`, restricted to
    /// the component that contained `v`.
    fn pieces_without(&self, g: &Graph, c: &Coloring, v: Vertex) -> usize {
        let own = c.color(v);
        let starts: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| c.color(u) == own)
            .collect();
        if starts.len() <= 1 {
            return starts.len();
        }
        let mut seen = std::collections::HashSet::new();
        seen.insert(v);
        let mut pieces = 0;
        let mut stack = Vec::new();
        for s in starts {
            if !seen.insert(s) {
                continue;
            }
            pieces += 1;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &y in g.neighbors(x) {
                    if c.color(y) == own && seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        pieces
    }
}

/// Incrementally maintained conflict structure: per-vertex count of
/// same-colored neighbors, the conflicted set, and the conflicted-edge count.
///
/// The conflicted set is stored unordered with O(1) insert, remove and
/// indexed access; [`ConflictTracker::sorted`] gives the ascending view.
#[derive(Debug, Clone)]
pub struct ConflictTracker {
    same: Vec<u32>,
    members: Vec<Vertex>,
    position: Vec<usize>,
    conflicted_edges: usize,
}

const ABSENT: usize = usize::MAX;

impl ConflictTracker {
    pub fn new(g: &Graph, c: &Coloring) -> ConflictTracker {
        let n = g.vertex_count();
        let mut tracker = ConflictTracker {
            same: vec![0; n],
            members: Vec::new(),
            position: vec![ABSENT; n],
            conflicted_edges: 0,
        };
        for v in 0..n {
            let own = c.color(v);
            tracker.same[v] = g
                .neighbors(v)
                .iter()
                .filter(|&&u| c.color(u) == own)
                .count() as u32;
            if tracker.same[v] > 0 {
                tracker.insert(v);
            }
        }
        tracker.conflicted_edges = tracker.same.iter().map(|&s| s as usize).sum::<usize>() / 2;
        tracker
    }

    fn insert(&mut self, v: Vertex) {
        if self.position[v] == ABSENT {
            self.position[v] = self.members.len();
            self.members.push(v);
        }
    }

    fn remove(&mut self, v: Vertex) {
        let p = self.position[v];
        if p != ABSENT {
            let last = *self.members.last().expect("non-empty");
            self.members.swap_remove(p);
            if last != v {
                self.position[last] = p;
            }
            self.position[v] = ABSENT;
        }
    }

    fn sync(&mut self, v: Vertex) {
        if self.same[v] > 0 {
            self.insert(v);
        } else {
            self.remove(v);
        }
    }

    /// Applies `v → color` to both the coloring and the tracker.
    pub fn recolor(&mut self, g: &Graph, c: &mut Coloring, v: Vertex, color: Color) {
        let old = c.color(v);
        if old == color {
            return;
        }
        for &u in g.neighbors(v) {
            let cu = c.color(u);
            if cu == old {
                self.same[u] -= 1;
                self.same[v] -= 1;
                self.conflicted_edges -= 1;
                self.sync(u);
            } else if cu == color {
                self.same[u] += 1;
                self.same[v] += 1;
                self.conflicted_edges += 1;
                self.sync(u);
            }
        }
        self.sync(v);
        c.set(v, color);
    }

    pub fn is_conflicted(&self, v: Vertex) -> bool {
        self.same[v] > 0
    }

    /// Number of neighbors sharing `v`'s color.
    pub fn same_colored_neighbors(&self, v: Vertex) -> u32 {
        self.same[v]
    }

    /// Conflicted vertices in tracker order (deterministic, not sorted).
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn sorted(&self) -> Vec<Vertex> {
        let mut out = self.members.clone();
        out.sort_unstable();
        out
    }

    pub fn conflicted_count(&self) -> usize {
        self.members.len()
    }

    pub fn conflicted_edge_count(&self) -> usize {
        self.conflicted_edges
    }

    pub fn is_proper(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fig2, gen_clique, gen_fig2_like};
    use crate::rng::seeded;

    fn col(colors: &[Color], palette: Color) -> Coloring {
        Coloring::new(colors.to_vec(), palette).unwrap()
    }

    #[test]
    fn construction_checks_range() {
        assert_eq!(
            Coloring::new(vec![1, 5], 4),
            Err(Error::ColorOutOfRange {
                color: 5,
                palette: 4
            })
        );
        assert_eq!(
            Coloring::new(vec![0], 4),
            Err(Error::ColorOutOfRange {
                color: 0,
                palette: 4
            })
        );
        assert_eq!(Coloring::new(vec![], 0), Err(Error::EmptyPalette));
    }

    #[test]
    fn random_coloring_single_color_and_determinism() {
        let c = Coloring::random(20, 1, &mut seeded(3)).unwrap();
        assert!(c.colors().iter().all(|&x| x == 1));
        assert_eq!(
            Coloring::random(50, 5, &mut seeded(11)).unwrap(),
            Coloring::random(50, 5, &mut seeded(11)).unwrap()
        );
    }

    #[test]
    fn random_coloring_is_uniform() {
        let n = 100_000;
        let c = Coloring::random(n, 4, &mut seeded(2024)).unwrap();
        let se = (0.25f64 * 0.75 / n as f64).sqrt();
        for color in 1..=4 {
            let freq = c.colors().iter().filter(|&&x| x == color).count() as f64 / n as f64;
            assert!((freq - 0.25).abs() < 4.0 * se, "color {color}: {freq}");
        }
    }

    #[test]
    fn conflict_queries() {
        let k3 = gen_clique(3).unwrap();
        let proper = col(&[1, 2, 3], 3);
        assert!((0..3).all(|v| !is_conflicted(&k3, &proper, v)));
        assert!(is_proper(&k3, &proper));
        assert!(conflicted_vertices(&k3, &proper).is_empty());
        assert!(!is_proper(&k3, &col(&[1, 1, 2], 3)));

        let edge = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        let mono = col(&[1, 1], 2);
        assert!(is_conflicted(&edge, &mono, 0) && is_conflicted(&edge, &mono, 1));

        let k4 = gen_clique(4).unwrap();
        let mono4 = Coloring::monochromatic(4, 4, 2).unwrap();
        assert_eq!(conflicted_vertices(&k4, &mono4), vec![0, 1, 2, 3]);
        assert_eq!(conflicted_edge_count(&k4, &mono4), 6);

        let empty = Graph::from_edge_list(3, &[]).unwrap();
        assert!(is_proper(
            &empty,
            &Coloring::monochromatic(3, 2, 1).unwrap()
        ));
    }

    #[test]
    fn free_color_sets() {
        let isolated = Graph::from_edge_list(1, &[]).unwrap();
        assert_eq!(free_colors(&isolated, &col(&[2], 4), 0), vec![1, 2, 3, 4]);
        let k3 = gen_clique(3).unwrap();
        assert_eq!(free_colors(&k3, &col(&[1, 2, 3], 3), 0), vec![1]);
        assert_eq!(free_color_count(&k3, &col(&[1, 2, 3], 3), 0), 1);
    }

    #[test]
    fn gadget_conflicts_and_components() {
        let (g, c, _) = gen_fig2_like();
        assert_eq!(conflicted_vertices(&g, &c), vec![fig2::V, fig2::U, fig2::W]);
        assert_eq!(monochromatic_component_count(&g, &c), 3);
        assert_eq!(conflicted_edge_count(&g, &c), 2);
    }

    #[test]
    fn phi_extremes() {
        let k4 = gen_clique(4).unwrap();
        assert_eq!(
            monochromatic_component_count(&k4, &col(&[1, 2, 3, 4], 4)),
            4
        );
        assert_eq!(
            monochromatic_component_count(&k4, &col(&[3, 3, 3, 3], 4)),
            1
        );
    }

    #[test]
    fn potential_kinds_evaluate() {
        let (g, c, _) = gen_fig2_like();
        let values: Vec<_> = PotentialKind::ALL
            .iter()
            .map(|k| k.evaluate(&g, &c))
            .collect();
        assert_eq!(values, vec![3, 2, 3]);
    }

    #[test]
    fn text_format() {
        let c = col(&[1, 3, 2], 4);
        assert_eq!(c.to_text(), "D=4 1 3 2\n");
        assert_eq!(Coloring::from_text("D=4 1 3 2").unwrap(), c);
        assert!(Coloring::from_text("1 2 3").is_err());
        assert!(Coloring::from_text("D=2 1 3").is_err());
    }

    #[test]
    fn tracker_follows_recolors() {
        let (g, mut c, v) = gen_fig2_like();
        let mut t = ConflictTracker::new(&g, &c);
        assert_eq!(t.sorted(), vec![0, 1, 4]);
        t.recolor(&g, &mut c, v, fig2::Y);
        assert_eq!(t.sorted(), vec![1, 4]);
        assert_eq!(t.conflicted_edge_count(), 1);
        t.recolor(&g, &mut c, v, fig2::R);
        assert_eq!(t.sorted(), vec![0, 1, 2, 4]);
        assert_eq!(t.same_colored_neighbors(fig2::RED), 1);
    }
}
