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

//! Immutable undirected simple graphs and the generator families used by the
//! experiments.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::rng::TrialRng;

pub type Vertex = usize;

/// Undirected simple graph on the dense vertex ids `0..n`.
///
/// Neighbor lists are sorted, so every scan over a neighborhood visits
/// vertices in increasing id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    max_degree: usize,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicates are rejected rather than
    /// merged; `(u, v)` and `(v, u)` count as the same edge.
    pub fn from_edge_list(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph::from_sorted_adjacency(adjacency))
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<Vertex>>) -> Graph {
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            adjacency,
            max_degree,
            edge_count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Δ, the maximum degree.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Γ(v), sorted ascending.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Re-checks every structural invariant. Generators are expected to
    /// produce graphs for which this never fails.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for (u, list) in self.adjacency.iter().enumerate() {
            for (i, &v) in list.iter().enumerate() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if v == u {
                    return Err(Error::SelfLoop(u));
                }
                if i > 0 && list[i - 1] >= v {
                    return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::InvalidParameter(format!(
                        "asymmetric adjacency between {u} and {v}"
                    )));
                }
            }
        }
        let max = self.adjacency.iter().map(Vec::len).max().unwrap_or(0);
        if max != self.max_degree {
            return Err(Error::InvalidParameter(format!(
                "cached max degree {} != {}",
                self.max_degree, max
            )));
        }
        Ok(())
    }

    /// Serializes to the `n m` / `u v` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the text format written by [`Graph::to_text`].
    pub fn from_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(line, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines {
            edges.push(parse_pair(line, body)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edge_list(n, &edges)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let bad = |message: String| Error::Parse { line, message };
    let mut parts = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = parts
            .next()
            .ok_or_else(|| bad("expected two integers".into()))?;
        tok.parse()
            .map_err(|e| bad(format!("`{tok}` is not a non-negative integer: {e}")))
    };
    let pair = (next()?, next()?);
    if parts.next().is_some() {
        return Err(bad("trailing tokens".into()));
    }
    Ok(pair)
}

/// K_n.
pub fn gen_clique(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let adjacency = (0..n)
        .map(|u| (0..n).filter(|&v| v != u).collect())
        .collect();
    Ok(Graph::from_sorted_adjacency(adjacency))
}

/// K_{a,b} with the left side on ids `0..a` and the right side on `a..a+b`.
pub fn gen_complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidParameter(format!(
            "complete bipartite sides must be non-empty, got ({a}, {b})"
        )));
    }
    let adjacency = (0..a + b)
        .map(|u| {
            if u < a {
                (a..a + b).collect()
            } else {
                (0..a).collect()
            }
        })
        .collect();
    Ok(Graph::from_sorted_adjacency(adjacency))
}

/// C_n for n ≥ 3.
pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edge_list(n, &edges)
}

/// G(n, p): each unordered pair is an edge independently with probability
/// `p`. Pairs are visited in lexicographic order, one uniform draw each.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} not in [0, 1]"
        )));
    }
    let mut rng = crate::rng::seeded(seed);
    Ok(erdos_renyi_with(n, p, &mut rng))
}

pub(crate) fn erdos_renyi_with(n: usize, p: f64, rng: &mut TrialRng) -> Graph {
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Graph::from_sorted_adjacency(adjacency)
}

/// Labels of the conflicted-vertex gadget: a focus vertex `v` colored G whose
/// recoloring raises the expected number of conflicted vertices.
pub mod fig2 {
    pub const R: u32 = 1;
    pub const G: u32 = 2;
    pub const B: u32 = 3;
    pub const Y: u32 = 4;
    pub const V: usize = 0;
    pub const U: usize = 1;
    pub const RED: usize = 2;
    pub const BLUE: usize = 3;
    pub const W: usize = 4;
}

/// Five-vertex gadget: `v`(G) adjacent to `u`(G), `r`(R), `b`(B); `u` also
/// adjacent to `w`(G). Palette {R, G, B, Y}, returned focus vertex is `v`.
///
/// Recoloring `v` to G, Y, R, B changes the conflicted-vertex count by
/// 0, −1, +1, +1 respectively.
pub fn gen_fig2_like() -> (Graph, Coloring, Vertex) {
    use fig2::*;
    let graph = Graph::from_edge_list(5, &[(V, U), (V, RED), (V, BLUE), (U, W)])
        .expect("gadget edges are valid");
    let mut colors = vec![0; 5];
    colors[V] = G;
    colors[U] = G;
    colors[RED] = R;
    colors[BLUE] = B;
    colors[W] = G;
    let coloring = Coloring::new(colors, 4).expect("gadget colors are in range");
    (graph, coloring, V)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_from_edges() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g, gen_clique(3).unwrap());
    }

    #[test]
    fn edge_list_errors_are_distinct() {
        assert_eq!(Graph::from_edge_list(2, &[(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(
            Graph::from_edge_list(4, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::from_edge_list(4, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::from_edge_list(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(Graph::from_edge_list(0, &[]), Err(Error::EmptyGraph));
    }

    #[test]
    fn cliques() {
        let k1 = gen_clique(1).unwrap();
        assert_eq!(
            (k1.vertex_count(), k1.edge_count(), k1.max_degree()),
            (1, 0, 0)
        );
        let k5 = gen_clique(5).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!(k5.vertices().all(|v| k5.degree(v) == 4));
        k5.validate().unwrap();
    }

    #[test]
    fn complete_bipartite() {
        assert_eq!(gen_complete_bipartite(1, 1).unwrap().edge_count(), 1);
        let k33 = gen_complete_bipartite(3, 3).unwrap();
        assert_eq!((k33.edge_count(), k33.max_degree()), (9, 3));
        let k24 = gen_complete_bipartite(2, 4).unwrap();
        assert_eq!(k24.max_degree(), 4);
        assert_eq!((k24.degree(0), k24.degree(1)), (4, 4));
        assert!((2..6).all(|v| k24.degree(v) == 2));
        assert!(!k24.has_edge(0, 1) && !k24.has_edge(2, 3));
        assert!(gen_complete_bipartite(0, 3).is_err());
    }

    #[test]
    fn cycles() {
        assert_eq!(gen_cycle(3).unwrap(), gen_clique(3).unwrap());
        let c4 = gen_cycle(4).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.vertices().all(|v| c4.degree(v) == 2));
        assert!(gen_cycle(2).is_err());
    }

    #[test]
    fn erdos_renyi_extremes_and_determinism() {
        assert_eq!(gen_erdos_renyi(5, 0.0, 9).unwrap().edge_count(), 0);
        assert_eq!(gen_erdos_renyi(5, 1.0, 9).unwrap(), gen_clique(5).unwrap());
        assert_eq!(
            gen_erdos_renyi(50, 0.1, 42).unwrap(),
            gen_erdos_renyi(50, 0.1, 42).unwrap()
        );
        assert!(gen_erdos_renyi(5, 1.5, 0).is_err());
    }

    #[test]
    fn gadget_shape() {
        let (g, c, v) = gen_fig2_like();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.max_degree(), 3);
        assert_eq!(c.palette(), 4);
        assert_eq!(v, fig2::V);
        assert!(!g.has_edge(fig2::V, fig2::W));
    }

    #[test]
    fn text_format() {
        let g = gen_complete_bipartite(2, 3).unwrap();
        let text = g.to_text();
        assert!(text.starts_with("5 6\n0 2\n"));
        assert_eq!(Graph::from_text(&text).unwrap(), g);
        assert!(matches!(
            Graph::from_text("3 2\n0 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Graph::from_text("3 1\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
