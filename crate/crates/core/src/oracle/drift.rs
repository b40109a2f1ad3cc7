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

//! Exact one-step drifts of the three potentials, by brute force over the D
//! possible recolors of the selected vertex.

use crate::coloring::{self, Color, Coloring, PotentialKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::scalar::Scalar;

/// Expected one-step changes of every [`PotentialKind`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictDeltas<S> {
    pub phi: S,
    pub conflicted_vertices: S,
    pub conflicted_edges: S,
}

impl<S: Clone> ConflictDeltas<S> {
    pub fn get(&self, kind: PotentialKind) -> S {
        match kind {
            PotentialKind::MonochromaticComponents => self.phi.clone(),
            PotentialKind::ConflictedEdges => self.conflicted_edges.clone(),
            PotentialKind::ConflictedVertices => self.conflicted_vertices.clone(),
        }
    }
}

fn require_conflicted(g: &Graph, c: &Coloring, v: Vertex) -> Result<()> {
    if v >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.vertex_count(),
        });
    }
    c.check_matches(g)?;
    if !coloring::is_conflicted(g, c, v) {
        return Err(Error::NotConflicted(v));
    }
    Ok(())
}

/// `potential(c with v→x) − potential(c)` for every `x` in `1..=D`.
pub fn recolor_deltas(g: &Graph, c: &Coloring, v: Vertex, kind: PotentialKind) -> Vec<i64> {
    let before = kind.evaluate(g, c) as i64;
    (1..=c.palette())
        .map(|x| kind.evaluate(g, &c.with(v, x)) as i64 - before)
        .collect()
}

fn mean<S: Scalar>(deltas: &[i64]) -> S {
    let sum: i64 = deltas.iter().sum();
    S::from_signed(sum) / S::from_count(deltas.len() as u64)
}

/// E[Φ(after) − Φ(before)] when conflicted `v` takes a uniform color.
pub fn exact_expected_phi_delta<S: Scalar>(g: &Graph, c: &Coloring, v: Vertex) -> Result<S> {
    require_conflicted(g, c, v)?;
    Ok(mean(&recolor_deltas(
        g,
        c,
        v,
        PotentialKind::MonochromaticComponents,
    )))
}

/// [`exact_expected_phi_delta`] with a caller-supplied Φ. Lets checks be run
/// against alternative implementations of the potential.
pub fn expected_delta_with<S: Scalar>(
    g: &Graph,
    c: &Coloring,
    v: Vertex,
    potential: impl Fn(&Graph, &Coloring) -> usize,
) -> Result<S> {
    require_conflicted(g, c, v)?;
    let before = potential(g, c) as i64;
    let deltas: Vec<i64> = (1..=c.palette())
        .map(|x| potential(g, &c.with(v, x)) as i64 - before)
        .collect();
    Ok(mean(&deltas))
}

pub fn exact_expected_conflict_deltas<S: Scalar>(
    g: &Graph,
    c: &Coloring,
    v: Vertex,
) -> Result<ConflictDeltas<S>> {
    require_conflicted(g, c, v)?;
    Ok(ConflictDeltas {
        phi: mean(&recolor_deltas(
            g,
            c,
            v,
            PotentialKind::MonochromaticComponents,
        )),
        conflicted_vertices: mean(&recolor_deltas(g, c, v, PotentialKind::ConflictedVertices)),
        conflicted_edges: mean(&recolor_deltas(g, c, v, PotentialKind::ConflictedEdges)),
    })
}

/// Checks the four-color conflicted-vertex table of the gadget: keeping the
/// current color changes nothing, exactly one color lowers the count by one
/// and the other two raise it by one.
pub fn verify_fig2_deltas(g: &Graph, c: &Coloring, v: Vertex) -> Result<bool> {
    require_conflicted(g, c, v)?;
    if c.palette() != 4 {
        return Ok(false);
    }
    let deltas = recolor_deltas(g, c, v, PotentialKind::ConflictedVertices);
    let own = (c.color(v) - 1) as usize;
    let mut others: Vec<i64> = deltas
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != own)
        .map(|(_, &d)| d)
        .collect();
    others.sort_unstable();
    Ok(deltas[own] == 0 && others == [-1, 1, 1])
}

/// Per-color deltas of the conflicted-vertex count, indexed by color − 1.
pub fn conflicted_vertex_table(g: &Graph, c: &Coloring, v: Vertex) -> Vec<(Color, i64)> {
    recolor_deltas(g, c, v, PotentialKind::ConflictedVertices)
        .into_iter()
        .enumerate()
        .map(|(i, d)| (i as Color + 1, d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fig2, gen_clique, gen_fig2_like};
    use crate::Rational;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn gadget_tables() {
        let (g, c, v) = gen_fig2_like();
        // Colors are R, G, B, Y = 1, 2, 3, 4.
        assert_eq!(
            recolor_deltas(&g, &c, v, PotentialKind::ConflictedVertices),
            vec![1, 0, 1, -1]
        );
        assert_eq!(
            recolor_deltas(&g, &c, v, PotentialKind::MonochromaticComponents),
            vec![0, 0, 0, 1]
        );
        assert_eq!(
            recolor_deltas(&g, &c, v, PotentialKind::ConflictedEdges),
            vec![0, 0, 0, -1]
        );
        let d: ConflictDeltas<Rational> = exact_expected_conflict_deltas(&g, &c, v).unwrap();
        assert_eq!(d.phi, r(1, 4));
        assert_eq!(d.conflicted_vertices, r(1, 4));
        assert_eq!(d.conflicted_edges, r(-1, 4));
        assert!(verify_fig2_deltas(&g, &c, v).unwrap());
        assert_eq!(
            conflicted_vertex_table(&g, &c, v)[fig2::Y as usize - 1],
            (fig2::Y, -1)
        );
    }

    #[test]
    fn gadget_drifts_of_other_vertices() {
        let (g, c, _) = gen_fig2_like();
        assert_eq!(
            exact_expected_phi_delta::<Rational>(&g, &c, fig2::U).unwrap(),
            r(3, 2)
        );
        assert_eq!(
            exact_expected_phi_delta::<Rational>(&g, &c, fig2::W).unwrap(),
            r(3, 4)
        );
    }

    #[test]
    fn monochromatic_edge_and_triangle() {
        let edge = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        let c = Coloring::monochromatic(2, 2, 1).unwrap();
        for v in 0..2 {
            assert_eq!(
                exact_expected_phi_delta::<Rational>(&edge, &c, v).unwrap(),
                r(1, 2)
            );
        }
        let k3 = gen_clique(3).unwrap();
        let mono = Coloring::monochromatic(3, 3, 1).unwrap();
        for v in 0..3 {
            let d: ConflictDeltas<Rational> =
                exact_expected_conflict_deltas(&k3, &mono, v).unwrap();
            assert_eq!(d.conflicted_edges, r(-4, 3));
        }
        assert!(!verify_fig2_deltas(&k3, &mono, 0).unwrap());
    }

    #[test]
    fn unconflicted_vertex_is_rejected() {
        let k3 = gen_clique(3).unwrap();
        let proper = Coloring::new(vec![1, 2, 3], 3).unwrap();
        assert_eq!(
            exact_expected_phi_delta::<f64>(&k3, &proper, 0),
            Err(Error::NotConflicted(0))
        );
        assert_eq!(
            verify_fig2_deltas(&k3, &proper, 1),
            Err(Error::NotConflicted(1))
        );
    }
}
