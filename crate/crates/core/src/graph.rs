//! Symmetric digraphs with self-loops, and the internal graph left after sink removal.
//!
//! Every undirected edge `{u, w}` is stored as two mutually inverse arcs; a self-loop is a
//! single arc that is its own inverse. Arc numbering is deterministic: edges in input order
//! (forward arc `u -> w` first, reverse arc second), then loops in input order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of arcs; operators downstream are dense.
pub const MAX_ARCS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl ArcId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricDigraph {
    vertex_count: usize,
    origin: Vec<VertexId>,
    terminus: Vec<VertexId>,
    inverse: Vec<ArcId>,
    incoming: Vec<Vec<ArcId>>,
    outgoing: Vec<Vec<ArcId>>,
}

impl SymmetricDigraph {
    /// Builds the symmetric digraph on `vertex_count` vertices from undirected edges and
    /// self-loop vertices. The result must be connected.
    pub fn build(vertex_count: usize, edges: &[(usize, usize)], loops: &[usize]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let check = |v: usize| {
            if v >= vertex_count {
                Err(Error::VertexOutOfRange {
                    vertex: v,
                    count: vertex_count,
                })
            } else {
                Ok(())
            }
        };
        let mut seen_edges = BTreeSet::new();
        let mut seen_loops = BTreeSet::new();
        let mut origin = Vec::with_capacity(2 * edges.len() + loops.len());
        let mut terminus = Vec::with_capacity(origin.capacity());
        let mut inverse = Vec::with_capacity(origin.capacity());
        for &(u, w) in edges {
            check(u)?;
            check(w)?;
            if u == w {
                if !seen_loops.insert(u) {
                    return Err(Error::DuplicateLoop(u));
                }
                continue;
            }
            if !seen_edges.insert((u.min(w), u.max(w))) {
                return Err(Error::DuplicateEdge(u, w));
            }
            let id = origin.len();
            origin.extend([VertexId(u), VertexId(w)]);
            terminus.extend([VertexId(w), VertexId(u)]);
            inverse.extend([ArcId(id + 1), ArcId(id)]);
        }
        // An `(u, u)` pair in the edge list is accepted as a loop, numbered with the loops.
        let mut loop_vertices: Vec<usize> = edges
            .iter()
            .filter(|(u, w)| u == w)
            .map(|&(u, _)| u)
            .collect();
        for &u in loops {
            check(u)?;
            if !seen_loops.insert(u) {
                return Err(Error::DuplicateLoop(u));
            }
            loop_vertices.push(u);
        }
        for u in loop_vertices {
            let id = origin.len();
            origin.push(VertexId(u));
            terminus.push(VertexId(u));
            inverse.push(ArcId(id));
        }
        let graph = Self::from_parts(vertex_count, origin, terminus, inverse)?;
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    pub(crate) fn from_parts(
        vertex_count: usize,
        origin: Vec<VertexId>,
        terminus: Vec<VertexId>,
        inverse: Vec<ArcId>,
    ) -> Result<Self> {
        if origin.len() > MAX_ARCS {
            return Err(Error::TooManyArcs {
                arcs: origin.len(),
                cap: MAX_ARCS,
            });
        }
        let mut incoming = vec![Vec::new(); vertex_count];
        let mut outgoing = vec![Vec::new(); vertex_count];
        for a in 0..origin.len() {
            incoming[terminus[a].0].push(ArcId(a));
            outgoing[origin[a].0].push(ArcId(a));
        }
        Ok(Self {
            vertex_count,
            origin,
            terminus,
            inverse,
            incoming,
            outgoing,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.origin.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> {
        (0..self.origin.len()).map(ArcId)
    }

    pub fn origin(&self, a: ArcId) -> VertexId {
        self.origin[a.0]
    }

    pub fn terminus(&self, a: ArcId) -> VertexId {
        self.terminus[a.0]
    }

    pub fn inverse(&self, a: ArcId) -> ArcId {
        self.inverse[a.0]
    }

    pub fn is_loop(&self, a: ArcId) -> bool {
        self.inverse[a.0] == a
    }

    /// The stored forward arc of each edge has the smaller id of its pair.
    pub fn is_forward(&self, a: ArcId) -> bool {
        !self.is_loop(a) && a < self.inverse(a)
    }

    pub fn loops(&self) -> Vec<ArcId> {
        self.arcs().filter(|&a| self.is_loop(a)).collect()
    }

    /// Number of undirected non-loop edges.
    pub fn edge_count(&self) -> usize {
        (self.arc_count() - self.loops().len()) / 2
    }

    /// Arcs terminating at `v`; a loop is counted once.
    pub fn incoming(&self, v: VertexId) -> &[ArcId] {
        &self.incoming[v.0]
    }

    pub fn outgoing(&self, v: VertexId) -> &[ArcId] {
        &self.outgoing[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incoming[v.0].len()
    }

    pub fn find_arc(&self, from: VertexId, to: VertexId) -> Option<ArcId> {
        self.outgoing[from.0]
            .iter()
            .copied()
            .find(|&a| self.terminus(a) == to)
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from(VertexId(0), |_| true).iter().all(|&r| r)
    }

    pub(crate) fn reachable_from(&self, start: VertexId, allowed: impl Fn(VertexId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        if self.vertex_count == 0 || !allowed(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen[start.0] = true;
        while let Some(v) = queue.pop_front() {
            for &a in self.outgoing(v) {
                let w = self.terminus(a);
                if !seen[w.0] && allowed(w) {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Checks the structural invariants of a symmetric digraph.
    pub fn validate(&self) -> bool {
        let mut pairs = BTreeSet::new();
        self.arcs().all(|a| {
            let b = self.inverse(a);
            let involutive = self.inverse(b) == a
                && self.origin(b) == self.terminus(a)
                && self.terminus(b) == self.origin(a);
            let loop_consistent = (b == a) == (self.origin(a) == self.terminus(a));
            involutive && loop_consistent
        }) && self
            .arcs()
            .all(|a| pairs.insert((self.origin(a), self.terminus(a))))
    }
}

/// The internal graph `G_0 = G \ V_s` together with the ambient data it needs: degrees in
/// `G`, boundary vertices adjacent to a sink, and index maps back into `G`.
#[derive(Clone, Debug)]
pub struct InternalGraph {
    ambient: SymmetricDigraph,
    sinks: Vec<VertexId>,
    graph: SymmetricDigraph,
    ambient_degree: Vec<usize>,
    boundary: Vec<bool>,
    vertex_map: Vec<VertexId>,
    arc_map: Vec<ArcId>,
    ambient_to_internal_arc: Vec<Option<ArcId>>,
    sink_arcs: Vec<(VertexId, ArcId)>,
}

impl InternalGraph {
    /// Removes `sinks` from `graph`. Internal vertices and arcs keep the relative order of
    /// their ambient ids.
    pub fn remove_sinks(graph: &SymmetricDigraph, sinks: &[VertexId]) -> Result<Self> {
        let n = graph.vertex_count();
        let mut is_sink = vec![false; n];
        for &s in sinks {
            if s.0 >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: s.0,
                    count: n,
                });
            }
            is_sink[s.0] = true;
        }
        let vertex_map: Vec<VertexId> = graph.vertices().filter(|v| !is_sink[v.0]).collect();
        if vertex_map.is_empty() {
            return Err(Error::EmptyInternalGraph);
        }
        let mut internal_vertex = vec![None; n];
        for (i, v) in vertex_map.iter().enumerate() {
            internal_vertex[v.0] = Some(VertexId(i));
        }

        let arc_map: Vec<ArcId> = graph
            .arcs()
            .filter(|&a| !is_sink[graph.origin(a).0] && !is_sink[graph.terminus(a).0])
            .collect();
        let mut ambient_to_internal_arc = vec![None; graph.arc_count()];
        for (i, a) in arc_map.iter().enumerate() {
            ambient_to_internal_arc[a.0] = Some(ArcId(i));
        }
        let map_vertex = |v: VertexId| internal_vertex[v.0].expect("internal vertex");
        let origin = arc_map.iter().map(|&a| map_vertex(graph.origin(a))).collect();
        let terminus = arc_map.iter().map(|&a| map_vertex(graph.terminus(a))).collect();
        let inverse = arc_map
            .iter()
            .map(|&a| ambient_to_internal_arc[graph.inverse(a).0].expect("inverse stays internal"))
            .collect();
        let internal = SymmetricDigraph::from_parts(vertex_map.len(), origin, terminus, inverse)?;
        if !internal.is_connected() {
            return Err(Error::DisconnectedInternalGraph);
        }

        let ambient_degree: Vec<usize> = vertex_map.iter().map(|&v| graph.degree(v)).collect();
        let sink_arcs: Vec<(VertexId, ArcId)> = graph
            .arcs()
            .filter(|&a| !is_sink[graph.origin(a).0] && is_sink[graph.terminus(a).0])
            .map(|a| (map_vertex(graph.origin(a)), a))
            .collect();
        let mut boundary = vec![false; vertex_map.len()];
        for &(v, _) in &sink_arcs {
            boundary[v.0] = true;
        }
        let mut sinks: Vec<VertexId> = sinks.to_vec();
        sinks.sort();
        sinks.dedup();

        Ok(Self {
            ambient: graph.clone(),
            sinks,
            graph: internal,
            ambient_degree,
            boundary,
            vertex_map,
            arc_map,
            ambient_to_internal_arc,
            sink_arcs,
        })
    }

    /// `G_0` itself.
    pub fn graph(&self) -> &SymmetricDigraph {
        &self.graph
    }

    /// The ambient graph `G` including sinks.
    pub fn ambient(&self) -> &SymmetricDigraph {
        &self.ambient
    }

    pub fn sinks(&self) -> &[VertexId] {
        &self.sinks
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn arc_count(&self) -> usize {
        self.graph.arc_count()
    }

    /// Degree in the ambient graph `G`.
    pub fn ambient_degree(&self, v: VertexId) -> usize {
        self.ambient_degree[v.0]
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.boundary[v.0]
    }

    pub fn boundary(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.boundary[v.0]).collect()
    }

    pub fn ambient_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn ambient_arc(&self, a: ArcId) -> ArcId {
        self.arc_map[a.0]
    }

    pub fn internal_arc(&self, ambient: ArcId) -> Option<ArcId> {
        self.ambient_to_internal_arc.get(ambient.0).copied().flatten()
    }

    /// Arcs of `G` leading from a boundary vertex into a sink, as (internal origin, ambient
    /// arc), ordered by ambient arc id. Each one is also the attachment point of one tail.
    pub fn sink_arcs(&self) -> &[(VertexId, ArcId)] {
        &self.sink_arcs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_has_two_inverse_arcs() {
        let g = SymmetricDigraph::build(2, &[(0, 1)], &[]).unwrap();
        assert_eq!(g.arc_count(), 2);
        assert_eq!(g.inverse(ArcId(0)), ArcId(1));
        assert_eq!(g.inverse(ArcId(1)), ArcId(0));
        assert!(g.validate());
    }

    #[test]
    fn square_with_two_loops() {
        let g = SymmetricDigraph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[0, 2]).unwrap();
        assert_eq!(g.arc_count(), 10);
        assert_eq!(g.loops(), vec![ArcId(8), ArcId(9)]);
        assert_eq!(g.degree(VertexId(0)), 3);
        assert_eq!(g.degree(VertexId(1)), 2);
        assert!(g.validate());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            SymmetricDigraph::build(2, &[(0, 1), (0, 1)], &[]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            SymmetricDigraph::build(2, &[(0, 1), (1, 0)], &[]),
            Err(Error::DuplicateEdge(1, 0))
        );
        assert_eq!(
            SymmetricDigraph::build(3, &[(0, 1)], &[]),
            Err(Error::Disconnected)
        );
        assert_eq!(
            SymmetricDigraph::build(2, &[(0, 2)], &[]),
            Err(Error::VertexOutOfRange { vertex: 2, count: 2 })
        );
        assert_eq!(
            SymmetricDigraph::build(2, &[(0, 1)], &[1, 1]),
            Err(Error::DuplicateLoop(1))
        );
    }

    #[test]
    fn remove_sinks_on_the_square_example() {
        let g = SymmetricDigraph::build(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (3, 5)],
            &[0, 2],
        )
        .unwrap();
        let g0 = InternalGraph::remove_sinks(&g, &[VertexId(4), VertexId(5)]).unwrap();
        assert_eq!(g0.vertex_count(), 4);
        assert_eq!(g0.arc_count(), 10);
        assert_eq!(g0.boundary(), vec![VertexId(1), VertexId(3)]);
        assert_eq!(g0.ambient_degree(VertexId(1)), 3);
        assert_eq!(g0.ambient_degree(VertexId(3)), 3);
        assert_eq!(g0.graph().degree(VertexId(1)), 2);
        // loops keep their order after the removed sink arcs
        assert_eq!(g0.graph().loops(), vec![ArcId(8), ArcId(9)]);
        assert_eq!(g0.ambient_arc(ArcId(8)), ArcId(12));
        assert_eq!(g0.sink_arcs().len(), 2);
    }

    #[test]
    fn remove_no_sinks() {
        let g = SymmetricDigraph::build(3, &[(0, 1), (1, 2)], &[]).unwrap();
        let g0 = InternalGraph::remove_sinks(&g, &[]).unwrap();
        assert!(g0.boundary().is_empty());
        for v in g0.graph().vertices() {
            assert_eq!(g0.ambient_degree(v), g0.graph().degree(v));
        }
    }

    #[test]
    fn single_interior_vertex() {
        let g = SymmetricDigraph::build(3, &[(0, 1), (1, 2)], &[]).unwrap();
        let g0 = InternalGraph::remove_sinks(&g, &[VertexId(0), VertexId(2)]).unwrap();
        assert_eq!(g0.vertex_count(), 1);
        assert_eq!(g0.arc_count(), 0);
        assert_eq!(g0.boundary(), vec![VertexId(0)]);
        assert_eq!(g0.ambient_vertex(VertexId(0)), VertexId(1));
    }

    #[test]
    fn sink_removal_errors() {
        let g = SymmetricDigraph::build(3, &[(0, 1), (1, 2)], &[]).unwrap();
        assert_eq!(
            InternalGraph::remove_sinks(&g, &[VertexId(1)]).unwrap_err(),
            Error::DisconnectedInternalGraph
        );
        assert_eq!(
            InternalGraph::remove_sinks(&g, &[VertexId(0), VertexId(1), VertexId(2)]).unwrap_err(),
            Error::EmptyInternalGraph
        );
    }
}
