//! Spanning tree, fundamental cycles, bipartiteness and the four-way case split.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{ArcId, InternalGraph, SymmetricDigraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A closed walk `(a_0, ..., a_{r-1})` with `t(a_j) = o(a_{j+1})` that contains exactly one
/// non-tree edge. The first arc is the non-tree arc in its forward orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalCycle {
    pub arcs: Vec<ArcId>,
    pub non_tree_arc: ArcId,
    pub parity: Parity,
}

impl FundamentalCycle {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn vertices(&self, graph: &SymmetricDigraph) -> Vec<VertexId> {
        self.arcs.iter().map(|&a| graph.origin(a)).collect()
    }

    pub fn contains_vertex(&self, graph: &SymmetricDigraph, v: VertexId) -> bool {
        self.arcs.iter().any(|&a| graph.origin(a) == v)
    }

    /// The same cycle read from the first arc leaving `start`.
    pub fn rotated_to(&self, graph: &SymmetricDigraph, start: VertexId) -> Option<Vec<ArcId>> {
        let k = self.arcs.iter().position(|&a| graph.origin(a) == start)?;
        Some(
            self.arcs[k..]
                .iter()
                .chain(&self.arcs[..k])
                .copied()
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    /// Arc from parent to child for each tree edge, in discovery order.
    pub tree_arcs: Vec<ArcId>,
    pub cycles: Vec<FundamentalCycle>,
    pub odd: Vec<usize>,
    pub even: Vec<usize>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// BFS spanning tree from vertex 0 (neighbours visited in arc-id order) and one fundamental
/// cycle per non-tree edge. Self-loops never enter a cycle.
pub fn fundamental_cycle_basis(g0: &InternalGraph) -> CycleBasis {
    cycle_basis_of(g0.graph())
}

pub fn cycle_basis_of(graph: &SymmetricDigraph) -> CycleBasis {
    let n = graph.vertex_count();
    let mut parent: Vec<Option<ArcId>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut tree_arcs = Vec::new();
    let mut in_tree = vec![false; graph.arc_count()];
    if n > 0 {
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &a in graph.outgoing(v) {
                if graph.is_loop(a) {
                    continue;
                }
                let w = graph.terminus(a);
                if !seen[w.0] {
                    seen[w.0] = true;
                    parent[w.0] = Some(a);
                    depth[w.0] = depth[v.0] + 1;
                    tree_arcs.push(a);
                    in_tree[a.0] = true;
                    in_tree[graph.inverse(a).0] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut cycles = Vec::new();
    for a in graph.arcs() {
        if !graph.is_forward(a) || in_tree[a.0] {
            continue;
        }
        // walk back from t(a) to o(a) through the tree
        let (mut x, mut y) = (graph.terminus(a), graph.origin(a));
        let mut up = Vec::new();
        let mut down = Vec::new();
        while x != y {
            if depth[x.0] >= depth[y.0] {
                let p = parent[x.0].expect("non-root has a parent");
                up.push(graph.inverse(p));
                x = graph.origin(p);
            } else {
                let p = parent[y.0].expect("non-root has a parent");
                down.push(p);
                y = graph.origin(p);
            }
        }
        down.reverse();
        let mut arcs = vec![a];
        arcs.extend(up);
        arcs.extend(down);
        let parity = if arcs.len() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        cycles.push(FundamentalCycle {
            arcs,
            non_tree_arc: a,
            parity,
        });
    }
    let odd = (0..cycles.len())
        .filter(|&i| cycles[i].parity == Parity::Odd)
        .collect();
    let even = (0..cycles.len())
        .filter(|&i| cycles[i].parity == Parity::Even)
        .collect();
    CycleBasis {
        tree_arcs,
        cycles,
        odd,
        even,
    }
}

/// Two-colouring by BFS, ignoring self-loops. `None` when an odd cycle exists.
pub fn two_coloring(graph: &SymmetricDigraph) -> Option<Vec<bool>> {
    let n = graph.vertex_count();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([VertexId(start)]);
        while let Some(v) = queue.pop_front() {
            let cv = color[v.0].expect("coloured when queued");
            for &a in graph.outgoing(v) {
                if graph.is_loop(a) {
                    continue;
                }
                let w = graph.terminus(a);
                match color[w.0] {
                    None => {
                        color[w.0] = Some(!cv);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cv => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

pub fn is_bipartite(graph: &SymmetricDigraph) -> bool {
    two_coloring(graph).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    /// No self-loops, bipartite.
    A,
    /// No self-loops, not bipartite.
    B,
    /// Self-loops, bipartite once the loops are removed.
    C,
    /// Self-loops, not bipartite once the loops are removed.
    D,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::A => "A",
            CaseLabel::B => "B",
            CaseLabel::C => "C",
            CaseLabel::D => "D",
        };
        f.write_str(s)
    }
}

pub fn classify_case(g0: &InternalGraph) -> CaseLabel {
    classify_graph(g0.graph())
}

pub fn classify_graph(graph: &SymmetricDigraph) -> CaseLabel {
    let has_loops = graph.arcs().any(|a| graph.is_loop(a));
    match (has_loops, is_bipartite(graph)) {
        (false, true) => CaseLabel::A,
        (false, false) => CaseLabel::B,
        (true, true) => CaseLabel::C,
        (true, false) => CaseLabel::D,
    }
}

/// Shortest path (non-loop arcs) from the nearest vertex of `sources` to the nearest vertex
/// satisfying `is_target`. Sources are seeded in ascending id order and neighbours are
/// visited in arc-id order, so ties break lexicographically. Empty if a source is a target.
pub fn shortest_path(
    graph: &SymmetricDigraph,
    sources: &[VertexId],
    is_target: impl Fn(VertexId) -> bool,
) -> Option<Vec<ArcId>> {
    let mut seeds = sources.to_vec();
    seeds.sort();
    seeds.dedup();
    if seeds.iter().any(|&s| is_target(s)) {
        return Some(Vec::new());
    }
    let mut via: Vec<Option<ArcId>> = vec![None; graph.vertex_count()];
    let mut seen = vec![false; graph.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in &seeds {
        seen[s.0] = true;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &a in graph.outgoing(v) {
            if graph.is_loop(a) {
                continue;
            }
            let w = graph.terminus(a);
            if seen[w.0] {
                continue;
            }
            seen[w.0] = true;
            via[w.0] = Some(a);
            if is_target(w) {
                let mut path = Vec::new();
                let mut x = w;
                while let Some(b) = via[x.0] {
                    path.push(b);
                    x = graph.origin(b);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SymmetricDigraph;

    fn chained(graph: &SymmetricDigraph, arcs: &[ArcId]) -> bool {
        (0..arcs.len()).all(|j| graph.terminus(arcs[j]) == graph.origin(arcs[(j + 1) % arcs.len()]))
    }

    #[test]
    fn square_has_one_even_cycle() {
        let g = SymmetricDigraph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[0, 2]).unwrap();
        let basis = cycle_basis_of(&g);
        assert_eq!(basis.len(), 1);
        let c = &basis.cycles[0];
        assert_eq!(c.parity, Parity::Even);
        // non-tree edge {2,3}, then back through 3 -> 0 -> 1 -> 2
        assert_eq!(c.arcs, vec![ArcId(4), ArcId(6), ArcId(0), ArcId(2)]);
        assert!(chained(&g, &c.arcs));
        assert_eq!(classify_graph(&g), CaseLabel::C);
    }

    #[test]
    fn tree_has_no_cycles() {
        let g = SymmetricDigraph::build(4, &[(0, 1), (1, 2), (1, 3)], &[]).unwrap();
        assert!(cycle_basis_of(&g).is_empty());
        assert_eq!(classify_graph(&g), CaseLabel::A);
    }

    #[test]
    fn complete_graph_k4() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let g = SymmetricDigraph::build(4, &edges, &[]).unwrap();
        let basis = cycle_basis_of(&g);
        assert_eq!(basis.len(), 3);
        assert_eq!(basis.odd.len(), 3);
        for c in &basis.cycles {
            assert_eq!(c.len(), 3);
            assert!(chained(&g, &c.arcs));
        }
        assert_eq!(classify_graph(&g), CaseLabel::B);
    }

    #[test]
    fn triangle_with_loop_is_case_d() {
        let g = SymmetricDigraph::build(3, &[(0, 1), (1, 2), (2, 0)], &[1]).unwrap();
        assert_eq!(classify_graph(&g), CaseLabel::D);
    }

    #[test]
    fn even_cycle_is_case_a() {
        let g = SymmetricDigraph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[]).unwrap();
        assert_eq!(classify_graph(&g), CaseLabel::A);
    }

    #[test]
    fn shortest_path_prefers_low_arc_ids() {
        let g = SymmetricDigraph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[]).unwrap();
        let p = shortest_path(&g, &[VertexId(0)], |v| v == VertexId(2)).unwrap();
        assert_eq!(p, vec![ArcId(0), ArcId(2)]);
        let empty = shortest_path(&g, &[VertexId(0)], |v| v == VertexId(0)).unwrap();
        assert!(empty.is_empty());
    }
}
