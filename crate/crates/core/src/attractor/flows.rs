//! Flow vectors: `ξ^(+)` on fundamental cycles (eigenvalue +1) and alternating-sign walks
//! `ξ^(-)`, `η` (eigenvalue -1).

use serde::Serialize;

use crate::cycles::{shortest_path, CaseLabel, CycleBasis, FundamentalCycle, Parity};
use crate::error::{Error, Result};
use crate::graph::{ArcId, InternalGraph, SymmetricDigraph, VertexId};
use crate::linalg::{c, CVector, ONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowKind {
    /// Antisymmetric under the flip.
    Plus,
    /// Symmetric under the flip.
    Minus,
}

/// Loop or odd fundamental cycle used to absorb or cancel the sign defect of an odd walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Loop(ArcId),
    OddCycle(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowSource {
    Cycle(usize),
    Walk(Vec<ArcId>),
    Eta { x: Anchor, y: Anchor, walk: Vec<ArcId> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowVector {
    pub carrier: CVector,
    pub kind: FlowKind,
    pub source: FlowSource,
}

/// `ξ_c^(+) = (I - S) ∂_2 δ_c`: +1 on the cycle arcs, -1 on their inverses.
pub fn xi_plus(g0: &InternalGraph, cycle: &FundamentalCycle, index: usize) -> FlowVector {
    let graph = g0.graph();
    let mut v = CVector::zeros(graph.arc_count());
    for &a in &cycle.arcs {
        v[a.0] += ONE;
        v[graph.inverse(a).0] -= ONE;
    }
    FlowVector {
        carrier: v,
        kind: FlowKind::Plus,
        source: FlowSource::Cycle(index),
    }
}

fn check_chained(graph: &SymmetricDigraph, walk: &[ArcId]) -> Result<()> {
    for (j, pair) in walk.windows(2).enumerate() {
        if graph.terminus(pair[0]) != graph.origin(pair[1]) {
            return Err(Error::NotChained(j + 1));
        }
    }
    if let Some(a) = walk.iter().find(|a| a.0 >= graph.arc_count()) {
        return Err(Error::DomainMismatch {
            expected: graph.arc_count(),
            found: a.0 + 1,
        });
    }
    Ok(())
}

/// Alternating signs `(-1)^j` along the walk, written on both orientations of each edge
/// (once on a loop); repeated traversals add up.
pub fn xi_minus_values(graph: &SymmetricDigraph, walk: &[ArcId]) -> Result<CVector> {
    check_chained(graph, walk)?;
    let mut v = CVector::zeros(graph.arc_count());
    for (j, &a) in walk.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        v[a.0] += c(sign, 0.0);
        let b = graph.inverse(a);
        if b != a {
            v[b.0] += c(sign, 0.0);
        }
    }
    Ok(v)
}

pub fn xi_minus(g0: &InternalGraph, walk: &[ArcId]) -> Result<FlowVector> {
    Ok(FlowVector {
        carrier: xi_minus_values(g0.graph(), walk)?,
        kind: FlowKind::Minus,
        source: FlowSource::Walk(walk.to_vec()),
    })
}

fn reversed_path(graph: &SymmetricDigraph, path: &[ArcId]) -> Vec<ArcId> {
    path.iter().rev().map(|&a| graph.inverse(a)).collect()
}

/// Closed walk from `o(loop)` out to `cycle` and back, entering and leaving through the loop.
fn loop_cycle_walk(graph: &SymmetricDigraph, loop_arc: ArcId, cycle: &FundamentalCycle) -> Vec<ArcId> {
    let start = graph.origin(loop_arc);
    let path = shortest_path(graph, &[start], |v| cycle.contains_vertex(graph, v))
        .expect("internal graph is connected");
    let junction = path.last().map_or(start, |&a| graph.terminus(a));
    let mut walk = vec![loop_arc];
    walk.extend(&path);
    walk.extend(cycle.rotated_to(graph, junction).expect("junction lies on the cycle"));
    walk.extend(reversed_path(graph, &path));
    walk.push(loop_arc);
    walk
}

/// The signed walk behind `η_{x,y}`.
pub fn eta_walk(g0: &InternalGraph, basis: &CycleBasis, x: Anchor, y: Anchor) -> Result<Vec<ArcId>> {
    let graph = g0.graph();
    if x == y {
        return Err(Error::InadmissibleAnchor("anchors must differ".into()));
    }
    let odd_cycle = |k: usize| -> Result<&FundamentalCycle> {
        let cycle = basis
            .cycles
            .get(k)
            .ok_or_else(|| Error::InadmissibleAnchor(format!("no fundamental cycle {k}")))?;
        if cycle.parity != Parity::Odd {
            return Err(Error::InadmissibleAnchor(format!("cycle {k} has even length")));
        }
        Ok(cycle)
    };
    let self_loop = |a: ArcId| -> Result<ArcId> {
        if a.0 < graph.arc_count() && graph.is_loop(a) {
            Ok(a)
        } else {
            Err(Error::InadmissibleAnchor(format!("{a} is not a self-loop")))
        }
    };
    let walk = match (x, y) {
        (Anchor::OddCycle(i), Anchor::OddCycle(j)) => {
            let (first, second) = (odd_cycle(i)?, odd_cycle(j)?);
            let second_vertices = second.vertices(graph);
            let shared = first
                .vertices(graph)
                .into_iter()
                .filter(|v| second_vertices.contains(v))
                .min();
            match shared {
                Some(u0) => {
                    let mut walk = first.rotated_to(graph, u0).expect("shared vertex");
                    walk.extend(second.rotated_to(graph, u0).expect("shared vertex"));
                    walk
                }
                None => {
                    let path = shortest_path(graph, &first.vertices(graph), |v| {
                        second.contains_vertex(graph, v)
                    })
                    .expect("internal graph is connected");
                    let u0 = graph.origin(path[0]);
                    let w = graph.terminus(*path.last().expect("disjoint cycles"));
                    let mut walk = first.rotated_to(graph, u0).expect("path starts on the cycle");
                    walk.extend(&path);
                    walk.extend(second.rotated_to(graph, w).expect("path ends on the cycle"));
                    walk.extend(reversed_path(graph, &path));
                    walk
                }
            }
        }
        (Anchor::Loop(a), Anchor::Loop(b)) => {
            let (a, b) = (self_loop(a)?, self_loop(b)?);
            let target = graph.origin(b);
            let path = shortest_path(graph, &[graph.origin(a)], |v| v == target)
                .expect("internal graph is connected");
            let mut walk = vec![a];
            walk.extend(path);
            walk.push(b);
            walk
        }
        (Anchor::Loop(a), Anchor::OddCycle(k)) | (Anchor::OddCycle(k), Anchor::Loop(a)) => {
            loop_cycle_walk(graph, self_loop(a)?, odd_cycle(k)?)
        }
    };
    Ok(walk)
}

/// `η_{x,y} = ξ_q^(-)` for the walk joining the two anchors.
pub fn eta(g0: &InternalGraph, basis: &CycleBasis, x: Anchor, y: Anchor) -> Result<FlowVector> {
    let walk = eta_walk(g0, basis, x, y)?;
    Ok(FlowVector {
        carrier: xi_minus_values(g0.graph(), &walk)?,
        kind: FlowKind::Minus,
        source: FlowSource::Eta { x, y, walk },
    })
}

/// `{ξ_c^(+) : c ∈ Γ}`.
pub fn ker_one_minus_e_basis(g0: &InternalGraph, basis: &CycleBasis) -> Vec<FlowVector> {
    basis
        .cycles
        .iter()
        .enumerate()
        .map(|(k, cycle)| xi_plus(g0, cycle, k))
        .collect()
}

fn xi_minus_of_cycle(g0: &InternalGraph, basis: &CycleBasis, k: usize) -> FlowVector {
    FlowVector {
        carrier: xi_minus_values(g0.graph(), &basis.cycles[k].arcs).expect("cycles are chained"),
        kind: FlowKind::Minus,
        source: FlowSource::Cycle(k),
    }
}

/// Spanning set of `ker(1 + E)` for the four cases; anchors are the least-index odd cycle
/// and the least-id loop.
pub fn ker_one_plus_e_basis(g0: &InternalGraph, basis: &CycleBasis, case: CaseLabel) -> Vec<FlowVector> {
    let graph = g0.graph();
    let loops = graph.loops();
    let mut out = Vec::new();
    match case {
        CaseLabel::A | CaseLabel::C => {
            out.extend((0..basis.len()).map(|k| xi_minus_of_cycle(g0, basis, k)));
        }
        CaseLabel::B | CaseLabel::D => {
            out.extend(basis.even.iter().map(|&k| xi_minus_of_cycle(g0, basis, k)));
        }
    }
    let etas: Vec<(Anchor, Anchor)> = match case {
        CaseLabel::A => Vec::new(),
        CaseLabel::B => {
            let anchor = Anchor::OddCycle(basis.odd[0]);
            basis.odd[1..].iter().map(|&k| (anchor, Anchor::OddCycle(k))).collect()
        }
        CaseLabel::C => {
            let anchor = Anchor::Loop(loops[0]);
            loops[1..].iter().map(|&a| (anchor, Anchor::Loop(a))).collect()
        }
        CaseLabel::D => {
            let anchor = Anchor::Loop(loops[0]);
            basis
                .odd
                .iter()
                .map(|&k| (anchor, Anchor::OddCycle(k)))
                .chain(loops[1..].iter().map(|&a| (anchor, Anchor::Loop(a))))
                .collect()
        }
    };
    for (x, y) in etas {
        out.push(eta(g0, basis, x, y).expect("anchors chosen from the graph's own case"));
    }
    out
}

/// Vertex where an odd cycle's alternating signing is frustrated.
pub fn frustrated_vertex(graph: &SymmetricDigraph, walk: &[ArcId]) -> Option<VertexId> {
    walk.first().map(|&a| graph.origin(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{classify_case, fundamental_cycle_basis};
    use crate::format::GraphSpec;
    use crate::linalg::real_vector;
    use crate::operators::{apply_d1, build_e};

    fn square() -> InternalGraph {
        GraphSpec {
            vertices: 6,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (3, 5)],
            loops: vec![0, 2],
            sinks: vec![4, 5],
        }
        .internal()
        .unwrap()
    }

    // internal arcs of the square: a1 = 0, ā1 = 1, a2 = 2, ā2 = 3, a3 = 4, ā3 = 5,
    // a4 = 6, ā4 = 7, b1 = 8, b2 = 9

    #[test]
    fn xi_plus_of_square() {
        let g0 = square();
        let basis = fundamental_cycle_basis(&g0);
        let xi = xi_plus(&g0, &basis.cycles[0], 0);
        let expected = real_vector(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 0.0, 0.0]);
        assert_eq!(xi.carrier, expected);
        let e = build_e(&g0);
        assert!((&e * &xi.carrier - &xi.carrier).norm() < 1e-12);
        assert_eq!(apply_d1(&g0, &xi.carrier).unwrap().norm(), 0.0);
    }

    #[test]
    fn xi_minus_of_square() {
        let g0 = square();
        let xi = xi_minus(&g0, &[ArcId(0), ArcId(2), ArcId(4), ArcId(6)]).unwrap();
        let expected = real_vector(&[1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 0.0, 0.0]);
        assert_eq!(xi.carrier, expected);
        assert_eq!(apply_d1(&g0, &xi.carrier).unwrap().norm(), 0.0);
    }

    #[test]
    fn xi_minus_rejects_broken_walk() {
        let g0 = square();
        assert_eq!(
            xi_minus(&g0, &[ArcId(0), ArcId(4)]).unwrap_err(),
            Error::NotChained(1)
        );
    }

    #[test]
    fn odd_cycle_frustration() {
        let g0 = GraphSpec {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 0), (2, 3)],
            loops: vec![],
            sinks: vec![3],
        }
        .internal()
        .unwrap();
        let basis = fundamental_cycle_basis(&g0);
        let cycle = &basis.cycles[0];
        let xi = xi_minus_values(g0.graph(), &cycle.arcs).unwrap();
        let d = apply_d1(&g0, &xi).unwrap();
        let u = frustrated_vertex(g0.graph(), &cycle.arcs).unwrap();
        for v in g0.graph().vertices() {
            let expected = if v == u {
                2.0 / (g0.ambient_degree(v) as f64).sqrt()
            } else {
                0.0
            };
            assert!((d[v.0] - c(expected, 0.0)).norm() < 1e-14, "vertex {v}");
        }
    }

    #[test]
    fn eta_between_loops_of_square() {
        let g0 = square();
        let basis = fundamental_cycle_basis(&g0);
        let eta = eta(&g0, &basis, Anchor::Loop(ArcId(8)), Anchor::Loop(ArcId(9))).unwrap();
        let expected = real_vector(&[-1.0, -1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0]);
        assert_eq!(eta.carrier, expected);
        let e = build_e(&g0);
        assert!((&e * &eta.carrier + &eta.carrier).norm() < 1e-12);
    }

    #[test]
    fn loop_on_odd_cycle_gets_weight_two() {
        let g0 = GraphSpec {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 0), (2, 3)],
            loops: vec![1],
            sinks: vec![3],
        }
        .internal()
        .unwrap();
        let basis = fundamental_cycle_basis(&g0);
        assert_eq!(classify_case(&g0), CaseLabel::D);
        let l = g0.graph().loops()[0];
        let eta = eta(&g0, &basis, Anchor::Loop(l), Anchor::OddCycle(0)).unwrap();
        assert_eq!(eta.carrier[l.0], c(2.0, 0.0));
        assert!(apply_d1(&g0, &eta.carrier).unwrap().norm() < 1e-14);
        let e = build_e(&g0);
        assert!((&e * &eta.carrier + &eta.carrier).norm() < 1e-12);
    }

    #[test]
    fn inadmissible_anchors() {
        let g0 = square();
        let basis = fundamental_cycle_basis(&g0);
        assert!(matches!(
            eta(&g0, &basis, Anchor::OddCycle(0), Anchor::Loop(ArcId(8))),
            Err(Error::InadmissibleAnchor(_))
        ));
        assert!(matches!(
            eta(&g0, &basis, Anchor::Loop(ArcId(0)), Anchor::Loop(ArcId(8))),
            Err(Error::InadmissibleAnchor(_))
        ));
        assert!(matches!(
            eta(&g0, &basis, Anchor::Loop(ArcId(8)), Anchor::Loop(ArcId(8))),
            Err(Error::InadmissibleAnchor(_))
        ));
    }

    #[test]
    fn case_bases_on_small_graphs() {
        let square_basis = fundamental_cycle_basis(&square());
        assert_eq!(ker_one_minus_e_basis(&square(), &square_basis).len(), 1);
        assert_eq!(ker_one_plus_e_basis(&square(), &square_basis, CaseLabel::C).len(), 2);

        let triangle = GraphSpec {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 0), (2, 3)],
            loops: vec![],
            sinks: vec![3],
        }
        .internal()
        .unwrap();
        let basis = fundamental_cycle_basis(&triangle);
        assert!(ker_one_plus_e_basis(&triangle, &basis, CaseLabel::B).is_empty());

        let tree = GraphSpec {
            vertices: 3,
            edges: vec![(0, 1), (1, 2)],
            loops: vec![],
            sinks: vec![2],
        }
        .internal()
        .unwrap();
        assert!(ker_one_minus_e_basis(&tree, &fundamental_cycle_basis(&tree)).is_empty());
    }
}
