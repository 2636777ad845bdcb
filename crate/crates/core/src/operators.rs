//! The Grover evolution and the operators built around it: flip `S`, the weighted boundary
//! `d_1`, the cycle boundary `∂_2`, the truncated evolution `E` and the Dirichlet-cut
//! operator `T`.

use nalgebra::DMatrix;

use crate::cycles::CycleBasis;
use crate::error::{Error, Result};
use crate::graph::{ArcId, InternalGraph, SymmetricDigraph, VertexId};
use crate::linalg::{c, CMatrix, CVector, ONE, ZERO};

fn check_len(expected: usize, v: &CVector) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DomainMismatch {
            expected,
            found: v.len(),
        })
    }
}

/// `(U psi)(a) = -psi(ā) + 2/deg(o(a)) * sum_{t(b) = o(a)} psi(b)`.
pub fn apply_grover(graph: &SymmetricDigraph, psi: &CVector) -> Result<CVector> {
    check_len(graph.arc_count(), psi)?;
    let inflow: Vec<_> = graph
        .vertices()
        .map(|v| {
            let s: crate::linalg::C64 = graph.incoming(v).iter().map(|b| psi[b.0]).sum();
            s * (2.0 / graph.degree(v) as f64)
        })
        .collect();
    Ok(CVector::from_iterator(
        graph.arc_count(),
        graph
            .arcs()
            .map(|a| inflow[graph.origin(a).0] - psi[graph.inverse(a).0]),
    ))
}

pub fn grover_matrix(graph: &SymmetricDigraph) -> CMatrix {
    let n = graph.arc_count();
    let mut u = CMatrix::zeros(n, n);
    for a in graph.arcs() {
        let v = graph.origin(a);
        let w = 2.0 / graph.degree(v) as f64;
        for &b in graph.incoming(v) {
            u[(a.0, b.0)] += c(w, 0.0);
        }
        u[(a.0, graph.inverse(a).0)] -= ONE;
    }
    u
}

/// `(S psi)(a) = psi(ā)`; loops are fixed.
pub fn apply_flip(graph: &SymmetricDigraph, psi: &CVector) -> Result<CVector> {
    check_len(graph.arc_count(), psi)?;
    Ok(CVector::from_iterator(
        graph.arc_count(),
        graph.arcs().map(|a| psi[graph.inverse(a).0]),
    ))
}

pub fn flip_matrix(graph: &SymmetricDigraph) -> CMatrix {
    let n = graph.arc_count();
    let mut s = CMatrix::zeros(n, n);
    for a in graph.arcs() {
        s[(a.0, graph.inverse(a).0)] = ONE;
    }
    s
}

/// `(d_1 psi)(v) = d̃(v)^{-1/2} sum_{t(a) = v} psi(a)` with the ambient degree `d̃`.
pub fn apply_d1(g0: &InternalGraph, psi: &CVector) -> Result<CVector> {
    let graph = g0.graph();
    check_len(graph.arc_count(), psi)?;
    Ok(CVector::from_iterator(
        graph.vertex_count(),
        graph.vertices().map(|v| {
            let s: crate::linalg::C64 = graph.incoming(v).iter().map(|a| psi[a.0]).sum();
            s / (g0.ambient_degree(v) as f64).sqrt()
        }),
    ))
}

/// True adjoint of [`apply_d1`]: `(d_1^* f)(a) = f(t(a)) / sqrt(d̃(t(a)))`.
pub fn apply_d1_adjoint(g0: &InternalGraph, f: &CVector) -> Result<CVector> {
    let graph = g0.graph();
    check_len(graph.vertex_count(), f)?;
    Ok(CVector::from_iterator(
        graph.arc_count(),
        graph.arcs().map(|a| {
            let t = graph.terminus(a);
            f[t.0] / (g0.ambient_degree(t) as f64).sqrt()
        }),
    ))
}

pub fn d1_matrix(g0: &InternalGraph) -> CMatrix {
    let graph = g0.graph();
    let mut d = CMatrix::zeros(graph.vertex_count(), graph.arc_count());
    for a in graph.arcs() {
        let t = graph.terminus(a);
        d[(t.0, a.0)] = c(1.0 / (g0.ambient_degree(t) as f64).sqrt(), 0.0);
    }
    d
}

/// `(∂_2 Ψ)(a) = sum over cycles c containing a of Ψ(c)`.
pub fn apply_boundary2(g0: &InternalGraph, basis: &CycleBasis, coeffs: &CVector) -> Result<CVector> {
    check_len(basis.len(), coeffs)?;
    let mut out = CVector::zeros(g0.arc_count());
    for (cycle, &k) in basis.cycles.iter().zip(coeffs.iter()) {
        for a in &cycle.arcs {
            out[a.0] += k;
        }
    }
    Ok(out)
}

/// `(∂_2^* psi)(c) = sum_{a in c} psi(a)`.
pub fn apply_boundary2_adjoint(g0: &InternalGraph, basis: &CycleBasis, psi: &CVector) -> Result<CVector> {
    check_len(g0.arc_count(), psi)?;
    Ok(CVector::from_iterator(
        basis.len(),
        basis
            .cycles
            .iter()
            .map(|cycle| cycle.arcs.iter().map(|a| psi[a.0]).sum()),
    ))
}

pub fn boundary2_matrix(g0: &InternalGraph, basis: &CycleBasis) -> CMatrix {
    let mut m = CMatrix::zeros(g0.arc_count(), basis.len());
    for (j, cycle) in basis.cycles.iter().enumerate() {
        for a in &cycle.arcs {
            m[(a.0, j)] += ONE;
        }
    }
    m
}

/// `E = χ_S U_G χ_S^*`: the evolution on `A_0` with coin weights from ambient degrees.
pub fn build_e(g0: &InternalGraph) -> CMatrix {
    let graph = g0.graph();
    let n = graph.arc_count();
    let mut e = CMatrix::zeros(n, n);
    for a in graph.arcs() {
        let v = graph.origin(a);
        let w = 2.0 / g0.ambient_degree(v) as f64;
        for &b in graph.incoming(v) {
            e[(a.0, b.0)] += c(w, 0.0);
        }
        e[(a.0, graph.inverse(a).0)] -= ONE;
    }
    e
}

/// Applies `E` without forming the matrix.
pub fn apply_e(g0: &InternalGraph, psi: &CVector) -> Result<CVector> {
    let graph = g0.graph();
    check_len(graph.arc_count(), psi)?;
    let inflow: Vec<_> = graph
        .vertices()
        .map(|v| {
            let s: crate::linalg::C64 = graph.incoming(v).iter().map(|b| psi[b.0]).sum();
            s * (2.0 / g0.ambient_degree(v) as f64)
        })
        .collect();
    Ok(CVector::from_iterator(
        graph.arc_count(),
        graph
            .arcs()
            .map(|a| inflow[graph.origin(a).0] - psi[graph.inverse(a).0]),
    ))
}

/// `T = d_1 S d_1^*`: `T[u, v] = #(arcs v -> u in A_0) / sqrt(d̃(u) d̃(v))`, real symmetric.
pub fn build_t(g0: &InternalGraph) -> DMatrix<f64> {
    let graph = g0.graph();
    let n = graph.vertex_count();
    let mut t = DMatrix::zeros(n, n);
    for a in graph.arcs() {
        let (u, v) = (graph.terminus(a), graph.origin(a));
        t[(u.0, v.0)] += 1.0 / ((g0.ambient_degree(u) * g0.ambient_degree(v)) as f64).sqrt();
    }
    t
}

/// Dirichlet-cut transition operator `P' = D^{-1/2} T D^{1/2}`: `P'[u, v] = #(arcs) / d̃(u)`.
pub fn dirichlet_transition(g0: &InternalGraph) -> DMatrix<f64> {
    let t = build_t(g0);
    let n = t.nrows();
    DMatrix::from_fn(n, n, |u, v| {
        let du = g0.ambient_degree(VertexId(u)) as f64;
        let dv = g0.ambient_degree(VertexId(v)) as f64;
        t[(u, v)] * (dv / du).sqrt()
    })
}

/// `max_c || d_1 (I - S) ∂_2 δ_c ||`.
pub fn check_chain_condition(g0: &InternalGraph, basis: &CycleBasis) -> f64 {
    let graph = g0.graph();
    (0..basis.len())
        .map(|j| {
            let mut delta = CVector::zeros(basis.len());
            delta[j] = ONE;
            let chain = apply_boundary2(g0, basis, &delta).expect("cycle-indexed");
            let flipped = apply_flip(graph, &chain).expect("arc-indexed");
            apply_d1(g0, &(chain - flipped)).expect("arc-indexed").norm()
        })
        .fold(0.0, f64::max)
}

/// Basis vector on an arc.
pub fn delta(len: usize, a: ArcId) -> CVector {
    let mut v = CVector::from_element(len, ZERO);
    v[a.0] = ONE;
    v
}
