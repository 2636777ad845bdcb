//! Stationary state of the walk with semi-infinite tails in place of the sinks.
//!
//! Each arc from a boundary vertex into a sink becomes the attachment point of one tail, so
//! every internal vertex keeps its ambient degree. With inflow `α_i` arriving along tail `i`,
//! the limit is `ψ_∞ = m + j` where `m` is the mean inflow and `j` is the unit-resistance
//! current with `α_i - m` injected at the foot of tail `i`.

use serde::Serialize;

use crate::cycles::fundamental_cycle_basis;
use crate::error::{Error, Result};
use crate::graph::{ArcId, InternalGraph, VertexId};
use crate::linalg::{c, least_squares, CMatrix, CVector, C64, ONE, ZERO};
use crate::operators::apply_e;
use crate::report::{pair, pairs, ComplexPair};

/// Linear-solve residual above which the Kirchhoff system counts as inconsistent.
const SOLVE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct TailState {
    pub alphas: Vec<C64>,
    pub mean: C64,
    /// Internal vertex at the foot of each tail.
    pub feet: Vec<VertexId>,
    /// `j(a)` on internal arcs; antisymmetric, zero on loops.
    pub current: CVector,
    /// `ψ_∞` on internal arcs.
    pub psi_inf: CVector,
    /// `ψ_∞` on the arc leaving into each tail, `2m - α_i`.
    pub outgoing: Vec<C64>,
    /// Constant inflow `ρ` into `A_0` from the tails.
    pub inflow: CVector,
    pub residuals: TailResiduals,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct TailResiduals {
    pub solve: f64,
    /// Net current at vertices without a tail.
    pub current_law: f64,
    pub voltage_law: f64,
    pub antisymmetry: f64,
    /// Net current at tail feet once the injections `α_i - m` are added.
    pub boundary: f64,
    /// `||E ψ_∞ + ρ - ψ_∞||` on `A_0`, plus the mismatch on the outgoing tail arcs.
    pub fixed_point: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailStateJson {
    pub schema: u32,
    pub alphas: Vec<ComplexPair>,
    pub mean: ComplexPair,
    pub feet: Vec<VertexId>,
    pub current: Vec<ComplexPair>,
    pub psi_inf: Vec<ComplexPair>,
    pub outgoing: Vec<ComplexPair>,
    pub residuals: TailResiduals,
}

impl TailState {
    pub fn to_json(&self) -> TailStateJson {
        TailStateJson {
            schema: crate::report::SCHEMA,
            alphas: self.alphas.iter().copied().map(pair).collect(),
            mean: pair(self.mean),
            feet: self.feet.clone(),
            current: pairs(&self.current),
            psi_inf: pairs(&self.psi_inf),
            outgoing: self.outgoing.iter().copied().map(pair).collect(),
            residuals: self.residuals,
        }
    }
}

/// Solves for the stationary state; `alphas` has one entry per tail, in the order of
/// [`InternalGraph::sink_arcs`].
pub fn tail_stationary_state(g0: &InternalGraph, alphas: &[C64]) -> Result<TailState> {
    let tails = g0.sink_arcs();
    if tails.is_empty() {
        return Err(Error::InvalidState("graph has no sinks, so no tails".into()));
    }
    if alphas.len() != tails.len() {
        return Err(Error::InflowCount {
            expected: tails.len(),
            found: alphas.len(),
        });
    }
    let graph = g0.graph();
    let mean = alphas.iter().sum::<C64>() / c(alphas.len() as f64, 0.0);
    let feet: Vec<VertexId> = tails.iter().map(|&(v, _)| v).collect();

    // one unknown per non-loop edge, oriented along its forward arc
    let edges: Vec<ArcId> = graph.arcs().filter(|&a| graph.is_forward(a) && !graph.is_loop(a)).collect();
    let mut column = vec![None; graph.arc_count()];
    for (k, &a) in edges.iter().enumerate() {
        column[a.0] = Some((k, ONE));
        column[graph.inverse(a).0] = Some((k, -ONE));
    }
    let cycles = fundamental_cycle_basis(g0);
    let rows = graph.vertex_count() + cycles.len();
    let mut system = CMatrix::zeros(rows, edges.len());
    let mut rhs = CVector::zeros(rows);
    for v in graph.vertices() {
        for &a in graph.incoming(v) {
            if let Some((k, sign)) = column[a.0] {
                system[(v.0, k)] += sign;
            }
        }
    }
    for (&foot, &alpha) in feet.iter().zip(alphas) {
        rhs[foot.0] -= alpha - mean;
    }
    for (i, cycle) in cycles.cycles.iter().enumerate() {
        for &a in &cycle.arcs {
            let (k, sign) = column[a.0].expect("cycles avoid loops");
            system[(graph.vertex_count() + i, k)] += sign;
        }
    }
    let (x, solve) = least_squares(&system, &rhs)?;
    if solve > SOLVE_TOL {
        return Err(Error::InconsistentSystem(solve));
    }

    let current = CVector::from_iterator(
        graph.arc_count(),
        graph.arcs().map(|a| column[a.0].map_or(ZERO, |(k, sign)| x[k] * sign)),
    );
    let psi_inf = current.map(|j| j + mean);
    let outgoing: Vec<C64> = alphas.iter().map(|&a| mean * 2.0 - a).collect();

    let mut at_vertex = vec![ZERO; graph.vertex_count()];
    for (&foot, &alpha) in feet.iter().zip(alphas) {
        at_vertex[foot.0] += alpha;
    }
    let inflow = CVector::from_iterator(
        graph.arc_count(),
        graph.arcs().map(|a| {
            let v = graph.origin(a);
            at_vertex[v.0] * (2.0 / g0.ambient_degree(v) as f64)
        }),
    );

    let residuals = residuals(g0, &cycles, &current, &psi_inf, &inflow, alphas, mean, &feet, solve)?;
    Ok(TailState {
        alphas: alphas.to_vec(),
        mean,
        feet,
        current,
        psi_inf,
        outgoing,
        inflow,
        residuals,
    })
}

#[allow(clippy::too_many_arguments)]
fn residuals(
    g0: &InternalGraph,
    cycles: &crate::cycles::CycleBasis,
    current: &CVector,
    psi_inf: &CVector,
    inflow: &CVector,
    alphas: &[C64],
    mean: C64,
    feet: &[VertexId],
    solve: f64,
) -> Result<TailResiduals> {
    let graph = g0.graph();
    let mut net = vec![ZERO; graph.vertex_count()];
    for a in graph.arcs() {
        net[graph.terminus(a).0] += current[a.0];
    }
    for (&foot, &alpha) in feet.iter().zip(alphas) {
        net[foot.0] += alpha - mean;
    }
    let worst = |at_foot: bool| {
        graph
            .vertices()
            .filter(|v| feet.contains(v) == at_foot)
            .map(|v| net[v.0].norm())
            .fold(0.0, f64::max)
    };
    let current_law = worst(false);
    // j(e_i) = α_i - m is imposed as an injection; at the feet it must balance the internal
    // currents exactly
    let boundary = worst(true);
    let voltage_law = cycles
        .cycles
        .iter()
        .map(|cyc| cyc.arcs.iter().map(|a| current[a.0]).sum::<C64>().norm())
        .fold(0.0, f64::max);
    let antisymmetry = graph
        .arcs()
        .map(|a| (current[a.0] + current[graph.inverse(a).0]).norm())
        .fold(0.0, f64::max);
    let mut fixed_point = (apply_e(g0, psi_inf)? + inflow - psi_inf).norm();
    // outgoing tail arcs: (2/d̃) Σ_in ψ - ψ(e_i) must equal 2m - α_i
    for (&foot, &alpha) in feet.iter().zip(alphas) {
        let into: C64 = graph.incoming(foot).iter().map(|a| psi_inf[a.0]).sum::<C64>()
            + feet
                .iter()
                .zip(alphas)
                .filter(|(f, _)| **f == foot)
                .map(|(_, &b)| b)
                .sum::<C64>();
        let out = into * (2.0 / g0.ambient_degree(foot) as f64) - alpha;
        fixed_point = fixed_point.max((out - (mean * 2.0 - alpha)).norm());
    }
    Ok(TailResiduals {
        solve,
        current_law,
        voltage_law,
        antisymmetry,
        boundary,
        fixed_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::GraphSpec;

    fn path() -> InternalGraph {
        // sinks 0 and 3 at either end of the internal path 1 - 2
        GraphSpec {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 3)],
            loops: vec![],
            sinks: vec![0, 3],
        }
        .internal()
        .unwrap()
    }

    #[test]
    fn equal_inflow_gives_no_current() {
        let g0 = GraphSpec {
            vertices: 6,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (3, 5)],
            loops: vec![0, 2],
            sinks: vec![4, 5],
        }
        .internal()
        .unwrap();
        let alpha = c(0.3, -0.7);
        let state = tail_stationary_state(&g0, &[alpha, alpha]).unwrap();
        assert!(crate::linalg::max_abs(&state.current) < 1e-12);
        assert!(state.psi_inf.iter().all(|z| (z - alpha).norm() < 1e-12));
        assert!(state.residuals.fixed_point < 1e-10);
    }

    #[test]
    fn path_carries_half_unit() {
        let g0 = path();
        let state = tail_stationary_state(&g0, &[ONE, ZERO]).unwrap();
        assert_eq!(state.mean, c(0.5, 0.0));
        // internal arcs: 1 -> 2 is arc 0, 2 -> 1 is arc 1
        assert!((state.current[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((state.current[1] + c(0.5, 0.0)).norm() < 1e-12);
        assert!((state.psi_inf[0] - ONE).norm() < 1e-12);
        assert!(state.psi_inf[1].norm() < 1e-12);
        assert!(state.residuals.fixed_point < 1e-12);
        assert!(state.residuals.current_law < 1e-12);
    }

    #[test]
    fn wrong_inflow_count() {
        assert_eq!(
            tail_stationary_state(&path(), &[ONE]).unwrap_err(),
            Error::InflowCount { expected: 2, found: 1 }
        );
    }

    #[test]
    fn no_tails_without_sinks() {
        let g0 = GraphSpec {
            vertices: 2,
            edges: vec![(0, 1)],
            loops: vec![],
            sinks: vec![],
        }
        .internal()
        .unwrap();
        assert!(matches!(tail_stationary_state(&g0, &[]), Err(Error::InvalidState(_))));
    }
}
