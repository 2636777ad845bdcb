//! The attractor (centered) eigenspace of `E`, built from combinatorial data.
//!
//! Three families of eigenvectors span it:
//!
//! * `ξ_c^(+)` for every fundamental cycle, eigenvalue `+1`;
//! * alternating walks `ξ^(-)` and `η`, eigenvalue `-1`, chosen by the [`CaseLabel`];
//! * lifts `(1 - λ S) d_1^* f` of eigenvectors of `T` vanishing on the boundary,
//!   eigenvalues `e^{±iθ}` with `cos θ = μ`.
//!
//! When no vertex touches a sink, `E` is the full Grover walk and `T` has eigenvalue `1`
//! (and `-1` in the loop-free bipartite case) with an eigenvector that is nowhere zero. Its
//! image `d_1^* f` is then an eigenvector of `E` that none of the families above produce; these
//! are collected as [`BlockKind::Persistent`].

pub mod flows;
pub mod lift;

use serde::Serialize;

use crate::cycles::{classify_case, fundamental_cycle_basis, CaseLabel, CycleBasis};
use crate::error::{Error, Result};
use crate::graph::InternalGraph;
use crate::linalg::{c, gram_schmidt, norm_sqr, projector, CMatrix, CVector, C64};
use crate::operators::{apply_d1_adjoint, build_e};
use crate::oracle::SpectrumReport;

pub use flows::{
    eta, eta_walk, ker_one_minus_e_basis, ker_one_plus_e_basis, xi_minus, xi_plus, Anchor, FlowKind,
    FlowSource, FlowVector,
};
pub use lift::{interior_dirichlet_eigenpairs, interior_eigenspaces, lift, InteriorEigenspace, LiftedEigenpair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// `ξ^(+)` vectors, eigenvalue `+1`.
    Plus,
    /// `ξ^(-)` and `η` vectors, eigenvalue `-1`.
    Minus,
    /// Lifts of interior eigenvectors of `T`.
    Lifted,
    /// `d_1^* f` for `T f = ±f` (only without boundary).
    Persistent,
}

/// One eigenvalue's worth of constructed vectors with an orthonormal basis of their span.
#[derive(Clone, Debug)]
pub struct Block {
    pub kind: BlockKind,
    pub eigenvalue: C64,
    /// Spanning vectors as constructed.
    pub vectors: Vec<CVector>,
    pub orthonormal: CMatrix,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.orthonormal.ncols()
    }

    fn new(kind: BlockKind, eigenvalue: C64, vectors: Vec<CVector>, dim: usize) -> Result<Self> {
        let label = format!("{kind:?} at {:.6}{:+.6}i", eigenvalue.re, eigenvalue.im);
        let orthonormal = gram_schmidt(&vectors, dim, &label)?;
        Ok(Self {
            kind,
            eigenvalue,
            vectors,
            orthonormal,
        })
    }
}

#[derive(Clone, Debug)]
pub struct AttractorBasis {
    pub case: CaseLabel,
    pub cycles: CycleBasis,
    pub k_part: Vec<FlowVector>,
    pub minus_part: Vec<FlowVector>,
    pub t_part: Vec<LiftedEigenpair>,
    /// `(mu, d_1^* f)` with `mu = ±1`.
    pub persistent: Vec<(f64, CVector)>,
    pub blocks: Vec<Block>,
    pub projector: CMatrix,
}

impl AttractorBasis {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    pub fn arc_count(&self) -> usize {
        self.projector.nrows()
    }

    /// Total dimension of the blocks at eigenvalue `target`.
    pub fn dim_at(&self, target: C64) -> usize {
        self.blocks
            .iter()
            .filter(|b| (b.eigenvalue - target).norm() < 1e-9)
            .map(Block::dim)
            .sum()
    }

    pub fn blocks_of(&self, kind: BlockKind) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.kind == kind)
    }
}

/// Builds all blocks and the projector `P_c = Σ Q_b Q_b^*`.
pub fn attractor_basis(g0: &InternalGraph) -> Result<AttractorBasis> {
    let n = g0.arc_count();
    let cycles = fundamental_cycle_basis(g0);
    let case = classify_case(g0);
    let k_part = ker_one_minus_e_basis(g0, &cycles);
    let minus_part = ker_one_plus_e_basis(g0, &cycles, case);

    let mut blocks = Vec::new();
    if !k_part.is_empty() {
        let vectors = k_part.iter().map(|v| v.carrier.clone()).collect();
        blocks.push(Block::new(BlockKind::Plus, c(1.0, 0.0), vectors, n)?);
    }
    if !minus_part.is_empty() {
        let vectors = minus_part.iter().map(|v| v.carrier.clone()).collect();
        blocks.push(Block::new(BlockKind::Minus, c(-1.0, 0.0), vectors, n)?);
    }

    let mut t_part = Vec::new();
    let mut persistent = Vec::new();
    for space in interior_eigenspaces(g0) {
        if space.is_unit() {
            let mu = space.mu.signum();
            let vectors: Vec<CVector> = (0..space.dim())
                .map(|k| apply_d1_adjoint(g0, &space.vector(k)))
                .collect::<Result<_>>()?;
            persistent.extend(vectors.iter().map(|v| (mu, v.clone())));
            blocks.push(Block::new(BlockKind::Persistent, c(mu, 0.0), vectors, n)?);
            continue;
        }
        let pairs: Vec<LiftedEigenpair> = (0..space.dim())
            .map(|k| lift(g0, &space.vector(k), space.mu))
            .collect::<Result<_>>()?;
        let lambda = pairs[0].lambda_plus();
        let plus = pairs.iter().map(|p| p.phi_plus.clone()).collect();
        let minus = pairs.iter().map(|p| p.phi_minus.clone()).collect();
        blocks.push(Block::new(BlockKind::Lifted, lambda, plus, n)?);
        blocks.push(Block::new(BlockKind::Lifted, lambda.conj(), minus, n)?);
        t_part.extend(pairs);
    }

    let mut p = CMatrix::zeros(n, n);
    for b in &blocks {
        p += projector(&b.orthonormal);
    }
    Ok(AttractorBasis {
        case,
        cycles,
        k_part,
        minus_part,
        t_part,
        persistent,
        blocks,
        projector: p,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SurvivalBreakdown {
    pub plus: f64,
    pub minus: f64,
    pub lifted: f64,
    pub persistent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSurvival {
    pub gamma: f64,
    pub breakdown: SurvivalBreakdown,
    /// `||Q_b^* φ_0||²` per block, in block order.
    pub per_block: Vec<f64>,
    pub initial_norm_sqr: f64,
}

/// `γ = ||P_c φ_0||²`, split over the blocks. Not rescaled when `φ_0` is not normalized.
pub fn survival_spectral(basis: &AttractorBasis, phi0: &CVector) -> Result<SpectralSurvival> {
    if phi0.len() != basis.arc_count() {
        return Err(Error::DomainMismatch {
            expected: basis.arc_count(),
            found: phi0.len(),
        });
    }
    let mut breakdown = SurvivalBreakdown::default();
    let mut per_block = Vec::with_capacity(basis.blocks.len());
    for b in &basis.blocks {
        let w = norm_sqr(&(b.orthonormal.adjoint() * phi0));
        per_block.push(w);
        match b.kind {
            BlockKind::Plus => breakdown.plus += w,
            BlockKind::Minus => breakdown.minus += w,
            BlockKind::Lifted => breakdown.lifted += w,
            BlockKind::Persistent => breakdown.persistent += w,
        }
    }
    Ok(SpectralSurvival {
        gamma: per_block.iter().sum(),
        breakdown,
        per_block,
        initial_norm_sqr: norm_sqr(phi0),
    })
}

/// Closed-form eigenvalue multiplicities at `±1` against constructed and numeric counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub case: CaseLabel,
    pub edges: usize,
    pub vertices: usize,
    pub loops: usize,
    pub boundary: usize,
    /// Closed forms for `dim ker(1 - E)` and `dim ker(1 + E)`.
    pub predicted_plus: usize,
    pub predicted_minus: usize,
    /// Extra `±1` eigenvectors present only without boundary.
    pub persistent_plus: usize,
    pub persistent_minus: usize,
    /// Ranks of the constructed blocks.
    pub constructed_plus: usize,
    pub constructed_minus: usize,
    pub numeric_plus_algebraic: usize,
    pub numeric_plus_geometric: usize,
    pub numeric_minus_algebraic: usize,
    pub numeric_minus_geometric: usize,
}

impl DimensionReport {
    pub fn expected_plus(&self) -> usize {
        self.predicted_plus + self.persistent_plus
    }

    pub fn expected_minus(&self) -> usize {
        self.predicted_minus + self.persistent_minus
    }

    pub fn matches(&self) -> bool {
        let plus = self.expected_plus();
        let minus = self.expected_minus();
        [
            self.constructed_plus,
            self.numeric_plus_algebraic,
            self.numeric_plus_geometric,
        ]
        .iter()
        .all(|&d| d == plus)
            && [
                self.constructed_minus,
                self.numeric_minus_algebraic,
                self.numeric_minus_geometric,
            ]
            .iter()
            .all(|&d| d == minus)
    }
}

/// `(dim ker(1 - E), dim ker(1 + E))` from edge, vertex and loop counts.
pub fn predicted_dims(case: CaseLabel, edges: usize, vertices: usize, loops: usize) -> (usize, usize) {
    let betti = edges + 1 - vertices;
    let minus = match case {
        CaseLabel::A => betti,
        CaseLabel::B => betti - 1,
        CaseLabel::C | CaseLabel::D => betti + loops - 1,
    };
    (betti, minus)
}

/// Unit-circle tolerance used when counting eigenvalues at `±1`.
pub const UNIT_COUNT_TOL: f64 = 1e-8;

pub fn dimension_report(g0: &InternalGraph, basis: &AttractorBasis, spectrum: &SpectrumReport) -> DimensionReport {
    let graph = g0.graph();
    let (edges, vertices, loops) = (graph.edge_count(), graph.vertex_count(), graph.loops().len());
    let (predicted_plus, predicted_minus) = predicted_dims(basis.case, edges, vertices, loops);
    let persistent_count = |sign: f64| basis.persistent.iter().filter(|(mu, _)| *mu == sign).count();
    let one = c(1.0, 0.0);
    DimensionReport {
        case: basis.case,
        edges,
        vertices,
        loops,
        boundary: g0.boundary().len(),
        predicted_plus,
        predicted_minus,
        persistent_plus: persistent_count(1.0),
        persistent_minus: persistent_count(-1.0),
        constructed_plus: basis.dim_at(one),
        constructed_minus: basis.dim_at(-one),
        numeric_plus_algebraic: spectrum.count_near(one, UNIT_COUNT_TOL),
        numeric_plus_geometric: spectrum.geometric_near(one, UNIT_COUNT_TOL),
        numeric_minus_algebraic: spectrum.count_near(-one, UNIT_COUNT_TOL),
        numeric_minus_geometric: spectrum.geometric_near(-one, UNIT_COUNT_TOL),
    }
}

/// Residual `max ||E v - λ v||` over every constructed vector, normalized per vector.
pub fn eigen_residual(g0: &InternalGraph, basis: &AttractorBasis) -> f64 {
    let e = build_e(g0);
    basis
        .blocks
        .iter()
        .flat_map(|b| b.vectors.iter().map(move |v| (b.eigenvalue, v)))
        .map(|(lambda, v)| (&e * v - v * lambda).norm() / v.norm())
        .fold(0.0, f64::max)
}
