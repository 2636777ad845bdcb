//! JSON shapes for exported results. Complex numbers are `[re, im]` pairs and every
//! top-level document carries `"schema": 1`.

use serde::Serialize;

use crate::attractor::{AttractorBasis, BlockKind, DimensionReport, FlowSource, FlowVector, SpectralSurvival};
use crate::cycles::CaseLabel;
use crate::linalg::{CMatrix, CVector, C64};

pub const SCHEMA: u32 = 1;

pub type ComplexPair = [f64; 2];

pub fn pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

pub fn pairs(v: &CVector) -> Vec<ComplexPair> {
    v.iter().copied().map(pair).collect()
}

/// Row-major nested pairs.
pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<ComplexPair>> {
    m.row_iter().map(|row| row.iter().copied().map(pair).collect()).collect()
}

pub fn real_matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowJson {
    pub kind: crate::attractor::FlowKind,
    pub source: FlowSource,
    pub values: Vec<ComplexPair>,
}

impl From<&FlowVector> for FlowJson {
    fn from(v: &FlowVector) -> Self {
        Self {
            kind: v.kind,
            source: v.source.clone(),
            values: pairs(&v.carrier),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftJson {
    pub mu: f64,
    pub theta: f64,
    pub f: Vec<ComplexPair>,
    pub phi_plus: Vec<ComplexPair>,
    pub phi_minus: Vec<ComplexPair>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockJson {
    pub kind: BlockKind,
    pub eigenvalue: ComplexPair,
    pub dim: usize,
    /// Orthonormal basis, one arc-indexed vector per entry.
    pub basis: Vec<Vec<ComplexPair>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttractorJson {
    pub schema: u32,
    pub case: CaseLabel,
    pub arcs: usize,
    pub dim: usize,
    pub k_part: Vec<FlowJson>,
    pub minus_part: Vec<FlowJson>,
    pub t_part: Vec<LiftJson>,
    pub persistent: Vec<(f64, Vec<ComplexPair>)>,
    pub blocks: Vec<BlockJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projector: Option<Vec<Vec<ComplexPair>>>,
}

pub fn attractor_json(basis: &AttractorBasis, with_projector: bool) -> AttractorJson {
    AttractorJson {
        schema: SCHEMA,
        case: basis.case,
        arcs: basis.arc_count(),
        dim: basis.dim(),
        k_part: basis.k_part.iter().map(FlowJson::from).collect(),
        minus_part: basis.minus_part.iter().map(FlowJson::from).collect(),
        t_part: basis
            .t_part
            .iter()
            .map(|p| LiftJson {
                mu: p.mu,
                theta: p.theta,
                f: pairs(&p.f),
                phi_plus: pairs(&p.phi_plus),
                phi_minus: pairs(&p.phi_minus),
            })
            .collect(),
        persistent: basis.persistent.iter().map(|(mu, v)| (*mu, pairs(v))).collect(),
        blocks: basis
            .blocks
            .iter()
            .map(|b| BlockJson {
                kind: b.kind,
                eigenvalue: pair(b.eigenvalue),
                dim: b.dim(),
                basis: b.orthonormal.column_iter().map(|col| col.iter().copied().map(pair).collect()).collect(),
            })
            .collect(),
        projector: with_projector.then(|| matrix_rows(&basis.projector)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalJson {
    pub schema: u32,
    pub case: CaseLabel,
    pub state: String,
    #[serde(flatten)]
    pub survival: SpectralSurvival,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsJson {
    pub schema: u32,
    #[serde(flatten)]
    pub report: DimensionReport,
    pub expected_plus: usize,
    pub expected_minus: usize,
    pub matches: bool,
}

impl From<DimensionReport> for DimsJson {
    fn from(report: DimensionReport) -> Self {
        Self {
            schema: SCHEMA,
            expected_plus: report.expected_plus(),
            expected_minus: report.expected_minus(),
            matches: report.matches(),
            report,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::attractor_basis;
    use crate::format::GraphSpec;

    #[test]
    fn attractor_json_is_deterministic() {
        let g0 = GraphSpec {
            vertices: 6,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (3, 5)],
            loops: vec![0, 2],
            sinks: vec![4, 5],
        }
        .internal()
        .unwrap();
        let a = serde_json::to_string(&attractor_json(&attractor_basis(&g0).unwrap(), true)).unwrap();
        let b = serde_json::to_string(&attractor_json(&attractor_basis(&g0).unwrap(), true)).unwrap();
        assert_eq!(a, b);
        let value: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(value["schema"], 1);
        assert_eq!(value["case"], "C");
        assert_eq!(value["dim"], 5);
        assert_eq!(value["minus_part"][1]["source"]["eta"]["x"]["loop"], 8);
    }

    #[test]
    fn complex_pairs() {
        assert_eq!(pair(C64::new(1.5, -2.0)), [1.5, -2.0]);
    }
}
