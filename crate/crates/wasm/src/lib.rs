//! Browser bindings for the demo page in `www/`. Every export takes a graph description in the
//! text or JSON file format and returns a JSON string.

use grover_sink::attractor::{attractor_basis, survival_spectral, SurvivalBreakdown};
use grover_sink::dynamics::survival_sequence;
use grover_sink::operators::{build_e, delta};
use grover_sink::oracle::{numeric_spectrum, OracleConfig, SpectrumJson};
use grover_sink::report::pair;
use grover_sink::{ArcId, CaseLabel, GraphSpec, InternalGraph};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Arc {
    id: usize,
    origin: usize,
    terminus: usize,
    is_loop: bool,
}

#[derive(Serialize)]
struct Curve {
    arc: usize,
    gammas: Vec<f64>,
    /// Limit predicted by the attractor projector.
    gamma: f64,
    breakdown: SurvivalBreakdown,
}

#[derive(Serialize)]
struct Block {
    kind: grover_sink::attractor::BlockKind,
    eigenvalue: [f64; 2],
    dim: usize,
}

#[derive(Serialize)]
struct Summary {
    case: CaseLabel,
    vertices: usize,
    boundary: Vec<usize>,
    arcs: Vec<Arc>,
    dim: usize,
    blocks: Vec<Block>,
    /// `γ(δ_a)` for every internal arc.
    delta_survival: Vec<f64>,
}

fn internal(graph: &str) -> Result<InternalGraph, String> {
    GraphSpec::parse(graph)
        .and_then(|s| s.internal())
        .map_err(|e| e.to_string())
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn survival_curve_json(graph: &str, arc: usize, steps: usize) -> Result<String, String> {
    let g0 = internal(graph)?;
    if arc >= g0.arc_count() {
        return Err(format!("arc {arc} out of range ({} internal arcs)", g0.arc_count()));
    }
    let phi0 = delta(g0.arc_count(), ArcId(arc));
    let run = survival_sequence(&g0, &phi0, steps).map_err(|e| e.to_string())?;
    let basis = attractor_basis(&g0).map_err(|e| e.to_string())?;
    let s = survival_spectral(&basis, &phi0).map_err(|e| e.to_string())?;
    to_json(&Curve {
        arc,
        gammas: run.gammas,
        gamma: s.gamma,
        breakdown: s.breakdown,
    })
}

pub fn spectrum_json(graph: &str) -> Result<String, String> {
    let g0 = internal(graph)?;
    let spectrum = numeric_spectrum(&build_e(&g0), &OracleConfig::default()).map_err(|e| e.to_string())?;
    let doc: SpectrumJson = spectrum.to_json();
    to_json(&doc)
}

pub fn attractor_summary_json(graph: &str) -> Result<String, String> {
    let g0 = internal(graph)?;
    let basis = attractor_basis(&g0).map_err(|e| e.to_string())?;
    let g = g0.graph();
    let delta_survival = g
        .arcs()
        .map(|a| {
            survival_spectral(&basis, &delta(g0.arc_count(), a))
                .map(|s| s.gamma)
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    to_json(&Summary {
        case: basis.case,
        vertices: g0.vertex_count(),
        boundary: g0.boundary().iter().map(|&v| g0.ambient_vertex(v).0).collect(),
        arcs: g
            .arcs()
            .map(|a| Arc {
                id: a.0,
                origin: g0.ambient_vertex(g.origin(a)).0,
                terminus: g0.ambient_vertex(g.terminus(a)).0,
                is_loop: g.is_loop(a),
            })
            .collect(),
        dim: basis.dim(),
        blocks: basis
            .blocks
            .iter()
            .map(|b| Block {
                kind: b.kind,
                eigenvalue: pair(b.eigenvalue),
                dim: b.dim(),
            })
            .collect(),
        delta_survival,
    })
}

/// `γ_n` for `n ≤ steps` from `δ_arc`, with the projector limit.
#[wasm_bindgen]
pub fn survival_curve(graph: &str, arc: usize, steps: usize) -> Result<String, JsError> {
    survival_curve_json(graph, arc, steps).map_err(|e| JsError::new(&e))
}

/// Eigenvalues of the truncated evolution.
#[wasm_bindgen]
pub fn spectrum(graph: &str) -> Result<String, JsError> {
    spectrum_json(graph).map_err(|e| JsError::new(&e))
}

/// Case, blocks, arcs and the survival of every delta state.
#[wasm_bindgen]
pub fn attractor_summary(graph: &str) -> Result<String, JsError> {
    attractor_summary_json(graph).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "v 6\ne 0 1\ne 1 2\ne 2 3\ne 3 0\nl 0\nl 2\ne 1 4\ne 3 5\ns 4\ns 5\n";

    #[test]
    fn curve_approaches_projector_limit() {
        let v: serde_json::Value = serde_json::from_str(&survival_curve_json(SQUARE, 8, 300).unwrap()).unwrap();
        let gammas = v["gammas"].as_array().unwrap();
        assert_eq!(gammas.len(), 301);
        assert!((gammas[300].as_f64().unwrap() - 0.5).abs() < 1e-6);
        assert!((v["gamma"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn summary_and_spectrum() {
        let v: serde_json::Value = serde_json::from_str(&attractor_summary_json(SQUARE).unwrap()).unwrap();
        assert_eq!(v["case"], "C");
        assert_eq!(v["dim"], 5);
        assert_eq!(v["boundary"], serde_json::json!([1, 3]));
        assert_eq!(v["delta_survival"].as_array().unwrap().len(), 10);
        let s: serde_json::Value = serde_json::from_str(&spectrum_json(SQUARE).unwrap()).unwrap();
        assert_eq!(s["attractor_dim"], 5);
        assert_eq!(s["eigenvalues"].as_array().unwrap().len(), 10);
    }

    #[test]
    fn errors_are_strings() {
        assert!(survival_curve_json(SQUARE, 10, 5).unwrap_err().contains("out of range"));
        assert!(spectrum_json("v 2\ne 0 5\n").is_err());
    }
}
