use std::path::PathBuf;

use grover_sink::attractor::{attractor_basis, survival_spectral};
use grover_sink::dynamics::{survival_sequence, tail_stationary_state};
use grover_sink::linalg::c;
use grover_sink::operators::delta;
use grover_sink::report::{attractor_json, DimsJson};
use grover_sink::verify::{verify_graph, Tolerances, VerifyOptions};
use grover_sink::{ArcId, CaseLabel, GraphSpec};

fn load(name: &str) -> GraphSpec {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "graphs", name].iter().collect();
    GraphSpec::parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

const ALL: [&str; 5] = [
    "square_two_loops.txt",
    "triangle_sink.txt",
    "path_two_sinks.txt",
    "k4_loop.json",
    "tree_two_loops.txt",
];

#[test]
fn every_bundled_graph_verifies() {
    for name in ALL {
        let check = verify_graph(name, &load(name), &Tolerances::default(), &VerifyOptions::default()).unwrap();
        assert!(check.passed(), "{name}: {:?}", check.failures);
    }
}

#[test]
fn text_round_trip() {
    for name in ALL {
        let spec = load(name);
        assert_eq!(GraphSpec::parse(&spec.to_text()).unwrap(), spec);
    }
}

#[test]
fn expected_cases() {
    let case = |name| attractor_basis(&load(name).internal().unwrap()).unwrap().case;
    assert_eq!(case("square_two_loops.txt"), CaseLabel::C);
    assert_eq!(case("triangle_sink.txt"), CaseLabel::B);
    assert_eq!(case("path_two_sinks.txt"), CaseLabel::A);
    assert_eq!(case("k4_loop.json"), CaseLabel::D);
    assert_eq!(case("tree_two_loops.txt"), CaseLabel::C);
}

#[test]
fn worked_example_from_file() {
    let g0 = load("square_two_loops.txt").internal().unwrap();
    let phi0 = delta(g0.arc_count(), ArcId(8));
    let basis = attractor_basis(&g0).unwrap();
    assert!((survival_spectral(&basis, &phi0).unwrap().gamma - 0.5).abs() < 1e-12);
    let run = survival_sequence(&g0, &phi0, 200).unwrap();
    let csv = run.to_csv();
    assert!(csv.starts_with("n,gamma_n,tau_n\n0,"));
    assert_eq!(csv.lines().count(), 202);
    let json = serde_json::to_value(attractor_json(&basis, false)).unwrap();
    assert_eq!(json["dim"], 5);
    assert!(json.get("projector").is_none());
}

#[test]
fn path_has_empty_attractor() {
    let g0 = load("path_two_sinks.txt").internal().unwrap();
    assert_eq!(attractor_basis(&g0).unwrap().dim(), 0);
    let run = survival_sequence(&g0, &delta(g0.arc_count(), ArcId(0)), 60).unwrap();
    assert!(run.final_gamma() < 1e-12);
}

#[test]
fn tree_with_two_loops_traps() {
    let g0 = load("tree_two_loops.txt").internal().unwrap();
    let basis = attractor_basis(&g0).unwrap();
    let dims = DimsJson::from(grover_sink::attractor::dimension_report(
        &g0,
        &basis,
        &grover_sink::oracle::numeric_spectrum(&grover_sink::operators::build_e(&g0), &Default::default()).unwrap(),
    ));
    assert!(dims.matches);
    assert_eq!(dims.expected_minus, 1);
    let loop_arc = g0.graph().loops()[0];
    assert!(survival_spectral(&basis, &delta(g0.arc_count(), loop_arc)).unwrap().gamma > 0.1);
}

#[test]
fn tails_on_triangle() {
    let g0 = load("triangle_sink.txt").internal().unwrap();
    let state = tail_stationary_state(&g0, &[c(0.0, 2.0)]).unwrap();
    // a single tail cannot drive a current
    assert!(state.current.iter().all(|z| z.norm() < 1e-12));
    assert!((state.outgoing[0] - c(0.0, 2.0)).norm() < 1e-12);
}
