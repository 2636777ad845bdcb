use grover_sink::attractor::{attractor_basis, survival_spectral};
use grover_sink::cycles::{classify_case, fundamental_cycle_basis};
use grover_sink::dynamics::survival_sequence;
use grover_sink::linalg::{c, inner, CVector};
use grover_sink::operators::{
    apply_boundary2, apply_boundary2_adjoint, apply_d1, apply_d1_adjoint, apply_e, apply_flip, apply_grover,
    build_e, check_chain_condition,
};
use grover_sink::random::{random_graph, RandomGraphConfig};
use grover_sink::{CaseLabel, GraphSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CASES: [CaseLabel; 4] = [CaseLabel::A, CaseLabel::B, CaseLabel::C, CaseLabel::D];

fn graph() -> impl Strategy<Value = GraphSpec> {
    (any::<u64>(), 0..4usize).prop_map(|(seed, k)| {
        random_graph(&mut ChaCha8Rng::seed_from_u64(seed), CASES[k], &RandomGraphConfig::default())
    })
}

fn vector(len: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| CVector::from_iterator(v.len(), v.into_iter().map(|(re, im)| c(re, im))))
}

fn graph_and_state() -> impl Strategy<Value = (GraphSpec, CVector)> {
    graph().prop_flat_map(|spec| {
        let n = spec.internal().unwrap().arc_count();
        (Just(spec), vector(n))
    })
}

fn relabel(spec: &GraphSpec, perm: &[usize]) -> GraphSpec {
    GraphSpec {
        vertices: spec.vertices,
        edges: spec.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect(),
        loops: spec.loops.iter().map(|&v| perm[v]).collect(),
        sinks: spec.sinks.iter().map(|&v| perm[v]).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycle_count_is_betti_number(spec in graph()) {
        let g0 = spec.internal().unwrap();
        let betti = g0.graph().edge_count() + 1 - g0.vertex_count();
        prop_assert_eq!(fundamental_cycle_basis(&g0).len(), betti);
    }

    #[test]
    fn case_survives_relabeling(spec in graph(), shuffle in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..spec.vertices).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let a = spec.internal().unwrap();
        let b = relabel(&spec, &perm).internal().unwrap();
        prop_assert_eq!(classify_case(&a), classify_case(&b));
        prop_assert_eq!(attractor_basis(&a).unwrap().dim(), attractor_basis(&b).unwrap().dim());
    }

    #[test]
    fn adjoint_identities((spec, psi) in graph_and_state(), seed in any::<u64>()) {
        let g0 = spec.internal().unwrap();
        let basis = fundamental_cycle_basis(&g0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = grover_sink::verify::random_state(g0.vertex_count(), &mut rng);
        let k = grover_sink::verify::random_state(basis.len(), &mut rng);
        let d1 = inner(&apply_d1(&g0, &psi).unwrap(), &f) - inner(&psi, &apply_d1_adjoint(&g0, &f).unwrap());
        prop_assert!(d1.norm() < 1e-12);
        let b2 = inner(&apply_boundary2(&g0, &basis, &k).unwrap(), &psi)
            - inner(&k, &apply_boundary2_adjoint(&g0, &basis, &psi).unwrap());
        prop_assert!(b2.norm() < 1e-12);
        let s = apply_flip(g0.graph(), &apply_flip(g0.graph(), &psi).unwrap()).unwrap();
        prop_assert!((s - &psi).norm() < 1e-15);
    }

    #[test]
    fn grover_preserves_norm(spec in graph(), seed in any::<u64>()) {
        let g = spec.build().unwrap();
        let psi = grover_sink::verify::random_state(g.arc_count(), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!((apply_grover(&g, &psi).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chain_condition(spec in graph()) {
        let g0 = spec.internal().unwrap();
        prop_assert!(check_chain_condition(&g0, &fundamental_cycle_basis(&g0)) < 1e-12);
    }

    #[test]
    fn truncated_evolution_contracts((spec, psi) in graph_and_state()) {
        let g0 = spec.internal().unwrap();
        let next = apply_e(&g0, &psi).unwrap();
        prop_assert!(next.norm() <= psi.norm() * (1.0 + 1e-12));
        prop_assert!((build_e(&g0) * &psi - next).norm() < 1e-12);
    }

    #[test]
    fn norm_accounting((spec, psi) in graph_and_state()) {
        let g0 = spec.internal().unwrap();
        let phi0 = &psi / c(psi.norm(), 0.0);
        let run = survival_sequence(&g0, &phi0, 120).unwrap();
        prop_assert!(run.accounting_residual < 1e-10);
        prop_assert!(run.gammas.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        let gamma = survival_spectral(&attractor_basis(&g0).unwrap(), &phi0).unwrap().gamma;
        prop_assert!(run.final_gamma() >= gamma - 1e-10);
    }
}
