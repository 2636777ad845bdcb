//! Seeded random graphs with sinks, stratified over the four cases.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::CaseLabel;
use crate::format::GraphSpec;

#[derive(Clone, Copy, Debug)]
pub struct RandomGraphConfig {
    /// Upper bound on internal plus sink vertices.
    pub max_vertices: usize,
    pub max_sinks: usize,
    pub max_loops: usize,
}

impl Default for RandomGraphConfig {
    fn default() -> Self {
        Self {
            max_vertices: 8,
            max_sinks: 2,
            max_loops: 3,
        }
    }
}

/// Graph of the requested case with one or two sinks and connected `G_0`, vertices shuffled.
pub fn random_graph(rng: &mut impl Rng, case: CaseLabel, config: &RandomGraphConfig) -> GraphSpec {
    let needs_odd = matches!(case, CaseLabel::B | CaseLabel::D);
    let needs_loops = matches!(case, CaseLabel::C | CaseLabel::D);
    let sinks = rng.random_range(1..=config.max_sinks);
    let min_internal = if needs_odd { 3 } else { 2 };
    let internal = rng.random_range(min_internal..=config.max_vertices - sinks);

    // random spanning tree, coloured by depth parity
    let mut edges = Vec::new();
    let mut color = vec![false; internal];
    for v in 1..internal {
        let parent = rng.random_range(0..v);
        color[v] = !color[parent];
        edges.push((parent, v));
    }
    let density: f64 = rng.random_range(0.0..0.6);
    for u in 0..internal {
        for w in u + 1..internal {
            if edges.contains(&(u, w)) || color[u] == color[w] {
                continue;
            }
            if rng.random_bool(density) {
                edges.push((u, w));
            }
        }
    }
    if needs_odd {
        let same: Vec<(usize, usize)> = (0..internal)
            .flat_map(|u| (u + 1..internal).map(move |w| (u, w)))
            .filter(|&(u, w)| color[u] == color[w] && !edges.contains(&(u, w)))
            .collect();
        let odd_edges = rng.random_range(1..=same.len().min(2));
        edges.extend(same.choose_multiple(rng, odd_edges).copied());
    }
    let mut loops: Vec<usize> = Vec::new();
    if needs_loops {
        let count = rng.random_range(1..=config.max_loops.min(internal));
        let mut candidates: Vec<usize> = (0..internal).collect();
        candidates.shuffle(rng);
        loops.extend(&candidates[..count]);
        loops.sort_unstable();
    }
    for s in internal..internal + sinks {
        let attachments = rng.random_range(1..=internal.min(2));
        let mut targets: Vec<usize> = (0..internal).collect();
        targets.shuffle(rng);
        for &t in &targets[..attachments] {
            edges.push((t, s));
        }
    }

    let total = internal + sinks;
    let mut perm: Vec<usize> = (0..total).collect();
    perm.shuffle(rng);
    let mut spec = GraphSpec {
        vertices: total,
        edges: edges.iter().map(|&(u, w)| (perm[u], perm[w])).collect(),
        loops: loops.iter().map(|&u| perm[u]).collect(),
        sinks: (internal..total).map(|s| perm[s]).collect(),
    };
    spec.edges.shuffle(rng);
    spec.sinks.sort_unstable();
    spec
}

/// `count` graphs cycling through A, B, C, D, reproducible from `seed`.
pub fn random_sweep(seed: u64, count: usize, config: &RandomGraphConfig) -> Vec<(CaseLabel, GraphSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = [CaseLabel::A, CaseLabel::B, CaseLabel::C, CaseLabel::D];
    (0..count)
        .map(|i| {
            let case = cases[i % 4];
            (case, random_graph(&mut rng, case, config))
        })
        .collect()
}
