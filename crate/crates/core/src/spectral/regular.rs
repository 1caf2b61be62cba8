use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::FiniteGraph;

const CUBIC_SEED: u64 = 0x3_2e6u64;

/// Deterministic connected 3-regular graph on `n` vertices (`n` even, ≥ 4).
///
/// Uses the pairing model with a fixed-seed ChaCha stream, rejecting
/// pairings with loops, repeated edges, or more than one component. The same
/// `n` always yields the same graph.
pub fn cubic_graph(n: usize) -> FiniteGraph {
    assert!(n >= 4 && n % 2 == 0, "3-regular graphs need an even n >= 4");
    let mut rng = ChaCha8Rng::seed_from_u64(CUBIC_SEED ^ n as u64);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    loop {
        stubs.shuffle(&mut rng);
        let pairs: Vec<(usize, usize)> = stubs
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if pairs.iter().any(|(u, v)| u == v) {
            continue;
        }
        let mut sorted = pairs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != pairs.len() {
            continue;
        }
        let g = FiniteGraph::new(n, sorted).expect("loop-free pairing");
        if g.is_connected() {
            return g;
        }
    }
}
