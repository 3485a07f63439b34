//! Seeded workloads shared by the benchmarks.

use coarse_core::relations::Entourage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reflexive symmetric relation with each off-diagonal edge kept with
/// probability `density`.
pub fn random_graph(points: usize, density: f64, seed: u64) -> Entourage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for x in 0..points {
        pairs.push((x, x));
        for y in x + 1..points {
            if rng.gen_bool(density) {
                pairs.push((x, y));
                pairs.push((y, x));
            }
        }
    }
    Entourage::from_pairs(points, pairs).expect("points in range")
}
