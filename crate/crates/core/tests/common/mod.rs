#![allow(dead_code)]

use idensity::density::Probability;
use idensity::Hypergraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// `n` vertices in `1..=max_n`, edges of size `1..=max_rank`.
pub fn random_hypergraph(rng: &mut impl Rng, max_n: usize, max_rank: usize) -> Hypergraph {
    let n = rng.gen_range(1..=max_n);
    let rank = rng.gen_range(1..=max_rank.min(n));
    let m = rng.gen_range(0..=2 * n);
    let verts: Vec<u32> = (0..n as u32).collect();
    let edges = (0..m)
        .map(|_| {
            let size = match rng.gen_range(0..4) {
                0 => 1,
                _ => rng.gen_range(1..=rank),
            };
            verts.choose_multiple(rng, size).copied().collect()
        })
        .collect();
    Hypergraph::new(labels(n), edges).expect("valid edges")
}

pub fn random_p(rng: &mut impl Rng) -> Probability {
    let den = rng.gen_range(2..=12i64);
    let num = rng.gen_range(1..den);
    Probability::ratio(num, den).expect("in (0,1)")
}
