//! Brute-force independence profile: enumerate all `2^n` subsets.

use num_bigint::BigUint;

use super::IndependenceProfile;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hypercore::Hypergraph;

pub const ORACLE_VERTEX_CAP: usize = 25;

const BLOCK_BITS: u32 = 12;

pub fn profile_oracle(h: &Hypergraph) -> Result<IndependenceProfile> {
    profile_oracle_with(h, Exec::default())
}

pub fn profile_oracle_with(h: &Hypergraph, exec: Exec) -> Result<IndependenceProfile> {
    let n = h.num_vertices();
    if n > ORACLE_VERTEX_CAP {
        return Err(Error::Refused {
            what: "vertex count for brute-force enumeration",
            actual: n,
            cap: ORACLE_VERTEX_CAP,
        });
    }
    let masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let total: u64 = 1 << n;
    let block = 1u64 << BLOCK_BITS.min(n as u32);
    let blocks = total / block;

    let tally = |b: u64| {
        let mut counts = vec![0u64; n + 1];
        for s in b * block..(b + 1) * block {
            let s = s as u32;
            if masks.iter().all(|&m| m & s != m) {
                counts[s.count_ones() as usize] += 1;
            }
        }
        counts
    };
    let counts = exec.map_reduce(
        blocks,
        tally,
        || vec![0u64; n + 1],
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    Ok(IndependenceProfile::from_counts_unchecked(
        counts.into_iter().map(BigUint::from).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::parse;

    fn counts(h: &Hypergraph) -> Vec<u64> {
        profile_oracle(h)
            .unwrap()
            .counts()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect()
    }

    #[test]
    fn edgeless_is_binomial() {
        assert_eq!(counts(&parse("vertices: a b c").unwrap()), vec![1, 3, 3, 1]);
        assert_eq!(counts(&parse("").unwrap()), vec![1]);
    }

    #[test]
    fn triangle_has_four_independent_sets() {
        let h = parse("edge: a b\nedge: b c\nedge: a c").unwrap();
        assert_eq!(counts(&h), vec![1, 3, 0, 0]);
        assert_eq!(profile_oracle(&h).unwrap().total(), BigUint::from(4u32));
    }

    #[test]
    fn single_triple() {
        let h = parse("edge: a b c").unwrap();
        assert_eq!(counts(&h), vec![1, 3, 3, 0]);
    }

    #[test]
    fn refuses_above_cap() {
        let labels: Vec<String> = (0..26).map(|i| format!("v{i}")).collect();
        let h = Hypergraph::edgeless(labels).unwrap();
        assert!(matches!(
            profile_oracle(&h),
            Err(Error::Refused { cap: 25, actual: 26, .. })
        ));
    }

    #[test]
    fn modes_agree() {
        let h = parse("edge: a b\nedge: b c d\nedge: d e\nedge: f\nvertices: g h i j k l m n")
            .unwrap();
        assert_eq!(
            profile_oracle_with(&h, Exec::Sequential).unwrap(),
            profile_oracle_with(&h, Exec::Parallel).unwrap()
        );
    }
}
