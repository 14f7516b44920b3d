//! Hypergraph matchings: greedy (maximal) and branch-and-bound (maximum).

use crate::error::{Error, Result};
use crate::hypercore::{is_disjoint, Hypergraph};

/// Edge-count limit for [`matching_exact`].
pub const MATCHING_EXACT_CAP: usize = 30;

/// Pairwise-disjoint edges of a host hypergraph, as vertex index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<Vec<u32>>,
}

impl Matching {
    /// Wraps edges without checking; see [`Matching::validate`].
    pub fn new(edges: Vec<Vec<u32>>) -> Self {
        Matching { edges }
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Every member is an edge of `h` and members are pairwise disjoint.
    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if !h.edges().contains(e) {
                return Err(Error::domain(format!("matching member {i} is not an edge")));
            }
            if self.edges[..i].iter().any(|f| !is_disjoint(e, f)) {
                return Err(Error::domain(format!(
                    "matching member {i} meets an earlier member"
                )));
            }
        }
        Ok(())
    }
}

/// Edge indices sorted by size, then by position.
fn size_order(h: &Hypergraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..h.num_edges()).collect();
    order.sort_by_key(|&i| (h.edges()[i].len(), i));
    order
}

/// A maximal matching from one greedy pass over edges in size order.
pub fn matching_greedy(h: &Hypergraph) -> Matching {
    let mut used = vec![false; h.num_vertices()];
    let mut edges = Vec::new();
    for i in size_order(h) {
        let e = &h.edges()[i];
        if e.iter().all(|&v| !used[v as usize]) {
            e.iter().for_each(|&v| used[v as usize] = true);
            edges.push(e.clone());
        }
    }
    Matching { edges }
}

/// Upper bound on the matching number: edge count, and covered vertices over
/// the smallest edge size.
fn trivial_upper_bound(h: &Hypergraph) -> usize {
    let Some(min) = h.edges().iter().map(Vec::len).min() else {
        return 0;
    };
    let mut covered = vec![false; h.num_vertices()];
    h.edges()
        .iter()
        .flatten()
        .for_each(|&v| covered[v as usize] = true);
    let c = covered.iter().filter(|&&b| b).count();
    h.num_edges().min(c / min)
}

/// A maximum matching.
///
/// Returns the greedy matching when it meets the trivial upper bound;
/// otherwise searches, refusing above [`MATCHING_EXACT_CAP`] edges.
pub fn matching_exact(h: &Hypergraph) -> Result<Matching> {
    let greedy = matching_greedy(h);
    if greedy.size() == trivial_upper_bound(h) {
        return Ok(greedy);
    }
    if h.num_edges() > MATCHING_EXACT_CAP {
        return Err(Error::Refused {
            what: "edge count for exact matching (use the greedy matching instead)",
            actual: h.num_edges(),
            cap: MATCHING_EXACT_CAP,
        });
    }

    // local bitsets over covered vertices
    let order = size_order(h);
    let mut local = vec![usize::MAX; h.num_vertices()];
    let mut next = 0;
    for e in h.edges() {
        for &v in e {
            if local[v as usize] == usize::MAX {
                local[v as usize] = next;
                next += 1;
            }
        }
    }
    let words = next.div_ceil(64);
    let masks: Vec<Vec<u64>> = order
        .iter()
        .map(|&i| {
            let mut m = vec![0u64; words];
            for &v in &h.edges()[i] {
                let l = local[v as usize];
                m[l / 64] |= 1 << (l % 64);
            }
            m
        })
        .collect();

    struct Search<'a> {
        masks: &'a [Vec<u64>],
        best: Vec<usize>,
        current: Vec<usize>,
    }
    impl Search<'_> {
        fn run(&mut self, i: usize, used: &mut [u64]) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if i == self.masks.len() || self.current.len() + (self.masks.len() - i) <= self.best.len()
            {
                return;
            }
            let m = &self.masks[i];
            if m.iter().zip(used.iter()).all(|(a, b)| a & b == 0) {
                used.iter_mut().zip(m).for_each(|(u, a)| *u |= a);
                self.current.push(i);
                self.run(i + 1, used);
                self.current.pop();
                used.iter_mut().zip(m).for_each(|(u, a)| *u &= !a);
            }
            self.run(i + 1, used);
        }
    }

    let mut s = Search {
        masks: &masks,
        best: Vec::new(),
        current: Vec::new(),
    };
    s.run(0, &mut vec![0u64; words]);
    if s.best.len() <= greedy.size() {
        return Ok(greedy);
    }
    Ok(Matching {
        edges: s.best.iter().map(|&k| h.edges()[order[k]].clone()).collect(),
    })
}
