//! Branch-and-reduce counting of independent sets by size.
//!
//! Each node first applies forced exclusions (a singleton edge `{v}` rules
//! out `v` and every edge through it), then splits the remaining edges into
//! connected components. Vertices in no edge contribute `(1 + x)` each.
//! A component is solved by branching on its highest-degree vertex `v`
//! (ties to the median position among the maximal ones, so that paths and
//! other thin structures split in half):
//!
//! * exclude `v`: drop `v` and every edge containing it;
//! * include `v`: drop `v` and shrink every edge containing it; the result
//!   is shifted by one set element.
//!
//! Component polynomials are combined by convolution. Small components are
//! memoized by shape.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::IndependenceProfile;
use crate::error::Result;
use crate::exec::{Deadline, Exec};
use crate::hypercore::Hypergraph;

type Poly = Vec<BigUint>;

const MEMO_MAX_VERTICES: usize = 48;

#[derive(Debug, Clone, Copy)]
pub struct BranchOptions {
    pub exec: Exec,
    pub deadline: Deadline,
    /// Sibling branches below this recursion depth run concurrently.
    pub parallel_depth: usize,
}

impl Default for BranchOptions {
    fn default() -> Self {
        BranchOptions {
            exec: Exec::default(),
            deadline: Deadline::NONE,
            parallel_depth: 12,
        }
    }
}

pub fn profile_branching(h: &Hypergraph) -> IndependenceProfile {
    profile_branching_with(h, &BranchOptions::default()).expect("no deadline set")
}

pub fn profile_branching_with(h: &Hypergraph, opts: &BranchOptions) -> Result<IndependenceProfile> {
    let ctx = Ctx {
        opts,
        nodes: AtomicU64::new(0),
        memo: Mutex::new(HashMap::new()),
    };
    let verts: Vec<u32> = (0..h.num_vertices() as u32).collect();
    let mut poly = ctx.solve(verts, h.edges().to_vec(), 0)?;
    poly.resize(h.num_vertices() + 1, BigUint::zero());
    Ok(IndependenceProfile::from_counts_unchecked(poly))
}

struct Ctx<'a> {
    opts: &'a BranchOptions,
    nodes: AtomicU64,
    memo: Mutex<HashMap<Vec<u32>, Poly>>,
}

impl Ctx<'_> {
    fn parallel_at(&self, depth: usize) -> bool {
        self.opts.exec.is_parallel() && depth < self.opts.parallel_depth
    }

    /// `verts` sorted; every edge is a sorted subset of `verts`.
    fn solve(&self, verts: Vec<u32>, mut edges: Vec<Vec<u32>>, depth: usize) -> Result<Poly> {
        if self.nodes.fetch_add(1, Ordering::Relaxed).is_multiple_of(64) {
            self.opts.deadline.check()?;
        }

        let mut forced: Vec<u32> = edges.iter().filter(|e| e.len() == 1).map(|e| e[0]).collect();
        forced.sort_unstable();
        forced.dedup();
        if !forced.is_empty() {
            edges.retain(|e| !e.iter().any(|v| forced.binary_search(v).is_ok()));
        }
        edges.sort_unstable();
        edges.dedup();

        let mut covered: Vec<u32> = edges.iter().flatten().copied().collect();
        covered.sort_unstable();
        covered.dedup();
        let free = verts.len() - forced.len() - covered.len();
        let poly = binomial_row(free);
        if edges.is_empty() {
            return Ok(poly);
        }

        let components = split_components(&covered, edges);
        let parts: Vec<Result<Poly>> = if components.len() > 1 && self.parallel_at(depth) {
            self.opts
                .exec
                .map(components, |(cv, ce)| self.component(cv, ce, depth + 1))
        } else {
            components
                .into_iter()
                .map(|(cv, ce)| self.component(cv, ce, depth + 1))
                .collect()
        };
        let mut parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
        parts.push(poly);
        product_tree(parts, &self.opts.deadline)
    }

    /// Connected, no singleton edges, every vertex covered.
    fn component(&self, verts: Vec<u32>, edges: Vec<Vec<u32>>, depth: usize) -> Result<Poly> {
        if edges.len() == 1 {
            // (1 + x)^r - x^r
            let mut p = binomial_row(verts.len());
            p.pop();
            return Ok(p);
        }
        if verts.len() > MEMO_MAX_VERTICES {
            return self.branch(verts, edges, depth);
        }
        let key = shape_key(&verts, &edges);
        if let Some(p) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(p.clone());
        }
        let p = self.branch(verts, edges, depth)?;
        self.memo.lock().expect("memo lock").insert(key, p.clone());
        Ok(p)
    }

    fn branch(&self, verts: Vec<u32>, edges: Vec<Vec<u32>>, depth: usize) -> Result<Poly> {
        let mut degree = vec![0usize; verts.len()];
        for e in &edges {
            for v in e {
                degree[verts.binary_search(v).expect("covered vertex")] += 1;
            }
        }
        let top = degree.iter().copied().max().expect("non-empty component");
        let ties: Vec<usize> = (0..verts.len()).filter(|&i| degree[i] == top).collect();
        let pos = ties[ties.len() / 2];
        let v = verts[pos];

        let mut rest = verts;
        rest.remove(pos);
        let mut excl_edges = Vec::with_capacity(edges.len());
        let mut incl_edges = Vec::with_capacity(edges.len());
        for e in edges {
            match e.binary_search(&v) {
                Ok(i) => {
                    let mut shrunk = e;
                    shrunk.remove(i);
                    incl_edges.push(shrunk);
                }
                Err(_) => {
                    excl_edges.push(e.clone());
                    incl_edges.push(e);
                }
            }
        }

        let rest_incl = rest.clone();
        let (excl, incl) = if self.parallel_at(depth) {
            self.opts.exec.join(
                || self.solve(rest, excl_edges, depth + 1),
                || self.solve(rest_incl, incl_edges, depth + 1),
            )
        } else {
            (
                self.solve(rest, excl_edges, depth + 1),
                self.solve(rest_incl, incl_edges, depth + 1),
            )
        };
        let (excl, incl) = (excl?, incl?);

        let mut out = excl;
        if out.len() < incl.len() + 1 {
            out.resize(incl.len() + 1, BigUint::zero());
        }
        for (j, c) in incl.into_iter().enumerate() {
            out[j + 1] += c;
        }
        Ok(out)
    }
}

/// Edges relabelled to positions in `verts`, sorted, length-prefixed.
fn shape_key(verts: &[u32], edges: &[Vec<u32>]) -> Vec<u32> {
    let mut local: Vec<Vec<u32>> = edges
        .iter()
        .map(|e| {
            e.iter()
                .map(|v| verts.binary_search(v).expect("covered vertex") as u32)
                .collect()
        })
        .collect();
    local.sort_unstable();
    let mut key = vec![verts.len() as u32];
    for e in local {
        key.push(e.len() as u32);
        key.extend(e);
    }
    key
}

/// Groups edges into connected components over the sorted vertex list
/// `covered`. Components come out ordered by their smallest vertex.
fn split_components(covered: &[u32], edges: Vec<Vec<u32>>) -> Vec<(Vec<u32>, Vec<Vec<u32>>)> {
    let mut parent: Vec<usize> = (0..covered.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let pos = |v: &u32| covered.binary_search(v).expect("covered vertex");
    for e in &edges {
        let first = pos(&e[0]);
        for v in &e[1..] {
            let a = find(&mut parent, first);
            let b = find(&mut parent, pos(v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut slot = vec![usize::MAX; covered.len()];
    let mut comps: Vec<(Vec<u32>, Vec<Vec<u32>>)> = Vec::new();
    for (i, &v) in covered.iter().enumerate() {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push((Vec::new(), Vec::new()));
        }
        comps[slot[r]].0.push(v);
    }
    for e in edges {
        let r = find(&mut parent, pos(&e[0]));
        comps[slot[r]].1.push(e);
    }
    comps
}

/// Coefficients of `(1 + x)^n`.
pub(crate) fn binomial_row(n: usize) -> Poly {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    for j in 0..=n {
        row.push(c.clone());
        c = c * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    row
}

/// Product of many polynomials, multiplied pairwise so that large
/// coefficients only meet near the root.
fn product_tree(mut polys: Vec<Poly>, deadline: &Deadline) -> Result<Poly> {
    while polys.len() > 1 {
        let mut next = Vec::with_capacity(polys.len().div_ceil(2));
        for pair in polys.chunks(2) {
            next.push(match pair {
                [a, b] => convolve_checked(a, b, deadline)?,
                [a] => a.clone(),
                _ => unreachable!(),
            });
        }
        polys = next;
    }
    Ok(polys.pop().unwrap_or_else(|| vec![BigUint::one()]))
}

fn convolve_checked(a: &[BigUint], b: &[BigUint], deadline: &Deadline) -> Result<Poly> {
    if a.len().min(b.len()) < 64 {
        return Ok(convolve(a, b));
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if i % 32 == 0 {
            deadline.check()?;
        }
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Ok(out)
}

pub(crate) fn convolve(a: &[BigUint], b: &[BigUint]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
