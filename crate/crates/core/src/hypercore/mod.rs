//! Finite hypergraphs over dense vertex indices.
//!
//! Vertices carry external string labels; internally every set is a sorted
//! `Vec<u32>` of indices into the label table. Edges are non-empty and
//! duplicate-free, kept in insertion order.

pub(crate) mod format;

use std::collections::HashMap;
use std::fmt;

pub use format::{parse, parse_with, to_text, HypergraphBuilder, ParseOptions};

use crate::error::{Error, Result};

/// Default engineering limit on the number of vertices of a finite hypergraph.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

#[derive(Clone)]
pub struct Hypergraph {
    labels: Vec<String>,
    index: HashMap<String, u32>,
    edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Builds a hypergraph from labels and index-based edges.
    ///
    /// Edges are sorted internally and duplicates dropped (first occurrence
    /// wins). Empty edges, out-of-range indices and repeated labels are
    /// rejected.
    pub fn new(labels: Vec<String>, edges: Vec<Vec<u32>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i as u32).is_some() {
                return Err(Error::domain(format!("duplicate vertex label `{l}`")));
            }
        }
        let mut h = Hypergraph {
            labels,
            index,
            edges: Vec::with_capacity(edges.len()),
        };
        for e in edges {
            h.push_edge(e)?;
        }
        Ok(h)
    }

    /// Convenience constructor from label slices.
    pub fn from_labels(vertices: &[&str], edges: &[&[&str]]) -> Result<Self> {
        let labels = vertices.iter().map(|s| s.to_string()).collect();
        let mut h = Hypergraph::new(labels, Vec::new())?;
        for e in edges {
            let idx = e
                .iter()
                .map(|l| {
                    h.vertex(l)
                        .ok_or_else(|| Error::domain(format!("unknown vertex `{l}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            h.push_edge(idx)?;
        }
        Ok(h)
    }

    pub fn edgeless(labels: Vec<String>) -> Result<Self> {
        Hypergraph::new(labels, Vec::new())
    }

    /// Normalizes and appends an edge. Returns false if it was already present.
    fn push_edge(&mut self, mut e: Vec<u32>) -> Result<bool> {
        e.sort_unstable();
        e.dedup();
        if e.is_empty() {
            return Err(Error::domain("empty edge"));
        }
        if let Some(&v) = e.last() {
            if v as usize >= self.labels.len() {
                return Err(Error::domain(format!("edge vertex {v} out of range")));
            }
        }
        if self.edges.contains(&e) {
            return Ok(false);
        }
        self.edges.push(e);
        Ok(true)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Maximum edge size, 0 when edgeless.
    pub fn rank(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Fails when some edge is larger than `k`.
    pub fn check_rank(&self, k: usize) -> Result<()> {
        let r = self.rank();
        if r > k {
            return Err(Error::domain(format!("rank {r} exceeds declared bound {k}")));
        }
        Ok(())
    }

    pub fn has_edge(&self, e: &VertexSubset) -> bool {
        self.edges.iter().any(|f| f.as_slice() == e.as_slice())
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges.iter().filter(|e| e.binary_search(&v).is_ok()).count()
    }

    /// Returns a copy with `edge` added (no-op if already present).
    pub fn with_edge(&self, edge: &VertexSubset) -> Result<Self> {
        edge.check_within(self)?;
        let mut h = self.clone();
        h.push_edge(edge.as_slice().to_vec())?;
        Ok(h)
    }

    /// Keeps only the edges for which `keep` returns true.
    pub fn retain_edges(&self, mut keep: impl FnMut(&[u32]) -> bool) -> Self {
        let mut h = self.clone();
        h.edges.retain(|e| keep(e));
        h
    }

    /// Vertex-disjoint union. Label sets must not overlap.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Self> {
        let shift = self.labels.len() as u32;
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| e.iter().map(|v| v + shift).collect()),
        );
        Hypergraph::new(labels, edges)
    }

    /// Renames every vertex through `f`.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        Hypergraph::new(
            self.labels.iter().map(|l| f(l)).collect(),
            self.edges.clone(),
        )
    }

    fn sorted_edges(&self) -> Vec<&Vec<u32>> {
        let mut e: Vec<_> = self.edges.iter().collect();
        e.sort();
        e
    }
}

/// Equal labels in the same order, and the same edge set.
impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<Vec<&str>> = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| self.label(v)).collect())
            .collect();
        f.debug_struct("Hypergraph")
            .field("vertices", &self.labels)
            .field("edges", &edges)
            .finish()
    }
}

/// A set of vertex indices of some host hypergraph, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSubset(Vec<u32>);

impl VertexSubset {
    pub fn new(mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSubset(members)
    }

    pub fn empty() -> Self {
        VertexSubset(Vec::new())
    }

    pub fn all(h: &Hypergraph) -> Self {
        VertexSubset((0..h.num_vertices() as u32).collect())
    }

    pub fn from_labels(h: &Hypergraph, labels: &[&str]) -> Result<Self> {
        labels
            .iter()
            .map(|l| {
                h.vertex(l)
                    .ok_or_else(|| Error::domain(format!("unknown vertex `{l}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(VertexSubset::new)
    }

    /// Domain check: every member is a vertex of `h`.
    pub fn check_within(&self, h: &Hypergraph) -> Result<()> {
        match self.0.last() {
            Some(&v) if v as usize >= h.num_vertices() => Err(Error::domain(format!(
                "vertex index {v} is not a vertex of the host ({} vertices)",
                h.num_vertices()
            ))),
            _ => Ok(()),
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn labels<'a>(&self, h: &'a Hypergraph) -> Vec<&'a str> {
        self.0.iter().map(|&v| h.label(v)).collect()
    }
}

/// `a ⊆ b` for sorted slices.
pub fn is_subset(a: &[u32], b: &[u32]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

pub fn is_disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// The subhypergraph induced on `s`: vertices of `s` in host order, and every
/// host edge contained in `s`.
pub fn induced_sub(h: &Hypergraph, s: &VertexSubset) -> Result<Hypergraph> {
    s.check_within(h)?;
    let mut remap = vec![u32::MAX; h.num_vertices()];
    for (i, &v) in s.as_slice().iter().enumerate() {
        remap[v as usize] = i as u32;
    }
    let labels = s.as_slice().iter().map(|&v| h.label(v).to_owned()).collect();
    let edges = h
        .edges()
        .iter()
        .filter(|e| e.iter().all(|&v| remap[v as usize] != u32::MAX))
        .map(|e| e.iter().map(|&v| remap[v as usize]).collect())
        .collect();
    Hypergraph::new(labels, edges)
}

/// Neighbourhood hypergraph of a vertex set together with whether the set
/// itself was an edge (that edge would become empty and is not stored).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbourhood {
    pub hypergraph: Hypergraph,
    pub contains_empty_edge: bool,
}

/// `N_h(a)`: the hypergraph on `V(h) \ a` with edges `{E \ a : a ⊆ E ∈ h}`.
pub fn neighbourhood(h: &Hypergraph, a: &VertexSubset) -> Result<Neighbourhood> {
    a.check_within(h)?;
    let rest = VertexSubset::new(
        (0..h.num_vertices() as u32)
            .filter(|&v| !a.contains(v))
            .collect(),
    );
    let mut remap = vec![u32::MAX; h.num_vertices()];
    for (i, &v) in rest.as_slice().iter().enumerate() {
        remap[v as usize] = i as u32;
    }
    let mut contains_empty_edge = false;
    let mut edges = Vec::new();
    for e in h.edges() {
        if !is_subset(a.as_slice(), e) {
            continue;
        }
        let residual: Vec<u32> = e
            .iter()
            .filter(|&&v| !a.contains(v))
            .map(|&v| remap[v as usize])
            .collect();
        if residual.is_empty() {
            contains_empty_edge = true;
        } else {
            edges.push(residual);
        }
    }
    let labels = rest.as_slice().iter().map(|&v| h.label(v).to_owned()).collect();
    Ok(Neighbourhood {
        hypergraph: Hypergraph::new(labels, edges)?,
        contains_empty_edge,
    })
}

/// Drops every edge that strictly contains another edge.
pub fn antichain_reduce(h: &Hypergraph) -> Hypergraph {
    let edges = h.edges();
    h.retain_edges(|e| {
        !edges
            .iter()
            .any(|f| f.len() < e.len() && is_subset(f, e))
    })
}

pub fn is_antichain(h: &Hypergraph) -> bool {
    let edges = h.edges();
    edges.iter().enumerate().all(|(i, e)| {
        edges
            .iter()
            .enumerate()
            .all(|(j, f)| i == j || !is_subset(f, e))
    })
}

/// True iff no edge of `h` lies inside `s`.
pub fn is_independent(h: &Hypergraph, s: &VertexSubset) -> Result<bool> {
    s.check_within(h)?;
    Ok(!h.edges().iter().any(|e| is_subset(e, s.as_slice())))
}
