//! Countable hypergraphs presented as chains of finite prefixes.
//!
//! A [`FamilySpec`] generates nested prefixes `C_1 ⊆ C_2 ⊆ ...`, each an
//! induced subhypergraph of the next, whose union is the countable
//! hypergraph. The vertex order of `C_n` is always an initial segment of the
//! vertex order of `C_{n+1}`. Densities of prefixes are non-increasing and
//! converge to the density of the countable hypergraph; [`enclosure`] pairs
//! that upper side with a certified lower bound.

mod enclosure;
mod format;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub use enclosure::{
    chain_agreement_check, chain_upper, enclosure, eval_to_tolerance, DensityEnclosure,
    EvalBudget, DEFAULT_TIME_CAP_SECS, DEFAULT_VERTEX_BUDGET,
};
pub use format::{parse_family, parse_family_with};

use crate::density::Probability;
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;
use crate::rational::pow;

/// How copies of a template are glued together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Repeat {
    Disjoint,
    /// All copies share this template vertex.
    SharedVertex(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// Center `c` joined to leaves `y1, y2, ...`.
    InfiniteStar,
    /// Countably many disjoint `k`-edges.
    InfiniteMatching { k: usize },
    /// One-way infinite path `v1 - v2 - ...`.
    RayPath,
    DisjointCopies { template: Hypergraph },
    PeriodicTemplate { template: Hypergraph, repeat: Repeat },
    /// A finite hypergraph revealed vertex by vertex; eventually constant.
    Finite { hypergraph: Hypergraph },
}

/// Declared bound `coefficient * ratio^n` on the sum of `p^|E \ S|` over
/// all edges not yet present in `C_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricTail {
    pub ratio: BigRational,
    pub coefficient: BigRational,
}

/// Upper bound on the residual weight of the edges beyond a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Bounded(BigRational),
    Divergent,
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    kind: FamilyKind,
    step: usize,
    tail: Option<GeometricTail>,
    rank_bound: Option<usize>,
}

impl FamilySpec {
    fn of(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            step: 1,
            tail: None,
            rank_bound: None,
        }
    }

    pub fn infinite_star() -> Self {
        Self::of(FamilyKind::InfiniteStar)
    }

    pub fn infinite_matching(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("matching edges need k >= 1"));
        }
        Ok(Self::of(FamilyKind::InfiniteMatching { k }))
    }

    pub fn ray_path() -> Self {
        Self::of(FamilyKind::RayPath)
    }

    pub fn disjoint_copies(template: Hypergraph) -> Result<Self> {
        if template.num_vertices() == 0 {
            return Err(Error::domain("template has no vertices"));
        }
        Ok(Self::of(FamilyKind::DisjointCopies { template }))
    }

    pub fn periodic(template: Hypergraph, repeat: Repeat) -> Result<Self> {
        if let Repeat::SharedVertex(v) = repeat {
            if v as usize >= template.num_vertices() || template.num_vertices() < 2 {
                return Err(Error::domain("shared vertex needs a template with other vertices"));
            }
        } else if template.num_vertices() == 0 {
            return Err(Error::domain("template has no vertices"));
        }
        Ok(Self::of(FamilyKind::PeriodicTemplate { template, repeat }))
    }

    pub fn finite(hypergraph: Hypergraph) -> Self {
        Self::of(FamilyKind::Finite { hypergraph })
    }

    /// Units (leaves, edges, copies, vertices) added per prefix index.
    pub fn with_step(mut self, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::domain("step must be at least 1"));
        }
        self.step = step;
        Ok(self)
    }

    pub fn with_tail(mut self, tail: GeometricTail) -> Self {
        self.tail = Some(tail);
        self
    }

    /// Declares the rank bound `k`; prefixes are checked against it.
    pub fn with_rank_bound(mut self, k: usize) -> Result<Self> {
        if self.rank() > k {
            return Err(Error::domain(format!(
                "family rank {} exceeds declared bound {k}",
                self.rank()
            )));
        }
        self.rank_bound = Some(k);
        Ok(self)
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Rank of the presented countable hypergraph.
    pub fn rank(&self) -> usize {
        match &self.kind {
            FamilyKind::InfiniteStar | FamilyKind::RayPath => 2,
            FamilyKind::InfiniteMatching { k } => *k,
            FamilyKind::DisjointCopies { template }
            | FamilyKind::PeriodicTemplate { template, .. } => template.rank(),
            FamilyKind::Finite { hypergraph } => hypergraph.rank(),
        }
    }

    pub fn name(&self) -> &'static str {
        match &self.kind {
            FamilyKind::InfiniteStar => "infinite_star",
            FamilyKind::InfiniteMatching { .. } => "infinite_k_matching",
            FamilyKind::RayPath => "ray_path",
            FamilyKind::DisjointCopies { .. } => "disjoint_copies",
            FamilyKind::PeriodicTemplate { .. } => "periodic_template",
            FamilyKind::Finite { .. } => "finite",
        }
    }

    fn units(&self, n: usize) -> usize {
        n.saturating_mul(self.step)
    }

    /// `|V(C_n)|` without building the prefix.
    pub fn prefix_size(&self, n: usize) -> usize {
        let u = self.units(n);
        match &self.kind {
            FamilyKind::InfiniteStar => u.saturating_add(1),
            FamilyKind::InfiniteMatching { k } => u.saturating_mul(*k),
            FamilyKind::RayPath => u,
            FamilyKind::DisjointCopies { template } => u.saturating_mul(template.num_vertices()),
            FamilyKind::PeriodicTemplate { template, repeat } => match repeat {
                Repeat::Disjoint => u.saturating_mul(template.num_vertices()),
                Repeat::SharedVertex(_) => {
                    u.saturating_mul(template.num_vertices() - 1).saturating_add(1)
                }
            },
            FamilyKind::Finite { hypergraph } => u.min(hypergraph.num_vertices()),
        }
    }

    /// True once `C_n` is the whole (finite) presented hypergraph.
    pub fn is_complete_at(&self, n: usize) -> bool {
        match &self.kind {
            FamilyKind::Finite { hypergraph } => self.units(n) >= hypergraph.num_vertices(),
            _ => false,
        }
    }

    /// The prefix `C_n`, refusing when it would exceed `vertex_cap` vertices.
    pub fn prefix(&self, n: usize, vertex_cap: usize) -> Result<Hypergraph> {
        if n == 0 {
            return Err(Error::domain("prefix index starts at 1"));
        }
        let size = self.prefix_size(n);
        if size > vertex_cap {
            return Err(Error::Refused {
                what: "prefix vertex count",
                actual: size,
                cap: vertex_cap,
            });
        }
        let u = self.units(n);
        let h = match &self.kind {
            FamilyKind::InfiniteStar => {
                let mut labels = vec!["c".to_owned()];
                labels.extend((1..=u).map(|i| format!("y{i}")));
                let edges = (1..=u as u32).map(|i| vec![0, i]).collect();
                Hypergraph::new(labels, edges)?
            }
            FamilyKind::InfiniteMatching { k } => {
                let k = *k;
                let labels = (1..=u)
                    .flat_map(|i| (1..=k).map(move |j| format!("m{i}.{j}")))
                    .collect();
                let edges = (0..u)
                    .map(|i| ((i * k) as u32..((i + 1) * k) as u32).collect())
                    .collect();
                Hypergraph::new(labels, edges)?
            }
            FamilyKind::RayPath => {
                let labels = (1..=u).map(|i| format!("v{i}")).collect();
                let edges = (1..u as u32).map(|i| vec![i - 1, i]).collect();
                Hypergraph::new(labels, edges)?
            }
            FamilyKind::DisjointCopies { template }
            | FamilyKind::PeriodicTemplate {
                template,
                repeat: Repeat::Disjoint,
            } => copies(template, None, u)?,
            FamilyKind::PeriodicTemplate {
                template,
                repeat: Repeat::SharedVertex(w),
            } => copies(template, Some(*w), u)?,
            FamilyKind::Finite { hypergraph } => {
                let m = u.min(hypergraph.num_vertices()) as u32;
                crate::hypercore::induced_sub(
                    hypergraph,
                    &crate::hypercore::VertexSubset::new((0..m).collect()),
                )?
            }
        };
        if let Some(k) = self.rank_bound {
            h.check_rank(k)?;
        }
        Ok(h)
    }

    /// Bound on `sum p^|E \ S|` over edges `E` not in `C_n` with
    /// `E ∩ S ⊆ T`, where `S` is the first `s` vertices of `C_n` and `T` is
    /// given as a bitmask over `S`.
    pub fn tail(&self, n: usize, s: usize, t_mask: u64, p: &Probability) -> Tail {
        let edges_remain_outside_s = |t: &Hypergraph| t.num_edges() > 0;
        match &self.kind {
            // every unseen edge {c, y} meets S exactly in c = vertex 0
            FamilyKind::InfiniteStar => {
                if t_mask & 1 == 1 {
                    Tail::Divergent
                } else {
                    Tail::Bounded(BigRational::zero())
                }
            }
            // infinitely many unseen edges avoid S entirely
            FamilyKind::InfiniteMatching { .. } | FamilyKind::RayPath => Tail::Divergent,
            FamilyKind::DisjointCopies { template } => {
                if edges_remain_outside_s(template) {
                    Tail::Divergent
                } else {
                    Tail::Bounded(BigRational::zero())
                }
            }
            FamilyKind::PeriodicTemplate { .. } => match &self.tail {
                Some(g) => Tail::Bounded(&g.coefficient * pow(&g.ratio, n)),
                None => Tail::Unavailable,
            },
            FamilyKind::Finite { hypergraph } => {
                let m = self.prefix_size(n) as u32;
                let s = s as u32;
                let mut sum = BigRational::zero();
                for e in hypergraph.edges() {
                    if e.iter().all(|&v| v < m) {
                        continue;
                    }
                    let inner = e
                        .iter()
                        .filter(|&&v| v < s)
                        .fold(0u64, |acc, &v| acc | 1 << v);
                    if inner & !t_mask == 0 {
                        let outer = e.iter().filter(|&&v| v >= s).count();
                        sum += p.pow(outer);
                    }
                }
                Tail::Bounded(sum)
            }
        }
    }

    /// Whether a tail bound exists at all (false means upper bounds only).
    pub fn has_tail_oracle(&self) -> bool {
        !matches!(self.kind, FamilyKind::PeriodicTemplate { .. }) || self.tail.is_some()
    }
}

/// `u` copies of `template`; with `shared`, that vertex is common to all
/// copies and listed first.
fn copies(template: &Hypergraph, shared: Option<u32>, u: usize) -> Result<Hypergraph> {
    let mut labels = Vec::new();
    if let Some(w) = shared {
        labels.push(template.label(w).to_owned());
    }
    let own: Vec<u32> = (0..template.num_vertices() as u32)
        .filter(|&v| Some(v) != shared)
        .collect();
    let mut edges = Vec::new();
    for i in 1..=u {
        let base = labels.len() as u32;
        labels.extend(own.iter().map(|&v| format!("{}@{i}", template.label(v))));
        let map = |v: u32| -> u32 {
            if Some(v) == shared {
                0
            } else {
                base + own.binary_search(&v).expect("own vertex") as u32
            }
        };
        for e in template.edges() {
            edges.push(e.iter().map(|&v| map(v)).collect::<Vec<u32>>());
        }
    }
    Hypergraph::new(labels, edges)
}

impl Tail {
    /// `max(0, 1 - visible - tail)`, or zero when the tail is not finite.
    pub(crate) fn survival(&self, visible: &BigRational) -> BigRational {
        match self {
            Tail::Bounded(t) => {
                let v = BigRational::one() - visible - t;
                if v > BigRational::zero() {
                    v
                } else {
                    BigRational::zero()
                }
            }
            Tail::Divergent | Tail::Unavailable => BigRational::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{induced_sub, is_subset, parse, VertexSubset};

    const CAP: usize = 100_000;

        /// Residual weight of an explicit edge list, computed directly.
    fn residual_weight(
        edges: &[Vec<u32>],
        s: u32,
        t_mask: u64,
        p: &Probability,
    ) -> BigRational {
        let mut sum = BigRational::zero();
        for e in edges {
            if is_subset(e, &(0..s).collect::<Vec<_>>()) {
                continue;
            }
            let inner = e
                .iter()
                .filter(|&&v| v < s)
                .fold(0u64, |acc, &v| acc | 1 << v);
            if inner & !t_mask == 0 {
                sum += p.pow(e.iter().filter(|&&v| v >= s).count());
            }
        }
        sum
    }

    fn builtins() -> Vec<FamilySpec> {
        let tri = parse("edge: a b\nedge: b c\nedge: a c").unwrap();
        let fan = parse("edge: h x\nedge: x y").unwrap();
        vec![
            FamilySpec::infinite_star(),
            FamilySpec::infinite_star().with_step(2).unwrap(),
            FamilySpec::infinite_matching(2).unwrap(),
            FamilySpec::infinite_matching(3).unwrap().with_step(3).unwrap(),
            FamilySpec::ray_path(),
            FamilySpec::disjoint_copies(tri.clone()).unwrap(),
            FamilySpec::periodic(fan.clone(), Repeat::SharedVertex(0)).unwrap(),
            FamilySpec::periodic(fan, Repeat::Disjoint).unwrap(),
            FamilySpec::finite(tri),
        ]
    }

    #[test]
    fn star_prefix() {
        let c3 = FamilySpec::infinite_star().prefix(3, CAP).unwrap();
        assert_eq!(
            c3,
            Hypergraph::from_labels(
                &["c", "y1", "y2", "y3"],
                &[&["c", "y1"], &["c", "y2"], &["c", "y3"]]
            )
            .unwrap()
        );
    }

    #[test]
    fn matching_prefix() {
        let c4 = FamilySpec::infinite_matching(2).unwrap().prefix(4, CAP).unwrap();
        assert_eq!(c4.num_vertices(), 8);
        assert_eq!(c4.num_edges(), 4);
        assert_eq!(crate::density::matching_exact(&c4).unwrap().size(), 4);
    }

    #[test]
    fn ray_prefix() {
        let c5 = FamilySpec::ray_path().prefix(5, CAP).unwrap();
        assert_eq!((c5.num_vertices(), c5.num_edges()), (5, 4));
    }

    #[test]
    fn shared_vertex_copies() {
        let fan = parse("edge: h x\nedge: x y").unwrap();
        let f = FamilySpec::periodic(fan, Repeat::SharedVertex(0)).unwrap();
        let c2 = f.prefix(2, CAP).unwrap();
        assert_eq!(c2.labels(), &["h", "x@1", "y@1", "x@2", "y@2"]);
        assert_eq!(c2.num_edges(), 4);
        assert_eq!(f.prefix_size(2), 5);
    }

    #[test]
    fn prefixes_are_nested_and_induced() {
        for f in builtins() {
            for n in 1..8 {
                let small = f.prefix(n, CAP).unwrap();
                let big = f.prefix(n + 1, CAP).unwrap();
                assert_eq!(small.num_vertices(), f.prefix_size(n));
                let s = VertexSubset::new((0..small.num_vertices() as u32).collect());
                assert_eq!(induced_sub(&big, &s).unwrap(), small, "{} n = {n}", f.name());
                assert!(small.rank() <= f.rank());
            }
        }
    }

    #[test]
    fn prefix_cap_and_index() {
        let f = FamilySpec::infinite_star();
        assert!(matches!(f.prefix(10, 5), Err(Error::Refused { .. })));
        assert!(f.prefix(0, CAP).is_err());
    }

    #[test]
    fn rank_bound_declaration() {
        assert!(FamilySpec::infinite_matching(3).unwrap().with_rank_bound(2).is_err());
        let f = FamilySpec::ray_path().with_rank_bound(2).unwrap();
        assert!(f.prefix(4, CAP).is_ok());
    }

    #[test]
    fn finite_family_tail_is_exact_residual_weight() {
        let h = parse("edge: a b\nedge: b c\nedge: c d\nedge: a d e").unwrap();
        let f = FamilySpec::finite(h.clone());
        let p = Probability::ratio(1, 3).unwrap();
        // C_2 = {a, b}; S = {a}
        for t in [0u64, 1] {
            let unseen: Vec<Vec<u32>> = h
                .edges()
                .iter()
                .filter(|e| e.iter().any(|&v| v >= 2))
                .cloned()
                .collect();
            assert_eq!(
                f.tail(2, 1, t, &p),
                Tail::Bounded(residual_weight(&unseen, 1, t, &p))
            );
        }
        assert_eq!(f.tail(5, 5, 0, &p), Tail::Bounded(BigRational::zero()));
        assert!(f.is_complete_at(5));
        assert!(!f.is_complete_at(4));
    }

    #[test]
    fn periodic_tail_needs_declaration() {
        let fan = parse("edge: h x").unwrap();
        let f = FamilySpec::periodic(fan, Repeat::Disjoint).unwrap();
        assert!(!f.has_tail_oracle());
        assert_eq!(f.tail(1, 1, 0, &Probability::half()), Tail::Unavailable);
        let g = f.with_tail(GeometricTail {
            ratio: BigRational::new(1.into(), 2.into()),
            coefficient: BigRational::one(),
        });
        assert!(g.has_tail_oracle());
        assert_eq!(
            g.tail(3, 1, 0, &Probability::half()),
            Tail::Bounded(BigRational::new(1.into(), 8.into()))
        );
    }
}
