use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use crate::chains::{eval_to_tolerance, DensityEnclosure, EvalBudget, FamilyKind, FamilySpec};
use crate::density::{density_with, matching_exact, matching_greedy, BranchOptions, Probability};
use crate::error::{Error, Result};
use crate::hypercore::{antichain_reduce, induced_sub, Hypergraph, VertexSubset};
use crate::rational::format_rational;

/// Largest core for the `2^|V0|` scan.
pub const HEAVY_SCAN_CAP: usize = 16;

#[derive(Debug, Clone)]
pub struct DetectConfig {
    pub core_horizon: usize,
    /// Take only the first `m` vertices of the core-horizon prefix.
    pub core_size: Option<usize>,
    /// `None` uses `n1 = core_horizon + 2 * threshold`, `n2 = 2 * n1`.
    pub probes: Option<(usize, usize)>,
    pub threshold: usize,
    pub budget: EvalBudget,
}

impl DetectConfig {
    pub fn new(core_horizon: usize) -> Self {
        DetectConfig {
            core_horizon,
            core_size: None,
            probes: None,
            threshold: 3,
            budget: EvalBudget::default(),
        }
    }

    pub fn probes(&self) -> (usize, usize) {
        self.probes.unwrap_or_else(|| {
            let n1 = self.core_horizon + 2 * self.threshold;
            (n1, 2 * n1)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavySet {
    /// Indices into `V0` (which are also indices into every later prefix).
    pub set: VertexSubset,
    /// Neighbourhood matching sizes at the two probe horizons.
    pub evidence: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavySetReport {
    /// `H0 = C_core[V0]`.
    pub core: Hypergraph,
    pub core_vertices: VertexSubset,
    pub core_horizon: usize,
    pub probes: (usize, usize),
    pub threshold: usize,
    /// Sorted by size, then members.
    pub heavy_sets: Vec<HeavySet>,
}

impl HeavySetReport {
    pub fn has_empty_set(&self) -> bool {
        self.heavy_sets.iter().any(|a| a.set.is_empty())
    }

    /// One `heavy:` line per set, after a short header.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let v0 = self.core_vertices.labels(&self.core).join(" ");
        let _ = writeln!(out, "core_horizon: {}", self.core_horizon);
        let _ = writeln!(out, "core_vertices: {v0}");
        let _ = writeln!(out, "probes: {} {}", self.probes.0, self.probes.1);
        let _ = writeln!(out, "threshold: {}", self.threshold);
        for a in &self.heavy_sets {
            let _ = writeln!(
                out,
                "heavy: {{{}}} {} {}",
                a.set.labels(&self.core).join(" "),
                a.evidence.0,
                a.evidence.1
            );
        }
        out
    }
}

/// Matching number of the residual edges, exact when affordable.
fn matching_number(residuals: &[Vec<u32>]) -> Result<usize> {
    if residuals.is_empty() {
        return Ok(0);
    }
    let mut ids: BTreeMap<u32, u32> = BTreeMap::new();
    for e in residuals {
        for &v in e {
            let next = ids.len() as u32;
            ids.entry(v).or_insert(next);
        }
    }
    let labels = ids.keys().map(|v| v.to_string()).collect();
    let edges = residuals
        .iter()
        .map(|e| e.iter().map(|v| ids[v]).collect())
        .collect();
    let h = Hypergraph::new(labels, edges)?;
    match matching_exact(&h) {
        Ok(m) => Ok(m.size()),
        Err(Error::Refused { .. }) => Ok(matching_greedy(&h).size()),
        Err(e) => Err(e),
    }
}

/// Groups residuals `E \ V0` of edges leaving `V0` by `E ∩ V0` (a bitmask).
fn residuals_by_trace(c: &Hypergraph, m: u32) -> BTreeMap<u32, Vec<Vec<u32>>> {
    let mut groups: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for e in c.edges() {
        let outer: Vec<u32> = e.iter().copied().filter(|&v| v >= m).collect();
        if outer.is_empty() {
            continue;
        }
        let trace = e.iter().filter(|&&v| v < m).fold(0u32, |a, &v| a | 1 << v);
        groups.entry(trace).or_default().push(outer);
    }
    groups
}

/// Scans independent `A ⊆ V0` for neighbourhood matchings that reach the
/// threshold at the first probe and keep growing at the second.
///
/// This is evidence of an infinite matching, not a proof.
pub fn detect_heavy_sets(f: &FamilySpec, cfg: &DetectConfig) -> Result<HeavySetReport> {
    let (n1, n2) = cfg.probes();
    if cfg.core_horizon == 0 {
        return Err(Error::domain("core horizon starts at 1"));
    }
    if n1 >= n2 {
        return Err(Error::domain(format!("probe horizons must increase, got {n1} and {n2}")));
    }
    if n1 < cfg.core_horizon {
        return Err(Error::domain("probe horizons must not precede the core horizon"));
    }
    if cfg.threshold < 2 {
        return Err(Error::domain("heaviness threshold must be at least 2"));
    }
    let cap = cfg.budget.max_vertices;
    let c0 = f.prefix(cfg.core_horizon, cap)?;
    let m = cfg
        .core_size
        .unwrap_or(c0.num_vertices())
        .min(c0.num_vertices());
    if m > HEAVY_SCAN_CAP {
        return Err(Error::Refused {
            what: "heavy-set core size",
            actual: m,
            cap: HEAVY_SCAN_CAP,
        });
    }
    let core_vertices = VertexSubset::new((0..m as u32).collect());
    let core = induced_sub(&c0, &core_vertices)?;
    let core_masks: Vec<u32> = core
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |a, &v| a | 1 << v))
        .collect();
    let candidates: Vec<u32> = (0..1u32 << m)
        .filter(|&a| core_masks.iter().all(|&e| e & !a != 0))
        .collect();

    let g1 = residuals_by_trace(&f.prefix(n1, cap)?, m as u32);
    let g2 = residuals_by_trace(&f.prefix(n2, cap)?, m as u32);
    let empty = Vec::new();
    let exec = cfg.budget.exec;
    let scored = exec.map(candidates, |a| -> Result<Option<HeavySet>> {
        let mu1 = matching_number(g1.get(&a).unwrap_or(&empty))?;
        if mu1 < cfg.threshold {
            return Ok(None);
        }
        let mu2 = matching_number(g2.get(&a).unwrap_or(&empty))?;
        Ok((mu2 > mu1).then(|| HeavySet {
            set: VertexSubset::new((0..m as u32).filter(|v| a >> v & 1 == 1).collect()),
            evidence: (mu1, mu2),
        }))
    });
    let mut heavy_sets = Vec::new();
    for s in scored {
        heavy_sets.extend(s?);
    }
    heavy_sets.sort_by(|a, b| {
        (a.set.len(), a.set.as_slice()).cmp(&(b.set.len(), b.set.as_slice()))
    });
    Ok(HeavySetReport {
        core,
        core_vertices,
        core_horizon: cfg.core_horizon,
        probes: (n1, n2),
        threshold: cfg.threshold,
        heavy_sets,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteCore {
    /// The empty set is heavy: the density is 0.
    ZeroDensity,
    Core(Hypergraph),
}

impl FiniteCore {
    pub fn density(&self, p: &Probability, opts: &BranchOptions) -> Result<BigRational> {
        match self {
            FiniteCore::ZeroDensity => Ok(BigRational::zero()),
            FiniteCore::Core(h) => Ok(density_with(h, p, opts)?.into_inner()),
        }
    }

    pub fn hypergraph(&self) -> Option<&Hypergraph> {
        match self {
            FiniteCore::ZeroDensity => None,
            FiniteCore::Core(h) => Some(h),
        }
    }
}

/// `H' = H0 ∪ heavy sets`, antichain-reduced.
pub fn finite_core(f: &FamilySpec, report: &HeavySetReport) -> Result<FiniteCore> {
    if report.has_empty_set() {
        return Ok(FiniteCore::ZeroDensity);
    }
    let mut h = report.core.clone();
    for a in &report.heavy_sets {
        h = h.with_edge(&a.set)?;
    }
    let h = antichain_reduce(&h);
    if h.rank() > f.rank() {
        return Err(Error::domain(format!(
            "finite core has rank {} above the family's rank {}",
            h.rank(),
            f.rank()
        )));
    }
    Ok(FiniteCore::Core(h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted,
    /// Inside the widened enclosure, but the enclosure never reached `tol`.
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub verdict: Verdict,
    pub value: BigRational,
    pub enclosure: DensityEnclosure,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Verified
    }
}

/// Checks a claimed limit density against the family's enclosure widened
/// by `tol`.
pub fn verify_value(
    f: &FamilySpec,
    value: &BigRational,
    p: &Probability,
    tol: &BigRational,
    budget: &EvalBudget,
) -> Result<Verification> {
    let enclosure = eval_to_tolerance(f, p, tol, budget)?;
    let verdict = if !enclosure.contains_within(value, tol) {
        Verdict::Refuted
    } else if enclosure.converged {
        Verdict::Verified
    } else {
        Verdict::Indeterminate
    };
    Ok(Verification {
        verdict,
        value: value.clone(),
        enclosure,
    })
}

pub fn verify_core(
    f: &FamilySpec,
    core: &FiniteCore,
    p: &Probability,
    tol: &BigRational,
    budget: &EvalBudget,
) -> Result<Verification> {
    let opts = BranchOptions {
        exec: budget.exec,
        ..BranchOptions::default()
    };
    let value = core.density(p, &opts)?;
    verify_value(f, &value, p, tol, budget)
}

#[derive(Debug, Clone)]
pub struct FinitizeConfig {
    /// `None` starts at 1, or at the full hypergraph for finite families.
    pub core_horizon: Option<usize>,
    pub core_size: Option<usize>,
    pub probes: Option<(usize, usize)>,
    pub threshold: usize,
    /// Refuted rounds double the core horizon, up to this many rounds.
    pub max_rounds: usize,
    /// Drop vertices in no edge from the core (infinite families only).
    pub trim_isolated: bool,
    pub budget: EvalBudget,
}

impl Default for FinitizeConfig {
    fn default() -> Self {
        FinitizeConfig {
            core_horizon: None,
            core_size: None,
            probes: None,
            threshold: 3,
            max_rounds: 4,
            trim_isolated: true,
            budget: EvalBudget::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Finitization {
    pub report: HeavySetReport,
    pub core: FiniteCore,
    pub verification: Verification,
    pub rounds: usize,
}

fn trim_isolated(core: FiniteCore) -> Result<FiniteCore> {
    match core {
        FiniteCore::ZeroDensity => Ok(core),
        FiniteCore::Core(h) => {
            let mut used: Vec<u32> = h.edges().iter().flatten().copied().collect();
            used.sort_unstable();
            used.dedup();
            Ok(FiniteCore::Core(induced_sub(&h, &VertexSubset::new(used))?))
        }
    }
}

fn default_core_horizon(f: &FamilySpec) -> usize {
    match f.kind() {
        FamilyKind::Finite { hypergraph } => hypergraph.num_vertices().div_ceil(f.step()).max(1),
        _ => 1,
    }
}

/// Detect, build the core, verify; on refutation retry with a doubled core
/// horizon. Returns the last round.
pub fn finitize(
    f: &FamilySpec,
    p: &Probability,
    tol: &BigRational,
    cfg: &FinitizeConfig,
) -> Result<Finitization> {
    let mut horizon = cfg.core_horizon.unwrap_or_else(|| default_core_horizon(f));
    let mut rounds = 0;
    loop {
        rounds += 1;
        let detect = DetectConfig {
            core_horizon: horizon,
            core_size: cfg.core_size,
            probes: if rounds == 1 { cfg.probes } else { None },
            threshold: cfg.threshold,
            budget: cfg.budget.clone(),
        };
        let report = detect_heavy_sets(f, &detect)?;
        let mut core = finite_core(f, &report)?;
        if cfg.trim_isolated && !matches!(f.kind(), FamilyKind::Finite { .. }) {
            core = trim_isolated(core)?;
        }
        let verification = verify_core(f, &core, p, tol, &cfg.budget)?;
        let done = verification.verdict != Verdict::Refuted
            || rounds >= cfg.max_rounds
            || cfg.core_size.is_some();
        if done {
            return Ok(Finitization {
                report,
                core,
                verification,
                rounds,
            });
        }
        horizon *= 2;
    }
}

impl std::fmt::Display for Verification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} ({} in {})",
            self.verdict.as_str(),
            format_rational(&self.value),
            self.enclosure
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::parse;
    use crate::rational::ratio;

    fn tol() -> BigRational {
        ratio(1, 1_000_000_000)
    }

    #[test]
    fn star_single_vertex_core() {
        let f = FamilySpec::infinite_star();
        let cfg = DetectConfig {
            core_size: Some(1),
            probes: Some((3, 6)),
            ..DetectConfig::new(3)
        };
        let r = detect_heavy_sets(&f, &cfg).unwrap();
        assert_eq!(r.core_vertices.labels(&r.core), vec!["c"]);
        assert_eq!(r.heavy_sets.len(), 1);
        assert_eq!(r.heavy_sets[0].set.labels(&r.core), vec!["c"]);
        assert_eq!(r.heavy_sets[0].evidence, (3, 6));
        assert!(r.to_text().contains("heavy: {c} 3 6\n"));

        let core = finite_core(&f, &r).unwrap();
        let want = Hypergraph::from_labels(&["c"], &[&["c"]]).unwrap();
        assert_eq!(core, FiniteCore::Core(want));
        for p in [ratio(1, 2), ratio(2, 3), ratio(1, 3)] {
            let pp = Probability::new(p.clone()).unwrap();
            let v = verify_core(&f, &core, &pp, &tol(), &EvalBudget::default()).unwrap();
            assert!(v.passed(), "{v}");
            assert_eq!(v.value, ratio(1, 1) - p);
        }
    }

    #[test]
    fn star_default_core() {
        let f = FamilySpec::infinite_star();
        let r = detect_heavy_sets(&f, &DetectConfig::new(1)).unwrap();
        // V0 = {c, y1}; {c} is heavy, {y1} and ∅ are not
        assert_eq!(r.heavy_sets.len(), 1);
        assert_eq!(r.heavy_sets[0].set.labels(&r.core), vec!["c"]);
        let core = finite_core(&f, &r).unwrap();
        let h = core.hypergraph().unwrap();
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(h.edges(), &[vec![0]]);
    }

    #[test]
    fn matching_has_empty_heavy_set() {
        let f = FamilySpec::infinite_matching(2).unwrap();
        let r = detect_heavy_sets(&f, &DetectConfig::new(1)).unwrap();
        assert_eq!(r.core.num_vertices(), 2);
        assert!(r.has_empty_set());
        assert!(r.heavy_sets[0].evidence.0 < r.heavy_sets[0].evidence.1);
        let core = finite_core(&f, &r).unwrap();
        assert_eq!(core, FiniteCore::ZeroDensity);
        let v = verify_core(&f, &core, &Probability::half(), &ratio(1, 100), &EvalBudget::default())
            .unwrap();
        assert!(v.passed(), "{v}");
    }

    #[test]
    fn finite_family_has_no_heavy_sets() {
        let h = parse("edge: a b\nedge: b c\nedge: c d\nedge: x y z").unwrap();
        let f = FamilySpec::finite(h.clone());
        let out = finitize(&f, &Probability::half(), &tol(), &FinitizeConfig::default()).unwrap();
        assert!(out.report.heavy_sets.is_empty());
        assert_eq!(out.core, FiniteCore::Core(h));
        assert!(out.verification.passed());
        assert_eq!(out.rounds, 1);
    }

    #[test]
    fn wrong_core_refuted() {
        let f = FamilySpec::infinite_star();
        let wrong = FiniteCore::Core(Hypergraph::edgeless(vec!["c".into()]).unwrap());
        let v = verify_core(&f, &wrong, &Probability::half(), &tol(), &EvalBudget::default())
            .unwrap();
        assert_eq!(v.verdict, Verdict::Refuted);
    }

    #[test]
    fn unconverged_is_indeterminate() {
        let f = FamilySpec::ray_path();
        let budget = EvalBudget {
            max_vertices: 8,
            ..EvalBudget::default()
        };
        let v = verify_value(&f, &ratio(0, 1), &Probability::half(), &tol(), &budget).unwrap();
        assert_eq!(v.verdict, Verdict::Indeterminate);
    }

    #[test]
    fn ray_path_density_zero() {
        let f = FamilySpec::ray_path();
        let out = finitize(&f, &Probability::half(), &ratio(1, 1000), &FinitizeConfig::default())
            .unwrap();
        assert_eq!(out.core, FiniteCore::ZeroDensity);
    }

    #[test]
    fn star_driver_gives_singleton_core() {
        let f = FamilySpec::infinite_star();
        for p in [ratio(1, 3), ratio(1, 2)] {
            let p = Probability::new(p).unwrap();
            let out = finitize(&f, &p, &tol(), &FinitizeConfig::default()).unwrap();
            let want = Hypergraph::from_labels(&["c"], &[&["c"]]).unwrap();
            assert_eq!(out.core, FiniteCore::Core(want));
            assert!(out.verification.passed());
        }
    }

    #[test]
    fn argument_checks() {
        let f = FamilySpec::infinite_star();
        let bad = |c: DetectConfig| detect_heavy_sets(&f, &c).is_err();
        assert!(bad(DetectConfig { probes: Some((5, 5)), ..DetectConfig::new(1) }));
        assert!(bad(DetectConfig { threshold: 1, ..DetectConfig::new(1) }));
        assert!(bad(DetectConfig::new(0)));
        let big = detect_heavy_sets(&f, &DetectConfig::new(20));
        assert!(matches!(big, Err(Error::Refused { .. })));
    }

    #[test]
    fn core_rank_within_family_rank() {
        for f in [
            FamilySpec::infinite_star(),
            FamilySpec::disjoint_copies(parse("edge: a b c\nedge: c d").unwrap()).unwrap(),
        ] {
            let r = detect_heavy_sets(&f, &DetectConfig::new(1)).unwrap();
            if let FiniteCore::Core(h) = finite_core(&f, &r).unwrap() {
                assert!(h.rank() <= f.rank());
            }
        }
    }
}
