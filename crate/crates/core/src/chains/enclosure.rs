//! Certified enclosures of chain-limit densities.
//!
//! The upper side is `id_p(C_n)`, non-increasing in `n`. The lower side
//! conditions on a finite core `S` (the first `s` vertices of `C_n`): for
//! each independent `T ⊆ S` the remaining event is that no residual edge
//! `E \ S` (over edges with `E ∩ S ⊆ T`) is fully selected, which the union
//! bound puts at `>= 1 - W_in(T) - tail(T)`. Weighting by
//! `p^|T| (1-p)^|S \ T|` and summing gives a sound lower bound.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FamilySpec;
use crate::density::{density_with, BranchOptions, DensityValue, Probability};
use crate::error::{Error, Result};
use crate::exec::{Deadline, Exec};
use crate::rational::format_rational;

pub const DEFAULT_VERTEX_BUDGET: usize = 100_000;
pub const DEFAULT_TIME_CAP_SECS: u64 = 60;

/// Largest conditioning core; the lower bound enumerates `2^s` subsets.
pub const CONDITIONING_CAP: usize = 16;

#[derive(Debug, Clone)]
pub struct EvalBudget {
    pub max_vertices: usize,
    pub time_limit: Duration,
    pub exec: Exec,
    /// Conditioning-core size; `None` picks `min(8, |V(C_1)| + 2)`.
    pub conditioning: Option<usize>,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            max_vertices: DEFAULT_VERTEX_BUDGET,
            time_limit: Duration::from_secs(DEFAULT_TIME_CAP_SECS),
            exec: Exec::default(),
            conditioning: None,
        }
    }
}

impl EvalBudget {
    fn conditioning_for(&self, f: &FamilySpec) -> usize {
        self.conditioning
            .unwrap_or_else(|| 8.min(f.prefix_size(1) + 2))
            .min(CONDITIONING_CAP)
    }
}

/// `lower <= id_p(H) <= upper`, established at prefix index `horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityEnclosure {
    pub lower: BigRational,
    pub upper: BigRational,
    pub horizon: usize,
    /// Width reached the requested tolerance.
    pub converged: bool,
    /// No tail bound is known; `lower` is the trivial 0.
    pub upper_only: bool,
}

impl DensityEnclosure {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn overlaps(&self, other: &DensityEnclosure) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    /// `[lower - tol, upper + tol]` contains `x`.
    pub fn contains_within(&self, x: &BigRational, tol: &BigRational) -> bool {
        &(&self.lower - tol) <= x && x <= &(&self.upper + tol)
    }

    fn trivial() -> Self {
        DensityEnclosure {
            lower: BigRational::zero(),
            upper: BigRational::one(),
            horizon: 0,
            converged: false,
            upper_only: false,
        }
    }
}

impl std::fmt::Display for DensityEnclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}] at horizon {}",
            format_rational(&self.lower),
            format_rational(&self.upper),
            self.horizon
        )
    }
}

/// `id_p(C_n)`, an upper bound on the limit density.
pub fn chain_upper(
    f: &FamilySpec,
    p: &Probability,
    n: usize,
    budget: &EvalBudget,
) -> Result<DensityValue> {
    upper_at(f, p, n, budget, Deadline::NONE)
}

fn upper_at(
    f: &FamilySpec,
    p: &Probability,
    n: usize,
    budget: &EvalBudget,
    deadline: Deadline,
) -> Result<DensityValue> {
    let c = f.prefix(n, budget.max_vertices)?;
    let opts = BranchOptions {
        exec: budget.exec,
        deadline,
        ..Default::default()
    };
    density_with(&c, p, &opts)
}

/// The conditional union-bound lower bound at horizon `n` with a core of
/// the first `s` vertices.
fn lower_at(
    f: &FamilySpec,
    p: &Probability,
    n: usize,
    s: usize,
    budget: &EvalBudget,
) -> Result<BigRational> {
    if !f.has_tail_oracle() {
        return Ok(BigRational::zero());
    }
    let c = f.prefix(n, budget.max_vertices)?;
    let s = s.min(c.num_vertices());
    let su = s as u32;

    let mut inside: Vec<u64> = Vec::new();
    // E ∩ S mask -> counts of |E \ S|
    let mut crossing: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for e in c.edges() {
        let inner = e
            .iter()
            .filter(|&&v| v < su)
            .fold(0u64, |m, &v| m | 1 << v);
        let outer = e.iter().filter(|&&v| v >= su).count();
        if outer == 0 {
            inside.push(inner);
        } else {
            let slot = crossing.entry(inner).or_default();
            if slot.len() <= outer {
                slot.resize(outer + 1, 0);
            }
            slot[outer] += 1;
        }
    }
    // weight of each crossing group, sum_o count_o p^o
    let groups: Vec<(u64, BigRational)> = crossing
        .into_iter()
        .map(|(mask, counts)| {
            let w = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(o, &c)| p.pow(o) * BigRational::from_integer(c.into()))
                .fold(BigRational::zero(), |a, b| a + b);
            (mask, w)
        })
        .collect();

    let p_pows: Vec<BigRational> = (0..=s).map(|j| p.pow(j)).collect();
    let q = p.complement();
    let q_pows: Vec<BigRational> = (0..=s).map(|j| crate::rational::pow(&q, j)).collect();

    let term = |t: u64| -> BigRational {
        if inside.iter().any(|&m| m & !t == 0) {
            return BigRational::zero();
        }
        let visible = groups
            .iter()
            .filter(|(m, _)| m & !t == 0)
            .fold(BigRational::zero(), |a, (_, w)| a + w);
        let survival = f.tail(n, s, t, p).survival(&visible);
        if survival.is_zero() {
            return survival;
        }
        let k = t.count_ones() as usize;
        survival * &p_pows[k] * &q_pows[s - k]
    };
    Ok(budget
        .exec
        .map_reduce(1u64 << s, term, BigRational::zero, |a, b| a + b))
}

/// Horizons `1, 2, 4, ...` strictly below `n`, then `n`.
fn schedule_up_to(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |h| h.checked_mul(2))
        .take_while(|&h| h < n)
        .collect();
    out.push(n);
    out
}

/// Enclosure at horizon `n`: upper is `id_p(C_n)`, lower is the running
/// maximum of the conditional bound over the doubling schedule up to `n`.
pub fn enclosure(
    f: &FamilySpec,
    p: &Probability,
    n: usize,
    s: usize,
    budget: &EvalBudget,
) -> Result<DensityEnclosure> {
    if n == 0 {
        return Err(Error::domain("horizon starts at 1"));
    }
    let upper = upper_at(f, p, n, budget, Deadline::NONE)?.into_inner();
    let lower = if f.is_complete_at(n) {
        upper.clone()
    } else {
        let lowers = budget
            .exec
            .map(schedule_up_to(n), |h| lower_at(f, p, h, s, budget));
        lowers
            .into_iter()
            .try_fold(BigRational::zero(), |acc, l| l.map(|l| acc.max(l)))?
    };
    Ok(DensityEnclosure {
        converged: lower == upper,
        lower,
        upper,
        horizon: n,
        upper_only: !f.has_tail_oracle(),
    })
}

/// Doubles the horizon until the enclosure is at most `tol` wide, or the
/// vertex or time budget runs out (then `converged` is false).
pub fn eval_to_tolerance(
    f: &FamilySpec,
    p: &Probability,
    tol: &BigRational,
    budget: &EvalBudget,
) -> Result<DensityEnclosure> {
    if *tol <= BigRational::zero() {
        return Err(Error::domain("tolerance must be positive"));
    }
    let deadline = Deadline::at(Instant::now() + budget.time_limit);
    let s = budget.conditioning_for(f);
    let mut best = DensityEnclosure::trivial();
    best.upper_only = !f.has_tail_oracle();

    let mut n = 1usize;
    loop {
        if f.prefix_size(n) > budget.max_vertices {
            break;
        }
        let upper = match upper_at(f, p, n, budget, deadline) {
            Ok(u) => u.into_inner(),
            Err(Error::Deadline) => break,
            Err(e) => return Err(e),
        };
        let complete = f.is_complete_at(n);
        let lower = if complete {
            upper.clone()
        } else {
            lower_at(f, p, n, s, budget)?
        };
        if upper < best.upper {
            best.upper = upper;
        }
        if lower > best.lower {
            best.lower = lower;
        }
        best.horizon = n;
        if best.width() <= *tol {
            best.converged = true;
            break;
        }
        if complete || deadline.expired() {
            break;
        }
        match n.checked_mul(2) {
            Some(m) => n = m,
            None => break,
        }
    }
    Ok(best)
}

/// Whether the enclosures of two presentations overlap at tolerance `tol`.
pub fn chain_agreement_check(
    f: &FamilySpec,
    g: &FamilySpec,
    p: &Probability,
    tol: &BigRational,
    budget: &EvalBudget,
) -> Result<bool> {
    let a = eval_to_tolerance(f, p, tol, budget)?;
    let b = eval_to_tolerance(g, p, tol, budget)?;
    Ok(a.overlaps(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::Repeat;
    use crate::density::{eval_density, profile_oracle};
    use crate::hypercore::parse;
    use crate::rational::{pow, ratio};

    fn budget() -> EvalBudget {
        EvalBudget::default()
    }

    #[test]
    fn schedule() {
        assert_eq!(schedule_up_to(1), vec![1]);
        assert_eq!(schedule_up_to(5), vec![1, 2, 4, 5]);
        assert_eq!(schedule_up_to(8), vec![1, 2, 4, 8]);
    }

    #[test]
    fn star_upper_at_two_leaves() {
        let u = chain_upper(&FamilySpec::infinite_star(), &Probability::half(), 2, &budget())
            .unwrap();
        assert_eq!(u.value(), &ratio(5, 8));
    }

    #[test]
    fn matching_upper_is_power() {
        let f = FamilySpec::infinite_matching(2).unwrap();
        for m in 1..6 {
            let u = chain_upper(&f, &Probability::half(), m, &budget()).unwrap();
            assert_eq!(u.value(), &pow(&ratio(3, 4), m));
        }
    }

    #[test]
    fn ray_upper_is_fibonacci_ratio() {
        let f = FamilySpec::ray_path();
        let fib = [1i64, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for n in 1..10 {
            let u = chain_upper(&f, &Probability::half(), n, &budget()).unwrap();
            assert_eq!(u.value(), &ratio(fib[n + 1], 1i64 << n), "n = {n}");
        }
        let u = chain_upper(&f, &Probability::half(), 4, &budget()).unwrap();
        assert_eq!(u.value(), &ratio(8, 16));
    }

    #[test]
    fn star_lower_is_exactly_one_minus_p() {
        let f = FamilySpec::infinite_star();
        for p in [ratio(1, 3), ratio(1, 2), ratio(2, 3)] {
            let p = Probability::new(p).unwrap();
            for n in [1, 2, 3, 7, 16] {
                let e = enclosure(&f, &p, n, 4, &budget()).unwrap();
                assert_eq!(e.lower, p.complement(), "n = {n}");
                assert!(e.contains(&p.complement()));
                // id_p(C_n) = (1 - p) + p (1 - p)^n
                assert_eq!(e.width(), p.value() * pow(&p.complement(), n));
            }
        }
    }

    #[test]
    fn matching_width_is_exact_power() {
        for k in [2usize, 3] {
            let f = FamilySpec::infinite_matching(k).unwrap();
            let p = Probability::half();
            for n in [1, 3, 8] {
                let e = enclosure(&f, &p, n, 8, &budget()).unwrap();
                assert_eq!(e.lower, BigRational::zero());
                assert_eq!(e.width(), pow(&(BigRational::one() - p.pow(k)), n));
            }
        }
    }

    #[test]
    fn lower_bound_is_sound_against_oracle_of_finite_family() {
        // finite family: the limit is the density of the whole hypergraph
        let h = parse("edge: a b\nedge: b c d\nedge: d e\nedge: a e f\nedge: f g").unwrap();
        let f = FamilySpec::finite(h.clone());
        let p = Probability::ratio(2, 5).unwrap();
        let exact = eval_density(&profile_oracle(&h).unwrap(), &p).into_inner();
        for n in 1..h.num_vertices() {
            for s in 0..=n {
                let l = lower_at(&f, &p, n, s, &budget()).unwrap();
                assert!(l <= exact, "n = {n}, s = {s}");
            }
            let e = enclosure(&f, &p, n, 3, &budget()).unwrap();
            assert!(e.contains(&exact));
        }
        let e = enclosure(&f, &p, h.num_vertices(), 3, &budget()).unwrap();
        assert_eq!((e.lower.clone(), e.upper.clone()), (exact.clone(), exact));
    }

    #[test]
    fn edgeless_copies_have_density_one() {
        let f = FamilySpec::disjoint_copies(parse("vertices: a b").unwrap()).unwrap();
        let e = eval_to_tolerance(&f, &Probability::half(), &ratio(1, 1000), &budget()).unwrap();
        assert_eq!((e.lower, e.upper), (BigRational::one(), BigRational::one()));
        assert!(e.converged);
    }

    #[test]
    fn star_to_tolerance() {
        let tol = ratio(1, 1_000_000_000);
        for p in [ratio(1, 2), ratio(2, 3)] {
            let p = Probability::new(p).unwrap();
            let e = eval_to_tolerance(&FamilySpec::infinite_star(), &p, &tol, &budget()).unwrap();
            assert!(e.converged);
            assert!(e.contains(&p.complement()));
            assert!(e.width() <= tol);
        }
    }

    #[test]
    fn matching_three_to_tolerance() {
        let tol = ratio(1, 1_000_000);
        let f = FamilySpec::infinite_matching(3).unwrap();
        let e = eval_to_tolerance(&f, &Probability::half(), &tol, &budget()).unwrap();
        assert!(e.converged);
        assert_eq!(e.lower, BigRational::zero());
        assert!(e.upper <= tol);
        assert_eq!(e.upper, pow(&ratio(7, 8), e.horizon));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let b = EvalBudget {
            max_vertices: 40,
            ..Default::default()
        };
        let f = FamilySpec::ray_path();
        let e = eval_to_tolerance(&f, &Probability::half(), &ratio(1, 1_000_000), &b).unwrap();
        assert!(!e.converged);
        assert_eq!(e.horizon, 32);
        assert_eq!(e.lower, BigRational::zero());
        assert!(e.upper > BigRational::zero());
    }

    #[test]
    fn periodic_without_tail_is_upper_only() {
        let t = parse("edge: h x").unwrap();
        let f = FamilySpec::periodic(t, Repeat::SharedVertex(0)).unwrap();
        let e = eval_to_tolerance(
            &f,
            &Probability::half(),
            &ratio(1, 1000),
            &EvalBudget {
                max_vertices: 200,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(e.upper_only);
        assert!(!e.converged);
        assert_eq!(e.lower, BigRational::zero());
        assert!(e.contains(&ratio(1, 2)));
    }

    #[test]
    fn agreement_between_presentations() {
        let tol = ratio(1, 1_000_000);
        let half = Probability::half();
        let b = budget();
        let star = FamilySpec::infinite_star();
        let star2 = FamilySpec::infinite_star().with_step(2).unwrap();
        let m = FamilySpec::infinite_matching(2).unwrap();
        let m2 = FamilySpec::infinite_matching(2).unwrap().with_step(2).unwrap();
        assert!(chain_agreement_check(&star, &star2, &half, &tol, &b).unwrap());
        assert!(chain_agreement_check(&m, &m2, &half, &tol, &b).unwrap());
        assert!(!chain_agreement_check(&star, &m, &half, &tol, &b).unwrap());
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let f = FamilySpec::infinite_star();
        assert!(eval_to_tolerance(&f, &Probability::half(), &BigRational::zero(), &budget()).is_err());
    }
}
