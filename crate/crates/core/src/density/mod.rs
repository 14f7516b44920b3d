//! Independence profiles and exact p-densities of finite hypergraphs.

mod bounds;
mod branching;
mod matching;
mod oracle;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use bounds::{add_set_sandwich, matching_upper_bound, Sandwich};
pub use branching::{profile_branching, profile_branching_with, BranchOptions};
pub use matching::{matching_exact, matching_greedy, Matching, MATCHING_EXACT_CAP};
pub use oracle::{profile_oracle, profile_oracle_with, ORACLE_VERTEX_CAP};

use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;
use crate::rational::format_rational;

/// An exact probability strictly between 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(BigRational);

impl Probability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value <= BigRational::zero() || value >= BigRational::one() {
            return Err(Error::domain(format!(
                "probability {} is not in the open interval (0,1)",
                format_rational(&value)
            )));
        }
        Ok(Probability(value))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        Probability::new(BigRational::new(num.into(), den.into()))
    }

    pub fn half() -> Self {
        Probability(BigRational::new(1.into(), 2.into()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Probability::new(crate::rational::parse_rational(text)?)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// `1 - p`.
    pub fn complement(&self) -> BigRational {
        BigRational::one() - &self.0
    }

    pub fn is_half(&self) -> bool {
        self.0 == BigRational::new(1.into(), 2.into())
    }

    pub fn pow(&self, e: usize) -> BigRational {
        crate::rational::pow(&self.0, e)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

/// An exact density in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DensityValue(BigRational);

impl DensityValue {
    pub fn new(value: BigRational) -> Result<Self> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(Error::domain(format!(
                "density {} is outside [0,1]",
                format_rational(&value)
            )));
        }
        Ok(DensityValue(value))
    }

    pub fn zero() -> Self {
        DensityValue(BigRational::zero())
    }

    pub fn one() -> Self {
        DensityValue(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

/// `counts[j]` is the number of independent sets of size `j`; the vertex
/// count is `counts.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndependenceProfile {
    counts: Vec<BigUint>,
}

impl IndependenceProfile {
    /// Validates `i_0 = 1` and `i_j <= C(n, j)`.
    pub fn from_counts(counts: Vec<BigUint>) -> Result<Self> {
        if counts.first() != Some(&BigUint::one()) {
            return Err(Error::domain("profile must start with i_0 = 1"));
        }
        let n = counts.len() - 1;
        let mut binom = BigUint::one();
        for (j, c) in counts.iter().enumerate() {
            if c > &binom {
                return Err(Error::domain(format!("i_{j} exceeds C({n},{j})")));
            }
            binom = binom * BigUint::from(n - j) / BigUint::from(j + 1);
        }
        Ok(IndependenceProfile { counts })
    }

    pub(crate) fn from_counts_unchecked(counts: Vec<BigUint>) -> Self {
        IndependenceProfile { counts }
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn num_vertices(&self) -> usize {
        self.counts.len() - 1
    }

    /// `i(H)`, the number of independent sets.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// The unreduced fraction `sum_j i_j a^j (b-a)^(n-j) / b^n` for `p = a/b`.
    pub fn density_parts(&self, p: &Probability) -> (BigUint, BigUint) {
        let a = p.value().numer().to_biguint().expect("p > 0");
        let b = p.value().denom().to_biguint().expect("p > 0");
        let q = &b - &a;
        let n = self.num_vertices();
        // from j = n down: c_j picks up q^(n-j) now and a^j from later steps
        let mut acc = BigUint::zero();
        let mut qpow = BigUint::one();
        for c in self.counts.iter().rev() {
            acc = acc * &a + c * &qpow;
            qpow *= &q;
        }
        (acc, num_traits::pow(b, n))
    }
}

/// `id_p` of the hypergraph with this profile.
pub fn eval_density(profile: &IndependenceProfile, p: &Probability) -> DensityValue {
    let (num, den) = profile.density_parts(p);
    DensityValue(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Exact `id_p(h)` through the branching engine.
pub fn density(h: &Hypergraph, p: &Probability) -> DensityValue {
    eval_density(&profile_branching(h), p)
}

/// Like [`density`] with explicit engine options.
pub fn density_with(
    h: &Hypergraph,
    p: &Probability,
    opts: &BranchOptions,
) -> Result<DensityValue> {
    Ok(eval_density(&profile_branching_with(h, opts)?, p))
}
