//! Density bounds from matchings and from adding an independent set as an edge.

use num_rational::BigRational;
use num_traits::One;

use super::{density, DensityValue, Matching, Probability};
use crate::error::{Error, Result};
use crate::hypercore::{is_disjoint, is_independent, Hypergraph, VertexSubset};
use crate::rational::pow;

/// `(1 - p^k)^m` with `k = r(h)` and `m` the size of a certified matching.
/// Never below `id_p(h)`.
pub fn matching_upper_bound(
    h: &Hypergraph,
    p: &Probability,
    m: &Matching,
) -> Result<DensityValue> {
    m.validate(h)?;
    let base = BigRational::one() - p.pow(h.rank());
    DensityValue::new(pow(&base, m.size()))
}

/// `id_p(h ∪ {x}) < id_p(h) <= upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sandwich {
    pub lower: DensityValue,
    pub upper: DensityValue,
}

impl Sandwich {
    pub fn width(&self) -> BigRational {
        self.upper.value() - self.lower.value()
    }

    /// `lower < value <= upper`.
    pub fn brackets(&self, value: &DensityValue) -> bool {
        self.lower < *value && *value <= self.upper
    }
}

/// Brackets `id_p(h)` between `id_p(h ∪ {x})` and that plus
/// `p^|x| (1 - p^(k - |x|))^m`, where `x` is independent, `k = r(h)` and
/// the witnesses `Y_1..Y_m` are pairwise disjoint, non-empty, disjoint from
/// `x`, with every `x ∪ Y_i` an edge of `h`.
pub fn add_set_sandwich(
    h: &Hypergraph,
    x: &VertexSubset,
    witnesses: &[VertexSubset],
    p: &Probability,
) -> Result<Sandwich> {
    x.check_within(h)?;
    if x.is_empty() {
        return Err(Error::domain("sandwich: X must be non-empty"));
    }
    if !is_independent(h, x)? {
        return Err(Error::domain("sandwich: X is not independent in H"));
    }
    for (i, y) in witnesses.iter().enumerate() {
        y.check_within(h)?;
        if y.is_empty() {
            return Err(Error::domain(format!("sandwich: witness Y_{} is empty", i + 1)));
        }
        if !is_disjoint(y.as_slice(), x.as_slice()) {
            return Err(Error::domain(format!("sandwich: witness Y_{} meets X", i + 1)));
        }
        if let Some(j) = witnesses[..i]
            .iter()
            .position(|z| !is_disjoint(y.as_slice(), z.as_slice()))
        {
            return Err(Error::domain(format!(
                "sandwich: witnesses Y_{} and Y_{} are not disjoint",
                j + 1,
                i + 1
            )));
        }
        let mut union = x.as_slice().to_vec();
        union.extend_from_slice(y.as_slice());
        if !h.has_edge(&VertexSubset::new(union)) {
            return Err(Error::domain(format!(
                "sandwich: X ∪ Y_{} is not an edge of H",
                i + 1
            )));
        }
    }

    let lower = density(&h.with_edge(x)?, p);
    let mut gap = p.pow(x.len());
    if !witnesses.is_empty() {
        // each witness makes X ∪ Y_i an edge, so |X| < k here
        let k = h.rank();
        let base = BigRational::one() - p.pow(k - x.len());
        gap *= pow(&base, witnesses.len());
    }
    let upper = DensityValue::new(lower.value() + gap)?;
    Ok(Sandwich { lower, upper })
}
