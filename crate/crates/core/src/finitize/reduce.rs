use num_rational::BigRational;

use crate::density::{density, Probability};
use crate::error::{Error, Result};
use crate::hypercore::{is_independent, is_subset, Hypergraph, VertexSubset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorReduction {
    pub hypergraph: Hypergraph,
    /// `x` was already an edge; nothing changed.
    pub noop: bool,
}

impl CorReduction {
    /// `id_p(original) - id_p(reduced)`, positive unless a no-op.
    pub fn density_delta(&self, original: &Hypergraph, p: &Probability) -> BigRational {
        density(original, p).into_inner() - density(&self.hypergraph, p).into_inner()
    }
}

/// Adds the independent set `x` as an edge and deletes every edge strictly
/// containing it.
///
/// On a finite hypergraph this lowers the density; it only preserves the
/// limit density when `x` has unboundedly large neighbourhood matchings.
pub fn cor_reduce(h: &Hypergraph, x: &VertexSubset) -> Result<CorReduction> {
    x.check_within(h)?;
    if x.is_empty() {
        return Err(Error::domain("cannot add the empty set as an edge"));
    }
    if h.has_edge(x) {
        return Ok(CorReduction {
            hypergraph: h.clone(),
            noop: true,
        });
    }
    if !is_independent(h, x)? {
        return Err(Error::domain("set to add is not independent"));
    }
    let pruned = h.retain_edges(|e| !(e.len() > x.len() && is_subset(x.as_slice(), e)));
    Ok(CorReduction {
        hypergraph: pruned.with_edge(x)?,
        noop: false,
    })
}
