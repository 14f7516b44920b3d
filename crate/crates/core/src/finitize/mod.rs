//! Finite hypergraphs with the same density as a countable one.
//!
//! Starting from a finite core `V0` (the first vertices of some prefix), a
//! subset `A ⊆ V0` is *heavy* when the edges meeting `V0` exactly in `A`
//! have residuals `E \ V0` admitting ever larger matchings. Adding every
//! heavy set as an edge of `H0 = H[V0]` does not change the limit density,
//! and after the addition every edge leaving `V0` contains one of them, so
//! `H' = H0 ∪ heavy` (antichain-reduced) is finite with the same density.
//! Heaviness is only observed at two finite probe horizons, so the result
//! is checked against the family's enclosure by [`verify_core`].

mod gadget;
mod heavy;
mod reduce;

pub use gadget::{check_gadget_probability, k3_gadget};
pub use heavy::{
    detect_heavy_sets, finite_core, finitize, verify_core, verify_value, DetectConfig,
    FiniteCore, Finitization, FinitizeConfig, HeavySet, HeavySetReport, Verdict, Verification,
    HEAVY_SCAN_CAP,
};
pub use reduce::{cor_reduce, CorReduction};
