//! Exact independence densities of hypergraphs.
//!
//! A subset of vertices is independent when it contains no hyperedge. For a
//! finite hypergraph on `n` vertices and a probability `p`, the independence
//! p-density is the probability that a random subset, each vertex included
//! independently with probability `p`, is independent:
//!
//! ```text
//! id_p(H) = sum over independent I of p^|I| (1 - p)^(n - |I|)
//! ```
//!
//! Everything here is computed in exact rational arithmetic. Countable
//! hypergraphs are handled through chains of finite prefixes
//! ([`chains`]), with certified two-sided enclosures of the limit density,
//! and [`finitize`] extracts a finite hypergraph with the same density.
//!
//! The counting engine and the subset scans are data-parallel when the
//! `parallel` feature (on by default) is enabled; see [`exec::Exec`].

pub mod chains;
pub mod cli;
pub mod density;
pub mod error;
pub mod exec;
pub mod finitize;
pub mod hypercore;
pub mod rational;

pub use chains::{DensityEnclosure, FamilySpec};
pub use density::{DensityValue, IndependenceProfile, Matching, Probability};
pub use error::{Error, Result};
pub use exec::Exec;
pub use hypercore::{Hypergraph, VertexSubset};
