//! Exact computation of global CR invariants and the Burns–Epstein invariant
//! for circle bundles over Kähler–Einstein manifolds, from characteristic
//! numbers of the base.
//!
//! Layers, bottom up:
//!
//! - [`exact`]: rationals, graded sparse polynomials, rational matrices
//! - [`symfunc`]: partitions and power-sum symmetric polynomials
//! - [`charclass`]: Chern character calculus and base cohomology data
//! - [`invariants`]: `I_ς`, `I_Φ`, `μ` on a single base
//! - [`family`]: the same invariants over all complete intersections at once
//! - [`cli`]: expression parser and the `chern-cr` command

pub mod charclass;
pub mod cli;
pub mod error;
pub mod exact;
pub mod family;
pub mod invariants;
pub mod symfunc;

pub use error::{Error, Result};
