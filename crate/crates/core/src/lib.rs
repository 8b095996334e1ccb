//! Exact-arithmetic laboratory for thick strong mixing.
//!
//! * [`words`]: Chacón blocks, windows of the Chacón point, pattern search.
//! * [`zsets`]: finite integer sets, the translation sets `H_m`, truncated
//!   direct sums with certified ranges, thickness diagnostics.
//! * [`returnsets`]: return sets `N(A, B)` of cylinder sets by brute force
//!   and by the structured sum, and the thick-set constructions.
//! * [`torus`]: the `SL(2,Z)` action on the torus over exact rationals.
//! * [`moebius`]: Möbius transformations over Gaussian rationals.
//! * [`cli`]: suite runner and deterministic JSON/text reports.

pub mod cli;
pub mod error;
pub mod moebius;
pub mod returnsets;
pub mod torus;
pub mod words;
pub mod zsets;

#[cfg(test)]
mod proptests;

pub use error::{Error, Result};
