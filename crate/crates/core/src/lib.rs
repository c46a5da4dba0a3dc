//! Factor sets of binary words.
//!
//! Decides which sets of length-`n` binary words arise as the (circular)
//! factor sets of finite words, finds shortest witnesses, enumerates every
//! representable set for small `n`, builds and audits the lower- and
//! upper-bound constructions, and counts `T(t, n)` by brute force and by
//! closed form.

pub mod bounds;
pub mod budget;
pub mod counting;
pub mod edge_cover;
pub mod enumeration;
pub mod error;
pub mod factor_set;
mod graph;
pub mod word;

pub use budget::Budget;
pub use error::{Error, Progress, Result};
pub use factor_set::{FactorSet, OverlapGraph, WitnessResult};
pub use word::Word;

/// Version tag carried by every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;
