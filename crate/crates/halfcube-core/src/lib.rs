//! Exact-arithmetic library for the half cube (demihypercube): its CW
//! complex, the integral homology of the truncated subcomplexes, and the
//! signed-permutation group action on that homology, verified against
//! closed-form character decompositions computed through classical
//! character theory.
//!
//! Everything is integer or rational arithmetic cleared to integers; no
//! floating point enters any rank, sign, or trace computation.

pub mod characters;
pub mod complex;
pub mod error;
pub mod homology;
pub mod matrix;
pub mod partition;
pub mod reps;
pub mod signed;
pub mod verify;

pub use error::{Error, Result};

/// Version tag for every serialized container (CLI envelopes, caches).
pub const FORMAT_VERSION: u32 = 1;
