//! Classical extensions of separable two-party states and the resources
//! they trade: dimension, correlations, entanglement distribution and work.
//!
//! States are dense density matrices over labeled tensor factors. The
//! classical extension of a separable `ρ^{ab}` lives on `[a, ā, b, b̄]`,
//! with `A = a ā` held by one party and `B = b b̄` by the other.

pub mod ed;
pub mod error;
pub mod gqd;
pub mod measures;
pub mod optimize;
pub mod partition;
pub mod qcore;
pub mod report;
pub mod states;
pub mod thermo;

pub use error::{Error, Result};
