//! Simulation of generalized quantum scissors for noiseless linear
//! amplification in truncated Fock space.

// Negated comparisons in validation deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
mod error;
pub mod fock;
pub mod experiments;
pub mod measurement;
pub mod metrics;
pub mod scissors;

pub use error::{Error, Result};
