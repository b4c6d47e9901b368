//! Pólya urns with immigration: simulation, exact laws, conditional moments,
//! the UL distribution family and its fixed-point characterisation.

// Negated float comparisons are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bias;
pub mod cli;
pub mod error;
pub mod interarrival;
pub mod moments;
pub mod pa;
pub mod quadrature;
pub mod reference;
pub mod report;
pub mod rng;
pub mod special;
pub mod stats;
pub mod ul;
pub mod urn;

pub use error::{PolyaError, Result};
