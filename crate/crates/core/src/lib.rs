//! Exact invariant theory of small finite groups: relative invariants,
//! generator degree profiles, stabilizers, Davenport constants and
//! witness-pair separation certificates.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod gmodule;
pub mod groups;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod separation;
pub mod zerosum;

pub use error::{Error, Result};
