//! Supersymmetric WKB and "proper" quantization for translationally
//! shape-invariant potentials.
//!
//! Units: hbar = 2m = 1.

// `!(a < b)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod exec;
pub mod numerics;
pub mod oracle;
pub mod quantization;
pub mod solver;
pub mod tolerance;
pub mod verification;

pub use catalog::{CanonicalForm, Family, LevelCount, MapSign, PotentialId, PotentialSpec};
pub use error::{Error, Result};
