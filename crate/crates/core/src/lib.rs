//! Hyperplanes, levels and certified sign forcing for the oriented matroid of
//! the real affine cube `C^n = {-1,1}^n`.
//!
//! Main entry points:
//! - [`cube`] vertices, signed sets, rectangles and cube symmetries,
//! - [`levels`] weight-vector levels, numerical rectangles and embeddings,
//! - [`primitive`] primitive weight vectors and their extensions,
//! - [`forcing`] rectangle closure, sign propagation and hyperplane certificates,
//! - [`hyperplanes`] exact hyperplane enumeration and the tabulated families,
//! - [`driver`] the per-dimension certification run and its report,
//! - [`verify`] an independent replay checker for everything the producers emit.

pub mod cli;
pub mod cube;
pub mod driver;
pub mod envelope;
pub mod error;
pub mod forcing;
pub mod hyperplanes;
pub mod levels;
pub mod primitive;
pub mod verify;

pub use error::{Error, Result};
