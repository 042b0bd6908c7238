//! Exact universal algebra for the quantization of Lie bialgebras by twists.
//!
//! The crate realizes the universal enveloping algebras of the double as
//! spaces of labeled word diagrams, the chord diagram algebras `T_n`, the
//! co-Hochschild complexes on them, a degree-by-degree associator and twist
//! solver, and the evaluation of the resulting universal formulas on
//! concrete finite-dimensional Lie bialgebras. All arithmetic is exact.

#![allow(clippy::type_complexity, clippy::needless_range_loop)]

pub mod artifact;
pub mod associator;
pub mod chord;
pub mod cohomology;
pub mod error;
pub mod kernel;
pub mod reports;
pub mod selftest;
pub mod specialize;
pub mod twist;
pub mod ualg;
pub mod words;

pub use error::{Error, Result};
pub use kernel::Scalar;
