//! Exact action-spectrum calculus for Reeb flows on closed 3-manifolds.
//!
//! - [`qlinear`]: exact values in a declared ℚ-basis, ordering, rank.
//! - [`spectra`]: prime action spectra and the Besse/Zoll decisions.
//! - [`seifert`]: Seifert invariants, normal forms and lens-space gates.
//! - [`models`]: Besse models and ellipsoid boundaries.
//! - [`ech`]: filtered ECH generator combinatorics on ellipsoids.
//! - [`cli`]: structured-document front end.

pub mod cli;
pub mod ech;
pub mod error;
pub mod models;
pub mod qlinear;
pub mod seifert;
pub mod spectra;

pub use error::{Error, Result};
pub use qlinear::{BasisRegistry, QLinearValue, SymbolEntry};
