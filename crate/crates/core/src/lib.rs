//! Correlation dynamics of a qubit pair where one detector is uniformly
//! accelerated through the vacuum of a massless scalar field.
//!
//! [`unruh`] builds the asymptotic two-qubit state, [`correlations`]
//! quantifies it, and [`analysis`] locates sudden changes and sudden death.

pub mod analysis;
pub mod correlations;
pub mod error;
pub mod qmath;
pub mod unruh;

pub use error::{Error, Result};
