//! Renormalization toolkit for multicritical circle maps.
//!
//! Circle maps are compositions of trigonometric units with cubic or higher
//! odd critical points. From a map the crate builds its sequence of
//! renormalized commuting pairs, measures distances between them, studies
//! the geometry of dynamical partitions, solves for prescribed signatures,
//! and builds polynomial (osculated) and perturbed almost-commuting pairs.

pub mod error;
pub mod circlemap;
pub mod numerics;
pub mod pairs;
pub mod almostcommuting;
pub mod partitions;
pub mod modelfamily;
pub mod experiments;
#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use numerics::{ContinuedFraction, DecayFit, DoubleDouble, Precision, QuadDouble, Real};
