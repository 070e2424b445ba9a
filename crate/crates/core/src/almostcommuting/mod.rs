//! Almost commuting pairs: osculated polynomial pairs, analytic
//! perturbations of commuting pairs, and the decay of the commutator
//! `[ζ] = η ∘ ξ - ξ ∘ η` under renormalization.

pub mod decay;
pub mod order;
pub mod osculate;
pub mod perturb;
pub mod polynomial;

pub use decay::{commutator_decay_series, DecaySeries};
pub use order::{commutation_order, commutator_taylor};
pub use osculate::{correct_rotation, osculate_pair};
pub use perturb::perturb_to_almost_commuting;
pub use polynomial::{osculate, Piece, PolynomialBranch};

use crate::numerics::Real;
use crate::pairs::CommutingPair;

/// A pair whose commutator vanishes at 0 to order `order`.
#[derive(Debug, Clone)]
pub struct AlmostCommutingPair<S: Real> {
    pub pair: CommutingPair<S>,
    /// Measured commutation order; a lower bound when it reached the cap of
    /// the measurement.
    pub order: usize,
}
