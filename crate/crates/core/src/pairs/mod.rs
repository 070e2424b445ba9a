//! Commuting pairs `(η, ξ)` as composition words over a base pair, with
//! heights, renormalization, the normalized C⁰ distance, gluing and the
//! commutator.

pub mod base;
pub mod commutator;
pub mod glue;
pub mod metric;
pub mod pair;
pub mod word;

pub use base::{BaseMap, BasePair, Bump};
pub use commutator::commutator_norm;
pub use glue::{branch_critical_points, glue, pair_signature, GluedCircleMap};
pub use metric::{c0_grid, dist_c0, dist_c0_checked, GridCheck, Mobius, NormalizedPair};
pub use pair::{
    height, pair_from_map, pair_rotation_digits, renormalize, with_perturbed_xi, Branch, CommutingPair, Height,
    HEIGHT_CAP,
};
pub use word::{Letter, Word};
