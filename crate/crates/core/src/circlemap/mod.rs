//! Multicritical circle maps built from trigonometric units: evaluation,
//! critical points, rotation digits, twist tuning and the invariant measure.

pub mod measure;
pub mod model;
pub mod rotation;
pub mod unit;

pub use measure::{measure_cdf, return_orbit, signature, ReturnOrbit, Signature};
pub use model::{
    invert_lift, AnalyticMap, AnyMap, CircleMap, ConjugatedMap, CriticalPoint, CriticalSet, Diffeo, MapModel,
};
pub use rotation::{compare_to_target, rotation_digits, tune_family, DigitStream, OrbitOptions, RotationData};
pub use unit::BasicUnit;

use crate::error::Result;
use crate::numerics::{ContinuedFraction, Real};

/// Tunes the last twist so the rotation digits start with `target[..depth]`.
pub fn tune_twist<S: Real>(model: &MapModel<S>, target: &ContinuedFraction, depth: usize) -> Result<MapModel<S>> {
    let theta = tune_family(
        |t| model.with_last_theta(t),
        S::zero(),
        S::one(),
        target,
        depth,
        OrbitOptions::default(),
    )?;
    Ok(model.with_last_theta(theta))
}

/// Tunes a single twist shared by every unit.
pub fn tune_common_twist<S: Real>(model: &MapModel<S>, target: &ContinuedFraction, depth: usize) -> Result<MapModel<S>> {
    let theta = tune_family(
        |t| model.with_all_thetas(t),
        S::zero(),
        S::one(),
        target,
        depth,
        OrbitOptions::default(),
    )?;
    Ok(model.with_all_thetas(theta))
}
