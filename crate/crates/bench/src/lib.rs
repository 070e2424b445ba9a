//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use mcrit::circlemap::{tune_twist, AnyMap, MapModel};
use mcrit::numerics::{ContinuedFraction, Real};

/// Golden-mean bi-cubic map with first twist 0.23, tuned to `depth` digits.
pub fn golden_bicubic<S: Real>(depth: usize) -> Arc<AnyMap<S>> {
    let m = MapModel::from_parts(&[3, 3], &[S::from_f64(0.23), S::zero()]).expect("valid units");
    let f = tune_twist(&m, &ContinuedFraction::new(vec![1; depth + 4]), depth).expect("golden tuning");
    Arc::new(AnyMap::from(f))
}
