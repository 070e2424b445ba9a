//! Tuned models shared by unit tests, computed once per test process.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::circlemap::{tune_twist, MapModel};
use crate::numerics::{ContinuedFraction, DoubleDouble, Real};

type Key = (Vec<u32>, u64, Vec<u64>, usize);
type Slot = Arc<OnceLock<MapModel<DoubleDouble>>>;

static CACHE: OnceLock<Mutex<HashMap<Key, Slot>>> = OnceLock::new();

/// Model with twists `(theta0, …, theta0, tuned)` whose digits start with
/// `period` repeated, to `depth` digits.
pub(crate) fn tuned(criticalities: &[u32], theta0: f64, period: &[u64], depth: usize) -> MapModel<DoubleDouble> {
    let key = (criticalities.to_vec(), theta0.to_bits(), period.to_vec(), depth);
    let slot = CACHE.get_or_init(Default::default).lock().unwrap().entry(key).or_default().clone();
    slot.get_or_init(|| {
        let mut thetas = vec![DoubleDouble::from_f64(theta0); criticalities.len()];
        *thetas.last_mut().unwrap() = DoubleDouble::from_f64(0.0);
        let m = MapModel::from_parts(criticalities, &thetas).unwrap();
        let digits = period.iter().copied().cycle().take(depth.max(30)).collect();
        tune_twist(&m, &ContinuedFraction::new(digits), depth).unwrap()
    })
    .clone()
}

pub(crate) fn golden_bicubic(theta0: f64) -> MapModel<DoubleDouble> {
    tuned(&[3, 3], theta0, &[1], 26)
}

pub(crate) fn golden_cubic() -> MapModel<DoubleDouble> {
    tuned(&[3], 0.0, &[1], 26)
}
