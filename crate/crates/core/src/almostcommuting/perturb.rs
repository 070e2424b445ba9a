//! Almost commuting pairs of prescribed order from commuting ones:
//! `ξ ↦ ξ + A (x (x - e))^k` with `e = η(0)`.
//!
//! The bump vanishes to order `k` at both ends of `I_ξ`, so `ξ(0)` and
//! `ξ(η(0))` are untouched and `[ζ]` picks up `η'(ξ(x)) A e^k x^k + O(x^{k+1})`.
//! It also vanishes to order `d` at every critical point of order `d` inside
//! `I_ξ`, so a small perturbation keeps `ξ` increasing there. `A` is scaled
//! so that the commutator norm at the reference radius is `eps`.

use std::sync::Arc;

use super::{commutation_order, AlmostCommutingPair};
use crate::error::{Error, Result};
use crate::numerics::{Jet, Real};
use crate::pairs::{
    branch_critical_points, commutator_norm, height, with_perturbed_xi, Bump, CommutingPair, Letter, HEIGHT_CAP,
};

/// Radius at which the target norm is met.
pub const REFERENCE_RADIUS: f64 = 0.05;
const REFERENCE_SAMPLES: usize = 64;
const MONOTONICITY_GRID: usize = 256;

struct Perturbation<S: Real> {
    base: Arc<CommutingPair<S>>,
    k: u32,
    roots: Vec<(S, u32)>,
}

impl<S: Real> Perturbation<S> {
    fn new(pair: &CommutingPair<S>, k: u32) -> Result<Self> {
        let base = Arc::new(pair.normalized());
        let roots = match branch_critical_points(&base, Letter::Xi) {
            Ok(r) => r,
            Err(Error::Unsupported(_)) => Vec::new(),
            Err(e) => return Err(e),
        };
        Ok(Self { base, k, roots })
    }

    fn with_amplitude(&self, amplitude: S) -> CommutingPair<S> {
        let bump = Bump { amplitude, end: self.base.eta0(), order: self.k, roots: self.roots.clone() };
        with_perturbed_xi(&self.base, bump)
    }
}

fn check_monotone<S: Real>(pair: &CommutingPair<S>) -> Result<()> {
    let e = pair.eta0();
    let n = MONOTONICITY_GRID;
    for i in 1..n {
        let x = e * S::from_u64(i as u64) / S::from_u64(n as u64);
        let d = pair.xi().eval(Jet::variable(x, 1)).coeffs()[1];
        if d < S::zero() || !d.is_finite() {
            return Err(Error::MonotonicityBroken(format!("ξ'({x}) = {d}")));
        }
    }
    Ok(())
}

/// Replaces `ξ` by `ξ + b` with `b` vanishing to order `k` at 0, scaled so
/// that `‖[ζ]‖` at radius 0.05 is `eps` (in normalized coordinates).
pub fn perturb_to_almost_commuting<S: Real>(pair: &CommutingPair<S>, eps: S, k: u32) -> Result<AlmostCommutingPair<S>> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("commutation order must be at least 3, got {k}")));
    }
    if !(eps >= S::zero() && eps < S::from_f64(0.1)) {
        return Err(Error::InvalidInput(format!("eps must lie in [0, 0.1 |ξ(0)|), got {eps}")));
    }
    let pert = Perturbation::new(pair, k)?;
    let radius = S::from_f64(REFERENCE_RADIUS);
    let max_order = (k as usize + 2).min(8);
    if eps == S::zero() {
        let out = pert.with_amplitude(S::zero());
        let order = commutation_order(&out, max_order)?;
        return Ok(AlmostCommutingPair { pair: out, order });
    }

    // The commutator is linear in A to first order; two secant steps from A = eps.
    let mut amplitude = eps;
    for _ in 0..2 {
        let norm = commutator_norm(&pert.with_amplitude(amplitude), radius, REFERENCE_SAMPLES)?;
        if !(norm > S::zero()) {
            return Err(Error::EvaluationOverflow("perturbation left no commutator".into()));
        }
        amplitude = amplitude * eps / norm;
    }
    let out = pert.with_amplitude(amplitude);

    check_monotone(&out)?;
    let (h0, h1) = (height(&pert.base, HEIGHT_CAP)?, height(&out, HEIGHT_CAP)?);
    if h0 != h1 {
        return Err(Error::CombinatorialMismatch(format!("perturbation changed the height from {h0:?} to {h1:?}")));
    }
    let order = commutation_order(&out, max_order)?;
    Ok(AlmostCommutingPair { pair: out, order })
}
