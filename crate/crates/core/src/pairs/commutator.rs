use rayon::prelude::*;

use super::pair::CommutingPair;
use crate::error::{Error, Result};
use crate::numerics::{Arith, Complex, Real};

/// Largest imaginary part tolerated along a complex evaluation; beyond it the
/// trigonometric units grow like `e^{2π |Im z|}` and nothing meaningful is left.
pub const IMAG_LIMIT: f64 = 8.0;

/// `max |η(ξ(z)) - ξ(η(z))|` over `samples` points of `|z| = radius`.
pub fn commutator_norm<S: Real>(pair: &CommutingPair<S>, radius: S, samples: usize) -> Result<S> {
    if samples == 0 {
        return Err(Error::InvalidInput("commutator_norm needs at least one sample".into()));
    }
    let values: Vec<Result<S>> = (0..samples)
        .into_par_iter()
        .map(|j| {
            let t = S::two_pi() * S::from_u64(j as u64) / S::from_u64(samples as u64);
            let (s, c) = t.sin_cos();
            let z = Complex::new(radius * c, radius * s);
            let v = pair.commutator(z);
            let images = [pair.xi().eval(z), pair.eta().eval(z)];
            let escaped = images.iter().chain(std::iter::once(&v)).any(|w| {
                !Arith::<S>::is_finite(w) || w.im.abs() > S::from_f64(IMAG_LIMIT) / pair.scale().abs()
            });
            if escaped {
                Err(Error::EvaluationOverflow(format!("commutator at z = {} + {}i left the safe strip", z.re, z.im)))
            } else {
                Ok(Arith::<S>::modulus(&v))
            }
        })
        .collect();
    let mut best = S::zero();
    for v in values {
        let v = v?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}
