use super::real::Real;
use crate::error::{Error, Result};

/// Root of a monotone `g` on `[lo, hi]`, bracketed to width `tol`.
///
/// Returns the midpoint of the final bracket. An endpoint where `g` vanishes
/// exactly is returned as is.
pub fn bisect_monotone<S: Real>(g: impl Fn(S) -> S, lo: S, hi: S, tol: S) -> Result<S> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (glo, ghi) = (g(lo), g(hi));
    if glo == S::zero() {
        return Ok(lo);
    }
    if ghi == S::zero() {
        return Ok(hi);
    }
    if (glo > S::zero()) == (ghi > S::zero()) {
        return Err(Error::NoSignChange);
    }
    let increasing = ghi > S::zero();
    let half = S::from_f64(0.5);
    while hi - lo > tol {
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == S::zero() {
            return Ok(mid);
        }
        if (gm > S::zero()) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// Bracket `(a, b)` with `pred(a) == false`, `pred(b) == true` and `b - a <= tol`
/// for a predicate that switches once from false to true on `[lo, hi]`.
pub fn bisect_predicate<S: Real>(
    mut pred: impl FnMut(S) -> Result<bool>,
    lo: S,
    hi: S,
    tol: S,
) -> Result<(S, S)> {
    let (mut lo, mut hi) = (lo, hi);
    if pred(lo)? || !pred(hi)? {
        return Err(Error::NoSignChange);
    }
    let half = S::from_f64(0.5);
    while hi - lo > tol {
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
