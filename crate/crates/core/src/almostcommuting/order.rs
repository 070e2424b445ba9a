//! Commutation order at 0 from central finite differences.
//!
//! The commutator is sampled at `i h`, `i = -4..=4`, with
//! `h = u^{1/(K+2)}`, and the 9×9 Vandermonde system gives its Taylor
//! coefficients through degree 8. A coefficient counts as nonzero when it
//! clears the roundoff floor `~ u (1 + L) / h^j` by four orders of magnitude.

use crate::error::{Error, Result};
use crate::numerics::Real;
use crate::pairs::{BaseMap, CommutingPair};

const HALF_WIDTH: i64 = 4;

/// Solves `V c = y` for the Vandermonde matrix of the nodes `-4..=4`.
fn vandermonde_solve<S: Real>(y: &[S]) -> Vec<S> {
    let n = y.len();
    let mut a: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let x = S::from_i64(i as i64 - HALF_WIDTH);
            let mut row = Vec::with_capacity(n + 1);
            let mut p = S::one();
            for _ in 0..n {
                row.push(p);
                p *= x;
            }
            row.push(y[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == S::zero() {
                continue;
            }
            for c in col..=n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = a[r][n];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    x
}

/// Number of elementary maps a pair evaluation passes through.
fn evaluation_length<S: Real>(pair: &CommutingPair<S>) -> usize {
    fn base_len<S: Real>(m: &BaseMap<S>) -> usize {
        match m {
            BaseMap::Lift { .. } | BaseMap::UnitShift => 1,
            BaseMap::Branch { pair, .. } => evaluation_length(pair),
            BaseMap::Perturbed { inner, .. } => base_len(inner) + 1,
            BaseMap::Polynomial(p) => p.len().max(1),
        }
    }
    let base = pair.base();
    let (le, lx) = (base_len(&base.eta), base_len(&base.xi));
    let count = |w: &crate::pairs::Word| {
        w.count(crate::pairs::Letter::Eta) * le + w.count(crate::pairs::Letter::Xi) * lx
    };
    count(pair.eta().word()) + count(pair.xi().word())
}

/// Taylor coefficients `c_0, …, c_8` of `[ζ]` at 0 (normalized pair), with
/// the noise floor of each.
pub fn commutator_taylor<S: Real>(pair: &CommutingPair<S>, max_order: usize) -> (Vec<S>, Vec<S>) {
    let pair = pair.normalized();
    let h = S::epsilon().powf(S::one() / S::from_u64(max_order as u64 + 2));
    let samples: Vec<S> = (-HALF_WIDTH..=HALF_WIDTH).map(|i| pair.commutator(S::from_i64(i) * h)).collect();
    let b = vandermonde_solve(&samples);
    let len = S::from_u64(evaluation_length(&pair) as u64 + 1);
    let floor = S::epsilon() * S::from_f64(1e4) * len;
    let mut hj = S::one();
    let mut coeffs = Vec::with_capacity(b.len());
    let mut noise = Vec::with_capacity(b.len());
    for bj in b {
        coeffs.push(bj / hj);
        noise.push(floor / hj);
        hj *= h;
    }
    (coeffs, noise)
}

/// Index of the first Taylor coefficient of `[ζ]` at 0 above the noise
/// floor, searching `0..=max_order`; `max_order + 1` when all are zero.
pub fn commutation_order<S: Real>(pair: &CommutingPair<S>, max_order: usize) -> Result<usize> {
    if max_order > 2 * HALF_WIDTH as usize {
        return Err(Error::InvalidInput(format!("commutation order above {} is not resolvable", 2 * HALF_WIDTH)));
    }
    let (c, noise) = commutator_taylor(pair, max_order);
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::EvaluationOverflow("commutator samples near 0".into()));
    }
    Ok((0..=max_order).find(|&j| c[j].abs() > noise[j]).unwrap_or(max_order + 1))
}
