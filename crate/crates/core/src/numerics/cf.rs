//! Continued fractions `x = [r_0, r_1, …] = 1/(r_0 + 1/(r_1 + …))` for `x ∈ [0, 1)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::real::Real;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContinuedFraction {
    pub digits: Vec<u64>,
    /// Set when the expansion ended because the remainder vanished, i.e. the
    /// input is rational to working precision.
    pub exhausted: bool,
}

impl ContinuedFraction {
    pub fn new(digits: Vec<u64>) -> Self {
        Self { digits, exhausted: false }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn truncated(&self, depth: usize) -> Self {
        let exhausted = self.exhausted && depth >= self.digits.len();
        Self { digits: self.digits.iter().copied().take(depth).collect(), exhausted }
    }

    /// Value of the finite expansion.
    pub fn value<S: Real>(&self) -> S {
        let mut acc = S::zero();
        for &d in self.digits.iter().rev() {
            acc = S::one() / (S::from_u64(d) + acc);
        }
        acc
    }

    /// Value of the periodic continuation `[d, d, d, …]` tail-appended, which
    /// is the usual way to name a quadratic irrational by its period.
    pub fn periodic_value<S: Real>(period: &[u64]) -> S {
        // x = [period..., x] is a fixed point of a Möbius map; iterate to convergence.
        let mut x = S::from_f64(0.5);
        for _ in 0..(4 * S::DIGITS + 20) {
            let mut acc = x;
            for &d in period.iter().rev() {
                acc = S::one() / (S::from_u64(d) + acc);
            }
            x = acc;
        }
        x
    }
}

impl std::fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(f, "[{}]", body.join(","))
    }
}

/// Expands `x ∈ [0, 1)` to at most `depth` digits.
///
/// The remainder's absolute uncertainty is tracked through the Gauss map. A
/// remainder within its uncertainty of zero (or a reciprocal within its
/// uncertainty of an integer) ends the expansion with `exhausted` set.
pub fn cf_expand<S: Real>(x: S, depth: usize) -> Result<ContinuedFraction> {
    if !(x >= S::zero() && x < S::one()) {
        return Err(Error::InvalidInput(format!("cf_expand needs x in [0,1), got {x}")));
    }
    let u = S::UNIT_ROUNDOFF;
    let mut out = ContinuedFraction::default();
    let mut r = x;
    let mut err = u * x.to_f64();
    while out.digits.len() < depth {
        let rf = r.to_f64();
        if r == S::zero() || rf <= 10.0 * err {
            out.exhausted = true;
            break;
        }
        if rf < 10.0 * u {
            return Err(Error::PrecisionExhausted(format!(
                "remainder {rf:e} below ten unit roundoffs at digit {}",
                out.digits.len()
            )));
        }
        let y = S::one() / r;
        let yf = y.to_f64();
        let y_err = err / (rf * rf) + u * yf;
        if y_err >= 0.25 {
            return Err(Error::PrecisionExhausted(format!(
                "digit {} undetermined (uncertainty {y_err:e})",
                out.digits.len()
            )));
        }
        let n = y.round();
        if (y - n).abs().to_f64() <= 10.0 * y_err && n >= S::one() {
            out.digits.push(n.to_f64() as u64);
            out.exhausted = true;
            break;
        }
        let a = y.floor();
        out.digits.push(a.to_f64() as u64);
        r = y - a;
        err = y_err + u * yf;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigUint,
    pub q: BigUint,
}

/// Convergents `p_n / q_n` for `n = 0..=len`, seeded by `p_0 = 0, q_0 = 1`.
pub fn convergents(cf: &ContinuedFraction) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(cf.len() + 1);
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
    let (mut p, mut q) = (BigUint::zero(), BigUint::one());
    out.push(Convergent { p: p.clone(), q: q.clone() });
    for &d in &cf.digits {
        let d = BigUint::from(d);
        let p_next = &d * &p + &p_prev;
        let q_next = &d * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent { p: p.clone(), q: q.clone() });
    }
    out
}

/// `(p_n, q_n)` as machine integers; `None` on overflow.
pub fn convergents_u64(digits: &[u64]) -> Option<Vec<(u64, u64)>> {
    let mut out = vec![(0u64, 1u64)];
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let (mut p, mut q) = (0u64, 1u64);
    for &d in digits {
        let p_next = d.checked_mul(p)?.checked_add(p_prev)?;
        let q_next = d.checked_mul(q)?.checked_add(q_prev)?;
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
        out.push((p, q));
    }
    Some(out)
}

/// Digits of `G(x) = {1/x}`: the expansion with its first digit dropped.
pub fn gauss_shift(cf: &ContinuedFraction) -> Result<ContinuedFraction> {
    if cf.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    Ok(ContinuedFraction { digits: cf.digits[1..].to_vec(), exhausted: cf.exhausted })
}

/// The Gauss map itself.
pub fn gauss_map<S: Real>(x: S) -> S {
    (S::one() / x).fract()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DoubleDouble;
    use proptest::prelude::*;

    #[test]
    fn pi_fraction() {
        let x = std::f64::consts::PI - 3.0;
        assert_eq!(cf_expand(x, 4).unwrap().digits, vec![7, 15, 1, 292]);
        let x = DoubleDouble::pi() - DoubleDouble::from_f64(3.0);
        let cf = cf_expand(x, 12).unwrap();
        assert_eq!(cf.digits, vec![7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14]);
    }

    #[test]
    fn golden_mean_is_all_ones() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let cf = cf_expand(g, 5).unwrap();
        assert_eq!(cf.digits, vec![1; 5]);
        assert!(!cf.exhausted);
    }

    #[test]
    fn rational_terminates() {
        let cf = cf_expand(0.4f64, 10).unwrap();
        assert_eq!(cf.digits, vec![2, 2]);
        assert!(cf.exhausted);
        let cf = cf_expand(DoubleDouble::from_f64(2.0) / DoubleDouble::from_f64(5.0), 10).unwrap();
        assert_eq!(cf.digits, vec![2, 2]);
        assert!(cf.exhausted);
        assert!(cf_expand(0.0f64, 3).unwrap().exhausted);
    }

    #[test]
    fn tiny_remainder_is_unreliable() {
        let e = cf_expand(1e-300f64, 2).unwrap_err();
        assert!(matches!(e, Error::PrecisionExhausted(_)), "{e:?}");
        assert!(cf_expand(1.5f64, 2).is_err());
    }

    #[test]
    fn convergent_examples() {
        let c = convergents(&ContinuedFraction::new(vec![7, 15, 1]));
        let last = c.last().unwrap();
        assert_eq!((last.p.clone(), last.q.clone()), (BigUint::from(16u32), BigUint::from(113u32)));
        let c = convergents_u64(&[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(c.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 1, 2, 3, 5, 8]);
    }

    #[test]
    fn gauss_shift_examples() {
        let s = gauss_shift(&ContinuedFraction::new(vec![3, 1, 4])).unwrap();
        assert_eq!(s.digits, vec![1, 4]);
        assert_eq!(gauss_shift(&ContinuedFraction::default()), Err(Error::EmptyExpansion));
    }

    #[test]
    fn periodic_values() {
        let g: f64 = ContinuedFraction::periodic_value(&[1]);
        assert!((g - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        let s: f64 = ContinuedFraction::periodic_value(&[2]);
        assert!((s - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn digits_reproduce_convergents(digits in proptest::collection::vec(1u64..=20, 1..30)) {
            let cf = ContinuedFraction::new(digits.clone());
            let conv = convergents(&cf);
            // p_n q_{n-1} - p_{n-1} q_n = (-1)^(n+1) in the chosen seeding
            for n in 1..conv.len() {
                let lhs = &conv[n].p * &conv[n - 1].q;
                let rhs = &conv[n - 1].p * &conv[n].q;
                let one = BigUint::one();
                prop_assert!(lhs.clone() + &one == rhs || rhs + &one == lhs);
            }
            for n in 1..conv.len() {
                prop_assert!(conv[n].q >= conv[n - 1].q);
            }
        }

        #[test]
        fn convergents_bracket_x(x in 0.001f64..0.999) {
            let cf = cf_expand(DoubleDouble::from_f64(x), 12).unwrap();
            let conv = convergents(&cf);
            let x = DoubleDouble::from_f64(x);
            for n in 1..cf.len() {
                let p = DoubleDouble::parse_decimal(&conv[n].p.to_string()).unwrap();
                let q = DoubleDouble::parse_decimal(&conv[n].q.to_string()).unwrap();
                let q1 = DoubleDouble::parse_decimal(&conv[n + 1].q.to_string()).unwrap();
                let gap = (p / q - x).abs();
                prop_assert!(gap < DoubleDouble::one() / (q * q1));
            }
        }

        #[test]
        fn shift_commutes_with_gauss_map(x in 0.01f64..0.99) {
            let x = DoubleDouble::from_f64(x);
            let a = gauss_shift(&cf_expand(x, 10).unwrap()).unwrap();
            let b = cf_expand(gauss_map(x), 9).unwrap();
            let common = a.len().min(b.len()).saturating_sub(1);
            prop_assert_eq!(&a.digits[..common], &b.digits[..common]);
        }
    }
}
