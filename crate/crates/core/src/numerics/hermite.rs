//! Two-point Hermite interpolation ("osculating polynomials").
//!
//! Stored in Newton form over the confluent nodes `0^(D+1), 1^(D+1)` of the
//! local variable `s = (x - a) / (b - a)`.

use super::arith::Arith;
use super::real::Real;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialJetPair<S> {
    pub a: S,
    pub b: S,
    /// `f^(k)(a)` for `k = 0..=D`.
    pub jet_a: Vec<S>,
    /// `f^(k)(b)` for `k = 0..=D`.
    pub jet_b: Vec<S>,
    newton: Vec<S>,
}

/// The unique polynomial of degree `2D + 1` matching derivatives `0..=D` of
/// `f` at both ends of `[a, b]`.
pub fn hermite_fit<S: Real>(a: S, b: S, jet_a: &[S], jet_b: &[S]) -> Result<PolynomialJetPair<S>> {
    if jet_a.len() != jet_b.len() || jet_a.is_empty() {
        return Err(Error::InvalidInput("jets at both ends must have the same nonzero length".into()));
    }
    let h = b - a;
    if !(h.abs() > S::zero()) || !h.is_finite() {
        return Err(Error::DegenerateInterval(format!("[{a}, {b}]")));
    }
    let m = jet_a.len();
    let n = 2 * m;
    // Derivatives in s carry factors h^k; divided by k! they are Taylor coefficients.
    let mut ta = Vec::with_capacity(m);
    let mut tb = Vec::with_capacity(m);
    let mut scale = S::one();
    for k in 0..m {
        if k > 0 {
            scale = scale * h / S::from_f64(k as f64);
        }
        ta.push(jet_a[k] * scale);
        tb.push(jet_b[k] * scale);
    }
    let node = |i: usize| if i < m { 0u8 } else { 1u8 };
    let mut table: Vec<S> = (0..n).map(|i| if i < m { ta[0] } else { tb[0] }).collect();
    let mut newton = vec![table[0]];
    for j in 1..n {
        for i in 0..n - j {
            table[i] = if node(i) == node(i + j) {
                if node(i) == 0 {
                    ta[j]
                } else {
                    tb[j]
                }
            } else {
                // Node spacing is exactly one in s.
                table[i + 1] - table[i]
            };
        }
        newton.push(table[0]);
    }
    Ok(PolynomialJetPair { a, b, jet_a: jet_a.to_vec(), jet_b: jet_b.to_vec(), newton })
}

impl<S: Real> PolynomialJetPair<S> {
    pub fn degree(&self) -> usize {
        self.newton.len() - 1
    }

    pub fn order(&self) -> usize {
        self.jet_a.len() - 1
    }

    pub fn eval<T: Arith<S>>(&self, x: T) -> T {
        let inv_h = S::one() / (self.b - self.a);
        let s = x.add_real(-self.a).mul_real(inv_h);
        let m = self.jet_a.len();
        let mut acc = T::constant(*self.newton.last().unwrap());
        for j in (0..self.newton.len() - 1).rev() {
            let factor = if j < m { s.clone() } else { s.add_real(-S::one()) };
            acc = (acc * factor).add_real(self.newton[j]);
        }
        acc
    }
}
