use crate::error::{Error, Result};
use crate::numerics::{split_integer, Arith, Real};

/// One factor `u(x) = b_d(x) + θ` of a map model.
///
/// `b_d` is the lift with `b_d(0) = 0`, `b_d(x + 1) = b_d(x) + 1` and
/// derivative proportional to `sin^(d-1)(πx)`, so it has a single critical
/// point of order `d` at the integers. In Fourier form
/// `b_d(x) = x + Σ_{j=1}^{m} w_j sin(2πjx)` with `m = (d - 1) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicUnit<S> {
    d: u32,
    theta: S,
    weights: Vec<S>,
}

pub const MAX_CRITICALITY: u32 = 61;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl<S: Real> BasicUnit<S> {
    pub fn new(d: u32, theta: S) -> Result<Self> {
        if d < 3 || d % 2 == 0 || d > MAX_CRITICALITY {
            return Err(Error::InvalidInput(format!(
                "criticality must be odd in 3..={MAX_CRITICALITY}, got {d}"
            )));
        }
        let m = (d - 1) / 2;
        let central = binomial(2 * m, m);
        let two_pi = S::two_pi();
        let weights = (1..=m)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                // Binomial ratios are exact rationals; keep them in S.
                let ratio = S::from_f64(binomial(2 * m, m - j)) / S::from_f64(central);
                S::from_f64(2.0 * sign) * ratio / (two_pi * S::from_f64(j as f64))
            })
            .collect();
        Ok(Self { d, theta, weights })
    }

    pub fn criticality(&self) -> u32 {
        self.d
    }

    pub fn theta(&self) -> S {
        self.theta
    }

    pub fn with_theta(&self, theta: S) -> Self {
        Self { d: self.d, theta, weights: self.weights.clone() }
    }

    /// `b_d(x) - x`, periodic; `t` is assumed reduced to `[0, 1)`.
    fn periodic_part<T: Arith<S>>(&self, t: &T) -> T {
        let (s1, c1) = t.mul_real(S::two_pi()).sin_cos();
        let two_c = c1.mul_real(S::from_f64(2.0));
        let mut prev = T::constant(S::zero());
        let mut cur = s1;
        let mut acc = cur.mul_real(self.weights[0]);
        for w in &self.weights[1..] {
            let next = two_c.clone() * cur.clone() - prev;
            prev = cur;
            cur = next;
            acc = acc + cur.mul_real(*w);
        }
        acc
    }

    /// `b_d(x)`, without the twist.
    pub fn base<T: Arith<S>>(&self, x: T) -> T {
        let (k, t) = split_integer(&x);
        (t.clone() + self.periodic_part(&t)).add_real(k)
    }

    pub fn apply<T: Arith<S>>(&self, x: T) -> T {
        let (k, t) = split_integer(&x);
        (t.clone() + self.periodic_part(&t)).add_real(self.theta).add_real(k)
    }

    /// Power-series coefficients of `b_d` at 0, up to `t^order`.
    ///
    /// `b_d(t) = Σ_j w_j sin(2πjt) + t`; the expansion is used near the
    /// critical point where direct evaluation cancels.
    pub fn base_series(&self, order: usize) -> Vec<S> {
        let mut c = vec![S::zero(); order + 1];
        if order >= 1 {
            c[1] = S::one();
        }
        let two_pi = S::two_pi();
        for (idx, w) in self.weights.iter().enumerate() {
            let omega = two_pi * S::from_f64((idx + 1) as f64);
            // sin(ωt) = Σ (-1)^i (ωt)^(2i+1) / (2i+1)!
            let mut term = *w * omega;
            let mut k = 1;
            while k <= order {
                c[k] += term;
                term = -(term * omega * omega) / S::from_f64(((k + 1) * (k + 2)) as f64);
                k += 2;
            }
        }
        c
    }
}
