//! Truncated Taylor series `c_0 + c_1 t + … + c_K t^K` with runtime order `K`.
//!
//! A jet seeded as `x + t` and pushed through a map yields the normalized
//! derivatives `f^(k)(x) / k!` of that map at `x`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    c: Vec<S>,
}

impl<S: Real> Jet<S> {
    pub fn constant(x: S, order: usize) -> Self {
        let mut c = vec![S::zero(); order + 1];
        c[0] = x;
        Self { c }
    }

    /// The identity jet `x + t`.
    pub fn variable(x: S, order: usize) -> Self {
        let mut j = Self::constant(x, order);
        if order >= 1 {
            j.c[1] = S::one();
        }
        j
    }

    pub fn from_coeffs(c: Vec<S>) -> Self {
        assert!(!c.is_empty(), "a jet needs at least the constant term");
        Self { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> S {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    /// `f^(k)(x)` for `k = 0..=order`.
    pub fn derivatives(&self) -> Vec<S> {
        let mut fact = S::one();
        self.c
            .iter()
            .enumerate()
            .map(|(k, &ck)| {
                if k > 1 {
                    fact *= S::from_f64(k as f64);
                }
                ck * fact
            })
            .collect()
    }

    fn with_order(&self, order: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(order + 1, S::zero());
        Self { c }
    }

    fn nilpotent(&self) -> Self {
        let mut d = self.clone();
        d.c[0] = S::zero();
        d
    }

    /// Sums `sum_k a_k δ^k` where `δ` is the non-constant part.
    fn compose_series(&self, a: &[S]) -> Self {
        let order = self.order();
        let delta = self.nilpotent();
        let mut out = Self::constant(a[0], order);
        let mut power = Self::constant(S::one(), order);
        for ak in a.iter().take(order + 1).skip(1) {
            power = &power * &delta;
            for (o, p) in out.c.iter_mut().zip(&power.c) {
                *o += *ak * *p;
            }
        }
        out
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let order = self.order();
        let (s0, c0) = self.c[0].sin_cos();
        // sin(x0 + δ) = s0 cos δ + c0 sin δ, cos(x0 + δ) = c0 cos δ - s0 sin δ
        let mut sin_a = vec![S::zero(); order + 1];
        let mut cos_a = vec![S::zero(); order + 1];
        let mut fact = S::one();
        for k in 0..=order {
            if k > 0 {
                fact *= S::from_f64(k as f64);
            }
            let (ds, dc) = match k % 4 {
                0 => (s0, c0),
                1 => (c0, -s0),
                2 => (-s0, -c0),
                _ => (-c0, s0),
            };
            sin_a[k] = ds / fact;
            cos_a[k] = dc / fact;
        }
        (self.compose_series(&sin_a), self.compose_series(&cos_a))
    }

    pub fn exp(&self) -> Self {
        let order = self.order();
        let e0 = self.c[0].exp();
        let mut a = vec![S::zero(); order + 1];
        let mut fact = S::one();
        for (k, ak) in a.iter_mut().enumerate() {
            if k > 0 {
                fact *= S::from_f64(k as f64);
            }
            *ak = e0 / fact;
        }
        self.compose_series(&a)
    }

    /// `self^p` for a positive constant term.
    pub fn powf(&self, p: S) -> Self {
        let order = self.order();
        let x0 = self.c[0];
        let mut a = vec![S::zero(); order + 1];
        a[0] = x0.powf(p);
        // Binomial series in δ / x0.
        let mut coeff = a[0];
        for k in 1..=order {
            let kk = S::from_f64(k as f64);
            coeff = coeff * (p - kk + S::one()) / (kk * x0);
            a[k] = coeff;
        }
        self.compose_series(&a)
    }

    pub fn scale(&self, s: S) -> Self {
        Self { c: self.c.iter().map(|&x| x * s).collect() }
    }

    pub fn add_constant(&self, s: S) -> Self {
        let mut j = self.clone();
        j.c[0] += s;
        j
    }

    /// Truncated composition `outer ∘ self`, where `outer` holds the Taylor
    /// coefficients at `self.value()`.
    pub fn compose(&self, outer: &Jet<S>) -> Self {
        let order = self.order().min(outer.order());
        self.with_order(order).compose_series(&outer.c)
    }
}

/// Order of a binary result. Order-0 jets are exact constants and broadcast.
fn joint_order<S: Real>(a: &Jet<S>, b: &Jet<S>) -> usize {
    match (a.order(), b.order()) {
        (0, k) | (k, 0) => k,
        (i, j) => i.min(j),
    }
}

impl<S: Real> Jet<S> {
    fn at(&self, k: usize) -> S {
        self.c.get(k).copied().unwrap_or_else(S::zero)
    }
}

impl<S: Real> Add for &Jet<S> {
    type Output = Jet<S>;
    fn add(self, rhs: &Jet<S>) -> Jet<S> {
        let order = joint_order(self, rhs);
        Jet { c: (0..=order).map(|k| self.at(k) + rhs.at(k)).collect() }
    }
}

impl<S: Real> Sub for &Jet<S> {
    type Output = Jet<S>;
    fn sub(self, rhs: &Jet<S>) -> Jet<S> {
        let order = joint_order(self, rhs);
        Jet { c: (0..=order).map(|k| self.at(k) - rhs.at(k)).collect() }
    }
}

impl<S: Real> Mul for &Jet<S> {
    type Output = Jet<S>;
    fn mul(self, rhs: &Jet<S>) -> Jet<S> {
        let order = joint_order(self, rhs);
        let mut c = vec![S::zero(); order + 1];
        for i in 0..=order.min(self.order()) {
            if self.c[i] == S::zero() {
                continue;
            }
            for j in 0..=(order - i).min(rhs.order()) {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet { c }
    }
}

impl<S: Real> Div for &Jet<S> {
    type Output = Jet<S>;
    fn div(self, rhs: &Jet<S>) -> Jet<S> {
        let order = joint_order(self, rhs);
        let mut q = vec![S::zero(); order + 1];
        for k in 0..=order {
            let mut acc = self.at(k);
            for j in 1..=k.min(rhs.order()) {
                acc -= rhs.c[j] * q[k - j];
            }
            q[k] = acc / rhs.c[0];
        }
        Jet { c: q }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Real> $tr for Jet<S> {
            type Output = Jet<S>;
            fn $m(self, rhs: Jet<S>) -> Jet<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<S: Real> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        Jet { c: self.c.into_iter().map(|x| -x).collect() }
    }
}
