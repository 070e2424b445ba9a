//! Carriers a map can be evaluated on: reals, complex numbers and jets.
//!
//! Maps are written once as `fn apply<T: Arith<S>>(&self, x: T) -> T`, so the
//! same code gives values, complex extensions and derivative jets.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;

use super::dd::DoubleDouble;
use super::jet::Jet;
use super::qd::QuadDouble;
use super::real::Real;

pub trait Arith<S: Real>:
    Clone
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(x: S) -> Self;
    /// Real part of the value (the constant term for jets).
    fn re(&self) -> S;
    /// Modulus of the value.
    fn modulus(&self) -> S;
    fn sin_cos(&self) -> (Self, Self);
    fn add_real(&self, s: S) -> Self;
    fn mul_real(&self, s: S) -> Self;
    fn is_finite(&self) -> bool;
    /// Size of the imaginary part; zero on real carriers.
    fn imag_size(&self) -> S {
        S::zero()
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(S::one());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

macro_rules! real_arith {
    ($t:ty) => {
        impl Arith<$t> for $t {
            fn constant(x: $t) -> Self {
                x
            }
            fn re(&self) -> $t {
                *self
            }
            fn modulus(&self) -> $t {
                Real::abs(*self)
            }
            fn sin_cos(&self) -> (Self, Self) {
                Real::sin_cos(*self)
            }
            fn add_real(&self, s: $t) -> Self {
                *self + s
            }
            fn mul_real(&self, s: $t) -> Self {
                *self * s
            }
            fn is_finite(&self) -> bool {
                Real::is_finite(*self)
            }
        }
    };
}
real_arith!(f64);
real_arith!(DoubleDouble);
real_arith!(QuadDouble);

impl<S: Real> Arith<S> for Complex<S> {
    fn constant(x: S) -> Self {
        Complex::new(x, S::zero())
    }
    fn re(&self) -> S {
        self.re
    }
    fn modulus(&self) -> S {
        self.re.hypot(self.im)
    }
    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.re.sin_cos();
        let e = self.im.exp();
        let ei = S::one() / e;
        let half = S::from_f64(0.5);
        let ch = (e + ei) * half;
        let sh = (e - ei) * half;
        (Complex::new(s * ch, c * sh), Complex::new(c * ch, -(s * sh)))
    }
    fn add_real(&self, s: S) -> Self {
        Complex::new(self.re + s, self.im)
    }
    fn mul_real(&self, s: S) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn imag_size(&self) -> S {
        self.im.abs()
    }
}

impl<S: Real> Arith<S> for Jet<S> {
    fn constant(x: S) -> Self {
        Jet::constant(x, 0)
    }
    fn re(&self) -> S {
        self.value()
    }
    fn modulus(&self) -> S {
        self.value().abs()
    }
    fn sin_cos(&self) -> (Self, Self) {
        Jet::sin_cos(self)
    }
    fn add_real(&self, s: S) -> Self {
        self.add_constant(s)
    }
    fn mul_real(&self, s: S) -> Self {
        self.scale(s)
    }
    fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }
}

/// Splits `x = k + r` with `k = floor(re x)`, returning `(k, r)`.
pub fn split_integer<S: Real, T: Arith<S>>(x: &T) -> (S, T) {
    let k = x.re().floor();
    (k, x.add_real(-k))
}
