//! Quad-double arithmetic: four non-overlapping `f64` components.
//!
//! Addition and multiplication follow the "sloppy" variants of Hida, Li and
//! Bailey, which bound the error relative to the operand magnitudes.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg};
use std::sync::OnceLock;

use super::eft::{quick_two_sum, three_sum, three_sum2, two_prod, two_sum};
use super::elementary;
use super::real::{impl_num_traits, Precision, Real};

#[derive(Debug, Clone, Copy, Default)]
pub struct QuadDouble {
    c: [f64; 4],
}

#[inline]
fn renorm4(c0: f64, c1: f64, c2: f64, c3: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, c1, c2, c3];
    }
    let (s0, c3) = quick_two_sum(c2, c3);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);
    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
        }
    }
    [s0, s1, s2, s3]
}

#[inline]
fn renorm5(c0: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, c1, c2, c3];
    }
    let (s0, c4) = quick_two_sum(c3, c4);
    let (s0, c3) = quick_two_sum(c2, s0);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);
    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
            if s3 != 0.0 {
                s3 += c4;
            } else {
                (s2, s3) = quick_two_sum(s2, c4);
            }
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
            if s1 != 0.0 {
                (s1, s2) = quick_two_sum(s1, c4);
            } else {
                (s0, s1) = quick_two_sum(s0, c4);
            }
        }
    }
    [s0, s1, s2, s3]
}

impl QuadDouble {
    pub fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Self { c: renorm4(c0, c1, c2, c3) }
    }

    pub(crate) const fn from_f64_exact(x: f64) -> Self {
        Self { c: [x, 0.0, 0.0, 0.0] }
    }

    pub fn components(self) -> [f64; 4] {
        self.c
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let a = self.c;
        let (p0, q0) = two_prod(a[0], b);
        let (p1, q1) = two_prod(a[1], b);
        let (p2, q2) = two_prod(a[2], b);
        let p3 = a[3] * b;
        let s0 = p0;
        let (s1, s2) = two_sum(q0, p1);
        let (s2, q1, p2) = three_sum(s2, q1, p2);
        let (q1, q2) = three_sum2(q1, q2, p3);
        let s3 = q1;
        let s4 = q2 + p2;
        Self { c: renorm5(s0, s1, s2, s3, s4) }
    }
}

impl PartialEq for QuadDouble {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl PartialOrd for QuadDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        for i in 0..4 {
            match self.c[i].partial_cmp(&other.c[i])? {
                Ordering::Equal => continue,
                o => return Some(o),
            }
        }
        Some(Ordering::Equal)
    }
}

impl Neg for QuadDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { c: [-self.c[0], -self.c[1], -self.c[2], -self.c[3]] }
    }
}

impl Add for QuadDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.c, rhs.c);
        let (s0, t0) = two_sum(a[0], b[0]);
        let (s1, t1) = two_sum(a[1], b[1]);
        let (s2, t2) = two_sum(a[2], b[2]);
        let (s3, t3) = two_sum(a[3], b[3]);
        let (s1, t0) = two_sum(s1, t0);
        let (s2, t0, t1) = three_sum(s2, t0, t1);
        let (s3, t0) = three_sum2(s3, t0, t2);
        let t0 = t0 + t1 + t3;
        Self { c: renorm5(s0, s1, s2, s3, t0) }
    }
}

impl Mul for QuadDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.c, rhs.c);
        let (p0, q0) = two_prod(a[0], b[0]);
        let (p1, q1) = two_prod(a[0], b[1]);
        let (p2, q2) = two_prod(a[1], b[0]);
        let (p3, q3) = two_prod(a[0], b[2]);
        let (p4, q4) = two_prod(a[1], b[1]);
        let (p5, q5) = two_prod(a[2], b[0]);
        let (p1, p2, q0) = three_sum(p1, p2, q0);
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        let s2 = s2 + (t0 + t1);
        let s1 = s1
            + (a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0] + q0 + q3 + q4 + q5);
        Self { c: renorm5(p0, p1, s0, s1, s2) }
    }
}

impl Div for QuadDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let b0 = rhs.c[0];
        let q0 = self.c[0] / b0;
        let r = self - rhs.mul_f64(q0);
        let q1 = r.c[0] / b0;
        let r = r - rhs.mul_f64(q1);
        let q2 = r.c[0] / b0;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.c[0] / b0;
        let r = r - rhs.mul_f64(q3);
        let q4 = r.c[0] / b0;
        Self { c: renorm5(q0, q1, q2, q3, q4) }
    }
}

impl_num_traits!(QuadDouble);

impl Real for QuadDouble {
    const PRECISION: Precision = Precision::High;
    // 2^-200: the sloppy operations lose a few bits against the nominal 2^-209.
    const UNIT_ROUNDOFF: f64 = 6.223015277861142e-61;
    const DIGITS: usize = 62;

    fn from_f64(x: f64) -> Self {
        Self::from_f64_exact(x)
    }

    fn to_f64(self) -> f64 {
        self.c[0] + (self.c[1] + (self.c[2] + self.c[3]))
    }

    fn pi() -> Self {
        static PI: OnceLock<QuadDouble> = OnceLock::new();
        *PI.get_or_init(elementary::machin_pi)
    }

    fn ln2() -> Self {
        static LN2: OnceLock<QuadDouble> = OnceLock::new();
        *LN2.get_or_init(elementary::series_ln2)
    }

    fn abs(self) -> Self {
        if self.c[0] < 0.0 {
            -self
        } else {
            self
        }
    }

    fn floor(self) -> Self {
        let mut x = [self.c[0].floor(), 0.0, 0.0, 0.0];
        if x[0] == self.c[0] {
            x[1] = self.c[1].floor();
            if x[1] == self.c[1] {
                x[2] = self.c[2].floor();
                if x[2] == self.c[2] {
                    x[3] = self.c[3].floor();
                }
            }
            Self { c: renorm4(x[0], x[1], x[2], x[3]) }
        } else {
            Self { c: x }
        }
    }

    fn sqrt(self) -> Self {
        elementary::sqrt_newton(self, 3)
    }

    fn sin_cos(self) -> (Self, Self) {
        elementary::sin_cos(self)
    }

    fn exp(self) -> Self {
        elementary::exp(self)
    }

    fn ln(self) -> Self {
        elementary::ln_newton(self, 3)
    }

    fn is_finite(self) -> bool {
        self.c.iter().all(|c| c.is_finite())
    }
}
