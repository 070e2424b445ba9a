//! The scalar abstraction shared by every algorithm in the crate.
//!
//! Three levels are provided: `f64` (std), [`DoubleDouble`](super::DoubleDouble)
//! (ext, about 31 digits) and [`QuadDouble`](super::QuadDouble) (high, about
//! 62 digits). Code is written once against [`Real`] and selected at runtime
//! through [`Precision`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::Num;

use crate::error::{Error, Result};

/// Working precision of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Precision {
    Std,
    Ext,
    High,
}

impl Precision {
    pub fn unit_roundoff(self) -> f64 {
        match self {
            Precision::Std => f64::EPSILON / 2.0,
            Precision::Ext => super::DoubleDouble::UNIT_ROUNDOFF,
            Precision::High => super::QuadDouble::UNIT_ROUNDOFF,
        }
    }

    /// Safe maxima: tuning depth and renormalization level.
    pub fn budget(self) -> (usize, i64) {
        match self {
            Precision::Std => (24, 10),
            Precision::Ext => (30, 16),
            Precision::High => (36, 22),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Precision::Std => "std",
            Precision::Ext => "ext",
            Precision::High => "high",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "std" => Ok(Precision::Std),
            "ext" => Ok(Precision::Ext),
            "high" => Ok(Precision::High),
            other => Err(Error::Parse(format!("unknown precision `{other}`"))),
        }
    }
}

pub trait Real:
    Copy
    + Send
    + Sync
    + 'static
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Num
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + super::arith::Arith<Self>
{
    const PRECISION: Precision;
    const UNIT_ROUNDOFF: f64;
    /// Significant decimal digits carried.
    const DIGITS: usize;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn pi() -> Self;
    fn ln2() -> Self;

    fn abs(self) -> Self;
    fn floor(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn is_finite(self) -> bool;

    fn from_i64(n: i64) -> Self {
        // Splits so that |n| > 2^53 stays exact in the extended types.
        let hi = (n >> 32) as f64 * 4294967296.0;
        let lo = (n & 0xffff_ffff) as f64;
        Self::from_f64(hi) + Self::from_f64(lo)
    }

    fn from_u64(n: u64) -> Self {
        let hi = (n >> 32) as f64 * 4294967296.0;
        let lo = (n & 0xffff_ffff) as f64;
        Self::from_f64(hi) + Self::from_f64(lo)
    }

    /// Unit roundoff as a value of this type.
    fn epsilon() -> Self {
        Self::from_f64(Self::UNIT_ROUNDOFF)
    }

    fn two_pi() -> Self {
        Self::pi() * Self::from_f64(2.0)
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn round(self) -> Self {
        (self + Self::from_f64(0.5)).floor()
    }

    /// Fractional part in `[0, 1)`.
    fn fract(self) -> Self {
        self - self.floor()
    }

    /// Integer value of `floor(self)`; saturates far outside the `i64` range.
    fn floor_i64(self) -> i64 {
        let f = self.floor();
        let hi = f.to_f64();
        let hi_int = hi as i64;
        (f - Self::from_i64(hi_int)).to_f64() as i64 + hi_int
    }

    fn signum(self) -> Self {
        if self > Self::zero() {
            Self::one()
        } else if self < Self::zero() {
            -Self::one()
        } else {
            Self::zero()
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Real power for positive bases.
    fn powf(self, e: Self) -> Self {
        (self.ln() * e).exp()
    }

    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }

    fn parse_decimal(s: &str) -> Result<Self> {
        parse_decimal_generic(s)
    }

    /// Scientific notation with all carried digits.
    fn to_decimal(self) -> String {
        to_decimal_generic(self, Self::DIGITS)
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Std;
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
    const DIGITS: usize = 17;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn ln2() -> Self {
        std::f64::consts::LN_2
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn floor_i64(self) -> i64 {
        f64::floor(self) as i64
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
    fn parse_decimal(s: &str) -> Result<Self> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
    }
    fn to_decimal(self) -> String {
        // Shortest representation that round-trips.
        format!("{self:e}")
    }
}

/// Parses `[-]digits[.digits][e[-]digits]` digit by digit in the target type.
pub fn parse_decimal_generic<S: Real>(s: &str) -> Result<S> {
    let bad = || Error::Parse(format!("not a decimal number: `{s}`"));
    let t = s.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exp_part) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let mut exp10: i32 = match exp_part {
        Some(e) => e.parse().map_err(|_| bad())?,
        None => 0,
    };
    let ten = S::from_f64(10.0);
    let mut acc = S::zero();
    let mut seen_digit = false;
    let mut seen_point = false;
    // Digits beyond what the type carries only shift the exponent.
    let mut kept = 0usize;
    for c in mantissa.chars() {
        match c {
            '0'..='9' => {
                seen_digit = true;
                let d = c as u32 - '0' as u32;
                if kept < S::DIGITS + 8 {
                    acc = acc * ten + S::from_f64(d as f64);
                    if acc != S::zero() {
                        kept += 1;
                    }
                    if seen_point {
                        exp10 -= 1;
                    }
                } else if !seen_point {
                    exp10 += 1;
                }
            }
            '.' if !seen_point => seen_point = true,
            _ => return Err(bad()),
        }
    }
    if !seen_digit {
        return Err(bad());
    }
    let value = if exp10 >= 0 {
        acc * ten.powi(exp10)
    } else {
        acc / ten.powi(-exp10)
    };
    Ok(if neg { -value } else { value })
}

/// Formats `x` as `d.ddd…e±k` with `digits` significant digits.
pub fn to_decimal_generic<S: Real>(x: S, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{}", x.to_f64());
    }
    if x == S::zero() {
        return "0e0".to_string();
    }
    let neg = x < S::zero();
    let mut y = x.abs();
    let ten = S::from_f64(10.0);
    let mut e = y.to_f64().log10().floor() as i32;
    y = if e >= 0 { y / ten.powi(e) } else { y * ten.powi(-e) };
    if y >= ten {
        y /= ten;
        e += 1;
    }
    if y < S::one() {
        y *= ten;
        e -= 1;
    }
    let mut out: Vec<u8> = Vec::with_capacity(digits + 1);
    for _ in 0..=digits {
        let mut d = y.floor().to_f64() as i64;
        d = d.clamp(0, 9);
        out.push(d as u8);
        y = (y - S::from_f64(d as f64)) * ten;
    }
    // Round the extra digit into the kept ones.
    if out[digits] >= 5 {
        let mut i = digits;
        loop {
            if i == 0 {
                out.insert(0, 1);
                e += 1;
                break;
            }
            i -= 1;
            if out[i] == 9 {
                out[i] = 0;
            } else {
                out[i] += 1;
                break;
            }
        }
    }
    out.truncate(digits);
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push((b'0' + out[0]) as char);
    if out.len() > 1 {
        s.push('.');
        for d in &out[1..] {
            s.push((b'0' + d) as char);
        }
    }
    s.push('e');
    s.push_str(&e.to_string());
    s
}

/// Implements the `num_traits` plumbing that `num_complex::Complex` needs.
macro_rules! impl_num_traits {
    ($t:ty) => {
        impl num_traits::Zero for $t {
            fn zero() -> Self {
                <$t>::from_f64_exact(0.0)
            }
            fn is_zero(&self) -> bool {
                *self == Self::zero()
            }
        }

        impl num_traits::One for $t {
            fn one() -> Self {
                <$t>::from_f64_exact(1.0)
            }
        }

        impl num_traits::Num for $t {
            type FromStrRadixErr = crate::error::Error;
            fn from_str_radix(s: &str, radix: u32) -> crate::error::Result<Self> {
                if radix != 10 {
                    return Err(crate::error::Error::Parse(format!("radix {radix}")));
                }
                crate::numerics::real::parse_decimal_generic(s)
            }
        }

        impl std::ops::Rem for $t {
            type Output = Self;
            fn rem(self, rhs: Self) -> Self {
                let q = (self / rhs).floor();
                self - q * rhs
            }
        }

        impl std::str::FromStr for $t {
            type Err = crate::error::Error;
            fn from_str(s: &str) -> crate::error::Result<Self> {
                crate::numerics::real::parse_decimal_generic(s)
            }
        }

        impl std::fmt::Display for $t {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                let digits = f.precision().unwrap_or(<$t as crate::numerics::Real>::DIGITS);
                f.write_str(&crate::numerics::real::to_decimal_generic(*self, digits.max(1)))
            }
        }

        impl std::ops::AddAssign for $t {
            fn add_assign(&mut self, rhs: Self) {
                *self = *self + rhs;
            }
        }
        impl std::ops::SubAssign for $t {
            fn sub_assign(&mut self, rhs: Self) {
                *self = *self - rhs;
            }
        }
        impl std::ops::MulAssign for $t {
            fn mul_assign(&mut self, rhs: Self) {
                *self = *self * rhs;
            }
        }
        impl std::ops::DivAssign for $t {
            fn div_assign(&mut self, rhs: Self) {
                *self = *self / rhs;
            }
        }
        impl std::ops::Sub for $t {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                self + (-rhs)
            }
        }
    };
}
pub(crate) use impl_num_traits;
