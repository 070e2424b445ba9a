//! Elementary functions for the multi-component types, written against the
//! arithmetic of [`Real`] only (never its transcendental methods, except `pi`
//! and `ln2` once they are initialized).

use super::real::Real;

fn small<S: Real>(term: S, scale: S) -> bool {
    term.abs().to_f64() <= S::UNIT_ROUNDOFF * 0.25 * scale.abs().to_f64()
}

/// `arctan(1/n)` by its alternating series.
fn atan_inv<S: Real>(n: f64) -> S {
    let inv = S::one() / S::from_f64(n);
    let inv2 = inv * inv;
    let mut power = inv;
    let mut sum = S::zero();
    let mut k = 0u32;
    loop {
        let term = power / S::from_f64((2 * k + 1) as f64);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        if small(term, sum) {
            return sum;
        }
        power *= inv2;
        k += 1;
    }
}

pub(crate) fn machin_pi<S: Real>() -> S {
    atan_inv::<S>(5.0) * S::from_f64(16.0) - atan_inv::<S>(239.0) * S::from_f64(4.0)
}

pub(crate) fn series_ln2<S: Real>() -> S {
    // ln 2 = 2 artanh(1/3)
    let inv = S::one() / S::from_f64(3.0);
    let inv2 = inv * inv;
    let mut power = inv;
    let mut sum = S::zero();
    let mut k = 0u32;
    loop {
        let term = power / S::from_f64((2 * k + 1) as f64);
        sum += term;
        if small(term, sum) {
            return sum * S::from_f64(2.0);
        }
        power *= inv2;
        k += 1;
    }
}

pub(crate) fn sqrt_newton<S: Real>(x: S, iterations: usize) -> S {
    if x == S::zero() {
        return x;
    }
    if x < S::zero() {
        return S::from_f64(f64::NAN);
    }
    let half = S::from_f64(0.5);
    let mut y = S::from_f64(x.to_f64().sqrt());
    for _ in 0..iterations {
        y = (y + x / y) * half;
    }
    y
}

pub(crate) fn exp<S: Real>(x: S) -> S {
    let xf = x.to_f64();
    if xf > 709.0 {
        return S::from_f64(f64::INFINITY);
    }
    if xf < -745.0 {
        return S::zero();
    }
    if x == S::zero() {
        return S::one();
    }
    let k = (xf / std::f64::consts::LN_2).round();
    let r = x - S::ln2() * S::from_f64(k);
    // Shrink by 2^-10, sum expm1, then undo with expm1(2s) = 2 expm1(s) + expm1(s)^2.
    let s = r * S::from_f64(1.0 / 1024.0);
    let mut term = s;
    let mut sum = s;
    let mut i = 2.0;
    loop {
        term = term * s / S::from_f64(i);
        sum += term;
        if small(term, sum) {
            break;
        }
        i += 1.0;
    }
    let two = S::from_f64(2.0);
    for _ in 0..10 {
        sum = sum * two + sum * sum;
    }
    let result = sum + S::one();
    // Split the power of two so both halves stay normal.
    let k = k as i32;
    let h = k / 2;
    result * S::from_f64(2f64.powi(h)) * S::from_f64(2f64.powi(k - h))
}

pub(crate) fn ln_newton<S: Real>(x: S, iterations: usize) -> S {
    if !(x > S::zero()) {
        return S::from_f64(f64::NAN);
    }
    let mut y = S::from_f64(x.to_f64().ln());
    for _ in 0..iterations {
        y = y + x * exp(-y) - S::one();
    }
    y
}

pub(crate) fn sin_cos<S: Real>(x: S) -> (S, S) {
    if x == S::zero() {
        return (S::zero(), S::one());
    }
    let half_pi = S::pi() * S::from_f64(0.5);
    let k = (x / half_pi).round();
    let r = x - k * half_pi;
    let r2 = r * r;
    let mut term = r;
    let mut s = r;
    let mut n = 1.0;
    loop {
        term = -(term * r2) / S::from_f64((n + 1.0) * (n + 2.0));
        s += term;
        if small(term, s) {
            break;
        }
        n += 2.0;
    }
    // |r| <= pi/4 keeps cos r >= 0.7, so the square root is well conditioned.
    let c = (S::one() - s * s).sqrt();
    let quadrant = (k.to_f64() as i64).rem_euclid(4);
    match quadrant {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}
