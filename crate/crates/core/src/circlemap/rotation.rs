//! Rotation digits read off the orbit of 0, and twist tuning.
//!
//! The digits are the heights of the successive renormalizations of the pair
//! `(F - k, x - 1)`. Everything is combinatorial on the lifted orbit
//! `x_m = F^m(0) - mk`: the pair at stage `n` has branches
//! `ξ = F^{q_n} - p_n` and `η = F^{q_{n+1}} - p_{n+1}`, so
//! `η^a(ξ(0)) = x_{q_n + a q_{n+1}} - (p_n + a p_{n+1})`.

use std::cmp::Ordering;

use super::model::CircleMap;
use crate::error::{Error, Result};
use crate::numerics::{ContinuedFraction, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitOptions {
    /// Longest orbit computed before giving up with `DepthUnavailable`.
    pub max_orbit: usize,
    /// Heights above this are treated as infinite (a rational lock).
    pub max_height: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self { max_orbit: 5_000_000, max_height: 100_000 }
    }
}

/// Lazily produces rotation digits of a circle map.
pub struct DigitStream<'a, S: Real, M: CircleMap<S> + ?Sized> {
    map: &'a M,
    shift: S,
    orbit: Vec<S>,
    digits: Vec<u64>,
    // (q_n, p_n) and (q_{n+1}, p_{n+1}) of the current pair.
    xi: (u64, u64),
    eta: (u64, u64),
    opts: OrbitOptions,
    finished: Option<Error>,
}

impl<'a, S: Real, M: CircleMap<S> + ?Sized> DigitStream<'a, S, M> {
    pub fn new(map: &'a M, opts: OrbitOptions) -> Self {
        let f0 = map.lift(S::zero());
        let shift = f0.floor();
        let finished = if f0 == shift { Some(Error::RationalLock { digit: 0 }) } else { None };
        Self {
            map,
            shift,
            orbit: vec![S::zero()],
            digits: Vec::new(),
            xi: (0, 1),
            eta: (1, 0),
            opts,
            finished,
        }
    }

    /// Integer part `k` of the lifted rotation number.
    pub fn integer_part(&self) -> i64 {
        self.shift.floor_i64()
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `x_m` for `m` up to the computed length.
    pub fn orbit(&self) -> &[S] {
        &self.orbit
    }

    /// Convergent denominators `q_0, …, q_len`.
    pub fn denominators(&self) -> Vec<u64> {
        let mut q = vec![1u64];
        let (mut a, mut b) = (0u64, 1u64);
        for &d in &self.digits {
            let next = d.saturating_mul(b).saturating_add(a);
            a = b;
            b = next;
            q.push(b);
        }
        q
    }

    /// Current `(q_{n+1}, p_{n+1})`, the return data of the last digit.
    pub fn last_return(&self) -> (u64, u64) {
        self.eta
    }

    pub fn ensure_orbit(&mut self, len: usize) -> Result<()> {
        if len > self.opts.max_orbit {
            return Err(Error::DepthUnavailable { requested: len, available: self.opts.max_orbit });
        }
        while self.orbit.len() <= len {
            let x = *self.orbit.last().unwrap();
            self.orbit.push(self.map.lift(x) - self.shift);
        }
        Ok(())
    }

    fn value(&self, index: u64, p: u64) -> S {
        self.orbit[index as usize] - S::from_u64(p)
    }

    pub fn next_digit(&mut self) -> Result<u64> {
        Ok(self.next_digit_capped(self.opts.max_height)?.expect("cap equals max_height"))
    }

    /// Like [`next_digit`](Self::next_digit), but stops counting once the
    /// height exceeds `cap` and returns `None`. The stream cannot continue
    /// after that.
    pub fn next_digit_capped(&mut self, cap: u64) -> Result<Option<u64>> {
        if let Some(e) = &self.finished {
            return Err(e.clone());
        }
        match self.advance(cap.min(self.opts.max_height)) {
            Ok(Some(d)) => Ok(Some(d)),
            Ok(None) if cap < self.opts.max_height => {
                self.finished = Some(Error::Unsupported("digit stream stopped at a cap".into()));
                Ok(None)
            }
            Ok(None) => {
                let e = Error::RationalLock { digit: self.digits.len() };
                self.finished = Some(e.clone());
                Err(e)
            }
            Err(e) => {
                self.finished = Some(e.clone());
                Err(e)
            }
        }
    }

    fn advance(&mut self, cap: u64) -> Result<Option<u64>> {
        let u = S::UNIT_ROUNDOFF;
        let n = self.digits.len();
        let (qa, pa) = self.xi;
        let (qb, pb) = self.eta;
        self.ensure_orbit(qa as usize)?;
        let v0 = self.value(qa, pa);
        let scale = 1.0 + self.orbit[qa as usize].abs().to_f64();
        if v0.abs().to_f64() < 1e3 * u * scale * (1.0 + (qa as f64).sqrt()) {
            return Err(Error::PrecisionExhausted(format!(
                "orbit separation {:e} at digit {n}",
                v0.to_f64()
            )));
        }
        let positive = v0 > S::zero();
        let mut a: u64 = 1;
        loop {
            if a > cap + 1 {
                return Ok(None);
            }
            let idx = qa + a * qb;
            self.ensure_orbit(idx as usize)?;
            let v = self.value(idx, pa + a * pb);
            let tol = 16.0 * u * (1.0 + self.orbit[idx as usize].abs().to_f64());
            if v.abs().to_f64() <= tol {
                // The orbit of 0 closes up: ρ is this convergent, so the
                // expansion ends with the digit `a`.
                self.digits.push(a);
                self.xi = (qb, pb);
                self.eta = (idx, pa + a * pb);
                self.finished = Some(Error::RationalLock { digit: n + 1 });
                return Ok(Some(a));
            }
            if (v > S::zero()) != positive {
                break;
            }
            a += 1;
        }
        let height = a - 1;
        if height == 0 {
            return Err(Error::PrecisionExhausted(format!("zero height at digit {n}")));
        }
        self.digits.push(height);
        self.xi = (qb, pb);
        self.eta = (height * qb + qa, height * pb + pa);
        Ok(Some(height))
    }

    /// Pulls digits until `depth` are available.
    pub fn take(&mut self, depth: usize) -> Result<()> {
        while self.digits.len() < depth {
            self.next_digit()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationData<S> {
    pub integer_part: i64,
    pub digits: ContinuedFraction,
    /// `q_0, …, q_depth`.
    pub denominators: Vec<u64>,
    /// Lifted orbit `x_m = F^m(0) - m k`.
    pub orbit: Vec<S>,
}

impl<S: Real> RotationData<S> {
    /// `k + [r_0, r_1, …]` truncated at the computed depth.
    pub fn estimate(&self) -> S {
        S::from_i64(self.integer_part) + self.digits.value::<S>()
    }
}

pub fn rotation_digits<S: Real, M: CircleMap<S> + ?Sized>(
    map: &M,
    depth: usize,
    opts: OrbitOptions,
) -> Result<RotationData<S>> {
    let mut stream = DigitStream::new(map, opts);
    stream.take(depth)?;
    Ok(RotationData {
        integer_part: stream.integer_part(),
        digits: ContinuedFraction::new(stream.digits().to_vec()),
        denominators: stream.denominators(),
        orbit: stream.orbit().to_vec(),
    })
}

/// Orders the lifted rotation number of `map` against the cylinder
/// `K + [target_0, …, target_{depth-1}, *]`.
///
/// A rational lock at position `i` acts as an infinite digit there.
pub fn compare_to_target<S: Real, M: CircleMap<S> + ?Sized>(
    map: &M,
    integer_part: i64,
    target: &[u64],
    depth: usize,
    opts: OrbitOptions,
) -> Result<Ordering> {
    let mut stream = DigitStream::new(map, opts);
    let k = stream.integer_part();
    if k != integer_part {
        return Ok(k.cmp(&integer_part));
    }
    for (i, &t) in target.iter().take(depth).enumerate() {
        let d = match stream.next_digit_capped(t) {
            Ok(Some(d)) => d,
            Ok(None) | Err(Error::RationalLock { .. }) => u64::MAX,
            Err(e) => return Err(e),
        };
        if d != t {
            // A larger digit in an even slot means a smaller number.
            let larger_number = (d > t) == (i % 2 == 1);
            return Ok(if larger_number { Ordering::Greater } else { Ordering::Less });
        }
    }
    Ok(Ordering::Equal)
}

/// Parameter value in the middle of the rotation cylinder of `target`
/// (first `depth` digits) for a family increasing in its parameter on
/// `[lo, hi]`.
///
/// The integer part `K` is chosen so that the target lies in the range of
/// the family. Two bisections locate both cylinder edges to a fraction of
/// the cylinder width; the midpoint is returned.
pub fn tune_family<S: Real, M: CircleMap<S>>(
    build: impl Fn(S) -> M,
    lo: S,
    hi: S,
    target: &ContinuedFraction,
    depth: usize,
    opts: OrbitOptions,
) -> Result<S> {
    if target.len() < depth {
        return Err(Error::DepthUnavailable { requested: depth, available: target.len() });
    }
    let digits = &target.digits[..depth];
    let k_lo = build(lo).lift(S::zero()).floor_i64();
    let k_hi = build(hi).lift(S::zero()).floor_i64();
    let cmp = |p: S, k: i64| compare_to_target(&build(p), k, digits, depth, opts);
    let mut chosen = None;
    for k in k_lo..=k_hi {
        if cmp(lo, k)? != Ordering::Greater && cmp(hi, k)? != Ordering::Less {
            chosen = Some(k);
            break;
        }
    }
    let k = chosen.ok_or_else(|| {
        Error::TargetUnreachable(format!("rotation target {target} outside the family range"))
    })?;
    let tol = S::epsilon() * S::from_f64(64.0) * (S::one() + hi.abs());
    let half = S::from_f64(0.5);

    // A parameter inside the cylinder.
    let (mut a, mut b) = (lo, hi);
    let inside = loop {
        let mid = (a + b) * half;
        match cmp(mid, k)? {
            Ordering::Equal => break mid,
            Ordering::Less => a = mid,
            Ordering::Greater => b = mid,
        }
        if b - a <= tol {
            return Err(Error::PrecisionExhausted(format!(
                "rotation cylinder of depth {depth} narrower than the working precision"
            )));
        }
    };

    // Lower edge in [a, inside], upper edge in [inside, b].
    let (mut lo_out, mut lo_in) = (a, inside);
    let (mut hi_in, mut hi_out) = (inside, b);
    if cmp(lo_out, k)? == Ordering::Equal {
        lo_in = lo_out;
    }
    if cmp(hi_out, k)? == Ordering::Equal {
        hi_in = hi_out;
    }
    loop {
        let inner = hi_in - lo_in;
        let stop = tol.max(inner * S::from_f64(1e-4));
        let lo_open = lo_in - lo_out > stop;
        let hi_open = hi_out - hi_in > stop;
        if !lo_open && !hi_open {
            break;
        }
        if lo_open && (!hi_open || lo_in - lo_out >= hi_out - hi_in) {
            let mid = (lo_out + lo_in) * half;
            if cmp(mid, k)? == Ordering::Less {
                lo_out = mid;
            } else {
                lo_in = mid;
            }
        } else {
            let mid = (hi_in + hi_out) * half;
            if cmp(mid, k)? == Ordering::Greater {
                hi_out = mid;
            } else {
                hi_in = mid;
            }
        }
    }
    Ok((lo_in + hi_in) * half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circlemap::model::MapModel;
    use crate::numerics::DoubleDouble;

    type DD = DoubleDouble;

    /// A rigid rotation, whose digits are known in closed form.
    struct Rotation(DD);
    impl CircleMap<DD> for Rotation {
        fn lift(&self, x: DD) -> DD {
            x + self.0
        }
        fn critical_points(&self) -> Result<crate::circlemap::model::CriticalSet<DD>> {
            unreachable!()
        }
    }

    #[test]
    fn rotation_digits_of_rigid_rotations() {
        let g: DD = ContinuedFraction::periodic_value(&[1]);
        let r = rotation_digits(&Rotation(g), 20, OrbitOptions::default()).unwrap();
        assert_eq!(r.digits.digits, vec![1; 20]);
        assert_eq!(r.denominators[..6], [1, 1, 2, 3, 5, 8]);
        let s: DD = ContinuedFraction::periodic_value(&[2]);
        let r = rotation_digits(&Rotation(s + DD::from_f64(3.0)), 10, OrbitOptions::default()).unwrap();
        assert_eq!(r.digits.digits, vec![2; 10]);
        assert_eq!(r.integer_part, 3);
        let x = DD::pi() - DD::from_f64(3.0);
        let r = rotation_digits(&Rotation(x), 5, OrbitOptions::default()).unwrap();
        assert_eq!(r.digits.digits, vec![7, 15, 1, 292, 1]);
    }

    #[test]
    fn rational_rotation_locks() {
        let e = rotation_digits(&Rotation(DD::from_f64(0.375)), 10, OrbitOptions::default()).unwrap_err();
        // 3/8 = [2, 1, 2]: the orbit closes at the third digit, nothing follows.
        assert_eq!(e, Error::RationalLock { digit: 3 });
        let r = Rotation(DD::from_f64(0.375));
        let mut s = DigitStream::new(&r, OrbitOptions::default());
        assert_eq!(s.take(3), Ok(()));
        assert_eq!(s.digits(), &[2, 1, 2]);
        // 1/2 = [2] sits above [2, 2, …].
        let half = Rotation(DD::from_f64(0.5));
        assert_eq!(compare_to_target(&half, 0, &[2; 4], 4, OrbitOptions::default()).unwrap(), Ordering::Greater);
    }

    #[test]
    fn comparison_respects_alternating_order() {
        let opts = OrbitOptions::default();
        let g: DD = ContinuedFraction::periodic_value(&[1]);
        let bump = DD::from_f64(1e-6);
        assert_eq!(compare_to_target(&Rotation(g), 0, &[1; 8], 8, opts).unwrap(), Ordering::Equal);
        assert_eq!(compare_to_target(&Rotation(g + bump), 0, &[1; 30], 30, opts).unwrap(), Ordering::Greater);
        assert_eq!(compare_to_target(&Rotation(g - bump), 0, &[1; 30], 30, opts).unwrap(), Ordering::Less);
        assert_eq!(compare_to_target(&Rotation(g), 1, &[1; 3], 3, opts).unwrap(), Ordering::Less);
    }

    #[test]
    fn tuned_cubic_map_has_golden_digits() {
        let target = ContinuedFraction::new(vec![1; 22]);
        let base = MapModel::from_parts(&[3], &[DD::from_f64(0.0)]).unwrap();
        let theta = tune_family(
            |t| base.with_last_theta(t),
            DD::from_f64(0.0),
            DD::from_f64(1.0),
            &target,
            22,
            OrbitOptions::default(),
        )
        .unwrap();
        // Known golden-mean parameter of the critical standard family.
        assert!((theta.to_f64() - 0.6066610634702).abs() < 1e-9, "{theta}");
        let r = rotation_digits(&base.with_last_theta(theta), 16, OrbitOptions::default()).unwrap();
        assert_eq!(r.digits.digits, vec![1; 16]);
    }
}
