//! The invariant measure by Birkhoff counting along the orbit of 0.
//!
//! Counts are taken over a full return time `q_m`, where the
//! Denjoy–Koksma inequality bounds the error of an arc's measure by `2 / q_m`.

use super::model::CircleMap;
use super::rotation::{DigitStream, OrbitOptions};
use crate::error::{Error, Result};
use crate::numerics::{ContinuedFraction, Real};

/// Orbit of 0 reduced to `[0, 1)`, cut at the largest return time `q_m <= iters`.
#[derive(Debug, Clone)]
pub struct ReturnOrbit<S> {
    pub points: Vec<S>,
    pub digits: Vec<u64>,
}

impl<S: Real> ReturnOrbit<S> {
    pub fn return_time(&self) -> usize {
        self.points.len()
    }

    pub fn error_bound(&self) -> S {
        S::from_f64(2.0) / S::from_u64(self.points.len() as u64)
    }

    /// Fraction of orbit points in the arc `[a, b)` (taken counterclockwise).
    pub fn arc_measure(&self, a: S, b: S) -> S {
        let a = a.fract();
        let b = b.fract();
        let count = self
            .points
            .iter()
            .filter(|&&x| if a <= b { x >= a && x < b } else { x >= a || x < b })
            .count();
        S::from_u64(count as u64) / S::from_u64(self.points.len() as u64)
    }
}

pub fn return_orbit<S: Real, M: CircleMap<S> + ?Sized>(
    map: &M,
    iters: usize,
    opts: OrbitOptions,
) -> Result<ReturnOrbit<S>> {
    let mut stream = DigitStream::new(map, opts);
    let mut q_last = 1u64;
    loop {
        // Peek: the next return time is q_{m+1} = r_m q_m + q_{m-1} >= q_m + q_{m-1}.
        let qs = stream.denominators();
        let q_prev = if qs.len() >= 2 { qs[qs.len() - 2] } else { 0 };
        if q_last + q_prev > iters as u64 {
            break;
        }
        match stream.next_digit_capped(iters as u64) {
            Ok(Some(_)) => {
                let q = *stream.denominators().last().unwrap();
                if q > iters as u64 {
                    break;
                }
                q_last = q;
            }
            Ok(None) => break,
            Err(Error::RationalLock { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let qs = stream.denominators();
    let q = *qs.iter().rev().find(|&&q| q <= iters as u64).unwrap_or(&1);
    stream.ensure_orbit(q as usize)?;
    let points = stream.orbit()[..q as usize].iter().map(|x| x.fract()).collect();
    let depth = qs.iter().position(|&x| x == q).unwrap_or(0);
    Ok(ReturnOrbit { points, digits: stream.digits()[..depth].to_vec() })
}

/// `μ[0, x)` with its error bound.
pub fn measure_cdf<S: Real, M: CircleMap<S> + ?Sized>(map: &M, x: S, iters: usize) -> Result<(S, S)> {
    let orbit = return_orbit(map, iters, OrbitOptions::default())?;
    Ok((orbit.arc_measure(S::zero(), x.fract()), orbit.error_bound()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signature<S> {
    pub rho: ContinuedFraction,
    pub criticalities: Vec<u32>,
    /// `δ_j = μ[c_j, c_{j+1})`, summing to 1.
    pub deltas: Vec<S>,
    pub critical_points: Vec<S>,
    /// Bound on each `δ_j` from the return time used.
    pub error_bound: S,
}

impl<S: Real> Signature<S> {
    /// Same digits and criticalities, deltas within `tol`.
    pub fn agrees_with(&self, other: &Signature<S>, tol: S) -> bool {
        let depth = self.rho.len().min(other.rho.len());
        self.rho.digits[..depth] == other.rho.digits[..depth]
            && self.criticalities == other.criticalities
            && self.deltas.iter().zip(&other.deltas).all(|(a, b)| (*a - *b).abs() <= tol)
    }
}

pub fn signature<S: Real, M: CircleMap<S> + ?Sized>(map: &M, depth: usize, iters: usize) -> Result<Signature<S>> {
    let opts = OrbitOptions::default();
    let mut stream = DigitStream::new(map, opts);
    stream.take(depth)?;
    let rho = ContinuedFraction::new(stream.digits().to_vec());
    let crit = map.critical_points()?;
    let orbit = return_orbit(map, iters, opts)?;
    let n = crit.points.len();
    let deltas = (0..n)
        .map(|j| {
            let a = crit.points[j].position;
            let b = if j + 1 < n { crit.points[j + 1].position } else { S::one() };
            if n == 1 {
                S::one()
            } else {
                orbit.arc_measure(a, b)
            }
        })
        .collect();
    Ok(Signature {
        rho,
        criticalities: crit.criticalities(),
        deltas,
        critical_points: crit.positions(),
        error_bound: orbit.error_bound(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circlemap::model::{CriticalSet, MapModel};
    use crate::circlemap::rotation::tune_family;
    use crate::numerics::{DoubleDouble, One};

    type DD = DoubleDouble;

    struct Rotation(DD);
    impl CircleMap<DD> for Rotation {
        fn lift(&self, x: DD) -> DD {
            x + self.0
        }
        fn critical_points(&self) -> Result<CriticalSet<DD>> {
            unreachable!()
        }
    }

    #[test]
    fn rotation_measure_is_lebesgue() {
        let g: DD = ContinuedFraction::periodic_value(&[1]);
        for x in [0.1, 0.5, 0.77] {
            let (m, err) = measure_cdf(&Rotation(g), DD::from_f64(x), 1000).unwrap();
            assert!((m - DD::from_f64(x)).abs() <= err, "{m} vs {x}");
            assert_eq!(err, DD::from_f64(2.0) / DD::from_f64(987.0));
        }
    }

    #[test]
    fn equal_twist_bicubic_oracle() {
        // u∘u with u conjugate to a rotation by β, 2β ≡ ρ: δ_0 is (1 - ρ)/2 or 1 - ρ/2.
        let target = ContinuedFraction::new(vec![1; 20]);
        let base = MapModel::from_parts(&[3, 3], &[DD::from_f64(0.0), DD::from_f64(0.0)]).unwrap();
        let theta = tune_family(
            |t| base.with_all_thetas(t),
            DD::from_f64(0.0),
            DD::from_f64(1.0),
            &target,
            20,
            OrbitOptions::default(),
        )
        .unwrap();
        let f = base.with_all_thetas(theta);
        let sig = signature(&f, 12, 5000).unwrap();
        assert_eq!(sig.criticalities, vec![3, 3]);
        let rho: DD = ContinuedFraction::periodic_value(&[1]);
        let lift_rho = rotation_lift(&f);
        let want = if lift_rho < 1 { DD::one() - rho * DD::from_f64(0.5) } else { (DD::one() - rho) * DD::from_f64(0.5) };
        assert!((sig.deltas[0] - want).abs() <= sig.error_bound, "{} vs {want}", sig.deltas[0]);
        assert!((sig.deltas[0] + sig.deltas[1] - DD::one()).abs().to_f64() < 1e-30);
    }

    fn rotation_lift(f: &MapModel<DD>) -> i64 {
        DigitStream::new(f, OrbitOptions::default()).integer_part()
    }
}
