//! Osculated pairs: every factor `F|_J` of the branches of `ζ_N`, one per
//! atom `J` of the level-`N` dynamical partition, replaced by a polynomial.
//!
//! Near a critical point of order `d` the lift factors as `F = φ(ψ^d)` with
//! analytic diffeomorphisms `ψ`, `φ`. For the unit `u_j = b_d + θ_j` owning
//! the critical point, `ψ(x) = ψ_d(v(x) - n)` where `v = u_{j-1} ∘ … ∘ u_0`,
//! `v(c) = n`, and `ψ_d(t) = t (b_d(t) / t^d)^{1/d}`; then
//! `φ(w) = W(θ_j + n + w)` with `W` the remaining units.

use std::sync::Arc;

use super::polynomial::{osculate, Piece, PolynomialBranch};
use super::AlmostCommutingPair;
use crate::circlemap::{AnalyticMap, AnyMap, CircleMap, MapModel};
use crate::error::{Error, Result};
use crate::numerics::{Arith, ContinuedFraction, Jet, Real};
use crate::pairs::{
    glue, pair_from_map, BaseMap, BasePair, Bump, CommutingPair, Letter,
};

/// Terms of the power series used for `b_d(t) / t^d` near `t = 0`.
const SERIES_TERMS: usize = 90;

/// A critical point of the lift with the data needed to factor it.
#[derive(Debug, Clone)]
struct CriticalFactor<S> {
    /// Position in `[0, 1)` in the map's own coordinate.
    position: S,
    unit: usize,
    d: u32,
}

fn model_critical_factors<S: Real>(map: &AnyMap<S>) -> Result<Vec<CriticalFactor<S>>> {
    let set = map.critical_points()?;
    if set.collided {
        return Err(Error::CriticalCrowding("critical points of the map coincide".into()));
    }
    let model = map.model();
    let tol = S::epsilon().sqrt() * S::from_f64(1e3);
    let mut out = Vec::new();
    for c in &set.points {
        let pre = match map {
            AnyMap::Model(_) => c.position,
            AnyMap::Conjugated(g) => g.psi.inverse(c.position),
        };
        let unit = (0..model.len())
            .find(|&j| {
                let v = model.partial(j, pre);
                (v - v.round()).abs() <= tol
            })
            .ok_or_else(|| Error::InvalidInput(format!("no unit is critical at {}", c.position)))?;
        out.push(CriticalFactor { position: c.position, unit, d: model.units()[unit].criticality() });
    }
    Ok(out)
}

/// `ψ_d(t) = t (b_d(t) / t^d)^{1/d}` on jets.
fn psi_d<S: Real>(model: &MapModel<S>, unit: usize, t: &Jet<S>) -> Jet<S> {
    let u = &model.units()[unit];
    let d = u.criticality();
    let g = if t.value().abs() >= S::from_f64(0.25) {
        let b = u.base(t.clone());
        b / t.powi(d)
    } else {
        let s = u.base_series(SERIES_TERMS + d as usize);
        let mut acc = Jet::constant(s[SERIES_TERMS + d as usize], t.order());
        for i in (0..SERIES_TERMS).rev() {
            acc = (acc * t.clone()).add_constant(s[i + d as usize]);
        }
        acc
    };
    t.clone() * g.powf(S::one() / S::from_u64(d as u64))
}

/// The factorization `G = φ ∘ (·)^d ∘ ψ` of `G = F - shift` around the lifted
/// critical point `c`.
struct Factorization<'a, S: Real> {
    map: &'a AnyMap<S>,
    unit: usize,
    n: S,
    shift: S,
}

impl<'a, S: Real> Factorization<'a, S> {
    fn new(map: &'a AnyMap<S>, factor: &CriticalFactor<S>, c: S, shift: S) -> Self {
        let pre = match map {
            AnyMap::Model(_) => c,
            AnyMap::Conjugated(g) => g.psi.inverse(c),
        };
        let n = map.model().partial(factor.unit, pre).round();
        Self { map, unit: factor.unit, n, shift }
    }

    fn psi(&self, x: Jet<S>) -> Jet<S> {
        let y = match self.map {
            AnyMap::Model(_) => x,
            AnyMap::Conjugated(g) => g.psi.inverse(x),
        };
        let model = self.map.model();
        let t = model.partial(self.unit, y).add_constant(-self.n);
        psi_d(model, self.unit, &t)
    }

    fn phi(&self, w: Jet<S>) -> Jet<S> {
        let model = self.map.model();
        let theta = model.units()[self.unit].theta();
        let y = w.add_constant(theta + self.n);
        let z = model.units()[self.unit + 1..].iter().fold(y, |acc, u| u.apply(acc));
        let z = match self.map {
            AnyMap::Model(_) => z,
            AnyMap::Conjugated(g) => g.psi.apply(z),
        };
        z.add_constant(-self.shift)
    }
}

/// Osculation of the lift letter `G = F - shift` along the orbit of one
/// interval.
struct Osculator<'a, S: Real> {
    map: &'a AnyMap<S>,
    shift: S,
    factors: Vec<CriticalFactor<S>>,
    order: usize,
}

impl<'a, S: Real> Osculator<'a, S> {
    fn g(&self, x: S) -> S {
        self.map.apply(x) - self.shift
    }

    /// The lifted critical points in `[l, r]`.
    fn critical_in(&self, l: S, r: S) -> Vec<(usize, S)> {
        let tol = S::epsilon() * S::from_f64(64.0) * (S::one() + r.abs());
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let mut c = f.position + (l - tol - f.position).floor() + S::one();
            if c - S::one() >= l - tol {
                c -= S::one();
            }
            while c <= r + tol {
                out.push((i, c));
                c += S::one();
            }
        }
        out
    }

    fn piece(&self, l: S, r: S) -> Result<Piece<S>> {
        let crit = self.critical_in(l, r);
        match crit.as_slice() {
            [] => {
                let g = |x: Jet<S>| self.map.apply(x).add_constant(-self.shift);
                Ok(Piece::Smooth(osculate(g, l, r, self.order)?))
            }
            [(i, c)] => {
                let f = &self.factors[*i];
                let fac = Factorization::new(self.map, f, *c, self.shift);
                let alpha = fac.psi(Jet::constant(l, 0)).value();
                let beta = fac.psi(Jet::constant(r, 0)).value();
                let two = S::from_f64(2.0);
                let width = beta - alpha;
                let a = -(alpha + beta) / width;
                let inner = osculate(
                    |x| fac.psi(x).scale(two / width).add_constant(a),
                    l,
                    r,
                    self.order,
                )?;
                let kappa = (width / two).powi(f.d as i32);
                let sl = (-S::one() - a).powi(f.d as i32);
                let sr = (S::one() - a).powi(f.d as i32);
                let outer = osculate(|s: Jet<S>| fac.phi(s.scale(kappa)), sl, sr, self.order)?;
                Ok(Piece::Critical { inner, a, m: f.d, outer })
            }
            _ => Err(Error::CriticalCrowding(format!(
                "{} critical points in one atom [{l}, {r}]; use a deeper level",
                crit.len()
            ))),
        }
    }

    /// Pieces along `J, G(J), …, G^{count-1}(J)` for `J` between 0 and `end`.
    fn branch(&self, end: S, count: u64, shift: u64) -> Result<PolynomialBranch<S>> {
        let (mut a, mut b) = (S::zero(), end);
        let mut pieces = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let (l, r) = if a <= b { (a, b) } else { (b, a) };
            let m = l.floor();
            pieces.push((m, self.piece(l - m, r - m)?));
            a = self.g(a);
            b = self.g(b);
        }
        Ok(PolynomialBranch::new(pieces, S::from_u64(shift)))
    }
}

/// Osculated version of `R^k ζ` for a map-induced pair `ζ = ζ_n`, built on
/// the level-`(n + k)` partition with jets of order `order` (polynomials of
/// degree `2 order + 1`).
pub fn osculate_pair<S: Real>(pair: &CommutingPair<S>, k: usize, order: usize) -> Result<AlmostCommutingPair<S>> {
    let (map, shift) = pair
        .base()
        .map()
        .ok_or_else(|| Error::InvalidInput("osculation needs a pair induced from a circle map".into()))?;
    let n = pair.level().ok_or_else(|| Error::InvalidInput("osculation needs the pair's level".into()))?;
    let level = n + k as i64;
    let target = pair_from_map(map.clone(), level)?;
    let osc = Osculator { map, shift: S::from_i64(shift), factors: model_critical_factors(map)?, order };
    let (xi0, eta0) = target.base_endpoints();
    let eta_word = target.eta().word();
    let xi_word = target.xi().word();
    let eta = osc.branch(xi0, eta_word.count(Letter::Eta) as u64, eta_word.count(Letter::Xi) as u64)?;
    let xi = osc.branch(eta0, xi_word.count(Letter::Eta) as u64, xi_word.count(Letter::Xi) as u64)?;
    let base = BasePair::new(BaseMap::Polynomial(Arc::new(eta)), BaseMap::Polynomial(Arc::new(xi)));
    let out = CommutingPair::from_base(base);
    let measured = super::commutation_order(&out, order + 2)?;
    Ok(AlmostCommutingPair { pair: out, order: measured })
}

/// Adds a constant `b` to `η` so that the glued map's rotation digits start
/// with `target[..depth]`; `b` is bisected in `[-width, width]`.
pub fn correct_rotation<S: Real>(
    pair: &CommutingPair<S>,
    target: &ContinuedFraction,
    depth: usize,
    width: S,
) -> Result<(CommutingPair<S>, S)> {
    use crate::circlemap::{compare_to_target, OrbitOptions};
    use std::cmp::Ordering;

    if target.len() < depth {
        return Err(Error::DepthUnavailable { requested: depth, available: target.len() });
    }
    let arc = Arc::new(pair.clone());
    let build = |b: S| {
        let eta = BaseMap::Perturbed {
            inner: Box::new(BaseMap::Branch { pair: arc.clone(), side: Letter::Eta }),
            bump: Bump::constant(b),
        };
        let xi = BaseMap::Branch { pair: arc.clone(), side: Letter::Xi };
        CommutingPair::from_base(BasePair::new(eta, xi))
    };
    let cmp = |b: S| -> Result<Ordering> {
        let g = glue(&build(b), None)?;
        compare_to_target(&g, 0, &target.digits[..depth], depth, OrbitOptions::default())
    };
    let c0 = cmp(S::zero())?;
    if c0 == Ordering::Equal {
        return Ok((build(S::zero()), S::zero()));
    }
    let (clo, chi) = (cmp(-width)?, cmp(width)?);
    let (mut lo, mut hi, lo_order) = if clo != c0 {
        (-width, S::zero(), clo)
    } else if chi != c0 {
        (S::zero(), width, c0)
    } else {
        return Err(Error::TargetUnreachable(format!("no shift within ±{width} reaches {target}")));
    };
    let half = S::from_f64(0.5);
    let tol = S::epsilon() * S::from_f64(64.0);
    loop {
        let mid = (lo + hi) * half;
        let c = cmp(mid)?;
        if c == Ordering::Equal {
            return Ok((build(mid), mid));
        }
        if c == lo_order {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol {
            return Err(Error::PrecisionExhausted("rotation correction did not hit the cylinder".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use crate::numerics::{One, Zero};
    use crate::circlemap::{ConjugatedMap, Diffeo};
    use crate::numerics::DoubleDouble;
    use crate::pairs::{dist_c0, height, renormalize, Height, HEIGHT_CAP};

    type DD = DoubleDouble;

    fn golden_bicubic() -> Arc<AnyMap<DD>> {
        Arc::new(crate::testing::golden_bicubic(0.23).into())
    }

    #[test]
    fn psi_d_reproduces_unit() {
        let m = MapModel::from_parts(&[5], &[DD::zero()]).unwrap();
        for t in [-0.3, -0.01, 0.004, 0.2, 0.4] {
            let tj = Jet::variable(DD::from_f64(t), 2);
            let psi = psi_d(&m, 0, &tj);
            let b = m.units()[0].base(tj.clone());
            let diff = psi.powi(5) - b;
            assert!(diff.coeffs().iter().all(|c| c.abs().to_f64() < 1e-28), "t = {t}");
            assert!(psi.derivatives()[1] > DD::zero());
        }
    }

    #[test]
    fn distance_to_osculation_shrinks_with_level() {
        let f = golden_bicubic();
        let base = pair_from_map(f.clone(), 0).unwrap();
        let mut prev = f64::INFINITY;
        for k in [4usize, 6, 8] {
            let osc = osculate_pair(&base, k, 3).unwrap();
            let exact = pair_from_map(f.clone(), k as i64).unwrap();
            let d = dist_c0(&osc.pair, &exact, 64).to_f64();
            assert!(d < prev, "k={k}: {d} !< {prev}");
            assert!(d > 0.0);
            prev = d;
        }
    }

    #[test]
    fn osculated_pair_keeps_height_and_commutes_to_high_order() {
        let f = golden_bicubic();
        let base = pair_from_map(f.clone(), 0).unwrap();
        let osc = osculate_pair(&base, 5, 3).unwrap();
        assert!(osc.order >= 3, "order {}", osc.order);
        let exact = pair_from_map(f, 5).unwrap();
        assert_eq!(height(&osc.pair, HEIGHT_CAP).unwrap(), height(&exact, HEIGHT_CAP).unwrap());
        assert!(matches!(height(&osc.pair, HEIGHT_CAP).unwrap(), Height::Finite(1)));
        let r = renormalize(&osc.pair).unwrap();
        assert!(r.xi0() == DD::one());
    }

    #[test]
    fn conjugated_maps_osculate() {
        let m = crate::testing::golden_cubic();
        let g = ConjugatedMap { inner: m, psi: Diffeo::new(DD::from_f64(0.05)).unwrap() };
        let g = Arc::new(AnyMap::from(g));
        let base = pair_from_map(g.clone(), 0).unwrap();
        let osc = osculate_pair(&base, 6, 3).unwrap();
        let d = dist_c0(&osc.pair, &pair_from_map(g, 6).unwrap(), 64);
        assert!(d.to_f64() < 1e-4, "{d}");
    }

    #[test]
    fn shallow_levels_crowd() {
        let f = golden_bicubic();
        let base = pair_from_map(f, -1).unwrap();
        assert!(matches!(osculate_pair(&base, 0, 2), Err(Error::CriticalCrowding(_))));
    }
}
