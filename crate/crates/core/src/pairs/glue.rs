//! Gluing a pair into a circle map.
//!
//! `I = [x_0, ξ(x_0)]` with its endpoints identified by `ξ` becomes a circle
//! through the affine chart `t = -x / L`, `L = ξ(x_0) - x_0`. The chart puts
//! the critical point of the pair at `t = 0` and sends `I` onto
//! `[t_0 - 1, t_0]`, `t_0 = -x_0 / L`.

use super::base::BaseMap;
use super::pair::CommutingPair;
use super::word::Letter;
use crate::circlemap::{measure, CircleMap, CriticalPoint, CriticalSet, Signature};
use crate::error::{Error, Result};
use crate::numerics::{bisect_monotone, Jet, Real};

#[derive(Debug, Clone)]
pub struct GluedCircleMap<S: Real> {
    pair: CommutingPair<S>,
    x0: S,
    length: S,
    t0: S,
    /// `None` when the pair is not spelled over a circle map.
    critical: Option<CriticalSet<S>>,
}

/// Glues at `x` (default: the midpoint of `I_ξ`).
pub fn glue<S: Real>(pair: &CommutingPair<S>, x: Option<S>) -> Result<GluedCircleMap<S>> {
    let pair = pair.normalized();
    let eta0 = pair.eta0();
    let x0 = x.unwrap_or(eta0 * S::from_f64(0.5));
    if !(x0 * eta0 > S::zero() && x0.abs() < eta0.abs()) {
        return Err(Error::InvalidInput(format!("glue point {x0} is not inside I_ξ = [0, {eta0}]")));
    }
    let d = pair.xi().eval(Jet::variable(x0, 1)).derivatives()[1];
    if d.abs() <= S::epsilon().sqrt() {
        return Err(Error::CriticalGluePoint);
    }
    let length = pair.xi().eval(x0) - x0;
    let t0 = -x0 / length;
    let mut g = GluedCircleMap { pair, x0, length, t0, critical: None };
    g.critical = match g.census() {
        Ok(c) => Some(c),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(g)
}

impl<S: Real> GluedCircleMap<S> {
    pub fn pair(&self) -> &CommutingPair<S> {
        &self.pair
    }

    pub fn glue_point(&self) -> S {
        self.x0
    }

    fn chart(&self, x: S) -> S {
        -x / self.length
    }

    fn unchart(&self, t: S) -> S {
        -t * self.length
    }

    fn in_i(&self, x: S) -> bool {
        let t = self.chart(x);
        t >= self.t0 - S::one() && t <= self.t0
    }

    /// The glued map on `I`, in pair coordinates.
    pub fn apply_on_interval(&self, x: S) -> S {
        if x != S::zero() && (x > S::zero()) == (self.x0 > S::zero()) {
            return self.pair.eta().eval(self.pair.xi().eval(x));
        }
        let y = self.pair.eta().eval(x);
        if self.in_i(y) {
            y
        } else {
            self.pair.xi().eval(y)
        }
    }

    /// Point of `[0, ξ(x_0)]` where `η` crosses `x_0`, or `ξ(x_0)` if it does not.
    fn switch_point(&self) -> Result<S> {
        let end = self.pair.xi().eval(self.x0);
        let g = |x: S| self.pair.eta().eval(x) - self.x0;
        match bisect_monotone(g, S::zero(), end, S::epsilon() * S::from_f64(8.0)) {
            Ok(x) => Ok(x),
            Err(Error::NoSignChange) => Ok(end),
            Err(e) => Err(e),
        }
    }

    /// Critical points, found by walking the composition words of each piece
    /// and pulling back the critical points of the letters they pass.
    fn census(&self) -> Result<CriticalSet<S>> {
        let p = &self.pair;
        let xs = self.switch_point()?;
        let end = p.xi().eval(self.x0);
        let xi_eta = p.xi().word().then(p.eta().word());
        let eta_xi = p.eta().word().then(p.xi().word());
        let pieces = [
            (self.x0, S::zero(), xi_eta.letters().to_vec()),
            (S::zero(), xs, eta_xi.letters().to_vec()),
            (xs, end, p.eta().word().letters().to_vec()),
        ];
        let crit = p
            .base()
            .map_critical_set()?
            .ok_or_else(|| Error::Unsupported("critical census needs a pair over a circle map".into()))?
            .clone();
        let mut found: Vec<CriticalPoint<S>> = Vec::new();
        for (a, b, word) in pieces {
            if a == b {
                continue;
            }
            for (x, d) in pull_back_critical(&self.pair, a, b, &word, &crit)? {
                found.push(CriticalPoint { position: self.chart(x).fract(), criticality: d });
            }
        }
        // The same point can show up at a shared piece endpoint; keep it once.
        let tol = S::UNIT_ROUNDOFF.sqrt();
        found.sort_by(|u, v| u.position.partial_cmp(&v.position).unwrap());
        let mut points: Vec<CriticalPoint<S>> = Vec::new();
        for c in found {
            match points.last_mut() {
                Some(last) if (c.position - last.position).to_f64() <= tol => {
                    last.criticality = last.criticality.max(c.criticality)
                }
                _ => points.push(c),
            }
        }
        if points.len() > 1 && (S::one() - points.last().unwrap().position + points[0].position).to_f64() <= tol {
            let last = points.pop().unwrap();
            points[0].criticality = points[0].criticality.max(last.criticality);
        }
        Ok(CriticalSet { points, collided: false, merge_tolerance: tol })
    }

}

/// Points of `[a, b]` (pair coordinates) that `word` maps through a
/// critical point of one of its lift letters, with that criticality.
fn pull_back_critical<S: Real>(
    pair: &CommutingPair<S>,
    a: S,
    b: S,
    word: &[Letter],
    crit: &CriticalSet<S>,
) -> Result<Vec<(S, u32)>> {
    let base = pair.base();
    let scale = pair.scale();
    let (mut lo, mut hi) = (a * scale, b * scale);
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let (u_lo, u_hi) = (lo, hi);
    let mut out = Vec::new();
    for (i, &l) in word.iter().enumerate() {
        match base.get(l) {
            BaseMap::Lift { .. } => {
                for c in &crit.points {
                    let mut n = (lo - c.position).floor() + S::one();
                    if c.position + n - S::one() >= lo {
                        n -= S::one();
                    }
                    while c.position + n <= hi {
                        let target = c.position + n;
                        let prefix = |u: S| word[..i].iter().fold(u, |acc, &m| base.apply(m, acc)) - target;
                        let tol = S::epsilon() * S::from_f64(16.0) * (S::one() + u_hi.abs());
                        let u = bisect_monotone(prefix, u_lo, u_hi, tol)?;
                        out.push((u / scale, c.criticality));
                        n += S::one();
                    }
                }
            }
            BaseMap::UnitShift => {}
            _ => return Err(Error::Unsupported("critical census over non-map letters".into())),
        }
        lo = base.apply(l, lo);
        hi = base.apply(l, hi);
    }
    Ok(out)
}

/// Critical points of a branch strictly inside its domain, in pair
/// coordinates, with their orders. Needs a pair spelled over a circle map.
pub fn branch_critical_points<S: Real>(pair: &CommutingPair<S>, side: Letter) -> Result<Vec<(S, u32)>> {
    let crit = pair
        .base()
        .map_critical_set()?
        .ok_or_else(|| Error::Unsupported("critical census needs a pair over a circle map".into()))?
        .clone();
    let (a, b) = pair.branch(side).domain();
    let mut pts = pull_back_critical(pair, a, b, pair.branch(side).word().letters(), &crit)?;
    let tol = S::epsilon().sqrt() * b.abs();
    pts.retain(|(x, _)| (*x - a).abs() > tol && (*x - b).abs() > tol);
    pts.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
    pts.dedup_by(|u, v| (u.0 - v.0).abs() <= tol);
    Ok(pts)
}

impl<S: Real> CircleMap<S> for GluedCircleMap<S> {
    fn lift(&self, t: S) -> S {
        let m = (t - (self.t0 - S::one())).floor();
        let tr = t - m;
        let fx = self.apply_on_interval(self.unchart(tr));
        let t1 = self.chart(fx);
        t + (t1 - tr).fract()
    }

    fn critical_points(&self) -> Result<CriticalSet<S>> {
        self.critical
            .clone()
            .ok_or_else(|| Error::Unsupported("critical census needs a pair over a circle map".into()))
    }
}

/// Signature of the glued map: digits from the orbit, deltas by Birkhoff counting.
pub fn pair_signature<S: Real>(pair: &CommutingPair<S>, depth: usize, iters: usize) -> Result<Signature<S>> {
    let g = glue(pair, None)?;
    measure::signature(&g, depth, iters)
}
