use std::fmt::Write as _;

use super::unit::BasicUnit;
use crate::error::{Error, Result};
use crate::numerics::{bisect_monotone, Arith, Jet, Real};

/// A degree-one circle homeomorphism, seen through a lift `F` with
/// `F(x + 1) = F(x) + 1`.
pub trait CircleMap<S: Real>: Send + Sync {
    fn lift(&self, x: S) -> S;
    fn critical_points(&self) -> Result<CriticalSet<S>>;
}

/// A circle map whose lift extends to complex arguments and jets.
pub trait AnalyticMap<S: Real>: CircleMap<S> {
    fn apply<T: Arith<S>>(&self, x: T) -> T;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint<S> {
    /// Position in `[0, 1)`.
    pub position: S,
    pub criticality: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSet<S> {
    /// Sorted counterclockwise from 0.
    pub points: Vec<CriticalPoint<S>>,
    /// Some critical points merged within `merge_tolerance`.
    pub collided: bool,
    pub merge_tolerance: f64,
}

impl<S: Real> CriticalSet<S> {
    pub fn criticalities(&self) -> Vec<u32> {
        self.points.iter().map(|c| c.criticality).collect()
    }

    pub fn positions(&self) -> Vec<S> {
        self.points.iter().map(|c| c.position).collect()
    }

    /// Sorts and merges points closer than the tolerance (on the circle);
    /// criticalities of merged points multiply.
    pub fn from_unsorted(mut pts: Vec<CriticalPoint<S>>, merge_tolerance: f64) -> Self {
        pts.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
        let mut out: Vec<CriticalPoint<S>> = Vec::new();
        let mut collided = false;
        for p in pts {
            match out.last_mut() {
                Some(last) if (p.position - last.position).to_f64() <= merge_tolerance => {
                    last.criticality *= p.criticality;
                    collided = true;
                }
                _ => out.push(p),
            }
        }
        if out.len() > 1 {
            let last = *out.last().unwrap();
            if (S::one() - last.position + out[0].position).to_f64() <= merge_tolerance {
                out[0].criticality *= last.criticality;
                out.pop();
                collided = true;
            }
        }
        Self { points: out, collided, merge_tolerance }
    }
}

/// Composition `u_{N-1} ∘ … ∘ u_0` of trigonometric units.
#[derive(Debug, Clone, PartialEq)]
pub struct MapModel<S> {
    units: Vec<BasicUnit<S>>,
}

impl<S: Real> MapModel<S> {
    pub fn new(units: Vec<BasicUnit<S>>) -> Result<Self> {
        if units.is_empty() {
            return Err(Error::InvalidInput("a map model needs at least one unit".into()));
        }
        Ok(Self { units })
    }

    /// Units of the given criticalities with the given twists.
    pub fn from_parts(criticalities: &[u32], thetas: &[S]) -> Result<Self> {
        if criticalities.len() != thetas.len() {
            return Err(Error::InvalidInput("one twist per unit".into()));
        }
        let units = criticalities
            .iter()
            .zip(thetas)
            .map(|(&d, &t)| BasicUnit::new(d, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(units)
    }

    pub fn units(&self) -> &[BasicUnit<S>] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn thetas(&self) -> Vec<S> {
        self.units.iter().map(|u| u.theta()).collect()
    }

    pub fn criticalities(&self) -> Vec<u32> {
        self.units.iter().map(|u| u.criticality()).collect()
    }

    pub fn with_theta(&self, index: usize, theta: S) -> Self {
        let mut m = self.clone();
        m.units[index] = m.units[index].with_theta(theta);
        m
    }

    /// Every twist set to `theta`.
    pub fn with_all_thetas(&self, theta: S) -> Self {
        Self { units: self.units.iter().map(|u| u.with_theta(theta)).collect() }
    }

    pub fn with_last_theta(&self, theta: S) -> Self {
        self.with_theta(self.units.len() - 1, theta)
    }

    /// `u_{k-1} ∘ … ∘ u_0`.
    pub fn partial<T: Arith<S>>(&self, k: usize, x: T) -> T {
        self.units[..k].iter().fold(x, |acc, u| u.apply(acc))
    }

    /// Value and derivatives `0..=order` of the lift at `x`.
    pub fn evaluate(&self, x: S, order: usize) -> Jet<S> {
        self.apply(Jet::variable(x, order))
    }

    /// One unit per line: `d=<int> theta=<decimal>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for u in &self.units {
            let _ = writeln!(s, "d={} theta={}", u.criticality(), u.theta().to_decimal());
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut units = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut d = None;
            let mut theta = None;
            for tok in line.split_whitespace() {
                match tok.split_once('=') {
                    Some(("d", v)) => {
                        d = Some(v.parse::<u32>().map_err(|e| Error::Parse(format!("d: {e}")))?)
                    }
                    Some(("theta", v)) => theta = Some(S::parse_decimal(v)?),
                    _ => return Err(Error::Parse(format!("unexpected token `{tok}`"))),
                }
            }
            match (d, theta) {
                (Some(d), Some(t)) => units.push(BasicUnit::new(d, t)?),
                _ => return Err(Error::Parse(format!("line needs d= and theta=: `{line}`"))),
            }
        }
        Self::new(units)
    }

    /// Critical points: 0 from the first unit, and for unit `j > 0` the
    /// unique `c ∈ [0, 1)` with `(u_{j-1} ∘ … ∘ u_0)(c) ∈ ℤ`.
    pub fn critical_set(&self) -> Result<CriticalSet<S>> {
        let u = S::UNIT_ROUNDOFF;
        let merge_tolerance = u.sqrt();
        let mut pts = vec![CriticalPoint { position: S::zero(), criticality: self.units[0].criticality() }];
        for j in 1..self.units.len() {
            let v0 = self.partial(j, S::zero());
            let n = v0.floor() + S::one();
            let c = if v0.floor() == v0 {
                S::zero()
            } else {
                let g = |c: S| self.partial(j, c) - n;
                let c = bisect_monotone(g, S::zero(), S::one(), S::epsilon() * S::from_f64(4.0))?;
                if c >= S::one() {
                    c - S::one()
                } else {
                    c
                }
            };
            pts.push(CriticalPoint { position: c, criticality: self.units[j].criticality() });
        }
        Ok(CriticalSet::from_unsorted(pts, merge_tolerance))
    }
}

impl<S: Real> CircleMap<S> for MapModel<S> {
    fn lift(&self, x: S) -> S {
        self.apply(x)
    }
    fn critical_points(&self) -> Result<CriticalSet<S>> {
        self.critical_set()
    }
}

impl<S: Real> AnalyticMap<S> for MapModel<S> {
    fn apply<T: Arith<S>>(&self, x: T) -> T {
        self.partial(self.units.len(), x)
    }
}

/// The analytic diffeomorphism `ψ(x) = x + a sin(2πx) / (2π)`, `|a| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diffeo<S> {
    pub amplitude: S,
}

impl<S: Real> Diffeo<S> {
    pub fn new(amplitude: S) -> Result<Self> {
        if !(amplitude.abs() < S::one()) {
            return Err(Error::InvalidInput(format!("|a| must be < 1, got {amplitude}")));
        }
        Ok(Self { amplitude })
    }

    pub fn apply<T: Arith<S>>(&self, x: T) -> T {
        let s = x.mul_real(S::two_pi()).sin_cos().0;
        x + s.mul_real(self.amplitude / S::two_pi())
    }

    fn derivative<T: Arith<S>>(&self, x: &T) -> T {
        x.mul_real(S::two_pi()).sin_cos().1.mul_real(self.amplitude).add_real(S::one())
    }

    /// Newton iteration from the first-order inverse. Iterates past value
    /// convergence so jet coefficients and complex parts settle as well.
    pub fn inverse<T: Arith<S>>(&self, x: T) -> T {
        let s = x.mul_real(S::two_pi()).sin_cos().0;
        let mut y = x.clone() - s.mul_real(self.amplitude / S::two_pi());
        let tol = S::epsilon() * S::from_f64(4.0) * (S::one() + x.re().abs());
        let mut extra = 4;
        for _ in 0..60 {
            let step = (self.apply(y.clone()) - x.clone()) / self.derivative(&y);
            let small = step.modulus() <= tol;
            y = y - step;
            if small {
                extra -= 1;
                if extra == 0 {
                    break;
                }
            }
        }
        y
    }
}

/// `g = ψ ∘ f ∘ ψ^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatedMap<S> {
    pub inner: MapModel<S>,
    pub psi: Diffeo<S>,
}

impl<S: Real> CircleMap<S> for ConjugatedMap<S> {
    fn lift(&self, x: S) -> S {
        self.apply(x)
    }
    fn critical_points(&self) -> Result<CriticalSet<S>> {
        let inner = self.inner.critical_set()?;
        let pts = inner
            .points
            .iter()
            .map(|c| CriticalPoint { position: self.psi.apply(c.position).fract(), criticality: c.criticality })
            .collect();
        Ok(CriticalSet { points: pts, ..inner })
    }
}

impl<S: Real> AnalyticMap<S> for ConjugatedMap<S> {
    fn apply<T: Arith<S>>(&self, x: T) -> T {
        self.psi.apply(self.inner.apply(self.psi.inverse(x)))
    }
}

/// The analytic maps a pair can be built on.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMap<S> {
    Model(MapModel<S>),
    Conjugated(ConjugatedMap<S>),
}

impl<S: Real> AnyMap<S> {
    pub fn model(&self) -> &MapModel<S> {
        match self {
            AnyMap::Model(m) => m,
            AnyMap::Conjugated(c) => &c.inner,
        }
    }
}

impl<S: Real> From<MapModel<S>> for AnyMap<S> {
    fn from(m: MapModel<S>) -> Self {
        AnyMap::Model(m)
    }
}

impl<S: Real> From<ConjugatedMap<S>> for AnyMap<S> {
    fn from(m: ConjugatedMap<S>) -> Self {
        AnyMap::Conjugated(m)
    }
}

impl<S: Real> CircleMap<S> for AnyMap<S> {
    fn lift(&self, x: S) -> S {
        match self {
            AnyMap::Model(m) => m.lift(x),
            AnyMap::Conjugated(m) => m.lift(x),
        }
    }
    fn critical_points(&self) -> Result<CriticalSet<S>> {
        match self {
            AnyMap::Model(m) => m.critical_points(),
            AnyMap::Conjugated(m) => m.critical_points(),
        }
    }
}

impl<S: Real> AnalyticMap<S> for AnyMap<S> {
    fn apply<T: Arith<S>>(&self, x: T) -> T {
        match self {
            AnyMap::Model(m) => m.apply(x),
            AnyMap::Conjugated(m) => m.apply(x),
        }
    }
}

impl<S: Real, M: CircleMap<S> + ?Sized> CircleMap<S> for &M {
    fn lift(&self, x: S) -> S {
        (**self).lift(x)
    }
    fn critical_points(&self) -> Result<CriticalSet<S>> {
        (**self).critical_points()
    }
}

/// Inverse of a lift by bisection; `F` must be strictly increasing.
pub fn invert_lift<S: Real, M: CircleMap<S> + ?Sized>(map: &M, y: S) -> Result<S> {
    let f0 = map.lift(S::zero());
    let k = (y - f0).floor();
    let lo = k - S::one();
    let hi = k + S::from_f64(2.0);
    bisect_monotone(|x| map.lift(x) - y, lo, hi, S::epsilon() * (S::one() + y.abs()))
}
