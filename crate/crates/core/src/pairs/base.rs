use std::sync::{Arc, OnceLock};

use super::pair::CommutingPair;
use super::word::Letter;
use crate::almostcommuting::PolynomialBranch;
use crate::circlemap::{AnalyticMap, AnyMap, CircleMap, CriticalSet};
use crate::error::Result;
use crate::numerics::{Arith, Real};

/// `A (x (x - e))^k ∏ (x - c)^m`: vanishes to order `k` at `0` and at `e`,
/// and to order `m` at each extra root `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump<S> {
    pub amplitude: S,
    pub end: S,
    pub order: u32,
    pub roots: Vec<(S, u32)>,
}

impl<S: Real> Bump<S> {
    /// The constant `A`.
    pub fn constant(amplitude: S) -> Self {
        Self { amplitude, end: S::zero(), order: 0, roots: Vec::new() }
    }

    pub fn apply<T: Arith<S>>(&self, x: &T) -> T {
        let p = x.clone() * x.add_real(-self.end);
        let mut out = p.powi(self.order).mul_real(self.amplitude);
        for &(c, m) in &self.roots {
            out = out * x.add_real(-c).powi(m);
        }
        out
    }
}

/// A map a word letter can stand for.
#[derive(Debug, Clone)]
pub enum BaseMap<S: Real> {
    /// `F(u) - shift` for the lift `F` of a circle map.
    Lift { map: Arc<AnyMap<S>>, shift: i64 },
    /// `u - 1`.
    UnitShift,
    /// A branch of another pair, in that pair's coordinates.
    Branch { pair: Arc<CommutingPair<S>>, side: Letter },
    /// `inner + bump`.
    Perturbed { inner: Box<BaseMap<S>>, bump: Bump<S> },
    /// An osculated composition of polynomial pieces.
    Polynomial(Arc<PolynomialBranch<S>>),
}

impl<S: Real> BaseMap<S> {
    pub fn apply<T: Arith<S>>(&self, u: T) -> T {
        match self {
            BaseMap::Lift { map, shift } => map.apply(u).add_real(-S::from_i64(*shift)),
            BaseMap::UnitShift => u.add_real(-S::one()),
            BaseMap::Branch { pair, side } => pair.branch(*side).eval(u),
            BaseMap::Perturbed { inner, bump } => {
                let b = bump.apply(&u);
                inner.apply(u) + b
            }
            BaseMap::Polynomial(p) => p.apply(u),
        }
    }

    pub fn is_map_letter(&self) -> bool {
        matches!(self, BaseMap::Lift { .. } | BaseMap::UnitShift)
    }
}

/// The two maps a pair's words are spelled in, acting on one base coordinate.
#[derive(Debug)]
pub struct BasePair<S: Real> {
    pub eta: BaseMap<S>,
    pub xi: BaseMap<S>,
    critical: OnceLock<Option<CriticalSet<S>>>,
}

impl<S: Real> Clone for BasePair<S> {
    fn clone(&self) -> Self {
        Self::new(self.eta.clone(), self.xi.clone())
    }
}

impl<S: Real> BasePair<S> {
    pub fn new(eta: BaseMap<S>, xi: BaseMap<S>) -> Self {
        Self { eta, xi, critical: OnceLock::new() }
    }

    /// `(F - shift, u - 1)`.
    pub fn from_map(map: Arc<AnyMap<S>>, shift: i64) -> Self {
        Self::new(BaseMap::Lift { map, shift }, BaseMap::UnitShift)
    }

    pub fn get(&self, l: Letter) -> &BaseMap<S> {
        match l {
            Letter::Eta => &self.eta,
            Letter::Xi => &self.xi,
        }
    }

    pub fn apply<T: Arith<S>>(&self, l: Letter, u: T) -> T {
        self.get(l).apply(u)
    }

    /// The circle map behind a map-induced base, with its integer shift.
    pub fn map(&self) -> Option<(&Arc<AnyMap<S>>, i64)> {
        match (&self.eta, &self.xi) {
            (BaseMap::Lift { map, shift }, BaseMap::UnitShift) => Some((map, *shift)),
            _ => None,
        }
    }

    /// Critical points of the lift letter, cached.
    pub fn map_critical_set(&self) -> Result<Option<&CriticalSet<S>>> {
        if let Some(c) = self.critical.get() {
            return Ok(c.as_ref());
        }
        let computed = match self.map() {
            Some((m, _)) => Some(m.critical_points()?),
            None => None,
        };
        Ok(self.critical.get_or_init(|| computed).as_ref())
    }
}
