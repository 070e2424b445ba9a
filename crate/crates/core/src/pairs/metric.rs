//! The C⁰ distance between pairs after Möbius normalization.
//!
//! Everything is evaluated in base coordinates, where the Möbius map with
//! `A(ξ(0)) = 1, A(0) = 0, A(η(0)) = -1` absorbs the pair's scale. A pair and
//! any linear rescaling of it therefore produce bitwise identical numbers.

use rayon::prelude::*;

use super::pair::CommutingPair;
use super::word::Letter;
use crate::numerics::Real;

/// `A(z) = z (a - b) / ((a + b) z - 2ab)` with `a = ξ(0)`, `b = η(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius<S> {
    pub a: S,
    pub b: S,
}

impl<S: Real> Mobius<S> {
    pub fn apply(&self, z: S) -> S {
        let (a, b) = (self.a, self.b);
        z * (a - b) / ((a + b) * z - S::from_f64(2.0) * a * b)
    }

    pub fn inverse(&self, w: S) -> S {
        let (a, b) = (self.a, self.b);
        S::from_f64(2.0) * a * b * w / (w * (a + b) - (a - b))
    }
}

/// A pair seen through its normalizing Möbius chart: `ξ̃` on `[-1, 0)`
/// and `η̃` on `(0, 1]`.
pub struct NormalizedPair<'a, S: Real> {
    pair: &'a CommutingPair<S>,
    chart: Mobius<S>,
}

impl<'a, S: Real> NormalizedPair<'a, S> {
    pub fn new(pair: &'a CommutingPair<S>) -> Self {
        let (a, b) = pair.base_endpoints();
        Self { pair, chart: Mobius { a, b } }
    }

    /// `ξ(0) / η(0)`, which is scale free.
    pub fn ratio(&self) -> S {
        self.chart.a / self.chart.b
    }

    pub fn eval(&self, w: S) -> S {
        let side = if w < S::zero() { Letter::Xi } else { Letter::Eta };
        let u = self.chart.inverse(w);
        self.chart.apply(self.pair.branch(side).eval_base(u))
    }
}

/// The grid `±i / grid`, `i = 1..=grid`.
pub fn c0_grid<S: Real>(grid: usize) -> Vec<S> {
    let g = S::from_u64(grid as u64);
    (1..=grid as u64).flat_map(|i| [-S::from_u64(i) / g, S::from_u64(i) / g]).collect()
}

pub fn dist_c0<S: Real>(p1: &CommutingPair<S>, p2: &CommutingPair<S>, grid: usize) -> S {
    let n1 = NormalizedPair::new(p1);
    let n2 = NormalizedPair::new(p2);
    let ratio = (n1.ratio() - n2.ratio()).abs();
    c0_grid::<S>(grid)
        .into_par_iter()
        .map(|w| (n1.eval(w) - n2.eval(w)).abs())
        .reduce(|| ratio, |a, b| if b > a { b } else { a })
}

/// Distance at `grid` and `2 grid`, with the relative change between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCheck<S> {
    pub value: S,
    pub refined: S,
    pub relative_change: S,
}

impl<S: Real> GridCheck<S> {
    /// The refinement moved the value by less than 1%.
    pub fn stable(&self) -> bool {
        self.relative_change < S::from_f64(0.01)
    }
}

pub fn dist_c0_checked<S: Real>(p1: &CommutingPair<S>, p2: &CommutingPair<S>, grid: usize) -> GridCheck<S> {
    let value = dist_c0(p1, p2, grid);
    let refined = dist_c0(p1, p2, 2 * grid);
    let relative_change = if refined == S::zero() { S::zero() } else { (refined - value).abs() / refined };
    GridCheck { value, refined, relative_change }
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use crate::numerics::{One, Zero};
    use crate::numerics::DoubleDouble;

    type DD = DoubleDouble;

    #[test]
    fn mobius_three_points_and_inverse() {
        let m = Mobius { a: DD::from_f64(1.0), b: DD::from_f64(-0.62) };
        assert_eq!(m.apply(DD::zero()), DD::zero());
        assert!((m.apply(m.a) - DD::one()).abs().to_f64() < 1e-31);
        assert!((m.apply(m.b) + DD::one()).abs().to_f64() < 1e-31);
        for w in [-0.9, -0.2, 0.4, 0.95] {
            let w = DD::from_f64(w);
            assert!((m.apply(m.inverse(w)) - w).abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn grid_excludes_zero() {
        let g = c0_grid::<f64>(4);
        assert_eq!(g.len(), 8);
        assert!(!g.contains(&0.0));
        assert!(g.contains(&-1.0) && g.contains(&1.0));
    }
}
