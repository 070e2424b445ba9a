use std::fmt::Write as _;
use std::sync::Arc;

use super::base::{BaseMap, BasePair};
use super::word::{Letter, Word};
use crate::circlemap::{AnyMap, ConjugatedMap, Diffeo, DigitStream, MapModel, OrbitOptions};
use crate::error::{Error, Result};
use crate::numerics::{convergents_u64, Arith, ContinuedFraction, Real};

/// Iterations of `η` tried before a height is declared infinite.
pub const HEIGHT_CAP: u64 = 10_000;

/// Two words over a base pair, read in rescaled coordinates `x = u / scale`.
///
/// `η` acts on `I_η = [0, ξ(0)]` and `ξ` on `I_ξ = [0, η(0)]`. Pairs built
/// here are normalized so that `ξ(0) = 1` unless explicitly rescaled.
#[derive(Debug, Clone)]
pub struct CommutingPair<S: Real> {
    base: Arc<BasePair<S>>,
    eta: Word,
    xi: Word,
    scale: S,
    level: Option<i64>,
}

/// One branch of a pair.
#[derive(Debug, Clone, Copy)]
pub struct Branch<'a, S: Real> {
    pair: &'a CommutingPair<S>,
    side: Letter,
}

impl<'a, S: Real> Branch<'a, S> {
    pub fn word(&self) -> &'a Word {
        match self.side {
            Letter::Eta => &self.pair.eta,
            Letter::Xi => &self.pair.xi,
        }
    }

    /// The branch in base coordinates.
    pub fn eval_base<T: Arith<S>>(&self, u: T) -> T {
        self.word().letters().iter().fold(u, |acc, &l| self.pair.base.apply(l, acc))
    }

    pub fn eval<T: Arith<S>>(&self, x: T) -> T {
        let s = self.pair.scale;
        self.eval_base(x.mul_real(s)).mul_real(S::one() / s)
    }

    /// `(0, other endpoint)` of the domain.
    pub fn domain(&self) -> (S, S) {
        (S::zero(), self.pair.branch(self.side.other()).eval(S::zero()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Height {
    Finite(u64),
    Infinite,
}

impl<S: Real> CommutingPair<S> {
    pub fn new(base: Arc<BasePair<S>>, eta: Word, xi: Word, scale: S) -> Self {
        Self { base, eta, xi, scale, level: None }
    }

    /// A pair whose words are single letters, normalized so `ξ(0) = 1`.
    pub fn from_base(base: BasePair<S>) -> Self {
        let base = Arc::new(base);
        let scale = base.apply(Letter::Xi, S::zero());
        Self::new(base, Word::single(Letter::Eta), Word::single(Letter::Xi), scale)
    }

    pub fn base(&self) -> &Arc<BasePair<S>> {
        &self.base
    }

    pub fn scale(&self) -> S {
        self.scale
    }

    /// Renormalization level `n` for pairs induced from a map (`ζ_n`).
    pub fn level(&self) -> Option<i64> {
        self.level
    }

    pub fn branch(&self, side: Letter) -> Branch<'_, S> {
        Branch { pair: self, side }
    }

    pub fn eta(&self) -> Branch<'_, S> {
        self.branch(Letter::Eta)
    }

    pub fn xi(&self) -> Branch<'_, S> {
        self.branch(Letter::Xi)
    }

    /// `ξ(0)` in pair coordinates.
    pub fn xi0(&self) -> S {
        self.xi().eval(S::zero())
    }

    /// `η(0)` in pair coordinates.
    pub fn eta0(&self) -> S {
        self.eta().eval(S::zero())
    }

    /// `ξ(0)` and `η(0)` in base coordinates.
    pub fn base_endpoints(&self) -> (S, S) {
        (self.xi().eval_base(S::zero()), self.eta().eval_base(S::zero()))
    }

    /// `λ ζ(x / λ)`: the same base and words at scale `scale / λ`.
    pub fn rescaled(&self, lambda: S) -> Self {
        Self { scale: self.scale / lambda, ..self.clone() }
    }

    /// Rescaled so that `ξ(0) = 1`.
    pub fn normalized(&self) -> Self {
        Self { scale: self.xi().eval_base(S::zero()), ..self.clone() }
    }

    /// `[ζ](x) = η(ξ(x)) - ξ(η(x))`.
    pub fn commutator<T: Arith<S>>(&self, x: T) -> T {
        let a = self.eta().eval(self.xi().eval(x.clone()));
        let b = self.xi().eval(self.eta().eval(x));
        a - b
    }

    /// Absolute tolerance, in pair coordinates, below which a point is
    /// indistinguishable from 0.
    pub fn zero_tolerance(&self) -> S {
        let len = (self.eta.len() + self.xi.len()) as f64;
        S::epsilon() * S::from_f64(64.0 * (1.0 + len)) / self.scale.abs()
    }

    pub fn to_text(&self) -> Result<String> {
        let Some((map, shift)) = self.base.map() else {
            return Err(Error::Unsupported("only pairs over a circle map serialize".into()));
        };
        let mut s = String::from("pair\n");
        match self.level {
            Some(n) => writeln!(s, "level={n}"),
            None => writeln!(s, "level=-"),
        }
        .ok();
        writeln!(s, "scale={}", self.scale.to_decimal()).ok();
        writeln!(s, "shift={shift}").ok();
        if let AnyMap::Conjugated(c) = &**map {
            writeln!(s, "conj={}", c.psi.amplitude.to_decimal()).ok();
        }
        s.push_str(&map.model().to_text());
        writeln!(s, "eta={}", self.eta).ok();
        writeln!(s, "xi={}", self.xi).ok();
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("pair") {
            return Err(Error::Parse("pair text must start with `pair`".into()));
        }
        let (mut level, mut scale, mut shift, mut conj) = (None, None, None, None);
        let (mut eta, mut xi) = (None, None);
        let mut model = String::new();
        for line in lines {
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value: `{line}`")))?;
            match key {
                "level" if value == "-" => level = None,
                "level" => level = Some(value.parse::<i64>().map_err(|e| Error::Parse(format!("level: {e}")))?),
                "scale" => scale = Some(S::parse_decimal(value)?),
                "shift" => shift = Some(value.parse::<i64>().map_err(|e| Error::Parse(format!("shift: {e}")))?),
                "conj" => conj = Some(S::parse_decimal(value)?),
                "d" => {
                    model.push_str(line);
                    model.push('\n');
                }
                "eta" => eta = Some(value.parse::<Word>()?),
                "xi" => xi = Some(value.parse::<Word>()?),
                _ => return Err(Error::Parse(format!("unknown key `{key}`"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("pair text lacks `{k}`"));
        let model = MapModel::parse(&model)?;
        let map: AnyMap<S> = match conj {
            Some(a) => ConjugatedMap { inner: model, psi: Diffeo::new(a)? }.into(),
            None => model.into(),
        };
        let base = Arc::new(BasePair::from_map(Arc::new(map), shift.ok_or_else(|| missing("shift"))?));
        let mut pair = Self::new(
            base,
            eta.ok_or_else(|| missing("eta"))?,
            xi.ok_or_else(|| missing("xi"))?,
            scale.ok_or_else(|| missing("scale"))?,
        );
        pair.level = level;
        Ok(pair)
    }
}

/// `ζ_n = (F^{q_{n+1}} - p_{n+1}, F^{q_n} - p_n)`, normalized so `ξ(0) = 1`.
///
/// `n = -1` gives `(F - k, x - 1)`, which needs no digits. Otherwise digits
/// are computed to depth `n + 2`.
pub fn pair_from_map<S: Real>(map: impl Into<Arc<AnyMap<S>>>, n: i64) -> Result<CommutingPair<S>> {
    if n < -1 {
        return Err(Error::InvalidInput(format!("pair level must be >= -1, got {n}")));
    }
    let map = map.into();
    let mut stream = DigitStream::new(&*map, OrbitOptions::default());
    let shift = stream.integer_part();
    let (xi_pq, eta_pq) = if n == -1 {
        ((1, 0), (0, 1))
    } else {
        let depth = (n + 2) as usize;
        match stream.take(depth) {
            Ok(()) => {}
            Err(Error::RationalLock { digit }) => {
                return Err(Error::DepthUnavailable { requested: depth, available: digit })
            }
            Err(e) => return Err(e),
        }
        let conv = convergents_u64(stream.digits())
            .ok_or_else(|| Error::DepthUnavailable { requested: depth, available: 0 })?;
        (conv[n as usize], conv[n as usize + 1])
    };
    let base = Arc::new(BasePair::from_map(map, shift));
    let xi = Word::powers(xi_pq.1, xi_pq.0);
    let eta = Word::powers(eta_pq.1, eta_pq.0);
    let mut pair = CommutingPair::new(base, eta, xi, S::one());
    pair = pair.normalized();
    pair.level = Some(n);
    Ok(pair)
}

/// The smallest `a` with `η^{a+1}(ξ(0)) < 0 <= η^a(ξ(0))` (orientation
/// taken from `ξ(0)`), or `Infinite` if no crossing happens in `max_iter` steps.
pub fn height<S: Real>(pair: &CommutingPair<S>, max_iter: u64) -> Result<Height> {
    let s = pair.xi0().signum();
    let tol = pair.zero_tolerance();
    let mut y = pair.xi0();
    for a in 0..max_iter {
        let next = pair.eta().eval(y);
        if next.abs() <= tol {
            return Err(Error::BoundaryHit(format!("η^{}(ξ(0)) = 0 to working precision", a + 1)));
        }
        if s * next < S::zero() {
            return Ok(Height::Finite(a));
        }
        y = next;
    }
    Ok(Height::Infinite)
}

/// `A ∘ (η^a ∘ ξ, η) ∘ A^{-1}` with `A(x) = x / η(0)`.
pub fn renormalize<S: Real>(pair: &CommutingPair<S>) -> Result<CommutingPair<S>> {
    let a = match height(pair, HEIGHT_CAP) {
        Ok(Height::Finite(a)) => a,
        Ok(Height::Infinite) => return Err(Error::NonRenormalizable("infinite height".into())),
        Err(Error::BoundaryHit(m)) => return Err(Error::NonRenormalizable(m)),
        Err(e) => return Err(e),
    };
    if a == 0 {
        return Err(Error::NonRenormalizable("height 0: η(ξ(0)) already crossed 0".into()));
    }
    let eta = pair.xi.then(&pair.eta.repeat(a));
    let xi = pair.eta.clone();
    let scale = pair.eta().eval_base(S::zero());
    Ok(CommutingPair { base: pair.base.clone(), eta, xi, scale, level: pair.level.map(|n| n + 1) })
}

/// Digits `[χ(ζ), χ(Rζ), …]` read from heights.
pub fn pair_rotation_digits<S: Real>(pair: &CommutingPair<S>, depth: usize) -> Result<ContinuedFraction> {
    let mut digits = Vec::with_capacity(depth);
    let mut p = pair.clone();
    for i in 0..depth {
        match height(&p, HEIGHT_CAP)? {
            Height::Finite(a) => digits.push(a),
            Height::Infinite => {
                return Err(Error::RationalLock { digit: i });
            }
        }
        if i + 1 < depth {
            p = renormalize(&p)?;
        }
    }
    Ok(ContinuedFraction::new(digits))
}

/// The pair `(η, ξ + bump)` in `pair`'s coordinates.
pub fn with_perturbed_xi<S: Real>(pair: &Arc<CommutingPair<S>>, bump: super::base::Bump<S>) -> CommutingPair<S> {
    let eta = BaseMap::Branch { pair: pair.clone(), side: Letter::Eta };
    let xi = BaseMap::Perturbed { inner: Box::new(BaseMap::Branch { pair: pair.clone(), side: Letter::Xi }), bump };
    let base = Arc::new(BasePair::new(eta, xi));
    CommutingPair::new(base, Word::single(Letter::Eta), Word::single(Letter::Xi), S::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use crate::numerics::{One, Zero};
    use crate::circlemap::tune_twist;
    use crate::numerics::{DoubleDouble, QuadDouble};

    type DD = DoubleDouble;

    use crate::testing::{golden_bicubic, golden_cubic};

    #[test]
    fn branch_lengths_follow_convergents() {
        let f = Arc::new(AnyMap::from(golden_cubic()));
        let p = pair_from_map(f.clone(), 0).unwrap();
        assert_eq!((p.eta().word().len(), p.xi().word().len()), (1 + 1, 1));
        let p5 = pair_from_map(f, 5).unwrap();
        assert_eq!(p5.eta().word().count(Letter::Eta), 13);
        assert_eq!(p5.xi().word().count(Letter::Eta), 8);
        assert_eq!(p5.xi0(), DD::one());
    }

    #[test]
    fn xi0_alternates_in_base_coordinates() {
        let f = Arc::new(AnyMap::from(golden_cubic()));
        let signs: Vec<bool> = (0..8).map(|n| pair_from_map(f.clone(), n).unwrap().scale() > DD::zero()).collect();
        for w in signs.windows(2) {
            assert_ne!(w[0], w[1]);
        }
    }

    #[test]
    fn heights_are_the_next_digit() {
        let m = MapModel::from_parts(&[3, 3], &[DD::from_f64(0.2), DD::from_f64(0.0)]).unwrap();
        let digits = vec![2, 1, 3, 1, 2, 1, 1, 2, 2, 1, 1, 1];
        let f = tune_twist(&m, &ContinuedFraction::new(digits.clone()), 12).unwrap();
        let f = Arc::new(AnyMap::from(f));
        for n in -1..8 {
            let p = pair_from_map(f.clone(), n).unwrap();
            assert_eq!(height(&p, 100).unwrap(), Height::Finite(digits[(n + 1) as usize]), "n = {n}");
        }
    }

    #[test]
    fn silver_pair_has_height_two() {
        let m = MapModel::from_parts(&[3], &[DD::from_f64(0.0)]).unwrap();
        let f = tune_twist(&m, &ContinuedFraction::new(vec![2; 20]), 16).unwrap();
        let p = pair_from_map(AnyMap::from(f), 0).unwrap();
        assert_eq!(height(&p, 100).unwrap(), Height::Finite(2));
    }

    #[test]
    fn fixed_point_gives_infinite_height() {
        let m = MapModel::from_parts(&[3], &[DD::from_f64(0.0)]).unwrap();
        let p = pair_from_map(AnyMap::from(m.clone()), -1).unwrap();
        assert_eq!(height(&p, 1000).unwrap(), Height::Infinite);
        assert!(matches!(pair_from_map(AnyMap::from(m), 0), Err(Error::DepthUnavailable { .. })));
    }

    #[test]
    fn map_pairs_commute_exactly() {
        let f = Arc::new(AnyMap::from(golden_bicubic(0.1)));
        for n in [0, 4, 9] {
            let p = pair_from_map(f.clone(), n).unwrap();
            let (lo, hi) = p.xi().domain();
            for i in 1..10 {
                let x = lo + (hi - lo) * DD::from_f64(i as f64 / 10.0);
                assert!(p.commutator(x).abs().to_f64() < 1e-26, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn renormalize_matches_next_level() {
        let f = Arc::new(AnyMap::from(golden_bicubic(0.1)));
        let mut p = pair_from_map(f.clone(), -1).unwrap();
        for n in 0..7 {
            p = renormalize(&p).unwrap();
            let q = pair_from_map(f.clone(), n).unwrap();
            assert_eq!(p.level(), Some(n));
            for side in [Letter::Eta, Letter::Xi] {
                let (lo, hi) = q.branch(side).domain();
                for i in 0..=10 {
                    let x = lo + (hi - lo) * DD::from_f64(i as f64 / 10.0);
                    let d = (p.branch(side).eval(x) - q.branch(side).eval(x)).abs();
                    assert!(d.to_f64() < 1e-24, "n={n} {side:?} d={d}");
                }
            }
        }
    }

    #[test]
    fn heights_give_gauss_shifted_digits() {
        let f = golden_bicubic(0.1);
        let p = pair_from_map(AnyMap::from(f), 2).unwrap();
        let d = pair_rotation_digits(&p, 8).unwrap();
        assert_eq!(d.digits, vec![1; 8]);
    }

    #[test]
    fn text_round_trip() {
        let f = golden_bicubic(0.1);
        let p = pair_from_map(AnyMap::from(f), 3).unwrap();
        let q = CommutingPair::<DD>::parse(&p.to_text().unwrap()).unwrap();
        assert_eq!(q.level(), Some(3));
        assert_eq!(q.eta().word(), p.eta().word());
        let x = DD::from_f64(0.3);
        assert!((q.eta().eval(x) - p.eta().eval(x)).abs().to_f64() < 1e-28);
    }

    #[test]
    fn quad_double_pairs_commute_tighter() {
        let m = MapModel::from_parts(&[3], &[QuadDouble::from_f64(0.0)]).unwrap();
        let f = tune_twist(&m, &ContinuedFraction::new(vec![1; 20]), 16).unwrap();
        let p = pair_from_map(AnyMap::from(f), 6).unwrap();
        let x = QuadDouble::from_f64(-0.2);
        assert!(p.commutator(x).abs().to_f64() < 1e-50);
    }
}
