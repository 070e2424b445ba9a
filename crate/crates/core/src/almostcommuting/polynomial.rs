use crate::error::{Error, Result};
use crate::numerics::{hermite_fit, Arith, Jet, PolynomialJetPair, Real};

/// One factor of an osculated composition.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece<S> {
    /// An osculating polynomial of a diffeomorphic factor.
    Smooth(PolynomialJetPair<S>),
    /// `outer((inner(x) - a)^m)` around a critical point of order `m`.
    Critical { inner: PolynomialJetPair<S>, a: S, m: u32, outer: PolynomialJetPair<S> },
}

impl<S: Real> Piece<S> {
    pub fn apply<T: Arith<S>>(&self, x: T) -> T {
        match self {
            Piece::Smooth(p) => p.eval(x),
            Piece::Critical { inner, a, m, outer } => outer.eval(inner.eval(x).add_real(-*a).powi(*m)),
        }
    }

    pub fn is_critical(&self) -> bool {
        matches!(self, Piece::Critical { .. })
    }

    /// Interval the piece was fitted on.
    pub fn interval(&self) -> (S, S) {
        match self {
            Piece::Smooth(p) => (p.a, p.b),
            Piece::Critical { inner, .. } => (inner.a, inner.b),
        }
    }
}

/// Osculating polynomial of `f` on `[a, b]`, from `order`-jets at both ends.
pub fn osculate<S: Real>(f: impl Fn(Jet<S>) -> Jet<S>, a: S, b: S, order: usize) -> Result<PolynomialJetPair<S>> {
    let ja = f(Jet::variable(a, order)).derivatives();
    let jb = f(Jet::variable(b, order)).derivatives();
    if ja.iter().chain(&jb).any(|v| !v.is_finite()) {
        return Err(Error::EvaluationOverflow(format!("non-finite jet on [{a}, {b}]")));
    }
    hermite_fit(a, b, &ja, &jb)
}

/// A fixed sequence of pieces, each applied in reduced coordinates:
/// `y ↦ piece(y - m) + m` with an integer offset `m` per piece, then
/// `- shift` at the end.
///
/// Pieces are chosen by position in the sequence, not by location, so the
/// branch is a polynomial composition and extends analytically off the real
/// line and slightly past its interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialBranch<S> {
    pieces: Vec<(S, Piece<S>)>,
    shift: S,
}

impl<S: Real> PolynomialBranch<S> {
    pub fn new(pieces: Vec<(S, Piece<S>)>, shift: S) -> Self {
        Self { pieces, shift }
    }

    pub fn pieces(&self) -> &[(S, Piece<S>)] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn critical_pieces(&self) -> usize {
        self.pieces.iter().filter(|(_, p)| p.is_critical()).count()
    }

    pub fn apply<T: Arith<S>>(&self, x: T) -> T {
        self.pieces
            .iter()
            .fold(x, |y, (m, p)| p.apply(y.add_real(-*m)).add_real(*m))
            .add_real(-self.shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use crate::numerics::{One, Zero};
    use crate::numerics::DoubleDouble;

    type DD = DoubleDouble;

    #[test]
    fn polynomials_are_reproduced() {
        // x^5 - 2x^2 + 3 has degree 5 = 2D + 1 for D = 2.
        let f = |x: Jet<DD>| {
            let x2 = &x * &x;
            let x5 = &(&x2 * &x2) * &x;
            (x5 - x2.scale(DD::from_f64(2.0))).add_constant(DD::from_f64(3.0))
        };
        let p = osculate(f, DD::from_f64(0.2), DD::from_f64(0.9), 2).unwrap();
        for x in [-1.0, 0.0, 0.5, 2.0] {
            let x = DD::from_f64(x);
            let want = x.powi(5) - DD::from_f64(2.0) * x * x + DD::from_f64(3.0);
            assert!((p.eval(x) - want).abs().to_f64() < 1e-28);
        }
    }

    #[test]
    fn critical_piece_and_offsets() {
        let inner = osculate(|x: Jet<DD>| x.scale(DD::from_f64(2.0)), DD::zero(), DD::one(), 1).unwrap();
        let outer = osculate(|s: Jet<DD>| s.add_constant(DD::from_f64(0.5)), DD::zero(), DD::one(), 1).unwrap();
        let piece = Piece::Critical { inner, a: DD::one(), m: 3, outer };
        let branch = PolynomialBranch::new(vec![(DD::from_f64(4.0), piece)], DD::from_f64(1.0));
        // x = 4.75: reduced 0.75, (1.5 - 1)^3 + 0.5 = 0.625, back to 4.625, minus 1.
        assert!((branch.apply(DD::from_f64(4.75)) - DD::from_f64(3.625)).abs().to_f64() < 1e-30);
        assert_eq!(branch.critical_pieces(), 1);
    }
}
