//! Scalars at three precisions, complex and jet carriers, continued
//! fractions, bisection, two-point Hermite fits and decay fits.

pub mod arith;
mod dd;
pub(crate) mod eft;
mod elementary;
pub mod cf;
pub mod fit;
pub mod hermite;
pub mod jet;
mod qd;
pub mod real;
pub mod roots;

pub use arith::{split_integer, Arith};
pub use cf::{cf_expand, convergents, convergents_u64, gauss_map, gauss_shift, ContinuedFraction, Convergent};
pub use dd::DoubleDouble;
pub use fit::{fit_decay, DecayFit};
pub use hermite::{hermite_fit, PolynomialJetPair};
pub use jet::Jet;
pub use num_complex::Complex;
pub use num_traits::{One, Zero};
pub use qd::QuadDouble;
pub use real::{Precision, Real};
pub use roots::{bisect_monotone, bisect_predicate};

/// Runs `$body` with `$S` bound to the scalar type selected by a runtime
/// [`Precision`].
#[macro_export]
macro_rules! with_precision {
    ($p:expr, $S:ident => $body:expr) => {
        match $p {
            $crate::numerics::Precision::Std => {
                type $S = f64;
                $body
            }
            $crate::numerics::Precision::Ext => {
                type $S = $crate::numerics::DoubleDouble;
                $body
            }
            $crate::numerics::Precision::High => {
                type $S = $crate::numerics::QuadDouble;
                $body
            }
        }
    };
}
