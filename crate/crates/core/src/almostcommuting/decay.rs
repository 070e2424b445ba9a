use std::fmt::Write as _;

use super::AlmostCommutingPair;
use crate::error::{Error, Result};
use crate::numerics::Real;
use crate::pairs::{commutator_norm, renormalize};

const SAMPLES: usize = 64;

/// `(m, ‖[R^m ζ]‖)` at a fixed radius around 0 of each normalized pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries<S> {
    pub points: Vec<(usize, S)>,
    /// Renormalization stopped before `m_max`.
    pub truncated: bool,
}

impl<S: Real> DecaySeries<S> {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,norm\n");
        for (m, v) in &self.points {
            let _ = writeln!(s, "{m},{:e}", v.to_f64());
        }
        s
    }

    pub fn norms(&self) -> Vec<S> {
        self.points.iter().map(|p| p.1).collect()
    }
}

pub fn commutator_decay_series<S: Real>(
    pair: &AlmostCommutingPair<S>,
    m_max: usize,
    radius: S,
) -> Result<DecaySeries<S>> {
    let mut current = pair.pair.normalized();
    let mut points = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        points.push((m, commutator_norm(&current, radius, SAMPLES)?));
        if m == m_max {
            break;
        }
        current = match renormalize(&current) {
            Ok(p) => p,
            Err(Error::NonRenormalizable(_)) => return Ok(DecaySeries { points, truncated: true }),
            Err(e) => return Err(e),
        };
    }
    Ok(DecaySeries { points, truncated: false })
}
