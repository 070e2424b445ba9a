//! Twists realizing a prescribed signature.
//!
//! For a model `u_{N-1} ∘ … ∘ u_0` the critical point contributed by unit `j`
//! sits where `u_{j-1} ∘ … ∘ u_0` hits an integer, so it depends on
//! `θ_0..θ_{j-1}` only. The last twist never moves a critical point and is
//! kept as the rotation tuner. Twist `θ_{j-1}` then sets the cumulative
//! measure `μ[0, c_j) = δ_0 + … + δ_{j-1}`.

use rayon::prelude::*;

use crate::circlemap::{signature, tune_twist, MapModel, Signature};
use crate::error::{Error, Result};
use crate::numerics::{convergents_u64, ContinuedFraction, Real};

pub const MAX_UNITS: usize = 3;
const GRID: usize = 16;
const MAX_SWEEPS: usize = 12;
const REFINE_ROUNDS: usize = 4;
/// Distance kept from the ends of a twist bracket, where critical points collide.
const BRACKET_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureTarget {
    pub rho: ContinuedFraction,
    pub criticalities: Vec<u32>,
    pub deltas: Vec<f64>,
    pub tolerance: f64,
}

impl SignatureTarget {
    pub fn new(rho: ContinuedFraction, criticalities: Vec<u32>, deltas: Vec<f64>, tolerance: f64) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::EmptyExpansion);
        }
        if criticalities.is_empty() || criticalities.len() != deltas.len() {
            return Err(Error::InvalidInput("need one delta per criticality".into()));
        }
        if !(tolerance > 0.0 && tolerance < 0.5) {
            return Err(Error::InvalidInput(format!("tolerance {tolerance} outside (0, 0.5)")));
        }
        let sum: f64 = deltas.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("deltas sum to {sum}, not 1")));
        }
        if deltas.len() > 1 && deltas.iter().any(|&d| d < tolerance) {
            return Err(Error::DegenerateSignature(format!(
                "deltas {deltas:?} within {tolerance} of the simplex boundary"
            )));
        }
        Ok(Self { rho, criticalities, deltas, tolerance })
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// `δ_0 + … + δ_{j-1}` for `j = 1..N`.
    fn cumulative(&self) -> Vec<f64> {
        self.deltas
            .iter()
            .scan(0.0, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .take(self.len() - 1)
            .collect()
    }

    /// First return time `q_m` of the target digits with `2 / q_m <= tol / 4`.
    pub fn measurement_iters(&self) -> Result<usize> {
        let need = 8.0 / self.tolerance;
        convergents_u64(&self.rho.digits)
            .ok_or_else(|| Error::InvalidInput("convergent denominators overflow u64".into()))?
            .iter()
            .map(|c| c.1)
            .find(|&q| q as f64 >= need)
            .map(|q| q as usize)
            .ok_or_else(|| {
                Error::InvalidInput(format!("rotation digits {} too short for tolerance {}", self.rho, self.tolerance))
            })
    }

    /// Parses `rho=1,1,1 d=3,3 delta=0.5,0.5 tol=0.01`.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut rho, mut d, mut delta, mut tol) = (None, None, None, None);
        for token in text.split_whitespace() {
            let (key, value) =
                token.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {token:?}")))?;
            match key {
                "rho" => rho = Some(parse_list::<u64>(value)?),
                "d" => d = Some(parse_list::<u32>(value)?),
                "delta" => delta = Some(parse_list::<f64>(value)?),
                "tol" => tol = Some(value.parse::<f64>().map_err(|e| Error::Parse(format!("tol: {e}")))?),
                _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("missing {k}="));
        Self::new(
            ContinuedFraction::new(rho.ok_or_else(|| missing("rho"))?),
            d.ok_or_else(|| missing("d"))?,
            delta.ok_or_else(|| missing("delta"))?,
            tol.ok_or_else(|| missing("tol"))?,
        )
    }
}

impl std::fmt::Display for SignatureTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        write!(
            f,
            "rho={} d={} delta={} tol={}",
            join(self.rho.digits.iter().map(|x| x.to_string()).collect()),
            join(self.criticalities.iter().map(|x| x.to_string()).collect()),
            join(self.deltas.iter().map(|x| x.to_string()).collect()),
            self.tolerance
        )
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

/// One evaluation of the signature map.
struct Probe<S> {
    /// Bracket coordinates of the outer twists.
    coords: Vec<f64>,
    thetas: Vec<S>,
    signature: Signature<S>,
    /// `μ[0, c_j) - target` for `j = 1..N`.
    residuals: Vec<f64>,
}

impl<S: Real> Probe<S> {
    fn error(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// The outer twists are searched in bracket coordinates `s_j ∈ (0, 1)`:
/// `θ_{j-1} = lo_j + s_j (hi_j - lo_j)` with the bracket of `θ_{j-1}` taken
/// at the already placed `θ_0..θ_{j-2}`. Every `s` then keeps
/// `0 < c_1 < … < c_{N-1} < 1`, and `μ[0, c_j)` decreases in `s_j`.
struct Solver<'a> {
    target: &'a SignatureTarget,
    template: &'a [u32],
    cumulative: Vec<f64>,
    iters: usize,
}

impl Solver<'_> {
    fn model<S: Real>(&self, thetas: &[S]) -> Result<MapModel<S>> {
        let mut full = thetas.to_vec();
        full.resize(self.template.len(), S::zero());
        MapModel::from_parts(self.template, &full)
    }

    /// Twists for which `c_j` ranges over `(c_{j-1}, 1)`: from the `θ_{j-1}`
    /// putting `c_j` at 0 up to the next integer, where `c_j = c_{j-1}`.
    /// Only `θ_0..θ_{j-2}` of `thetas` are read.
    fn bracket<S: Real>(&self, thetas: &[S], j: usize) -> Result<(S, S)> {
        let model = self.model(&thetas[..j - 1])?;
        let before = model.partial(j - 1, S::zero());
        let lo = (-model.units()[j - 1].base(before)).fract();
        let margin = S::from_f64(BRACKET_MARGIN);
        Ok((lo + margin, S::one() - margin))
    }

    fn thetas<S: Real>(&self, coords: &[f64]) -> Result<Vec<S>> {
        let mut thetas = Vec::with_capacity(coords.len());
        for (i, &s) in coords.iter().enumerate() {
            let (lo, hi) = self.bracket(&thetas, i + 1)?;
            thetas.push(lo + (hi - lo) * S::from_f64(s));
        }
        Ok(thetas)
    }

    /// Tunes the last twist, then measures.
    fn probe<S: Real>(&self, coords: &[f64]) -> Result<Probe<S>> {
        let thetas = self.thetas::<S>(coords)?;
        let depth = self.target.rho.len().min(S::PRECISION.budget().0);
        let tuned = tune_twist(&self.model(&thetas)?, &self.target.rho, depth)?;
        let sig = signature(&tuned, depth, self.iters)?;
        if sig.criticalities != self.target.criticalities {
            return Err(Error::CombinatorialMismatch(format!(
                "critical census {:?} at twists {:?}, target {:?}",
                sig.criticalities, thetas, self.target.criticalities
            )));
        }
        let mut acc = S::zero();
        let residuals = sig
            .deltas
            .iter()
            .zip(&self.cumulative)
            .map(|(&d, &t)| {
                acc = acc + d;
                acc.to_f64() - t
            })
            .collect();
        Ok(Probe { coords: coords.to_vec(), thetas: tuned.thetas(), signature: sig, residuals })
    }

    /// Bisects `s_j` on the `j`-th residual. `None` when the ends show no
    /// sign change or cannot be measured.
    fn bisect_axis<S: Real>(&self, coords: &mut [f64], j: usize) -> Option<Probe<S>> {
        let mut at = |s: f64| {
            coords[j - 1] = s;
            self.probe::<S>(coords).ok()
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        let r_lo = at(lo)?.residuals[j - 1];
        let r_hi = at(hi)?.residuals[j - 1];
        if !(r_lo > 0.0 && r_hi < 0.0) {
            return None;
        }
        let tol = self.target.tolerance / 4.0;
        loop {
            let mid = 0.5 * (lo + hi);
            let p = at(mid)?;
            let r = p.residuals[j - 1];
            if r.abs() <= tol || hi - lo < 1e-12 {
                return Some(p);
            }
            if r > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    fn coordinate_sweeps<S: Real>(&self, start: &[f64]) -> Option<Probe<S>> {
        let mut coords = start.to_vec();
        let mut best: Option<Probe<S>> = None;
        for _ in 0..MAX_SWEEPS {
            for j in 1..self.target.len() {
                let p = self.bisect_axis::<S>(&mut coords, j)?;
                coords = p.coords.clone();
                best = Some(p);
            }
            if best.as_ref().is_some_and(|p| p.error() <= self.target.tolerance) {
                break;
            }
        }
        best
    }

    /// Tensor grid of `GRID` points per axis over `[c - w/2, c + w/2] ∩ (0, 1)`.
    fn best_on_grid<S: Real>(&self, center: &[f64], width: f64) -> Option<Probe<S>> {
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for &c in center {
            let lo = (c - 0.5 * width).max(0.0);
            let hi = (c + 0.5 * width).min(1.0);
            points = points
                .into_iter()
                .flat_map(|p| {
                    (0..GRID).map(move |i| {
                        let mut q = p.clone();
                        q.push(lo + (hi - lo) * (i as f64 + 0.5) / GRID as f64);
                        q
                    })
                })
                .collect();
        }
        points
            .into_par_iter()
            .filter_map(|s| self.probe::<S>(&s).ok())
            .min_by(|a, b| a.error().total_cmp(&b.error()))
    }

    fn grid_search<S: Real>(&self) -> Result<Probe<S>> {
        let outer = self.target.len() - 1;
        let mut best = self
            .best_on_grid::<S>(&vec![0.5; outer], 1.0)
            .ok_or_else(|| Error::TargetUnreachable("no grid point could be tuned and measured".into()))?;
        let mut width = 2.0 / GRID as f64;
        for _ in 0..REFINE_ROUNDS {
            if best.error() <= self.target.tolerance {
                break;
            }
            // Local bisection first; a finer grid around the best point otherwise.
            if let Some(p) = self.coordinate_sweeps::<S>(&best.coords) {
                if p.error() < best.error() {
                    best = p;
                    continue;
                }
            }
            if let Some(p) = self.best_on_grid::<S>(&best.coords, width) {
                if p.error() < best.error() {
                    best = p;
                }
            }
            width *= 2.0 / GRID as f64;
        }
        Ok(best)
    }
}

/// Twists `θ_0..θ_{N-1}` whose model has the target's rotation digits and
/// deltas within tolerance. `unit_template` lists the unit criticalities in
/// composition order.
pub fn solve_signature<S: Real>(target: &SignatureTarget, unit_template: &[u32]) -> Result<Vec<S>> {
    let n = target.len();
    if n > MAX_UNITS {
        return Err(Error::Unsupported(format!("{n} critical points; at most {MAX_UNITS}")));
    }
    if unit_template.len() != n {
        return Err(Error::InvalidInput(format!("template has {} units for {n} deltas", unit_template.len())));
    }
    let solver =
        Solver { target, template: unit_template, cumulative: target.cumulative(), iters: target.measurement_iters()? };
    if n == 1 {
        return Ok(solver.probe::<S>(&[])?.thetas);
    }
    let best = match solver.coordinate_sweeps::<S>(&vec![0.5; n - 1]) {
        Some(p) if p.error() <= target.tolerance => p,
        _ => solver.grid_search()?,
    };
    if best.error() > target.tolerance {
        return Err(Error::TargetUnreachable(format!(
            "best deltas {:?} miss {:?} by {:.3e} > {}",
            best.signature.deltas.iter().map(|d| d.to_f64()).collect::<Vec<_>>(),
            target.deltas,
            best.error(),
            target.tolerance
        )));
    }
    if best.signature.error_bound.to_f64() > target.tolerance / 4.0 {
        return Err(Error::PrecisionExhausted(format!(
            "return time too short: measure error {} for tolerance {}",
            best.signature.error_bound, target.tolerance
        )));
    }
    Ok(best.thetas)
}
