use super::partition::{build_partition, Partition};
use crate::circlemap::CircleMap;
use crate::error::{Error, Result};
use crate::numerics::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryStats<S> {
    pub level: i64,
    /// Largest `|I| / |J|` over adjacent atoms (both orders).
    pub max_adjacent_ratio: S,
    /// Smallest `|child| / |parent|` against the previous level.
    pub min_child_parent_ratio: S,
}

/// Statistics of `p` against its parent level `parent` (level `n - 1`).
pub fn geometry_report<S: Real>(p: &Partition<S>, parent: &Partition<S>) -> Result<GeometryStats<S>> {
    if parent.level + 1 != p.level {
        return Err(Error::InvalidInput(format!("parent level {} does not precede {}", parent.level, p.level)));
    }
    let n = p.atoms.len();
    let mut max_adjacent = S::one();
    for i in 0..n {
        let (a, b) = (p.atoms[i].length, p.atoms[(i + 1) % n].length);
        max_adjacent = max_adjacent.max(a / b).max(b / a);
    }
    let tol = S::epsilon().sqrt();
    let mut min_child = S::one();
    for a in &p.atoms {
        let i = parent.parent_of(a, tol).ok_or_else(|| {
            Error::PrecisionExhausted(format!("level-{} atom {} straddles two parents", p.level, a.index))
        })?;
        min_child = min_child.min(a.length / parent.atoms[i].length);
    }
    Ok(GeometryStats { level: p.level, max_adjacent_ratio: max_adjacent, min_child_parent_ratio: min_child })
}

/// Geometry statistics for each level in `levels` (each `>= 0`).
pub fn geometry_series<S: Real, M: CircleMap<S> + ?Sized>(
    map: &M,
    levels: impl IntoIterator<Item = i64>,
) -> Result<Vec<GeometryStats<S>>> {
    levels
        .into_iter()
        .map(|n| geometry_report(&build_partition(map, n)?, &build_partition(map, n - 1)?))
        .collect()
}

/// Labels of the atoms containing the critical points of `map`.
fn critical_placement<S: Real, M: CircleMap<S> + ?Sized>(
    map: &M,
    p: &Partition<S>,
) -> Result<Vec<(super::Orbit, u64)>> {
    let crit = map.critical_points()?;
    Ok(crit
        .points
        .iter()
        .map(|c| {
            let a = &p.atoms[p.locate(c.position)];
            (a.orbit, a.index)
        })
        .collect())
}

/// `max | |I|/|J| - |h(I)|/|h(J)| |` over adjacent atoms of `𝓘_n(f)`, with
/// `h` the combinatorial conjugacy matching atoms of equal label.
///
/// Labels depend only on the rotation number, so the critical points are
/// checked as well: each must fall in atoms of the same label in both maps.
pub fn ratio_defect<S: Real, F, G>(f: &F, g: &G, n: i64) -> Result<S>
where
    F: CircleMap<S> + ?Sized,
    G: CircleMap<S> + ?Sized,
{
    let pf = build_partition(f, n)?;
    let pg = build_partition(g, n)?;
    if pf.labels() != pg.labels() {
        return Err(Error::CombinatorialMismatch(format!("level-{n} atom orders differ")));
    }
    let (cf, cg) = (critical_placement(f, &pf)?, critical_placement(g, &pg)?);
    if cf != cg {
        return Err(Error::CombinatorialMismatch(format!(
            "critical points sit in different level-{n} atoms: {cf:?} vs {cg:?}"
        )));
    }
    let m = pf.atoms.len();
    let mut worst = S::zero();
    for i in 0..m {
        let j = (i + 1) % m;
        let rf = pf.atoms[i].length / pf.atoms[j].length;
        let rg = pg.atoms[i].length / pg.atoms[j].length;
        worst = worst.max((rf - rg).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use crate::numerics::{One, Zero};
    use crate::circlemap::{tune_family, ConjugatedMap, CriticalSet, Diffeo, MapModel, OrbitOptions};
    use crate::numerics::{ContinuedFraction, DoubleDouble};

    type DD = DoubleDouble;

    struct Rotation(DD);

    impl CircleMap<DD> for Rotation {
        fn lift(&self, x: DD) -> DD {
            x + self.0
        }
        fn critical_points(&self) -> Result<CriticalSet<DD>> {
            Ok(CriticalSet { points: vec![], collided: false, merge_tolerance: 0.0 })
        }
    }

    /// `x + t + a sin(2πx) / 2π`, a diffeomorphism for `a < 1`.
    struct Arnold {
        t: DD,
        a: DD,
    }

    impl CircleMap<DD> for Arnold {
        fn lift(&self, x: DD) -> DD {
            x + self.t + self.a * (DD::two_pi() * x).sin() / DD::two_pi()
        }
        fn critical_points(&self) -> Result<CriticalSet<DD>> {
            Ok(CriticalSet { points: vec![], collided: false, merge_tolerance: 0.0 })
        }
    }

    fn golden() -> DD {
        ContinuedFraction::periodic_value(&[1])
    }

    fn bicubic(theta0: f64) -> MapModel<DD> {
        crate::testing::tuned(&[3, 3], theta0, &[1], 20)
    }

    #[test]
    fn rotation_lengths_are_closed_form() {
        let rho = golden();
        let r = Rotation(rho);
        for n in [3i64, 6, 9] {
            let p = build_partition(&r, n).unwrap();
            let conv = crate::numerics::convergents_u64(&[1; 12]).unwrap();
            let (pn, qn) = conv[n as usize];
            let (pm, qm) = conv[n as usize + 1];
            let long = (DD::from_u64(qn) * rho - DD::from_u64(pn)).abs();
            let short = (DD::from_u64(qm) * rho - DD::from_u64(pm)).abs();
            for a in &p.atoms {
                let expect = if a.orbit == super::super::Orbit::Long { long } else { short };
                assert!((a.length - expect).abs().to_f64() < 1e-28);
            }
            let s = geometry_report(&p, &build_partition(&r, n - 1).unwrap()).unwrap();
            assert!((s.max_adjacent_ratio - long / short).abs().to_f64() < 1e-25);
            assert!((s.max_adjacent_ratio.to_f64() - 1.618033988749895).abs() < 1e-12);
        }
    }

    #[test]
    fn near_rotation_lengths_approach_rotation() {
        let a = DD::from_f64(1e-3);
        let target = ContinuedFraction::new(vec![1; 30]);
        let t = tune_family(|t| Arnold { t, a }, DD::zero(), DD::one(), &target, 24, OrbitOptions::default()).unwrap();
        let arnold = Arnold { t, a };
        let rot = Rotation(golden());
        let n = 8;
        let mut la: Vec<f64> = build_partition(&arnold, n).unwrap().atoms.iter().map(|x| x.length.to_f64()).collect();
        let mut lr: Vec<f64> = build_partition(&rot, n).unwrap().atoms.iter().map(|x| x.length.to_f64()).collect();
        la.sort_by(f64::total_cmp);
        lr.sort_by(f64::total_cmp);
        for (x, y) in la.iter().zip(&lr) {
            assert!((x / y - 1.0).abs() < 0.1, "{x} vs {y}");
        }
    }

    #[test]
    fn bicubic_geometry_is_bounded() {
        let f = bicubic(0.23);
        let stats = geometry_series(&f, 5..=15).unwrap();
        for s in &stats {
            assert!(s.max_adjacent_ratio >= DD::one() && s.max_adjacent_ratio.to_f64() < 1e3, "{s:?}");
            assert!(s.min_child_parent_ratio > DD::zero() && s.min_child_parent_ratio <= DD::one());
        }
    }

    #[test]
    fn self_defect_is_exactly_zero() {
        let f = bicubic(0.23);
        for n in [2, 6, 10] {
            assert_eq!(ratio_defect(&f, &f, n).unwrap(), DD::zero());
        }
    }

    #[test]
    fn conjugate_defect_decays() {
        let f = bicubic(0.3);
        let g = ConjugatedMap { inner: f.clone(), psi: Diffeo::new(DD::from_f64(0.05)).unwrap() };
        let d4 = ratio_defect(&f, &g, 4).unwrap();
        let d10 = ratio_defect(&f, &g, 10).unwrap();
        assert!(d10 < d4, "{d10} !< {d4}");
    }

    #[test]
    fn conjugate_defect_fits_a_contraction() {
        let ns: Vec<DD> = (2..=12).map(DD::from_i64).collect();
        for theta in [0.1, 0.3, 0.6] {
            let f = bicubic(theta);
            let g = ConjugatedMap { inner: f.clone(), psi: Diffeo::new(DD::from_f64(0.05)).unwrap() };
            let ds: Vec<DD> = (2..=12).map(|n| ratio_defect(&f, &g, n).unwrap()).collect();
            let fit = crate::numerics::fit_decay(&ns, &ds).unwrap();
            assert!(fit.log_lambda.to_f64() < -0.05, "twist {theta}: {fit:?}");
        }
    }

    /// `h = ψ` maps `I_n(f)` onto `I_n(g)`, and `ψ(0) = 0`, so the length
    /// ratio is `(ψ(x) - ψ(0)) / x = 1 + a sinc(2πx)` with `x = |I_n|`.
    #[test]
    fn conjugacy_ratio_at_zero_matches_closed_form() {
        let f = bicubic(0.23);
        let a = 0.05;
        let g = ConjugatedMap { inner: f.clone(), psi: Diffeo::new(DD::from_f64(a)).unwrap() };
        for n in [2i64, 5, 9, 12] {
            let i_n = |p: &Partition<DD>| *p.atoms.iter().find(|x| x.orbit == super::super::Orbit::Long && x.index == 0).unwrap();
            let (af, ag) = (i_n(&build_partition(&f, n).unwrap()), i_n(&build_partition(&g, n).unwrap()));
            let t = DD::two_pi() * af.length;
            let expect = DD::one() + DD::from_f64(a) * t.sin() / t;
            assert!(((ag.length / af.length) - expect).abs().to_f64() < 1e-24, "n={n}");
        }
    }

    #[test]
    fn different_deltas_are_told_apart() {
        let f = bicubic(0.1);
        let g = bicubic(0.4);
        let separated = (2..=12).any(|n| match ratio_defect(&f, &g, n) {
            Err(Error::CombinatorialMismatch(_)) => true,
            Ok(d) => d.to_f64() > 0.1,
            Err(e) => panic!("{e}"),
        });
        assert!(separated);
    }
}
