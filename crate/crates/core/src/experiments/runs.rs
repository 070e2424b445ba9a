use std::sync::Arc;

use rayon::prelude::*;

use super::config::{ExperimentConfig, MapSpec, SecondMap};
use super::record::{fit_rows, ExperimentRecord};
use crate::almostcommuting::{commutator_decay_series, perturb_to_almost_commuting};
use crate::circlemap::{signature, tune_twist, AnyMap, CircleMap, ConjugatedMap, Diffeo, MapModel};
use crate::error::{Error, Result};
use crate::modelfamily::{solve_signature, SignatureTarget};
use crate::numerics::{fit_decay, Real};
use crate::pairs::{dist_c0_checked, pair_from_map};
use crate::partitions::{build_partition, geometry_report, ratio_defect, Orbit};

/// Depth at which signature targets are solved. The deltas only need
/// `q_m >= 8 / tol`; deeper digits are added by the final tuning.
const SOLVE_DEPTH: usize = 20;

/// Builds the model of `spec`, tuned to the configured rotation digits.
pub fn build_model<S: Real>(spec: &MapSpec, cfg: &ExperimentConfig) -> Result<MapModel<S>> {
    let rho = cfg.rho.truncated(cfg.depth);
    let (criticalities, outer): (&[u32], Vec<S>) = match spec {
        MapSpec::Twists { criticalities, thetas } => {
            if thetas.len() + 1 != criticalities.len() {
                return Err(Error::InvalidInput(format!(
                    "{} units need {} outer twists, got {}",
                    criticalities.len(),
                    criticalities.len() - 1,
                    thetas.len()
                )));
            }
            (criticalities, thetas.iter().map(|&t| S::from_f64(t)).collect())
        }
        MapSpec::Deltas { criticalities, deltas } => {
            let target =
                SignatureTarget::new(rho.truncated(SOLVE_DEPTH), criticalities.clone(), deltas.clone(), cfg.tolerance)?;
            let thetas = solve_signature::<f64>(&target, criticalities)?;
            (criticalities, thetas[..thetas.len() - 1].iter().map(|&t| S::from_f64(t)).collect())
        }
    };
    let mut thetas = outer;
    thetas.push(S::zero());
    tune_twist(&MapModel::from_parts(criticalities, &thetas)?, &rho, cfg.depth)
}

/// `(f, g)` as configured.
pub fn build_maps<S: Real>(cfg: &ExperimentConfig) -> Result<(Arc<AnyMap<S>>, Arc<AnyMap<S>>)> {
    let f = build_model::<S>(&cfg.f, cfg)?;
    let g: AnyMap<S> = match &cfg.g {
        SecondMap::Same => f.clone().into(),
        SecondMap::Conjugate { amplitude } => {
            ConjugatedMap { inner: f.clone(), psi: Diffeo::new(S::from_f64(*amplitude))? }.into()
        }
        SecondMap::Model(spec) => build_model::<S>(spec, cfg)?.into(),
    };
    Ok((Arc::new(f.into()), Arc::new(g)))
}

/// Measures both signatures; fails on disagreement when the config says
/// the maps share one.
fn check_signatures<S: Real>(
    f: &AnyMap<S>,
    g: &AnyMap<S>,
    cfg: &ExperimentConfig,
    rec: &mut ExperimentRecord,
) -> Result<()> {
    let probe = SignatureTarget {
        rho: cfg.rho.truncated(cfg.depth),
        criticalities: Vec::new(),
        deltas: Vec::new(),
        tolerance: cfg.tolerance,
    };
    let iters = probe.measurement_iters()?;
    let sf = signature(f, cfg.depth, iters)?;
    let sg = signature(g, cfg.depth, iters)?;
    let show = |s: &crate::circlemap::Signature<S>| {
        s.deltas.iter().map(|d| format!("{:.4}", d.to_f64())).collect::<Vec<_>>().join(",")
    };
    rec.diagnostics.push(format!(
        "signatures: f d={:?} delta=({}), g d={:?} delta=({}), measure error <= {:.2e}",
        sf.criticalities,
        show(&sf),
        sg.criticalities,
        show(&sg),
        sf.error_bound.to_f64().max(sg.error_bound.to_f64())
    ));
    if cfg.same_signature && !sf.agrees_with(&sg, S::from_f64(cfg.tolerance)) {
        return Err(Error::SignatureMismatch(format!("f: ({}), g: ({})", show(&sf), show(&sg))));
    }
    Ok(())
}

fn levels(cfg: &ExperimentConfig) -> Vec<i64> {
    (cfg.n_min..=cfg.n_max).collect()
}

fn attach_fit(rec: &mut ExperimentRecord) -> Result<()> {
    rec.fit = fit_rows(&rec.rows, 0, 1)?;
    match &rec.fit {
        Some(f) => {
            rec.summary.push(("log_lambda".into(), f.log_lambda));
            rec.summary.push(("fit_residual".into(), f.residual));
        }
        None => rec.diagnostics.push("fewer than two positive values; no decay fit".into()),
    }
    Ok(())
}

/// `d_n = dist_C0(R^n f, R^n g)` over the configured levels.
pub fn run_convergence<S: Real>(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let mut rec = ExperimentRecord::new("convergence", &["n", "distance"]);
    let (f, g) = build_maps::<S>(cfg)?;
    check_signatures(&f, &g, cfg, &mut rec)?;
    let checks = levels(cfg)
        .into_par_iter()
        .map(|n| {
            let pf = pair_from_map(f.clone(), n)?;
            let pg = pair_from_map(g.clone(), n)?;
            Ok((n, dist_c0_checked(&pf, &pg, cfg.grid)))
        })
        .collect::<Result<Vec<_>>>()?;
    for (n, c) in &checks {
        rec.rows.push(vec![*n as f64, c.value.to_f64()]);
        if !c.stable() {
            rec.diagnostics.push(format!(
                "n={n}: doubling the grid moved the distance by {:.2}%",
                100.0 * c.relative_change.to_f64()
            ));
        }
    }
    rec.diagnostics.push(format!(
        "grid {}: {} of {} levels stable under doubling",
        cfg.grid,
        checks.iter().filter(|c| c.1.stable()).count(),
        checks.len()
    ));
    let d: Vec<f64> = rec.column(1);
    rec.summary.push(("max_distance".into(), d.iter().copied().fold(0.0, f64::max)));
    if d[0] > 0.0 {
        rec.summary.push(("last_over_first".into(), d[d.len() - 1] / d[0]));
    }
    attach_fit(&mut rec)?;
    Ok(rec)
}

/// Ratio defects of the combinatorial conjugacy and the derivative of the
/// conjugacy at 0, estimated as `|h(I_n)| / |I_n|` on the atom `I_n`
/// (endpoint 0), which alternates sides of 0 with `n`.
pub fn run_rigidity<S: Real>(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let mut rec = ExperimentRecord::new("rigidity", &["n", "defect", "deriv_est"]);
    let (f, g) = build_maps::<S>(cfg)?;
    check_signatures(&f, &g, cfg, &mut rec)?;
    let rows = levels(cfg)
        .into_par_iter()
        .map(|n| {
            let defect = ratio_defect(&*f, &*g, n)?;
            let pf = build_partition(&*f, n)?;
            let pg = build_partition(&*g, n)?;
            let i_n = |p: &crate::partitions::Partition<S>| {
                p.atoms.iter().find(|a| a.orbit == Orbit::Long && a.index == 0).cloned()
            };
            let (af, ag) = i_n(&pf).zip(i_n(&pg)).ok_or_else(|| {
                Error::PrecisionExhausted(format!("level {n}: no atom I_n in the partition"))
            })?;
            Ok((n, defect.to_f64(), (ag.length / af.length).to_f64(), af.length.to_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    for (n, d, e, _) in &rows {
        rec.rows.push(vec![*n as f64, *d, *e]);
    }
    attach_fit(&mut rec)?;

    let est: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let diffs: Vec<f64> = est.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    rec.summary.push(("deriv_at_0".into(), *est.last().unwrap()));
    if diffs.len() >= 5 {
        let last = &diffs[diffs.len() - 5..];
        let cauchy = last.windows(2).all(|w| w[1] < w[0]);
        rec.summary.push(("deriv_cauchy".into(), if cauchy { 1.0 } else { 0.0 }));
    } else {
        rec.diagnostics.push("fewer than 5 derivative differences; Cauchy check skipped".into());
    }
    // |est_{n+1} - est_n| ~ |I_n|^α.
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        diffs.iter().zip(&rows).filter(|(d, _)| **d > 0.0).map(|(d, r)| (-r.3.ln(), *d)).unzip();
    match fit_decay(&xs, &ys) {
        Ok(fit) => rec.summary.push(("holder_exponent".into(), -fit.log_lambda)),
        Err(_) => rec.diagnostics.push("derivative estimates constant; no Hölder fit".into()),
    }
    Ok(rec)
}

/// Commutator norms along the renormalizations of a perturbed pair, at the
/// configured radius and at half of it.
pub fn run_commutator<S: Real>(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let mut rec = ExperimentRecord::new("commutator", &["m", "norm"]);
    let f = build_model::<S>(&cfg.f, cfg)?;
    let pair = pair_from_map(Arc::new(AnyMap::from(f)), cfg.level)?;
    let ac = perturb_to_almost_commuting(&pair, S::from_f64(cfg.eps), cfg.order)?;
    rec.summary.push(("commutation_order".into(), ac.order as f64));
    let (full, half) = rayon::join(
        || commutator_decay_series(&ac, cfg.m_max, S::from_f64(cfg.radius)),
        || commutator_decay_series(&ac, cfg.m_max, S::from_f64(0.5 * cfg.radius)),
    );
    let (full, half) = (full?, half?);
    if full.truncated {
        rec.diagnostics.push(format!("renormalization stopped after m={}", full.points.len() - 1));
    }
    for (m, v) in &full.points {
        rec.rows.push(vec![*m as f64, v.to_f64()]);
    }
    attach_fit(&mut rec)?;
    let v = rec.column(1);
    let strictly = v.windows(2).all(|w| w[1] < w[0]);
    rec.summary.push(("strictly_decreasing".into(), if strictly { 1.0 } else { 0.0 }));
    if v[0] > 0.0 {
        rec.summary.push(("last_over_first".into(), v[v.len() - 1] / v[0]));
    }
    let half_rows: Vec<Vec<f64>> = half.points.iter().map(|(m, x)| vec![*m as f64, x.to_f64()]).collect();
    if let (Some(a), Some(b)) = (&rec.fit, fit_rows(&half_rows, 0, 1)?) {
        rec.summary.push(("half_radius_log_lambda".into(), b.log_lambda));
        rec.summary.push(("slope_change".into(), (b.log_lambda / a.log_lambda - 1.0).abs()));
    }
    let ratio_change = full
        .points
        .windows(2)
        .zip(half.points.windows(2))
        .filter(|(a, b)| a[0].1 > S::zero() && b[0].1 > S::zero())
        .map(|(a, b)| ((a[1].1 / a[0].1) / (b[1].1 / b[0].1)).to_f64() - 1.0)
        .fold(0.0f64, |m, x| m.max(x.abs()));
    rec.summary.push(("step_ratio_change".into(), ratio_change));
    Ok(rec)
}

/// Partition geometry over the configured levels.
pub fn run_geometry<S: Real>(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let mut rec = ExperimentRecord::new("geometry", &["level", "max_adj_ratio", "min_child_ratio"]);
    let f = build_model::<S>(&cfg.f, cfg)?;
    let stats = levels(cfg)
        .into_par_iter()
        .map(|n| geometry_report(&build_partition(&f, n)?, &build_partition(&f, n - 1)?))
        .collect::<Result<Vec<_>>>()?;
    for s in &stats {
        rec.rows.push(vec![s.level as f64, s.max_adjacent_ratio.to_f64(), s.min_child_parent_ratio.to_f64()]);
    }
    let adj = rec.column(1);
    let mut sorted = adj.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let last = adj[adj.len() - 1];
    let (peak_at, peak) = adj.iter().enumerate().fold((0, 0.0), |b, (i, &x)| if x > b.1 { (i, x) } else { b });
    rec.summary.extend([
        ("median_max_adj_ratio".into(), median),
        ("last_max_adj_ratio".into(), last),
        ("peak_max_adj_ratio".into(), peak),
        ("peak_level".into(), rec.rows[peak_at][0]),
        ("min_child_ratio".into(), rec.column(2).into_iter().fold(f64::INFINITY, f64::min)),
        ("bounded".into(), if last < 2.0 * median { 1.0 } else { 0.0 }),
    ]);
    if f.critical_points()?.collided {
        rec.diagnostics.push("critical points merged at the working precision".into());
    }
    Ok(rec)
}

pub const EXPERIMENTS: [&str; 4] = ["convergence", "rigidity", "commutator", "geometry"];

/// Runs an experiment by name at the configured precision and writes its
/// outputs when `cfg.out` is set.
pub fn run_named(name: &str, cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let rec = crate::with_precision!(cfg.precision, S => match name {
        "convergence" => run_convergence::<S>(cfg),
        "rigidity" => run_rigidity::<S>(cfg),
        "commutator" => run_commutator::<S>(cfg),
        "geometry" => run_geometry::<S>(cfg),
        other => Err(Error::InvalidInput(format!("unknown experiment {other:?}; expected one of {EXPERIMENTS:?}"))),
    })?;
    if let Some(dir) = &cfg.out {
        rec.write(dir, cfg.svg)?;
    }
    Ok(rec)
}
