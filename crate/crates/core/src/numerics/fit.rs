use super::real::Real;
use crate::error::{Error, Result};

/// Least-squares fit of `log d_n = log_c + n · log_lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit<S> {
    pub log_c: S,
    pub log_lambda: S,
    /// Largest absolute deviation of `log d_n` from the fitted line.
    pub residual: S,
}

impl<S: Real> DecayFit<S> {
    pub fn lambda(&self) -> S {
        self.log_lambda.exp()
    }
}

pub fn fit_decay<S: Real>(ns: &[S], ds: &[S]) -> Result<DecayFit<S>> {
    if ns.len() != ds.len() {
        return Err(Error::InvalidInput("levels and data differ in length".into()));
    }
    if ns.len() < 2 {
        return Err(Error::InvalidInput("a decay fit needs at least two points".into()));
    }
    if let Some(d) = ds.iter().find(|d| !(**d > S::zero())) {
        return Err(Error::NonPositiveData(format!("{d}")));
    }
    let m = S::from_f64(ns.len() as f64);
    let logs: Vec<S> = ds.iter().map(|d| d.ln()).collect();
    let mean_n = ns.iter().fold(S::zero(), |a, &n| a + n) / m;
    let mean_y = logs.iter().fold(S::zero(), |a, &y| a + y) / m;
    let mut sxx = S::zero();
    let mut sxy = S::zero();
    for (&n, &y) in ns.iter().zip(&logs) {
        sxx += (n - mean_n) * (n - mean_n);
        sxy += (n - mean_n) * (y - mean_y);
    }
    if sxx == S::zero() {
        return Err(Error::InvalidInput("all levels coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_n;
    let residual = ns.iter().zip(&logs).fold(S::zero(), |acc, (&n, &y)| {
        let r = (y - intercept - slope * n).abs();
        if r > acc { r } else { acc }
    });
    Ok(DecayFit { log_c: intercept, log_lambda: slope, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DoubleDouble;

    #[test]
    fn exact_geometric_decay() {
        let ns: Vec<f64> = (0..10).map(f64::from).collect();
        let ds: Vec<f64> = ns.iter().map(|n| 2.0 * 0.5f64.powf(*n)).collect();
        let fit = fit_decay(&ns, &ds).unwrap();
        assert!((fit.log_lambda - 0.5f64.ln()).abs() < 1e-14);
        assert!((fit.log_c - 2f64.ln()).abs() < 1e-14);
        assert!(fit.residual < 1e-14);
    }

    #[test]
    fn extended_precision_fit() {
        let ns: Vec<DoubleDouble> = (0..8).map(|n| DoubleDouble::from_f64(n as f64)).collect();
        let lam = DoubleDouble::from_f64(0.3);
        let ds: Vec<DoubleDouble> = (0..8).map(|n| lam.powi(n)).collect();
        let fit = fit_decay(&ns, &ds).unwrap();
        assert!((fit.log_lambda - lam.ln()).abs().to_f64() < 1e-29);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(matches!(fit_decay(&[0.0, 1.0], &[1.0, 0.0]), Err(Error::NonPositiveData(_))));
        assert!(fit_decay(&[0.0], &[1.0]).is_err());
    }
}
