use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::numerics::{fit_decay, DecayFit};

/// Result of one experiment: a table whose first column is the level, an
/// optional decay fit of the second column, and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub fit: Option<DecayFit<f64>>,
    /// Named scalar summaries (fitted exponents, ratios, flags as 0/1).
    pub summary: Vec<(String, f64)>,
    pub diagnostics: Vec<String>,
}

impl ExperimentRecord {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            fit: None,
            summary: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|p| p.1)
    }

    /// Header line, then one row per level. Values print in the shortest
    /// form that parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Human-readable summary: fit, scalars, diagnostics.
    pub fn report(&self) -> String {
        let mut s = format!("experiment: {}\n", self.name);
        if let Some(f) = &self.fit {
            let _ = writeln!(s, "fit: log_lambda={:.6} lambda={:.6} residual={:.4}", f.log_lambda, f.lambda(), f.residual);
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k}: {v}");
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "note: {d}");
        }
        s
    }

    /// Writes `<name>.csv`, `<name>.txt` and, if asked, `<name>.svg`.
    pub fn write(&self, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let csv = dir.join(format!("{}.csv", self.name));
        fs::write(&csv, self.to_csv())?;
        written.push(csv);
        let txt = dir.join(format!("{}.txt", self.name));
        fs::write(&txt, self.report())?;
        written.push(txt);
        if svg {
            let p = dir.join(format!("{}.svg", self.name));
            fs::write(&p, super::svg::log_linear_chart(&self.name, &self.columns, &self.rows))?;
            written.push(p);
        }
        Ok(written)
    }
}

/// Header and rows of a numeric CSV file.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> =
        lines.next().ok_or_else(|| Error::Parse("empty csv".into()))?.split(',').map(|h| h.trim().to_string()).collect();
    let rows = lines
        .enumerate()
        .map(|(i, l)| {
            let row = l
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {c:?}: {e}", i + 1))))
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return Err(Error::Parse(format!("row {} has {} cells, header {}", i + 1, row.len(), header.len())));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}

/// Decay fit of `value` against `level` over the rows with positive value.
/// `None` when fewer than two such rows remain.
pub fn fit_rows(rows: &[Vec<f64>], level: usize, value: usize) -> Result<Option<DecayFit<f64>>> {
    let (ns, ds): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| r[value] > 0.0).map(|r| (r[level], r[value])).unzip();
    if ns.len() < 2 {
        return Ok(None);
    }
    fit_decay(&ns, &ds).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_refits_bit_for_bit() {
        let mut r = ExperimentRecord::new("demo", &["n", "distance"]);
        for n in 0..10 {
            r.rows.push(vec![n as f64, 0.3 * 0.7f64.powi(n) * (1.0 + 0.1 * (n as f64).sin())]);
        }
        r.fit = fit_rows(&r.rows, 0, 1).unwrap();
        let (header, rows) = read_csv(&r.to_csv()).unwrap();
        assert_eq!(header, r.columns);
        assert_eq!(rows, r.rows);
        assert_eq!(fit_rows(&rows, 0, 1).unwrap(), r.fit);
    }

    #[test]
    fn zero_rows_are_skipped_by_the_fit() {
        let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        assert_eq!(fit_rows(&rows, 0, 1).unwrap(), None);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(read_csv("n,distance\n0,1\n1\n").is_err());
    }
}
