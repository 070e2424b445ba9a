use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::numerics::{ContinuedFraction, Precision};

/// How the second map of an experiment is built.
#[derive(Debug, Clone, PartialEq)]
pub enum SecondMap {
    /// `g = f`.
    Same,
    /// `g = ψ ∘ f ∘ ψ^{-1}`, `ψ(x) = x + a sin(2πx) / 2π`.
    Conjugate { amplitude: f64 },
    /// An independent model.
    Model(MapSpec),
}

/// A model `u_{N-1} ∘ … ∘ u_0` whose last twist is tuned to the rotation
/// target. The other twists are given, or solved from target deltas.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Twists { criticalities: Vec<u32>, thetas: Vec<f64> },
    Deltas { criticalities: Vec<u32>, deltas: Vec<f64> },
}

impl MapSpec {
    pub fn criticalities(&self) -> &[u32] {
        match self {
            MapSpec::Twists { criticalities, .. } | MapSpec::Deltas { criticalities, .. } => criticalities,
        }
    }
}

/// Flat `key = value` configuration shared by all experiments.
///
/// Keys: `precision`, `rho`, `depth`, `d`, `theta`, `delta`, `g`, `psi`,
/// `g.d`, `g.theta`, `g.delta`, `n_min`, `n_max`, `grid`, `tol`, `eps`,
/// `order`, `m_max`, `radius`, `level`, `same_signature`, `out`, `svg`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub precision: Precision,
    pub rho: ContinuedFraction,
    pub depth: usize,
    pub f: MapSpec,
    pub g: SecondMap,
    pub n_min: i64,
    pub n_max: i64,
    pub grid: usize,
    /// Signature tolerance, also used by the model-family solver.
    pub tolerance: f64,
    pub eps: f64,
    /// Commutation order of perturbed pairs.
    pub order: u32,
    pub m_max: usize,
    pub radius: f64,
    /// Renormalization level the perturbed pair starts from.
    pub level: i64,
    /// Fail with `SignatureMismatch` when `f` and `g` measure differently.
    pub same_signature: bool,
    pub out: Option<PathBuf>,
    pub svg: bool,
}

/// Safe maxima per precision: tuning depth and renormalization level.
pub fn precision_budget(p: Precision) -> (usize, i64) {
    p.budget()
}

/// Default deepest level: 8 at standard precision, 12 above.
pub fn default_n_max(p: Precision) -> i64 {
    match p {
        Precision::Std => 8,
        _ => 12,
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let precision = Precision::Ext;
        Self {
            precision,
            rho: ContinuedFraction::new(vec![1; 30]),
            depth: 26,
            f: MapSpec::Twists { criticalities: vec![3, 3], thetas: vec![0.23] },
            g: SecondMap::Conjugate { amplitude: 0.05 },
            n_min: 0,
            n_max: default_n_max(precision),
            grid: 64,
            tolerance: 0.01,
            eps: 1e-6,
            order: 4,
            m_max: 6,
            radius: 0.05,
            level: 0,
            same_signature: true,
            out: None,
            svg: false,
        }
    }
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    v.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| Error::Parse(format!("{key}: {t:?}: {e}"))))
        .collect()
}

fn scalar<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| Error::Parse(format!("{key}: {v:?}: {e}")))
}

fn bool_value(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Parse(format!("{key}: expected a boolean, got {v:?}"))),
    }
}

/// Builds a map spec from `d`, `theta` and `delta` entries under `prefix`.
fn map_spec(kv: &BTreeMap<String, String>, prefix: &str, fallback: &MapSpec) -> Result<MapSpec> {
    let get = |k: &str| kv.get(&format!("{prefix}{k}"));
    let criticalities = match get("d") {
        Some(v) => list::<u32>("d", v)?,
        None => fallback.criticalities().to_vec(),
    };
    match (get("theta"), get("delta")) {
        (Some(_), Some(_)) => Err(Error::InvalidInput(format!("{prefix}theta and {prefix}delta are exclusive"))),
        (Some(v), None) => Ok(MapSpec::Twists { criticalities, thetas: list("theta", v)? }),
        (None, Some(v)) => Ok(MapSpec::Deltas { criticalities, deltas: list("delta", v)? }),
        (None, None) => Ok(match fallback {
            MapSpec::Twists { thetas, .. } if thetas.len() + 1 == criticalities.len() => {
                MapSpec::Twists { criticalities, thetas: thetas.clone() }
            }
            MapSpec::Deltas { deltas, .. } if deltas.len() == criticalities.len() => {
                MapSpec::Deltas { criticalities, deltas: deltas.clone() }
            }
            _ => {
                let n = criticalities.len();
                let thetas = (1..n).map(|j| j as f64 / n as f64).collect();
                MapSpec::Twists { criticalities, thetas }
            }
        }),
    }
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        Self::from_pairs(kv)
    }

    pub fn from_pairs(kv: BTreeMap<String, String>) -> Result<Self> {
        const KNOWN: &[&str] = &[
            "precision", "rho", "depth", "d", "theta", "delta", "g", "psi", "g.d", "g.theta", "g.delta", "n_min",
            "n_max", "grid", "tol", "eps", "order", "m_max", "radius", "level", "same_signature", "out", "svg",
        ];
        if let Some(k) = kv.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown key {k:?}")));
        }
        let mut c = Self::default();
        if let Some(v) = kv.get("precision") {
            c.precision = v.parse()?;
            c.n_max = default_n_max(c.precision);
            c.depth = c.depth.min(precision_budget(c.precision).0);
        }
        if let Some(v) = kv.get("rho") {
            c.rho = ContinuedFraction::new(list("rho", v)?);
            c.depth = c.depth.min(c.rho.len());
        }
        if let Some(v) = kv.get("depth") {
            c.depth = scalar("depth", v)?;
        }
        c.f = map_spec(&kv, "", &c.f)?;
        c.g = match kv.get("g").map(String::as_str) {
            None | Some("conjugate") => SecondMap::Conjugate {
                amplitude: kv.get("psi").map(|v| scalar("psi", v)).transpose()?.unwrap_or(0.05),
            },
            Some("same") => SecondMap::Same,
            Some("model") => SecondMap::Model(map_spec(&kv, "g.", &c.f)?),
            Some(other) => return Err(Error::Parse(format!("g: expected same, conjugate or model, got {other:?}"))),
        };
        if let Some(v) = kv.get("n_min") {
            c.n_min = scalar("n_min", v)?;
        }
        if let Some(v) = kv.get("n_max") {
            c.n_max = scalar("n_max", v)?;
        }
        if let Some(v) = kv.get("grid") {
            c.grid = scalar("grid", v)?;
        }
        if let Some(v) = kv.get("tol") {
            c.tolerance = scalar("tol", v)?;
        }
        if let Some(v) = kv.get("eps") {
            c.eps = scalar("eps", v)?;
        }
        if let Some(v) = kv.get("order") {
            c.order = scalar("order", v)?;
        }
        if let Some(v) = kv.get("m_max") {
            c.m_max = scalar("m_max", v)?;
        }
        if let Some(v) = kv.get("radius") {
            c.radius = scalar("radius", v)?;
        }
        if let Some(v) = kv.get("level") {
            c.level = scalar("level", v)?;
        }
        if let Some(v) = kv.get("same_signature") {
            c.same_signature = bool_value("same_signature", v)?;
        }
        if let Some(v) = kv.get("out") {
            c.out = Some(PathBuf::from(v));
        }
        if let Some(v) = kv.get("svg") {
            c.svg = bool_value("svg", v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let (max_depth, max_level) = precision_budget(self.precision);
        if self.depth == 0 || self.depth > self.rho.len() {
            return Err(Error::InvalidInput(format!("depth {} outside 1..={}", self.depth, self.rho.len())));
        }
        if self.depth > max_depth {
            return Err(Error::InvalidInput(format!(
                "depth {} exceeds the {} budget of {max_depth}",
                self.depth, self.precision
            )));
        }
        if self.n_max > max_level || self.level > max_level {
            return Err(Error::InvalidInput(format!(
                "level {} exceeds the {} budget of {max_level}",
                self.n_max.max(self.level),
                self.precision
            )));
        }
        if self.n_min < 0 || self.n_min > self.n_max {
            return Err(Error::InvalidInput(format!("levels {}..={} are empty or negative", self.n_min, self.n_max)));
        }
        if self.n_max as usize + 2 > self.depth {
            return Err(Error::InvalidInput(format!(
                "level {} needs {} rotation digits, depth is {}",
                self.n_max,
                self.n_max + 2,
                self.depth
            )));
        }
        if self.grid == 0 || !(self.radius > 0.0) || !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("grid, radius and tol must be positive".into()));
        }
        Ok(())
    }

    /// Serializes back to the `key = value` format.
    pub fn to_text(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let nums = |v: &[f64]| join(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        let ints = |v: &[u32]| join(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        let mut lines = vec![
            format!("precision = {}", self.precision),
            format!("rho = {}", join(&self.rho.digits.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
            format!("depth = {}", self.depth),
        ];
        let spec = |prefix: &str, s: &MapSpec, lines: &mut Vec<String>| match s {
            MapSpec::Twists { criticalities, thetas } => {
                lines.push(format!("{prefix}d = {}", ints(criticalities)));
                if !thetas.is_empty() {
                    lines.push(format!("{prefix}theta = {}", nums(thetas)));
                }
            }
            MapSpec::Deltas { criticalities, deltas } => {
                lines.push(format!("{prefix}d = {}", ints(criticalities)));
                lines.push(format!("{prefix}delta = {}", nums(deltas)));
            }
        };
        spec("", &self.f, &mut lines);
        match &self.g {
            SecondMap::Same => lines.push("g = same".into()),
            SecondMap::Conjugate { amplitude } => {
                lines.push("g = conjugate".into());
                lines.push(format!("psi = {amplitude}"));
            }
            SecondMap::Model(s) => {
                lines.push("g = model".into());
                spec("g.", s, &mut lines);
            }
        }
        lines.extend([
            format!("n_min = {}", self.n_min),
            format!("n_max = {}", self.n_max),
            format!("grid = {}", self.grid),
            format!("tol = {}", self.tolerance),
            format!("eps = {}", self.eps),
            format!("order = {}", self.order),
            format!("m_max = {}", self.m_max),
            format!("radius = {}", self.radius),
            format!("level = {}", self.level),
            format!("same_signature = {}", self.same_signature),
            format!("svg = {}", self.svg),
        ]);
        if let Some(o) = &self.out {
            lines.push(format!("out = {}", o.display()));
        }
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parses_second_model_and_comments() {
        let c = ExperimentConfig::parse(
            "precision = std  # fast\nrho = 1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1\ndelta = 0.5,0.5\ng = model\ng.delta = 0.3,0.7\nsame_signature = no\n",
        )
        .unwrap();
        assert_eq!(c.precision, Precision::Std);
        assert_eq!(c.n_max, 8);
        assert_eq!(c.depth, 16);
        assert_eq!(c.f, MapSpec::Deltas { criticalities: vec![3, 3], deltas: vec![0.5, 0.5] });
        assert_eq!(c.g, SecondMap::Model(MapSpec::Deltas { criticalities: vec![3, 3], deltas: vec![0.3, 0.7] }));
        assert!(!c.same_signature);
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(ExperimentConfig::parse("precision = std\nn_max = 12").is_err());
        assert!(ExperimentConfig::parse("depth = 40").is_err());
        assert!(ExperimentConfig::parse("n_max = 30").is_err());
        assert!(matches!(ExperimentConfig::parse("colour = red"), Err(Error::Parse(_))));
    }
}
