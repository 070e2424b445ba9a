use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mcrit::circlemap::{rotation_digits, signature, tune_twist, MapModel, OrbitOptions};
use mcrit::experiments::{run_named, ExperimentConfig};
use mcrit::modelfamily::{solve_signature, SignatureTarget};
use mcrit::numerics::{ContinuedFraction, Precision, Real};
use mcrit::with_precision;

#[derive(Parser)]
#[command(name = "mcrit", version, about = "Renormalization experiments for multicritical circle maps")]
struct Cli {
    /// Working precision: std (f64), ext (double-double) or high (quad-double).
    #[arg(long, global = true)]
    precision: Option<Precision>,
    /// Experiment config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV, text and SVG outputs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG chart next to each CSV.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rotation digits of a model map.
    Rotnum {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Tune the last twist so the rotation digits match `--rho`.
    Tune {
        #[command(flatten)]
        map: MapArgs,
        /// Target digits, comma separated. Defaults to the golden mean.
        #[arg(long, value_delimiter = ',')]
        rho: Option<Vec<u64>>,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Rotation digits and invariant-measure deltas of a model map.
    Signature {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Length of the orbit used for the measure.
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
    },
    /// Solve for twists realizing a signature, e.g.
    /// `rho=1,1,1,... d=3,3 delta=0.3,0.7 tol=0.01`.
    ModelSolve {
        target: String,
    },
    /// Distances between the renormalizations of two maps.
    RenormDistance(ExperimentArgs),
    /// Ratio defects of dynamical partitions and the derivative estimate.
    Rigidity(ExperimentArgs),
    /// Commutator decay of a perturbed almost-commuting pair.
    Commutator(ExperimentArgs),
    /// Geometry statistics of the dynamical partitions.
    Geometry(ExperimentArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Unit criticalities in composition order.
    #[arg(long = "d", value_delimiter = ',', default_value = "3")]
    criticalities: Vec<u32>,
    /// Twists, one per unit. Missing ones default to 0.
    #[arg(long, value_delimiter = ',')]
    theta: Vec<String>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Config overrides, `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl MapArgs {
    fn model<S: Real>(&self) -> anyhow::Result<MapModel<S>> {
        if self.theta.len() > self.criticalities.len() {
            anyhow::bail!(mcrit::Error::InvalidInput(format!(
                "{} twists for {} units",
                self.theta.len(),
                self.criticalities.len()
            )));
        }
        let mut thetas = vec![S::zero(); self.criticalities.len()];
        for (t, s) in thetas.iter_mut().zip(&self.theta) {
            *t = S::parse_decimal(s)?;
        }
        Ok(MapModel::from_parts(&self.criticalities, &thetas)?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<mcrit::Error>().map_or(1, mcrit::Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let precision = cli.precision.unwrap_or(Precision::Ext);
    let text = match &cli.command {
        Command::Rotnum { map, depth } => with_precision!(precision, S => {
            let f = map.model::<S>()?;
            let r = rotation_digits::<S, _>(&f, *depth, OrbitOptions::default())?;
            format!("digits = {}\nestimate = {}\n", r.digits, r.estimate().to_decimal())
        }),
        Command::Tune { map, rho, depth } => with_precision!(precision, S => {
            let digits = rho.clone().unwrap_or_else(|| vec![1; (*depth).max(1)]);
            let f = tune_twist(&map.model::<S>()?, &ContinuedFraction::new(digits), *depth)?;
            f.to_text()
        }),
        Command::Signature { map, depth, iters } => with_precision!(precision, S => {
            let s = signature::<S, _>(&map.model::<S>()?, *depth, *iters)?;
            let list = |v: &[S]| v.iter().map(|x| x.to_f64().to_string()).collect::<Vec<_>>().join(",");
            format!(
                "rho = {}\nd = {}\ndelta = {}\ncritical_points = {}\nerror_bound = {:e}\n",
                s.rho,
                s.criticalities.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
                list(&s.deltas),
                list(&s.critical_points),
                s.error_bound.to_f64()
            )
        }),
        Command::ModelSolve { target } => {
            let target = SignatureTarget::parse(target)?;
            with_precision!(precision, S => {
                let thetas = solve_signature::<S>(&target, &target.criticalities)?;
                let f = MapModel::from_parts(&target.criticalities, &thetas)?;
                format!("# {target}\n{}", f.to_text())
            })
        }
        Command::RenormDistance(a) => return experiment(cli, "convergence", a),
        Command::Rigidity(a) => return experiment(cli, "rigidity", a),
        Command::Commutator(a) => return experiment(cli, "commutator", a),
        Command::Geometry(a) => return experiment(cli, "geometry", a),
    };
    print!("{text}");
    if let Some(dir) = &cli.out {
        let name = match &cli.command {
            Command::Rotnum { .. } => "rotnum",
            Command::Tune { .. } => "tune",
            Command::Signature { .. } => "signature",
            _ => "model-solve",
        };
        write_text(dir, name, &text)?;
    }
    Ok(())
}

fn write_text(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).map_err(mcrit::Error::from)?;
    let path = dir.join(format!("{name}.txt"));
    fs::write(&path, text).map_err(mcrit::Error::from)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Config file, then `--set` overrides, then the common flags.
fn experiment(cli: &Cli, name: &str, args: &ExperimentArgs) -> anyhow::Result<()> {
    let mut text = match &cli.config {
        Some(p) => fs::read_to_string(p)
            .map_err(mcrit::Error::from)
            .with_context(|| format!("reading {}", p.display()))?,
        None => String::new(),
    };
    text.push('\n');
    for kv in &args.set {
        if !kv.contains('=') {
            anyhow::bail!(mcrit::Error::Parse(format!("--set expects key=value, got {kv:?}")));
        }
        text.push_str(kv);
        text.push('\n');
    }
    if let Some(p) = cli.precision {
        text.push_str(&format!("precision = {p}\n"));
    }
    if let Some(dir) = &cli.out {
        text.push_str(&format!("out = {}\n", dir.display()));
    }
    if cli.svg {
        text.push_str("svg = true\n");
    }
    let cfg = ExperimentConfig::parse(&text)?;
    let rec = run_named(name, &cfg)?;
    print!("{}", rec.report());
    if cfg.out.is_none() {
        print!("{}", rec.to_csv());
    }
    Ok(())
}
