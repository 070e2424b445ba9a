//! Desk-scale experiments: convergence of renormalizations, rigidity via
//! ratio defects, commutator contraction and partition geometry. Each run
//! returns an [`ExperimentRecord`] that can be written as CSV, text and SVG.

pub mod config;
pub mod record;
pub mod runs;
pub mod svg;

pub use config::{default_n_max, precision_budget, ExperimentConfig, MapSpec, SecondMap};
pub use record::{fit_rows, read_csv, ExperimentRecord};
pub use runs::{
    build_maps, build_model, run_commutator, run_convergence, run_geometry, run_named, run_rigidity, EXPERIMENTS,
};
