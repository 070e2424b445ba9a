//! Dynamical partitions of circle maps, their bounded-geometry statistics,
//! and the ratio defect of the combinatorial conjugacy between two maps.

pub mod geometry;
pub mod partition;

pub use geometry::{geometry_report, geometry_series, ratio_defect, GeometryStats};
pub use partition::{build_partition, Atom, Orbit, Partition};
