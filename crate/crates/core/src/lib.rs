//! Exact Voronoi partitions of the unit torus for Kronecker-type site
//! sets, with areas certified to a configurable number of decimal digits.
//!
//! The site set for a vector `(alpha, beta)` and a count `n` is
//! `{ ({i alpha}, {i beta}) : i = 1..n }` on the flat torus `[0,1)^2`.
//! The library computes the Voronoi cell of every site as an exact convex
//! polygon, certifies each cell area by recomputing at escalated
//! precision, and reports the number of distinct areas together with the
//! polygon side-count census. Independent validation oracles (a raster
//! nearest-site sampler and an incremental gap sweep for the projected
//! one-dimensional sequences) cross-check the geometric pipeline.

pub mod cli;
pub mod error;
pub mod numerics;
pub mod sites;
pub mod statistics;
pub mod verify;
pub mod voronoi;

pub use cli::{run, RunConfig, RunOutcome};
pub use error::{Error, Result};
pub use numerics::{fractional_agreement, ConstantSpec, PrecisionConfig, Real};
pub use sites::{generate_sites, SiteSet, TorusPoint, VectorSpec};
pub use statistics::{gap_report, GapReport};
pub use voronoi::{build_partition, Partition, VoronoiCell};
