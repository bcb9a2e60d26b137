//! Crate-wide error type.
//!
//! Every fallible operation in the pipeline funnels into [`Error`] so
//! callers (and the CLI) can report per-`n` failures without aborting a
//! whole run.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Precision parameters outside the supported range.
    #[error("invalid precision config: {0}")]
    InvalidConfig(String),

    /// `sqrt`/`cbrt` of a perfect power would be rational and is rejected.
    #[error("{kind}({operand}) is a perfect power, its root is rational")]
    PerfectPower { kind: &'static str, operand: u64 },

    /// `frac` is only defined for non-negative inputs.
    #[error("fractional part of a negative value ({value}) is not supported")]
    NegativeFrac { value: String },

    #[error("division by zero")]
    DivisionByZero,

    /// Two precision escalations still left fewer agreeing digits than the
    /// target.
    #[error(
        "certification failed: {best_digits} agreeing digits after two \
         escalations (target {target_digits}, final precisions \
         {lo_digits}/{hi_digits})"
    )]
    CertificationFailure {
        best_digits: u32,
        target_digits: u32,
        lo_digits: u32,
        hi_digits: u32,
    },

    /// Syntax error in a constant or vector expression.
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    /// The two vector components must be distinct symbolic constants.
    #[error("vector components must differ, both were {0}")]
    IdenticalConstants(String),

    /// Two generated sites coincide on the torus; the generating vector is
    /// not irrational enough for this n.
    #[error("sites {i} and {j} coincide on the torus")]
    SiteCollision { i: usize, j: usize },

    /// The exact central-symmetry congruence failed for a site pair.
    #[error("central symmetry violated for pair ({i}, {j}): offset {distance}")]
    SymmetryViolation { i: usize, j: usize, distance: String },

    /// Geometry too close to a degenerate configuration to certify.
    /// The policy is detect-and-fail: no perturbation is ever applied.
    #[error("degenerate geometry in cell {site}: {detail}")]
    Degeneracy { site: usize, detail: String },

    /// A cross-cell consistency check failed (area sum, reciprocity, Euler
    /// counts).
    #[error("partition inconsistency: {0}")]
    PartitionInconsistency(String),

    /// An area class is wider than the clustering tolerance allows.
    #[error("ambiguous clustering: {0}")]
    AmbiguousClustering(String),

    /// A centrally-symmetric pair landed in different area classes.
    #[error("pairing violation: sites {i} and {j} fall in different area classes")]
    PairingViolation { i: usize, j: usize },

    /// The one-dimensional gap structure broke the three-gap bound; this
    /// always indicates an arithmetic bug, never a property of the input.
    #[error("three-gap violation for {alpha} at n={n}: {detail}")]
    ThreeGapViolation { alpha: String, n: usize, detail: String },

    /// Exact and rasterized results disagree beyond the rigorous bound.
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    /// Raster grid too coarse for the number of sites.
    #[error("raster grid {grid_m} too coarse for {n} sites (need at least {min})")]
    GridTooCoarse { grid_m: usize, n: usize, min: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
