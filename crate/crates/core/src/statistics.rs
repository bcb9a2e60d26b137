//! Distinct-area statistics over a partition.
//!
//! Areas are scalars, so "clustering" is sorted-gap splitting: sort the
//! cell areas and start a new class at every adjacent gap larger than the
//! tolerance. The interesting part is honesty about the tolerance. A gap
//! anywhere near the split threshold (within twenty orders of magnitude
//! on either side) means the class count would move under a slightly
//! different tolerance or a recomputation, so the report is flagged
//! uncertified rather than silently resolved. A class whose internal
//! spread exceeds a tenth of the tolerance means the tolerance is
//! straddling a real gap, which is an error, not a flag.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{PrecisionConfig, Real};
use crate::sites::VectorSpec;
use crate::voronoi::Partition;

/// One equivalence class of cell areas.
#[derive(Clone, Debug, Serialize)]
pub struct AreaClass {
    /// Smallest member area (class representative).
    pub representative_area: Real,
    /// 1-based site indices, ascending.
    pub member_sites: Vec<usize>,
    /// Largest intra-class pairwise difference.
    pub spread: Real,
}

/// Result of sorted-gap clustering.
#[derive(Clone, Debug)]
pub struct Clustering {
    /// Classes ordered by ascending representative area.
    pub classes: Vec<AreaClass>,
    /// True when some adjacent gap fell inside the sensitivity band
    /// around the tolerance; the class count is then not robust.
    pub ambiguous: bool,
}

/// Per-`n` summary: the distinct-area count, the side-count census, the
/// classes themselves, and certification metadata.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub n: usize,
    pub v: VectorSpec,
    /// Number of distinct areas at the reporting tolerance.
    #[serde(rename = "S")]
    pub s: usize,
    /// Side-count census: `m[k]` cells have `k` sides; zero counts omitted.
    #[serde(rename = "M")]
    pub m: BTreeMap<usize, usize>,
    pub classes: Vec<AreaClass>,
    pub tolerance_used: Real,
    /// False when clustering was ambiguous or certification failed or was
    /// skipped.
    pub certified: bool,
    /// Agreed leading fractional digits between the base run and the
    /// escalated rerun; set by the certification pass.
    pub certified_digits: Option<u32>,
    pub precision: PrecisionConfig,
    pub edge_count: usize,
    pub vertex_count: usize,
}

/// Sorted-gap clustering of `areas` (indexed 1-based in the output) at
/// absolute tolerance `tol`.
pub fn count_distinct_areas(areas: &[Real], tol: &Real) -> Result<Clustering> {
    if areas.is_empty() {
        return Ok(Clustering { classes: Vec::new(), ambiguous: false });
    }
    if !tol.is_positive() {
        return Err(Error::InvalidInput(
            "clustering tolerance must be positive".into(),
        ));
    }
    let mut order: Vec<usize> = (0..areas.len()).collect();
    order.sort_by(|&a, &b| areas[a].cmp(&areas[b]).then(a.cmp(&b)));

    let (band_lo, band_hi) = sensitivity_band(tol);
    let mut ambiguous = false;
    let mut groups: Vec<Vec<usize>> = vec![vec![order[0]]];
    for pair in order.windows(2) {
        let gap = &areas[pair[1]] - &areas[pair[0]];
        if gap > band_lo && gap < band_hi {
            ambiguous = true;
        }
        if gap > *tol {
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(pair[1]);
    }

    let spread_limit = Real::from_mantissa(tol.mantissa() / 10, tol.digits());
    let mut classes = Vec::with_capacity(groups.len());
    for group in groups {
        let lo = &areas[group[0]];
        let hi = &areas[*group.last().unwrap()];
        let spread = hi - lo;
        if spread > spread_limit {
            return Err(Error::AmbiguousClustering(format!(
                "class spread {} exceeds a tenth of the tolerance; \
                 the tolerance straddles a real gap",
                spread.to_decimal_string()
            )));
        }
        let mut member_sites: Vec<usize> = group.iter().map(|&i| i + 1).collect();
        member_sites.sort_unstable();
        classes.push(AreaClass {
            representative_area: lo.clone(),
            member_sites,
            spread,
        });
    }
    Ok(Clustering { classes, ambiguous })
}

// Gaps inside (lo, hi) are too close to the tolerance for the split/join
// decision to be robust: twenty orders of magnitude on each side.
fn sensitivity_band(tol: &Real) -> (Real, Real) {
    let digits = tol.digits();
    let shift = num_bigint::BigInt::from(10u32).pow(20);
    let lo = Real::from_mantissa(tol.mantissa() / &shift, digits);
    let hi = Real::from_mantissa(tol.mantissa() * &shift, digits);
    (lo, hi)
}

/// The `M_k` census of a partition: how many cells have `k` sides.
pub fn side_histogram(partition: &Partition) -> BTreeMap<usize, usize> {
    let mut histogram = BTreeMap::new();
    for cell in partition.cells() {
        *histogram.entry(cell.sides()).or_insert(0) += 1;
    }
    histogram
}

/// Build the per-`n` report at tolerance `10^-target_digits`.
pub fn gap_report(partition: &Partition, cfg: &PrecisionConfig) -> Result<GapReport> {
    gap_report_with_tolerance(partition, cfg, cfg.target_digits)
}

/// Build the per-`n` report at tolerance `10^-tolerance_exponent`.
pub fn gap_report_with_tolerance(
    partition: &Partition,
    cfg: &PrecisionConfig,
    tolerance_exponent: u32,
) -> Result<GapReport> {
    if tolerance_exponent == 0 || tolerance_exponent > cfg.working_digits() {
        return Err(Error::InvalidInput(format!(
            "tolerance exponent {tolerance_exponent} outside 1..={}",
            cfg.working_digits()
        )));
    }
    let tol = Real::exp10_neg(tolerance_exponent, cfg.working_digits());
    let areas: Vec<Real> = partition.cells().iter().map(|c| c.area.clone()).collect();
    let clustering = count_distinct_areas(&areas, &tol)?;

    // Centrally paired cells are congruent, hence exactly equal in area;
    // they must never split across classes.
    let n = partition.n();
    let mut class_of = vec![usize::MAX; n + 1];
    for (c, class) in clustering.classes.iter().enumerate() {
        for &site in &class.member_sites {
            class_of[site] = c;
        }
    }
    for i in 1..=n / 2 {
        let j = n + 1 - i;
        if class_of[i] != class_of[j] {
            return Err(Error::PairingViolation { i, j });
        }
    }

    let m = side_histogram(partition);
    debug_assert_eq!(m.values().sum::<usize>(), n);
    Ok(GapReport {
        n,
        v: *partition.vector(),
        s: clustering.classes.len(),
        m,
        classes: clustering.classes,
        tolerance_used: tol,
        certified: !clustering.ambiguous,
        certified_digits: None,
        precision: *cfg,
        edge_count: partition.edge_count(),
        vertex_count: partition.vertex_count(),
    })
}
