//! Independent validation oracles.
//!
//! Two deliberately different code paths check the exact pipeline:
//!
//! * a one-dimensional gap checker working on exact scaled integers — the
//!   circle positions `frac(i * alpha)` are exact multiples of `10^-W`,
//!   so the classical gap structure (at most three distinct lengths, the
//!   longest equal to the sum of the other two) can be asserted as exact
//!   integer identities, no tolerance involved;
//! * a raster oracle in plain `f64` — every grid-cell center is assigned
//!   to its nearest site under the torus metric and per-site pixel counts
//!   estimate areas. Hardware floats and a completely different algorithm
//!   make shared bugs with the exact path unlikely.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{make_constant, frac, ConstantSpec, PrecisionConfig, Real};
use crate::sites::SiteSet;
use crate::voronoi::Partition;

/// Circular gap structure of `{frac(i*alpha) : i=1..n}`.
#[derive(Clone, Debug, Serialize)]
pub struct GapLengths1D {
    pub n: usize,
    pub alpha: ConstantSpec,
    /// Distinct gap lengths, ascending.
    pub lengths: Vec<Real>,
    /// Multiplicity of each length; aligned with `lengths`.
    pub counts: Vec<usize>,
}

// Exact gap bookkeeping on scaled integers: positions are mantissas in
// [0, 10^W), gaps form a multiset keyed by length.
struct GapSweep {
    modulus: BigInt,
    positions: BTreeSet<BigInt>,
    gaps: BTreeMap<BigInt, usize>,
}

impl GapSweep {
    fn new(modulus: BigInt) -> Self {
        GapSweep {
            modulus,
            positions: BTreeSet::new(),
            gaps: BTreeMap::new(),
        }
    }

    fn add_gap(&mut self, len: BigInt) {
        *self.gaps.entry(len).or_insert(0) += 1;
    }

    fn remove_gap(&mut self, len: &BigInt) {
        match self.gaps.get_mut(len) {
            Some(1) => {
                self.gaps.remove(len);
            }
            Some(count) => *count -= 1,
            None => unreachable!("removing a gap that was never inserted"),
        }
    }

    /// Insert a position, splitting the circular gap that contains it.
    fn insert(&mut self, pos: BigInt, alpha_text: &str, step: usize) -> Result<()> {
        if self.positions.is_empty() {
            self.positions.insert(pos);
            self.add_gap(self.modulus.clone());
            return Ok(());
        }
        if self.positions.contains(&pos) {
            return Err(Error::ThreeGapViolation {
                alpha: alpha_text.to_string(),
                n: step,
                detail: "two multiples share a fractional part".into(),
            });
        }
        // circular neighbors of the new position
        let succ = self
            .positions
            .range(&pos..)
            .next()
            .or_else(|| self.positions.iter().next())
            .cloned()
            .unwrap();
        let pred = self
            .positions
            .range(..&pos)
            .next_back()
            .or_else(|| self.positions.iter().next_back())
            .cloned()
            .unwrap();
        let wrap = |d: BigInt| {
            if d.sign() == num_bigint::Sign::Minus || d == BigInt::from(0) {
                d + &self.modulus
            } else {
                d
            }
        };
        let old = wrap(&succ - &pred);
        let left = wrap(&pos - &pred);
        let right = wrap(&succ - &pos);
        self.remove_gap(&old);
        self.add_gap(left);
        self.add_gap(right);
        self.positions.insert(pos);
        Ok(())
    }

    /// The classical gap structure: at most three distinct lengths, and
    /// with three the largest is exactly the sum of the other two.
    fn check(&self, alpha_text: &str, n: usize) -> Result<()> {
        let distinct: Vec<&BigInt> = self.gaps.keys().collect();
        match distinct.len() {
            1 | 2 => Ok(()),
            3 => {
                if distinct[0] + distinct[1] == *distinct[2] {
                    Ok(())
                } else {
                    Err(Error::ThreeGapViolation {
                        alpha: alpha_text.to_string(),
                        n,
                        detail: "three lengths but the largest is not the sum \
                                 of the other two"
                            .into(),
                    })
                }
            }
            d => Err(Error::ThreeGapViolation {
                alpha: alpha_text.to_string(),
                n,
                detail: format!("{d} distinct gap lengths"),
            }),
        }
    }
}

/// Gap structure of the first `n` multiples of `alpha` on the circle,
/// with the gap-count theorems asserted for the final configuration.
pub fn one_dim_gaps(alpha: &ConstantSpec, n: usize, cfg: &PrecisionConfig) -> Result<GapLengths1D> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut result = None;
    three_gap_sweep_inner(alpha, n, cfg, |sweep, step| {
        if step == n {
            result = Some(collect_lengths(sweep, alpha, cfg)?);
        }
        Ok(())
    })?;
    Ok(result.expect("sweep reaches n"))
}

/// Run the insertion sweep up to `n_max`, asserting the gap structure
/// after every insertion (every prefix is itself a valid configuration).
pub fn three_gap_sweep(alpha: &ConstantSpec, n_max: usize, cfg: &PrecisionConfig) -> Result<()> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    three_gap_sweep_inner(alpha, n_max, cfg, |_, _| Ok(()))
}

fn three_gap_sweep_inner(
    alpha: &ConstantSpec,
    n_max: usize,
    cfg: &PrecisionConfig,
    mut visit: impl FnMut(&GapSweep, usize) -> Result<()>,
) -> Result<()> {
    let alpha_text = alpha.to_string();
    let value = make_constant(alpha, cfg);
    let modulus = crate::numerics::pow10(value.digits());
    let mut sweep = GapSweep::new(modulus);
    for i in 1..=n_max {
        let pos = frac(&value.mul_int(i as i64))?;
        sweep.insert(pos.mantissa().clone(), &alpha_text, i)?;
        sweep.check(&alpha_text, i)?;
        visit(&sweep, i)?;
    }
    Ok(())
}

fn collect_lengths(
    sweep: &GapSweep,
    alpha: &ConstantSpec,
    cfg: &PrecisionConfig,
) -> Result<GapLengths1D> {
    let digits = cfg.working_digits();
    let mut lengths = Vec::new();
    let mut counts = Vec::new();
    for (len, count) in &sweep.gaps {
        lengths.push(Real::from_mantissa(len.clone(), digits));
        counts.push(*count);
    }
    // distinct reported lengths must be far apart relative to the target
    // tolerance, otherwise "distinct" would be tolerance-sensitive
    let tol = Real::exp10_neg(cfg.target_digits, digits);
    for pair in lengths.windows(2) {
        if (&pair[1] - &pair[0]).abs() <= tol {
            return Err(Error::ThreeGapViolation {
                alpha: alpha.to_string(),
                n: sweep.positions.len(),
                detail: "two distinct gap lengths within reporting tolerance".into(),
            });
        }
    }
    Ok(GapLengths1D {
        n: sweep.positions.len(),
        alpha: *alpha,
        lengths,
        counts,
    })
}

/// Raster (pixel-count) estimate of the cell areas.
#[derive(Clone, Debug, Serialize)]
pub struct RasterEstimate {
    pub grid_m: usize,
    /// Pixel count / m² per site (1-based site index at position i-1).
    pub areas: Vec<f64>,
    /// Pixels whose 4-neighborhood spans another site, per cell.
    pub boundary_pixels: Vec<usize>,
    /// Unordered site pairs with a *confirmed* shared boundary: a point on
    /// the pair's bisector, between two pixel centers the pair owns, that
    /// is strictly closer to these two sites than to any third. Plain
    /// pixel crossings are not enough — near a vertex, two cells separated
    /// by a wedge thinner than a pixel produce neighboring pixels without
    /// sharing an edge.
    pub adjacency: BTreeSet<(usize, usize)>,
    /// Uniform a-priori error bound per cell: every cell is a convex
    /// subset of a unit square, so its perimeter is at most 4 and the
    /// boundary strip covers at most `4·√2/m + 9/m²` of area.
    pub bound: f64,
}

/// Assign every grid-cell center to its nearest site (ties to the lowest
/// index) and count pixels per site.
pub fn raster_areas(sites: &SiteSet, grid_m: usize) -> Result<RasterEstimate> {
    let n = sites.n();
    let min_m = 10 * (n as f64).sqrt().ceil() as usize;
    if grid_m < min_m {
        return Err(Error::GridTooCoarse { grid_m, n, min: min_m });
    }

    // Bucket the sites so each pixel only scans a neighborhood. With
    // buckets of side 1/b and sites equidistributed, the nearest site is
    // almost always within the adjacent bucket ring; the scan widens until
    // the found distance certifies no farther ring can win.
    let b = ((n as f64).sqrt().ceil() as usize).max(1);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); b * b];
    for i in 1..=n {
        let [x, y] = sites.approx(i);
        let bx = ((x * b as f64) as usize).min(b - 1);
        let by = ((y * b as f64) as usize).min(b - 1);
        buckets[by * b + bx].push(i);
    }

    let torus_d2 = |ax: f64, ay: f64, bx: f64, by: f64| {
        let mut dx = (ax - bx).abs();
        if dx > 0.5 {
            dx = 1.0 - dx;
        }
        let mut dy = (ay - by).abs();
        if dy > 0.5 {
            dy = 1.0 - dy;
        }
        dx * dx + dy * dy
    };

    // Best `top.len()` sites for a query point, nearest first, via an
    // expanding ring scan over the buckets. A site in a bucket ring not
    // yet scanned is at least (ring-1)/b away, so the scan stops once the
    // current worst kept distance is certified unbeatable.
    let nearest_fill = |px: f64, py: f64, top: &mut [(usize, f64)]| {
        for slot in top.iter_mut() {
            *slot = (usize::MAX, f64::INFINITY);
        }
        let bx = ((px * b as f64) as usize).min(b - 1) as isize;
        let by = ((py * b as f64) as usize).min(b - 1) as isize;
        let mut ring = 0isize;
        loop {
            for dy in -ring..=ring {
                for dx in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    let cx = (bx + dx).rem_euclid(b as isize) as usize;
                    let cy = (by + dy).rem_euclid(b as isize) as usize;
                    for &site in &buckets[cy * b + cx] {
                        // wrapping rings can revisit a bucket
                        if top.iter().any(|slot| slot.0 == site) {
                            continue;
                        }
                        let [sx, sy] = sites.approx(site);
                        let d2 = torus_d2(px, py, sx, sy);
                        let mut cand = (site, d2);
                        for slot in top.iter_mut() {
                            if cand.1 < slot.1 || (cand.1 == slot.1 && cand.0 < slot.0) {
                                std::mem::swap(&mut cand, slot);
                            }
                        }
                    }
                }
            }
            let worst = top.last().unwrap().1;
            let ring_clear = ((ring - 1).max(0) as f64) / b as f64;
            if worst.sqrt() <= ring_clear || ring as usize > b {
                return;
            }
            ring += 1;
        }
    };

    let m = grid_m;
    let mut owner = vec![0usize; m * m];
    let mut top1 = [(usize::MAX, f64::INFINITY)];
    for gy in 0..m {
        let py = (gy as f64 + 0.5) / m as f64;
        for gx in 0..m {
            let px = (gx as f64 + 0.5) / m as f64;
            nearest_fill(px, py, &mut top1);
            owner[gy * m + gx] = top1[0].0;
        }
    }

    // Pixel counts, boundary pixels, and boundary crossings grouped by
    // unordered site pair. A crossing is stored as (origin, direction) of
    // the segment joining the two pixel centers.
    let mut counts = vec![0usize; n + 1];
    let mut boundary = vec![0usize; n + 1];
    let mut crossings: BTreeMap<(usize, usize), Vec<(f64, f64, f64, f64)>> = BTreeMap::new();
    let step = 1.0 / m as f64;
    for gy in 0..m {
        let py = (gy as f64 + 0.5) * step;
        for gx in 0..m {
            let px = (gx as f64 + 0.5) * step;
            let site = owner[gy * m + gx];
            counts[site] += 1;
            let mut is_boundary = false;
            let right = owner[gy * m + (gx + 1) % m];
            if right != site {
                is_boundary = true;
                crossings
                    .entry((site.min(right), site.max(right)))
                    .or_default()
                    .push((px, py, step, 0.0));
            }
            let up = owner[((gy + 1) % m) * m + gx];
            if up != site {
                is_boundary = true;
                crossings
                    .entry((site.min(up), site.max(up)))
                    .or_default()
                    .push((px, py, 0.0, step));
            }
            if owner[gy * m + (gx + m - 1) % m] != site
                || owner[((gy + m - 1) % m) * m + gx] != site
            {
                is_boundary = true;
            }
            if is_boundary {
                boundary[site] += 1;
            }
        }
    }

    // Confirm each crossing pair by finding a bisector point that is
    // strictly closer to the pair than to any third site.
    let mut adjacency = BTreeSet::new();
    let mut top3 = [(usize::MAX, f64::INFINITY); 3];
    'pairs: for (&(a, c), segments) in &crossings {
        // mid-edge crossings confirm fastest, so probe outward from the
        // middle of the list; cap the attempts for pathological pairs
        let len = segments.len();
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&i| (2 * i + 1).abs_diff(len));
        for &idx in order.iter().take(24) {
            let (px, py, dx, dy) = segments[idx];
            let diff = |t: f64| {
                let qx = (px + t * dx).rem_euclid(1.0);
                let qy = (py + t * dy).rem_euclid(1.0);
                let [ax, ay] = sites.approx(a);
                let [cx, cy] = sites.approx(c);
                torus_d2(qx, qy, ax, ay).sqrt() - torus_d2(qx, qy, cx, cy).sqrt()
            };
            // the owner at t=0 is one of the pair; aim the bisection so
            // diff(lo) <= 0 <= diff(hi)
            let (mut lo, mut hi) = if diff(0.0) <= 0.0 { (0.0, 1.0) } else { (1.0, 0.0) };
            if diff(hi) < 0.0 {
                continue;
            }
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if diff(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            let qx = (px + t * dx).rem_euclid(1.0);
            let qy = (py + t * dy).rem_euclid(1.0);
            nearest_fill(qx, qy, &mut top3);
            let pair_found =
                (top3[0].0 == a && top3[1].0 == c) || (top3[0].0 == c && top3[1].0 == a);
            let third_margin = top3[2].1.sqrt() - top3[1].1.sqrt();
            if pair_found && third_margin > 1e-9 {
                adjacency.insert((a, c));
                continue 'pairs;
            }
        }
    }

    let m2 = (m * m) as f64;
    Ok(RasterEstimate {
        grid_m: m,
        areas: counts[1..].iter().map(|&c| c as f64 / m2).collect(),
        boundary_pixels: boundary[1..].to_vec(),
        adjacency,
        bound: 4.0 * std::f64::consts::SQRT_2 / m as f64 + 9.0 / m2,
    })
}

/// Outcome of checking a partition against the raster oracle.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub grid_m: usize,
    /// Largest |exact − raster| over all cells.
    pub max_abs_error: f64,
    /// Largest per-cell error bound actually used.
    pub max_bound: f64,
    /// Raster adjacency pairs confirmed against exact adjacency.
    pub adjacency_checked: usize,
}

/// Assert every raster area is within its bound of the exact area and
/// that raster adjacency is a subset of exact adjacency.
pub fn cross_validate(partition: &Partition, raster: &RasterEstimate) -> Result<ValidationReport> {
    let n = partition.n();
    if raster.areas.len() != n {
        return Err(Error::OracleMismatch(format!(
            "raster has {} cells, partition has {n}",
            raster.areas.len()
        )));
    }
    let m = raster.grid_m as f64;
    let mut max_abs_error = 0.0f64;
    let mut max_bound = 0.0f64;
    for cell in partition.cells() {
        let exact = cell.area.to_f64();
        let approx = raster.areas[cell.site - 1];
        let error = (exact - approx).abs();
        // tighter per-cell bound from the exact polygon's perimeter
        let perimeter = polygon_perimeter_f64(cell);
        let bound = (perimeter * std::f64::consts::SQRT_2 / m
            + (cell.sides() as f64 + 8.0) / (m * m))
            .min(raster.bound);
        max_abs_error = max_abs_error.max(error);
        max_bound = max_bound.max(bound);
        if error > bound {
            return Err(Error::OracleMismatch(format!(
                "cell {}: exact area {exact:.12} vs raster {approx:.12} \
                 (error {error:.3e} > bound {bound:.3e})",
                cell.site
            )));
        }
    }

    let exact_pairs: BTreeSet<(usize, usize)> = partition
        .cells()
        .iter()
        .flat_map(|cell| {
            cell.neighbors
                .iter()
                .map(move |nb| (cell.site.min(nb.site), cell.site.max(nb.site)))
        })
        .collect();
    for pair in &raster.adjacency {
        if !exact_pairs.contains(pair) {
            return Err(Error::OracleMismatch(format!(
                "raster adjacency {pair:?} absent from the exact partition"
            )));
        }
    }

    Ok(ValidationReport {
        n,
        grid_m: raster.grid_m,
        max_abs_error,
        max_bound,
        adjacency_checked: raster.adjacency.len(),
    })
}

fn polygon_perimeter_f64(cell: &crate::voronoi::VoronoiCell) -> f64 {
    let vs = cell.polygon.vertices();
    let mut sum = 0.0;
    for k in 0..vs.len() {
        let a = &vs[k];
        let b = &vs[(k + 1) % vs.len()];
        let dx = a.x.to_f64() - b.x.to_f64();
        let dy = a.y.to_f64() - b.y.to_f64();
        sum += (dx * dx + dy * dy).sqrt();
    }
    sum
}
