//! Exact Voronoi cells on the flat unit torus.
//!
//! Each cell is built independently in a chart of the universal cover
//! centered on its own site: start from the fundamental square
//! `[-1/2, 1/2]^2`, then clip by the perpendicular bisector of every
//! nearby translate of every other site, processed in order of increasing
//! distance. A candidate at distance `d` cannot cut the current polygon
//! once `d > 2 * max |vertex|`, which bounds the work per cell by a
//! constant for equidistributed sites.
//!
//! Every edge of the working polygon carries the supporting line of the
//! bisector that created it (the four initial edges are bisectors of the
//! site's own unit translates). Vertices are always computed as the
//! intersection of their two adjacent supporting lines, so the final
//! coordinates depend only on which bisectors survive, not on the clip
//! order — this is what makes results bit-identical across thread counts
//! and under the central symmetry of the site set.
//!
//! Degeneracy policy: detect and fail, never perturb. Any vertex pair
//! closer than `10^-target_digits` (but not exactly coincident) and any
//! corner whose cross-product cannot be certified zero or nonzero raises
//! [`Error::Degeneracy`].

use std::collections::HashSet;
use std::rc::Rc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{PrecisionConfig, Real};
use crate::sites::{SiteSet, TorusPoint, VectorSpec};

/// Only candidates this close (squared) can ever cut the initial square.
const PREFILTER_D2: f64 = 2.001;
/// Conservative slack on the f64 termination comparison.
const TERMINATION_MARGIN: f64 = 1.0 + 1e-9;

/// A point in the cover chart of one cell, relative to the owning site.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverPoint {
    pub x: Real,
    pub y: Real,
}

/// A contributing candidate: `site` translated by `shift` whole periods.
/// `shift` components for surviving edges lie in `{-1, 0, 1}`; translates
/// further out are dominated by a nearer translate of the same site
/// together with the initial square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Neighbor {
    pub site: usize,
    pub shift: (i32, i32),
}

/// Strictly convex polygon, counter-clockwise, first vertex canonicalized
/// to the lexicographic minimum.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct Polygon {
    vertices: Vec<CoverPoint>,
}

impl Polygon {
    pub fn vertices(&self) -> &[CoverPoint] {
        &self.vertices
    }

    pub fn sides(&self) -> usize {
        self.vertices.len()
    }
}

/// One Voronoi cell. `neighbors[k]` generated the edge from vertex `k` to
/// vertex `k+1`; for cells that wrap the torus it may name the cell's own
/// site (a translate of the cell abuts itself).
#[derive(Clone, Debug, Serialize)]
pub struct VoronoiCell {
    pub site: usize,
    pub polygon: Polygon,
    pub area: Real,
    pub neighbors: Vec<Neighbor>,
}

impl VoronoiCell {
    pub fn sides(&self) -> usize {
        self.polygon.sides()
    }
}

/// The full partition of the torus for one site set.
#[derive(Clone, Debug)]
pub struct Partition {
    vector: VectorSpec,
    cfg: PrecisionConfig,
    cells: Vec<VoronoiCell>,
    vertex_count: usize,
    edge_count: usize,
}

impl Partition {
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn vector(&self) -> &VectorSpec {
        &self.vector
    }

    pub fn cfg(&self) -> &PrecisionConfig {
        &self.cfg
    }

    pub fn cells(&self) -> &[VoronoiCell] {
        &self.cells
    }

    /// Cell by 1-based site index.
    pub fn cell(&self, site: usize) -> &VoronoiCell {
        &self.cells[site - 1]
    }

    /// Voronoi vertices of the quotient complex (derived via Euler's
    /// formula `V - E + F = 0` on the torus).
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Voronoi edges of the quotient complex.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }
}

/// Coordinate-wise displacement from `a` to `b` through the nearest
/// translate, each component in `[-1/2, 1/2]` with the antipodal tie
/// broken toward `+1/2`.
pub fn torus_delta(a: &TorusPoint, b: &TorusPoint) -> (Real, Real) {
    (circle_delta(&a.x, &b.x), circle_delta(&a.y, &b.y))
}

fn circle_delta(a: &Real, b: &Real) -> Real {
    let m = (b - a).frac_unchecked();
    let half = Real::from_ratio(1, 2, m.digits()).unwrap();
    if m <= half {
        m
    } else {
        &m - &Real::one(m.digits())
    }
}

/// Supporting line `x . q = |q|^2 / 2` of the bisector between the origin
/// and the translate `q`; the origin side (`x . q - c <= 0`) is kept.
struct Line {
    qx: Real,
    qy: Real,
    c: Real,
    source: Neighbor,
}

impl Line {
    fn bisector(qx: Real, qy: Real, source: Neighbor) -> Line {
        let c = (&(&qx * &qx) + &(&qy * &qy)).halve();
        Line { qx, qy, c, source }
    }

    /// Signed side value of `p`: negative strictly inside, zero on the
    /// line, positive strictly outside.
    fn side(&self, p: &CoverPoint) -> std::cmp::Ordering {
        let s = &(&(&p.x * &self.qx) + &(&p.y * &self.qy)) - &self.c;
        if s.is_negative() {
            std::cmp::Ordering::Less
        } else if s.is_zero() {
            std::cmp::Ordering::Equal
        } else {
            std::cmp::Ordering::Greater
        }
    }
}

// Working polygon: each vertex carries the supporting line of its
// outgoing edge (to the cyclically next vertex).
type WorkingPolygon = Vec<(CoverPoint, Rc<Line>)>;

fn initial_square(site: usize, digits: u32) -> WorkingPolygon {
    let h = Real::from_ratio(1, 2, digits).unwrap();
    let corner = |sx: i64, sy: i64| CoverPoint {
        x: h.mul_int(sx),
        y: h.mul_int(sy),
    };
    let edge = |ex: i64, ey: i64| {
        Rc::new(Line::bisector(
            Real::from_int(ex, digits),
            Real::from_int(ey, digits),
            Neighbor { site, shift: (ex as i32, ey as i32) },
        ))
    };
    vec![
        (corner(-1, -1), edge(0, -1)), // bottom
        (corner(1, -1), edge(1, 0)),   // right
        (corner(1, 1), edge(0, 1)),    // top
        (corner(-1, 1), edge(-1, 0)),  // left
    ]
}

fn intersect(a: &Line, b: &Line, site: usize, cfg: &PrecisionConfig) -> Result<CoverPoint> {
    let det = &(&a.qx * &b.qy) - &(&a.qy * &b.qx);
    let floor = Real::exp10_neg(cfg.target_digits, det.digits());
    if det.abs() < floor {
        return Err(Error::Degeneracy {
            site,
            detail: "adjacent bisectors are parallel beyond certification".into(),
        });
    }
    let x = (&(&a.c * &b.qy) - &(&b.c * &a.qy)).div(&det)?;
    let y = (&(&a.qx * &b.c) - &(&b.qx * &a.c)).div(&det)?;
    Ok(CoverPoint { x, y })
}

/// Clip the working polygon by `line`. Returns whether anything was cut.
fn clip(
    poly: &mut WorkingPolygon,
    line: &Rc<Line>,
    site: usize,
    cfg: &PrecisionConfig,
) -> Result<bool> {
    use std::cmp::Ordering::*;
    let sides: Vec<_> = poly.iter().map(|(v, _)| line.side(v)).collect();
    if sides.iter().all(|s| *s != Greater) {
        return Ok(false);
    }
    if sides.iter().all(|s| *s == Greater) {
        // The origin (the site itself) is strictly inside every bisector,
        // so a clip can never remove the whole polygon.
        return Err(Error::Degeneracy {
            site,
            detail: "clip removed the entire cell".into(),
        });
    }
    let len = poly.len();
    let mut out: WorkingPolygon = Vec::with_capacity(len + 2);
    for k in 0..len {
        let (v, edge_line) = &poly[k];
        let inside = sides[k] != Greater;
        let next_inside = sides[(k + 1) % len] != Greater;
        if inside {
            out.push((v.clone(), edge_line.clone()));
            if !next_inside {
                // leaving the half-plane: the crossing starts the new edge
                out.push((intersect(edge_line, line, site, cfg)?, line.clone()));
            }
        } else if next_inside {
            // re-entering: the crossing continues the original edge
            out.push((intersect(edge_line, line, site, cfg)?, edge_line.clone()));
        }
    }
    collapse_duplicates(&mut out);
    if out.len() < 3 {
        return Err(Error::Degeneracy {
            site,
            detail: "cell collapsed below three vertices".into(),
        });
    }
    *poly = out;
    Ok(true)
}

// Remove cyclically-adjacent exactly-equal vertices (the first of each
// pair, whose outgoing edge has zero length).
fn collapse_duplicates(poly: &mut WorkingPolygon) {
    loop {
        let len = poly.len();
        if len < 2 {
            return;
        }
        let dup = (0..len).find(|&k| poly[k].0 == poly[(k + 1) % len].0);
        match dup {
            Some(k) => {
                poly.remove(k);
            }
            None => return,
        }
    }
}

fn max_radius2(poly: &WorkingPolygon) -> f64 {
    poly.iter()
        .map(|(v, _)| {
            let x = v.x.to_f64();
            let y = v.y.to_f64();
            x * x + y * y
        })
        .fold(0.0, f64::max)
}

enum Corner {
    Keep,
    Merge,
    Degenerate,
}

// Classify the corner at `cur`: cross product of the incoming and
// outgoing edge directions. Certified zero (below arithmetic noise)
// merges, certified positive keeps; anything else cannot be certified at
// the configured precision.
fn corner_class(prev: &CoverPoint, cur: &CoverPoint, next: &CoverPoint, cfg: &PrecisionConfig) -> Corner {
    let ux = &cur.x - &prev.x;
    let uy = &cur.y - &prev.y;
    let wx = &next.x - &cur.x;
    let wy = &next.y - &cur.y;
    let cross = &(&ux * &wy) - &(&uy * &wx);
    let digits = cross.digits();
    let noise = Real::exp10_neg(digits.saturating_sub(6), digits);
    let certified = Real::exp10_neg(cfg.target_digits, digits);
    if cross.abs() <= noise {
        Corner::Merge
    } else if cross > certified {
        Corner::Keep
    } else {
        Corner::Degenerate
    }
}

/// Drop every vertex whose adjacent edges are collinear (cross-product
/// certified zero) and validate that the result is strictly convex and
/// counter-clockwise. Corners whose cross-product is neither certifiably
/// zero nor certifiably positive raise [`Error::Degeneracy`].
pub fn merge_collinear(raw: &[CoverPoint], cfg: &PrecisionConfig) -> Result<Polygon> {
    let mut vertices: Vec<CoverPoint> = raw.to_vec();
    let mut dedup = Vec::with_capacity(vertices.len());
    for v in vertices.drain(..) {
        if dedup.last() != Some(&v) {
            dedup.push(v);
        }
    }
    if dedup.len() > 1 && dedup.first() == dedup.last() {
        dedup.pop();
    }
    let mut vertices = dedup;
    merge_collinear_in_place(&mut vertices, None, 0, cfg)?;
    Ok(Polygon { vertices: canonical_rotation(vertices) })
}

// Shared merge loop. When `lines` is provided it is kept parallel to the
// vertex list so surviving edges retain their generating bisector.
fn merge_collinear_in_place(
    vertices: &mut Vec<CoverPoint>,
    mut lines: Option<&mut Vec<Rc<Line>>>,
    site: usize,
    cfg: &PrecisionConfig,
) -> Result<()> {
    'retry: loop {
        let len = vertices.len();
        if len < 3 {
            return Err(Error::Degeneracy {
                site,
                detail: "fewer than three vertices after collinear merge".into(),
            });
        }
        for k in 0..len {
            let prev = &vertices[(k + len - 1) % len];
            let next = &vertices[(k + 1) % len];
            match corner_class(prev, &vertices[k], next, cfg) {
                Corner::Keep => {}
                Corner::Merge => {
                    vertices.remove(k);
                    if let Some(lines) = lines.as_deref_mut() {
                        lines.remove(k);
                    }
                    continue 'retry;
                }
                Corner::Degenerate => {
                    return Err(Error::Degeneracy {
                        site,
                        detail: format!(
                            "corner at vertex {k} cannot be certified convex or collinear"
                        ),
                    });
                }
            }
        }
        return Ok(());
    }
}

fn canonical_rotation(mut vertices: Vec<CoverPoint>) -> Vec<CoverPoint> {
    let min = (0..vertices.len())
        .min_by(|&a, &b| {
            let va = &vertices[a];
            let vb = &vertices[b];
            va.x.cmp(&vb.x).then_with(|| va.y.cmp(&vb.y))
        })
        .unwrap_or(0);
    vertices.rotate_left(min);
    vertices
}

/// Shoelace area `1/2 |sum_k (x_k y_{k+1} - x_{k+1} y_k)|`.
pub fn polygon_area(polygon: &Polygon) -> Real {
    shoelace(polygon.vertices())
}

fn shoelace(vertices: &[CoverPoint]) -> Real {
    let digits = vertices
        .iter()
        .map(|v| v.x.digits().min(v.y.digits()))
        .min()
        .unwrap_or(0);
    let mut sum = Real::zero(digits);
    for k in 0..vertices.len() {
        let a = &vertices[k];
        let b = &vertices[(k + 1) % vertices.len()];
        let term = &(&a.x * &b.y) - &(&b.x * &a.y);
        sum = &sum + &term;
    }
    sum.halve().abs()
}

/// Build one Voronoi cell in its own cover chart (site at the origin).
pub fn build_cell(sites: &SiteSet, site: usize) -> Result<VoronoiCell> {
    let cfg = sites.cfg();
    let digits = cfg.working_digits();
    let n = sites.n();
    let [bx, by] = sites.approx(site);

    // Nine-translate candidate enumeration in f64, nearest first. Ties are
    // ordered by (site, shift) so the scan order is fully deterministic.
    let mut candidates: Vec<(f64, usize, i8, i8)> = Vec::new();
    for other in 1..=n {
        if other == site {
            continue;
        }
        let [ox, oy] = sites.approx(other);
        let dx = ox - bx;
        let dy = oy - by;
        for sx in -1i8..=1 {
            for sy in -1i8..=1 {
                let qx = dx + f64::from(sx);
                let qy = dy + f64::from(sy);
                let d2 = qx * qx + qy * qy;
                if d2 <= PREFILTER_D2 {
                    candidates.push((d2, other, sx, sy));
                }
            }
        }
    }
    candidates.sort_unstable_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let base = sites.point(site);
    let mut poly = initial_square(site, digits);
    let mut max_r2 = 0.5; // corners of the initial square

    for &(d2, other, sx, sy) in &candidates {
        if d2 > 4.0 * max_r2 * TERMINATION_MARGIN {
            break;
        }
        let p = sites.point(other);
        let qx = &(&p.x - &base.x) + &Real::from_int(sx.into(), digits);
        let qy = &(&p.y - &base.y) + &Real::from_int(sy.into(), digits);
        let line = Rc::new(Line::bisector(
            qx,
            qy,
            Neighbor { site: other, shift: (sx.into(), sy.into()) },
        ));
        if clip(&mut poly, &line, site, cfg)? {
            max_r2 = max_radius2(&poly);
        }
    }

    finalize(poly, site, cfg)
}

fn finalize(poly: WorkingPolygon, site: usize, cfg: &PrecisionConfig) -> Result<VoronoiCell> {
    let (mut vertices, mut lines): (Vec<CoverPoint>, Vec<Rc<Line>>) = poly.into_iter().unzip();
    merge_collinear_in_place(&mut vertices, Some(&mut lines), site, cfg)?;

    // Reject uncertifiably short edges (exact duplicates were collapsed
    // during clipping, so anything below tolerance here is a genuine
    // near-degeneracy).
    let tol = Real::exp10_neg(cfg.target_digits, cfg.working_digits());
    let len = vertices.len();
    for k in 0..len {
        let a = &vertices[k];
        let b = &vertices[(k + 1) % len];
        if (&a.x - &b.x).abs() < tol && (&a.y - &b.y).abs() < tol {
            return Err(Error::Degeneracy {
                site,
                detail: format!("vertices {k} and {} are closer than tolerance", (k + 1) % len),
            });
        }
    }

    // Rotate so the lexicographically smallest vertex comes first, keeping
    // edge attribution aligned.
    let min = (0..len)
        .min_by(|&a, &b| {
            vertices[a]
                .x
                .cmp(&vertices[b].x)
                .then_with(|| vertices[a].y.cmp(&vertices[b].y))
        })
        .unwrap();
    vertices.rotate_left(min);
    lines.rotate_left(min);

    let area = shoelace(&vertices);
    if !area.is_positive() {
        return Err(Error::Degeneracy { site, detail: "cell area is not positive".into() });
    }
    let neighbors = lines.iter().map(|l| l.source).collect();
    Ok(VoronoiCell {
        site,
        polygon: Polygon { vertices },
        area,
        neighbors,
    })
}

/// Build all cells (in parallel) and validate the partition as a whole:
/// areas sum to 1 within `10^-target_digits`, edge attribution is
/// reciprocal, and the quotient complex satisfies Euler's relation with
/// every vertex of degree three (`sum of sides = 6n` for `n >= 2`).
pub fn build_partition(sites: &SiteSet) -> Result<Partition> {
    let n = sites.n();
    let cells = (1..=n)
        .into_par_iter()
        .map(|site| build_cell(sites, site))
        .collect::<Result<Vec<_>>>()?;

    let cfg = sites.cfg();
    let digits = cfg.working_digits();
    let mut total = Real::zero(digits);
    for cell in &cells {
        total = &total + &cell.area;
    }
    let defect = (&total - &Real::one(digits)).abs();
    let tol = Real::exp10_neg(cfg.target_digits, digits);
    if defect > tol {
        return Err(Error::PartitionInconsistency(format!(
            "areas sum to {} (defect beyond tolerance)",
            total.to_decimal_string()
        )));
    }

    let mut edges: HashSet<(usize, usize, i32, i32)> = HashSet::new();
    for cell in &cells {
        for nb in &cell.neighbors {
            edges.insert((cell.site, nb.site, nb.shift.0, nb.shift.1));
        }
    }
    for &(a, b, sx, sy) in &edges {
        if !edges.contains(&(b, a, -sx, -sy)) {
            return Err(Error::PartitionInconsistency(format!(
                "cell {a} borders cell {b} at shift ({sx}, {sy}) but not vice versa"
            )));
        }
    }

    let side_sum: usize = cells.iter().map(VoronoiCell::sides).sum();
    if side_sum % 2 != 0 {
        return Err(Error::PartitionInconsistency(format!(
            "odd total side count {side_sum}"
        )));
    }
    if n >= 2 && side_sum != 6 * n {
        return Err(Error::PartitionInconsistency(format!(
            "total side count {side_sum} != 6n = {} without a detected degeneracy",
            6 * n
        )));
    }
    let edge_count = side_sum / 2;
    let vertex_count = edge_count - n; // V = E - F on the torus

    Ok(Partition {
        vector: *sites.vector(),
        cfg: *cfg,
        cells,
        vertex_count,
        edge_count,
    })
}
