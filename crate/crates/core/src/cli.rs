//! Experiment driver shared by the command-line binary and the tests.
//!
//! A [`RunConfig`] names a generating vector, a set of `n` values, a
//! precision budget, and the outputs to emit. [`run`] sweeps the `n`
//! values (largest site set generated once, smaller ones taken as
//! prefixes), builds each partition, clusters areas into a
//! [`GapReport`], and certifies every report by recomputing at escalated
//! precision. Per-`n` failures are collected, not fatal: one degenerate
//! configuration cannot destroy a sweep.
//!
//! All persisted numeric truth lives in JSON decimal strings; the SVG
//! renderer rounds to 12 digits and is display-only.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{fractional_agreement, PrecisionConfig};
use crate::sites::{generate_sites, SiteSet, VectorSpec};
use crate::statistics::{gap_report_with_tolerance, GapReport};
use crate::voronoi::{build_partition, Partition};

/// One kind of artifact a run can emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputKind {
    /// Column-aligned text table (stdout, plus `table.txt` under the
    /// output directory).
    Table,
    /// `table.csv` with one row per `n`.
    Csv,
    /// `report_n{N}.json` and `partition_n{N}.json` per `n`.
    Json,
    /// `figure_n{N}.svg` per `n`.
    Svg,
}

impl FromStr for OutputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(OutputKind::Table),
            "csv" => Ok(OutputKind::Csv),
            "json" => Ok(OutputKind::Json),
            "svg" => Ok(OutputKind::Svg),
            other => Err(Error::InvalidInput(format!(
                "unknown format {other:?}, expected table, csv, json or svg"
            ))),
        }
    }
}

/// Everything one sweep needs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub vector: VectorSpec,
    /// Orders to run; deduplicated and sorted ascending before use.
    pub n_values: Vec<usize>,
    pub precision: PrecisionConfig,
    pub outputs: BTreeSet<OutputKind>,
    /// Where files go; `None` keeps everything in memory.
    pub out_dir: Option<PathBuf>,
    /// Size of a dedicated thread pool; `None` uses the global one.
    pub threads: Option<usize>,
    /// Areas closer than `10^-exponent` fall in the same class.
    pub tolerance_exponent: u32,
}

impl RunConfig {
    pub fn new(vector: VectorSpec, n_values: Vec<usize>) -> Self {
        RunConfig {
            vector,
            n_values,
            precision: PrecisionConfig::default(),
            outputs: BTreeSet::new(),
            out_dir: None,
            threads: None,
            tolerance_exponent: 80,
        }
    }

    fn normalized_n(&self) -> Result<Vec<usize>> {
        if self.n_values.is_empty() {
            return Err(Error::InvalidInput("n_values must be nonempty".into()));
        }
        if self.n_values.contains(&0) {
            return Err(Error::InvalidInput("n values must be positive".into()));
        }
        let set: BTreeSet<usize> = self.n_values.iter().copied().collect();
        Ok(set.into_iter().collect())
    }
}

/// A single `n` that could not be completed.
#[derive(Debug)]
pub struct RunFailure {
    pub n: usize,
    pub error: Error,
}

/// Reports for the orders that succeeded plus the isolated failures,
/// both ascending in `n`.
#[derive(Debug, Default)]
pub struct RunOutcome {
    pub reports: Vec<GapReport>,
    pub failures: Vec<RunFailure>,
}

impl RunOutcome {
    pub fn all_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Parse `"sqrt(2), sqrt(3)"` style vector expressions.
pub fn parse_vector(expr: &str) -> Result<VectorSpec> {
    VectorSpec::parse(expr)
}

/// Parse an `n` list: comma-separated items, each either an integer or
/// an end-inclusive range `a..b` with optional `:step`.
///
/// `"20,30"` → 20, 30; `"20..60:20"` → 20, 40, 60; duplicates collapse
/// and the result is ascending.
pub fn parse_n_values(text: &str) -> Result<Vec<usize>> {
    fn parse_int(item: &str) -> Result<usize> {
        item.trim().parse::<usize>().map_err(|_| {
            Error::InvalidInput(format!("expected a positive integer, got {item:?}"))
        })
    }

    let mut values = BTreeSet::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::InvalidInput(format!(
                "empty item in n list {text:?}"
            )));
        }
        let (range, step) = match item.split_once(':') {
            Some((range, step)) => (range, parse_int(step)?),
            None => (item, 1),
        };
        if step == 0 {
            return Err(Error::InvalidInput(format!(
                "step must be positive in {item:?}"
            )));
        }
        match range.split_once("..") {
            Some((lo, hi)) => {
                let lo = parse_int(lo)?;
                let hi = parse_int(hi)?;
                if lo > hi {
                    return Err(Error::InvalidInput(format!(
                        "empty range {item:?} (start exceeds end)"
                    )));
                }
                values.extend((lo..=hi).step_by(step));
            }
            None => {
                if step != 1 {
                    return Err(Error::InvalidInput(format!(
                        "step only applies to ranges, got {item:?}"
                    )));
                }
                values.insert(parse_int(range)?);
            }
        }
    }
    if values.contains(&0) {
        return Err(Error::InvalidInput("n values must be positive".into()));
    }
    Ok(values.into_iter().collect())
}

/// Vector and `n` grid for the built-in reference experiments 1–8.
///
/// Experiments 1–6 use the dense grid {20, 30, …, 150, 200, 500, 1000};
/// experiments 7–8 use {50, 100, 110, …, 150, 200, 500, 1000}.
pub fn table_preset(k: u8) -> Result<(VectorSpec, Vec<usize>)> {
    use crate::numerics::ConstantSpec as C;
    let dense: Vec<usize> = (2..=15).map(|i| i * 10).chain([200, 500, 1000]).collect();
    let sparse: Vec<usize> = [50, 100, 110, 120, 130, 140, 150, 200, 500, 1000].into();
    let (alpha, beta, grid) = match k {
        1 => (C::sqrt(2)?, C::sqrt(3)?, dense),
        2 => (C::sqrt(2)?, C::sqrt(5)?, dense),
        3 => (C::sqrt(3)?, C::sqrt(5)?, dense),
        4 => (C::sqrt(5)?, C::sqrt(6)?, dense),
        5 => (C::sqrt(2)?, C::cbrt(3)?, dense),
        6 => (C::sqrt(2)?, C::e(), dense),
        7 => (C::cbrt(2)?, C::e(), sparse),
        8 => (C::e(), C::pi(), sparse),
        other => {
            return Err(Error::InvalidInput(format!(
                "preset index {other} out of range 1..=8"
            )))
        }
    };
    Ok((VectorSpec::new(alpha, beta)?, grid))
}

/// Run the sweep described by `config`.
///
/// Global problems (bad precision, unwritable output directory,
/// unusable thread count) fail the call; anything that only breaks a
/// single order lands in [`RunOutcome::failures`] and the sweep
/// continues.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.precision.validate()?;
    if config.tolerance_exponent == 0
        || config.tolerance_exponent > config.precision.working_digits()
    {
        return Err(Error::InvalidInput(format!(
            "tolerance exponent {} outside 1..={}",
            config.tolerance_exponent,
            config.precision.working_digits()
        )));
    }
    let n_values = config.normalized_n()?;
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    match config.threads {
        None => sweep(config, &n_values),
        Some(0) => Err(Error::InvalidInput("threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(|| sweep(config, &n_values)),
    }
}

fn sweep(config: &RunConfig, n_values: &[usize]) -> Result<RunOutcome> {
    let max_n = *n_values.last().expect("normalized_n is nonempty");
    let base_cfg = config.precision;
    let esc_cfg = base_cfg.escalated();
    // One site generation per precision level; prefixes are bit-identical
    // to fresh generations of the smaller orders.
    let base_sites = generate_sites(&config.vector, max_n, &base_cfg)?;
    let esc_sites = generate_sites(&config.vector, max_n, &esc_cfg)?;

    let results: Vec<(usize, Result<(GapReport, Partition)>)> = n_values
        .par_iter()
        .map(|&n| (n, run_single(config, &base_sites, &esc_sites, n)))
        .collect();

    let keep_partitions = config.out_dir.is_some()
        && (config.outputs.contains(&OutputKind::Json)
            || config.outputs.contains(&OutputKind::Svg));
    let mut outcome = RunOutcome::default();
    let mut partitions = Vec::new();
    for (n, result) in results {
        match result {
            Ok((report, partition)) => {
                outcome.reports.push(report);
                if keep_partitions {
                    partitions.push(partition);
                }
            }
            Err(error) => outcome.failures.push(RunFailure { n, error }),
        }
    }

    // Single writer, deterministic order.
    if let Some(dir) = &config.out_dir {
        for (index, report) in outcome.reports.iter().enumerate() {
            if config.outputs.contains(&OutputKind::Json) {
                let path = dir.join(format!("report_n{}.json", report.n));
                write_json(&path, report)?;
                let sites = base_sites.prefix(report.n)?;
                let doc = PartitionDoc::new(&sites, &partitions[index]);
                write_json(&dir.join(format!("partition_n{}.json", report.n)), &doc)?;
            }
            if config.outputs.contains(&OutputKind::Svg) {
                render_svg(&partitions[index], &dir.join(format!("figure_n{}.svg", report.n)))?;
            }
        }
        if config.outputs.contains(&OutputKind::Table) {
            std::fs::write(dir.join("table.txt"), render_table(&outcome.reports))?;
        }
        if config.outputs.contains(&OutputKind::Csv) {
            std::fs::write(dir.join("table.csv"), render_csv(&outcome.reports))?;
        }
    }
    Ok(outcome)
}

/// Build, report, and certify one order.
///
/// Certification recomputes the whole pipeline at escalated precision
/// and demands the class count, the census, and at least
/// `target_digits` leading fractional digits of every cell area to
/// survive. One further escalation is attempted before giving up.
fn run_single(
    config: &RunConfig,
    base_sites: &SiteSet,
    esc_sites: &SiteSet,
    n: usize,
) -> Result<(GapReport, Partition)> {
    let exponent = config.tolerance_exponent;
    let base_cfg = config.precision;
    let esc_cfg = base_cfg.escalated();

    let base_partition = build_partition(&base_sites.prefix(n)?)?;
    let base_report = gap_report_with_tolerance(&base_partition, &base_cfg, exponent)?;
    let esc_partition = build_partition(&esc_sites.prefix(n)?)?;
    let esc_report = gap_report_with_tolerance(&esc_partition, &esc_cfg, exponent)?;

    let first = agreement(&base_partition, &base_report, &esc_partition, &esc_report);
    if first.map_or(false, |digits| digits >= base_cfg.target_digits) {
        let mut report = base_report;
        report.certified = report.certified && esc_report.certified;
        report.certified_digits = first;
        return Ok((report, base_partition));
    }

    // The base run could not be certified against its escalation; try one
    // more doubling and, if the two escalated runs agree, trust those.
    let esc2_cfg = esc_cfg.escalated();
    let esc2_partition = build_partition(&generate_sites(&config.vector, n, &esc2_cfg)?)?;
    let esc2_report = gap_report_with_tolerance(&esc2_partition, &esc2_cfg, exponent)?;
    let second = agreement(&esc_partition, &esc_report, &esc2_partition, &esc2_report);
    if second.map_or(false, |digits| digits >= base_cfg.target_digits) {
        let mut report = esc_report;
        report.certified = report.certified && esc2_report.certified;
        report.certified_digits = second;
        return Ok((report, esc_partition));
    }

    Err(Error::CertificationFailure {
        best_digits: first.unwrap_or(0).max(second.unwrap_or(0)),
        target_digits: base_cfg.target_digits,
        lo_digits: esc_cfg.working_digits(),
        hi_digits: esc2_cfg.working_digits(),
    })
}

/// Digits to which two runs of the same order agree: the minimum
/// per-cell area agreement, or `None` when the class count or the
/// census moved (no amount of digits makes those comparable).
fn agreement(
    lo: &Partition,
    lo_report: &GapReport,
    hi: &Partition,
    hi_report: &GapReport,
) -> Option<u32> {
    if lo_report.s != hi_report.s || lo_report.m != hi_report.m {
        return None;
    }
    lo.cells()
        .iter()
        .zip(hi.cells())
        .map(|(a, b)| fractional_agreement(&a.area, &b.area))
        .min()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialization: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Persisted view of a partition: exact decimal strings only.
#[derive(Serialize)]
struct PartitionDoc<'a> {
    n: usize,
    v: &'a VectorSpec,
    precision: &'a PrecisionConfig,
    vertex_count: usize,
    edge_count: usize,
    /// Site coordinates, 1-based order, each `[x, y]` in `[0, 1)`.
    sites: Vec<[String; 2]>,
    /// Cells with site-centered vertex charts (site at the origin).
    cells: &'a [crate::voronoi::VoronoiCell],
}

impl<'a> PartitionDoc<'a> {
    fn new(sites: &SiteSet, partition: &'a Partition) -> Self {
        PartitionDoc {
            n: partition.n(),
            v: partition.vector(),
            precision: partition.cfg(),
            vertex_count: partition.vertex_count(),
            edge_count: partition.edge_count(),
            sites: sites
                .points()
                .iter()
                .map(|p| [p.x.to_decimal_string(), p.y.to_decimal_string()])
                .collect(),
            cells: partition.cells(),
        }
    }
}

/// Column-aligned text table: columns are the `n` values, rows are `S`
/// and then each `M_k` that is nonzero for at least one order.
pub fn render_table(reports: &[GapReport]) -> String {
    let ks = census_keys(reports);
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["n".to_string()];
    header.extend(reports.iter().map(|r| r.n.to_string()));
    rows.push(header);
    let mut s_row = vec!["S".to_string()];
    s_row.extend(reports.iter().map(|r| r.s.to_string()));
    rows.push(s_row);
    for &k in &ks {
        let mut row = vec![format!("M{k}")];
        row.extend(
            reports
                .iter()
                .map(|r| r.m.get(&k).copied().unwrap_or(0).to_string()),
        );
        rows.push(row);
    }

    let columns = rows[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                let _ = write!(out, "{cell:<width$}", width = widths[0]);
            } else {
                let _ = write!(out, "  {cell:>width$}", width = widths[c]);
            }
        }
        out.push('\n');
    }
    out
}

/// CSV with one row per order: `n,S,M<k>...` over the same `k` set as
/// the text table, zero-filled. Parsing the cells back recovers the
/// report integers exactly.
pub fn render_csv(reports: &[GapReport]) -> String {
    let ks = census_keys(reports);
    let mut out = String::from("n,S");
    for &k in &ks {
        let _ = write!(out, ",M{k}");
    }
    out.push('\n');
    for report in reports {
        let _ = write!(out, "{},{}", report.n, report.s);
        for &k in &ks {
            let _ = write!(out, ",{}", report.m.get(&k).copied().unwrap_or(0));
        }
        out.push('\n');
    }
    out
}

fn census_keys(reports: &[GapReport]) -> Vec<usize> {
    reports
        .iter()
        .flat_map(|r| r.m.iter().filter(|&(_, &c)| c > 0).map(|(&k, _)| k))
        .collect::<BTreeSet<usize>>()
        .into_iter()
        .collect()
}

/// Write an SVG of the unit square with every cell clipped into it
/// (seam-crossing cells appear as wrapped pieces) and sites as dots.
///
/// Display only: coordinates are rounded to 12 digits.
pub fn render_svg(partition: &Partition, path: &Path) -> Result<()> {
    let text = svg_document(partition)?;
    std::fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

/// The SVG text for [`render_svg`].
pub fn svg_document(partition: &Partition) -> Result<String> {
    // Sites are regenerated for placement; this costs milliseconds and
    // keeps the partition type free of rendering baggage.
    let sites = generate_sites(partition.vector(), partition.n(), partition.cfg())?;
    let mut svg = String::new();
    svg.push_str(concat!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" ",
        "width=\"720\" height=\"720\">\n",
        "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"#ffffff\"/>\n",
    ));
    for cell in partition.cells() {
        let fill = side_color(cell.sides());
        for piece in cell_pieces(&cell_vertices(&sites, cell)) {
            svg.push_str("<path d=\"");
            for (i, [x, y]) in piece.iter().enumerate() {
                let op = if i == 0 { 'M' } else { 'L' };
                let _ = write!(svg, "{op}{:.12} {:.12} ", x, 1.0 - y);
            }
            let _ = write!(
                svg,
                "Z\" fill=\"{fill}\" stroke=\"#333333\" stroke-width=\"0.0015\"/>\n"
            );
        }
    }
    for site in 1..=partition.n() {
        let [x, y] = sites.approx(site);
        let _ = write!(
            svg,
            "<circle cx=\"{:.12}\" cy=\"{:.12}\" r=\"0.004\" fill=\"#111111\"/>\n",
            x,
            1.0 - y
        );
    }
    svg.push_str(concat!(
        "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"none\" ",
        "stroke=\"#000000\" stroke-width=\"0.002\"/>\n</svg>\n",
    ));
    Ok(svg)
}

fn side_color(sides: usize) -> &'static str {
    const PALETTE: [&str; 8] = [
        "#f4d35e", "#d9ed92", "#99d98c", "#52b69a", "#34a0a4", "#168aad", "#1a759f", "#184e77",
    ];
    PALETTE[sides.saturating_sub(3).min(PALETTE.len() - 1)]
}

fn cell_vertices(sites: &SiteSet, cell: &crate::voronoi::VoronoiCell) -> Vec<[f64; 2]> {
    let [sx, sy] = sites.approx(cell.site);
    cell.polygon
        .vertices()
        .iter()
        .map(|v| [sx + v.x.to_f64(), sy + v.y.to_f64()])
        .collect()
}

/// All nonempty translates of `polygon` clipped to the unit square.
fn cell_pieces(polygon: &[[f64; 2]]) -> Vec<Vec<[f64; 2]>> {
    let mut pieces = Vec::new();
    for dx in -1..=1 {
        for dy in -1..=1 {
            let shifted: Vec<[f64; 2]> = polygon
                .iter()
                .map(|[x, y]| [x + dx as f64, y + dy as f64])
                .collect();
            let clipped = clip_unit_square(&shifted);
            if clipped.len() >= 3 && polygon_area_f64(&clipped) > 1e-12 {
                pieces.push(clipped);
            }
        }
    }
    pieces
}

/// Sutherland–Hodgman against the four sides of `[0, 1]²`.
fn clip_unit_square(polygon: &[[f64; 2]]) -> Vec<[f64; 2]> {
    // (axis, bound, keep_leq): x >= 0, x <= 1, y >= 0, y <= 1.
    let planes = [(0, 0.0, false), (0, 1.0, true), (1, 0.0, false), (1, 1.0, true)];
    let mut current = polygon.to_vec();
    for (axis, bound, keep_leq) in planes {
        let inside =
            |p: &[f64; 2]| if keep_leq { p[axis] <= bound } else { p[axis] >= bound };
        let mut next = Vec::with_capacity(current.len() + 2);
        for i in 0..current.len() {
            let a = current[i];
            let b = current[(i + 1) % current.len()];
            let (ain, bin) = (inside(&a), inside(&b));
            if ain {
                next.push(a);
            }
            if ain != bin {
                let t = (bound - a[axis]) / (b[axis] - a[axis]);
                let mut p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                p[axis] = bound;
                next.push(p);
            }
        }
        current = next;
        if current.is_empty() {
            break;
        }
    }
    current
}

fn polygon_area_f64(polygon: &[[f64; 2]]) -> f64 {
    let mut twice = 0.0;
    for i in 0..polygon.len() {
        let [ax, ay] = polygon[i];
        let [bx, by] = polygon[(i + 1) % polygon.len()];
        twice += ax * by - bx * ay;
    }
    (twice / 2.0).abs()
}
