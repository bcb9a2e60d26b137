//! Acceptance gate: one test per criterion, each printing a
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`).
//!
//! The expected integers live in `reference.rs`. Heavy pipeline runs
//! are shared across criteria through a lazily-built cache.

mod reference;

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torusgap::cli::{self, OutputKind, RunConfig};
use torusgap::statistics::{gap_report, GapReport};
use torusgap::verify::{cross_validate, one_dim_gaps, raster_areas, three_gap_sweep};
use torusgap::voronoi::Partition;
use torusgap::{
    build_partition, fractional_agreement, generate_sites, ConstantSpec, PrecisionConfig, Real,
};

fn conclude(criterion: u8, label: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("[PASS] criterion {criterion}: {label}");
    } else {
        println!("[FAIL] criterion {criterion}: {label}");
        for failure in &failures {
            println!("       {failure}");
        }
        panic!(
            "criterion {criterion} failed with {} problem(s)",
            failures.len()
        );
    }
}

struct Run {
    report: GapReport,
    /// |Σ cell areas − 1|, exact.
    abs_area_error: Real,
}

/// Orders exercised per experiment: every reference column for
/// experiment 1, the smallest plus {100, 1000} for the others, and
/// the corrected n=40 column of experiment 2.
fn planned_orders(table: u8) -> Vec<usize> {
    if table == 1 {
        reference::table_columns(1).iter().map(|c| c.n).collect()
    } else if table == 2 {
        vec![20, 40, 100, 1000]
    } else if table <= 6 {
        vec![20, 100, 1000]
    } else {
        vec![50, 100, 1000]
    }
}

/// Exact pipeline runs shared by criteria 1–4, keyed by
/// (experiment, n). Built once; ~40 partitions up to n=1000.
fn runs() -> &'static BTreeMap<(u8, usize), Run> {
    static RUNS: OnceLock<BTreeMap<(u8, usize), Run>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let cfg = PrecisionConfig::default();
        let started = Instant::now();
        let mut map = BTreeMap::new();
        for table in 1..=8u8 {
            let (vector, _) = cli::table_preset(table).expect("preset");
            let orders = planned_orders(table);
            let max_n = *orders.iter().max().expect("nonempty");
            let sites = generate_sites(&vector, max_n, &cfg).expect("sites");
            for n in orders {
                let partition =
                    build_partition(&sites.prefix(n).expect("prefix")).expect("partition");
                let report = gap_report(&partition, &cfg).expect("report");
                map.insert((table, n), Run {
                    report,
                    abs_area_error: area_sum_error(&partition),
                });
            }
        }
        println!(
            "[info] shared pipeline cache: {} runs in {:.1}s",
            map.len(),
            started.elapsed().as_secs_f64()
        );
        map
    })
}

fn area_sum_error(partition: &Partition) -> Real {
    let digits = partition.cfg().working_digits();
    let mut sum = Real::zero(digits);
    for cell in partition.cells() {
        sum = &sum + &cell.area;
    }
    (&sum - &Real::one(digits)).abs()
}

fn census(m: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    m.iter().copied().collect()
}

/// Reference columns the shared cache covers.
fn checked_columns() -> Vec<&'static reference::Column> {
    reference::COLUMNS
        .iter()
        .filter(|c| planned_orders(c.table).contains(&c.n))
        .collect()
}

#[test]
fn criterion_1_census_reproduction() {
    let runs = runs();
    let mut failures = Vec::new();
    for column in checked_columns() {
        if let Some(note) = column.note {
            println!("[note] experiment {} n={}: {note}", column.table, column.n);
        }
        let run = &runs[&(column.table, column.n)];
        let expected = census(column.m);
        if run.report.m != expected {
            failures.push(format!(
                "experiment {} n={}: census {:?}, expected {:?}",
                column.table, column.n, run.report.m, expected
            ));
        }
    }
    conclude(1, "reference censuses M_k(n) reproduced exactly", failures);
}

#[test]
fn criterion_2_distinct_area_counts() {
    let runs = runs();
    let mut failures = Vec::new();
    for column in checked_columns() {
        let run = &runs[&(column.table, column.n)];
        if let Some(note) = column.note {
            // Triaged deviations ship with the clustering diagnostic that
            // justified them.
            let classes = &run.report.classes;
            let max_spread = classes
                .iter()
                .map(|c| c.spread.to_f64())
                .fold(0.0f64, f64::max);
            let min_gap = classes
                .windows(2)
                .map(|w| w[1].representative_area.to_f64() - w[0].representative_area.to_f64())
                .fold(f64::INFINITY, f64::min);
            println!("[note] experiment {} n={}: {note}", column.table, column.n);
            println!(
                "       clustering at {:.0e}: ambiguous={}, {} classes, \
                 max spread {:.2e}, min class gap {:.2e}",
                run.report.tolerance_used.to_f64(),
                !run.report.certified,
                classes.len(),
                max_spread,
                min_gap
            );
        }
        if run.report.s != column.s {
            failures.push(format!(
                "experiment {} n={}: S={}, expected {}",
                column.table, column.n, run.report.s, column.s
            ));
        }
    }
    conclude(2, "distinct-area counts S(n) at tolerance 1e-80", failures);
}

#[test]
fn criterion_3_topology_identities() {
    let mut failures = Vec::new();
    // Mechanical check of every reference column, no geometry involved.
    for column in reference::COLUMNS {
        let total: usize = column.m.iter().map(|&(_, c)| c).sum();
        let weighted: usize = column.m.iter().map(|&(k, c)| k * c).sum();
        if total != column.n || weighted != 6 * column.n {
            failures.push(format!(
                "experiment {} n={}: ΣM_k={total}, Σk·M_k={weighted}",
                column.table, column.n
            ));
        }
    }
    // The same identities on our own runs, plus the derived edge and
    // vertex counts (E=3n, V=2n for simple vertices).
    for ((table, n), run) in runs() {
        let total: usize = run.report.m.values().sum();
        let weighted: usize = run.report.m.iter().map(|(k, c)| k * c).sum();
        if total != *n
            || weighted != 6 * n
            || run.report.edge_count != 3 * n
            || run.report.vertex_count != 2 * n
        {
            failures.push(format!(
                "experiment {table} n={n}: ΣM_k={total}, Σk·M_k={weighted}, \
                 E={}, V={}",
                run.report.edge_count, run.report.vertex_count
            ));
        }
    }
    conclude(3, "ΣM_k=n and Σk·M_k=6n on reference data and own runs", failures);
}

#[test]
fn criterion_4_area_conservation() {
    let mut failures = Vec::new();
    for ((table, n), run) in runs() {
        let digits = run.abs_area_error.digits();
        if run.abs_area_error.cmp_value(&Real::exp10_neg(80, digits)) != std::cmp::Ordering::Less
        {
            failures.push(format!(
                "experiment {table} n={n}: |Σ areas − 1| = {}",
                run.abs_area_error.to_decimal_string()
            ));
        }
    }
    conclude(4, "|Σ cell areas − 1| < 1e-80 on every run", failures);
}

fn leading_fraction(value: &Real, digits: usize) -> String {
    let text = value.to_decimal_string();
    let (int, frac) = text.split_once('.').expect("decimal point");
    format!("{int}.{}", &frac[..digits.min(frac.len())])
}

#[test]
fn criterion_5_doubled_precision_stability() {
    let cfg = PrecisionConfig::default();
    let esc = cfg.escalated();
    let mut failures = Vec::new();
    for table in 1..=8u8 {
        let (vector, _) = cli::table_preset(table).expect("preset");
        let first = if table <= 6 { 20 } else { 50 };
        let base_sites = generate_sites(&vector, 200, &cfg).expect("sites");
        let esc_sites = generate_sites(&vector, 200, &esc).expect("sites");
        for n in [first, 100, 200] {
            let base =
                build_partition(&base_sites.prefix(n).expect("prefix")).expect("partition");
            let high =
                build_partition(&esc_sites.prefix(n).expect("prefix")).expect("partition");
            let base_report = gap_report(&base, &cfg).expect("report");
            let high_report = gap_report(&high, &esc).expect("report");
            if base_report.s != high_report.s || base_report.m != high_report.m {
                failures.push(format!(
                    "experiment {table} n={n}: S or census moved under doubling"
                ));
                continue;
            }
            for (a, b) in base.cells().iter().zip(high.cells()) {
                if leading_fraction(&a.area, 80) != leading_fraction(&b.area, 80) {
                    failures.push(format!(
                        "experiment {table} n={n} site {}: digit strings diverge \
                         within the first 80 digits",
                        a.site
                    ));
                    break;
                }
            }
        }
    }
    conclude(
        5,
        "doubled working precision preserves S, M_k and 80 area digits",
        failures,
    );
}

#[test]
fn criterion_6_symmetry_suite() {
    let cfg = PrecisionConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x746f_7275_7367_6170);
    let mut failures = Vec::new();
    for _ in 0..20 {
        let table = rng.gen_range(1..=8u8);
        let n = rng.gen_range(2..=200usize);
        let (vector, _) = cli::table_preset(table).expect("preset");
        let sites = generate_sites(&vector, n, &cfg).expect("sites");
        let partition = build_partition(&sites).expect("partition");
        for i in 1..=n {
            let j = n + 1 - i;
            let a = partition.cell(i);
            let b = partition.cell(j);
            if a.sides() != b.sides() {
                failures.push(format!(
                    "experiment {table} n={n}: cells {i}/{j} have {} vs {} sides",
                    a.sides(),
                    b.sides()
                ));
            }
            if fractional_agreement(&a.area, &b.area) < 80 {
                failures.push(format!(
                    "experiment {table} n={n}: areas of cells {i}/{j} disagree \
                     before digit 80"
                ));
            }
            // The arithmetic is negation-symmetric, so mirrored areas are
            // in fact byte-identical, not merely 80-digit-equal.
            if a.area.to_decimal_string() != b.area.to_decimal_string() {
                failures.push(format!(
                    "experiment {table} n={n}: mirrored areas {i}/{j} not identical"
                ));
            }
        }
        // Census parity: pairing (i, n+1−i) matches cells of equal side
        // count, so every M_k is even except the self-paired middle
        // cell's class for odd n.
        let histogram = &gap_report(&partition, &cfg).expect("report").m;
        let middle = (n % 2 == 1).then(|| partition.cell((n + 1) / 2).sides());
        for (&k, &count) in histogram {
            let expect_odd = middle == Some(k);
            if (count % 2 == 1) != expect_odd {
                failures.push(format!(
                    "experiment {table} n={n}: M_{k}={count} has impossible parity"
                ));
            }
        }
    }
    conclude(
        6,
        "central symmetry: mirrored side counts, identical areas, census parity",
        failures,
    );
}

#[test]
fn criterion_7_raster_oracle() {
    let cfg = PrecisionConfig::default();
    let mut failures = Vec::new();
    for table in [1u8, 8] {
        let (vector, _) = cli::table_preset(table).expect("preset");
        for n in [20usize, 100] {
            let sites = generate_sites(&vector, n, &cfg).expect("sites");
            let partition = build_partition(&sites).expect("partition");
            let raster = raster_areas(&sites, 2000).expect("raster");
            match cross_validate(&partition, &raster) {
                Ok(report) => {
                    if report.max_abs_error > report.max_bound {
                        failures.push(format!(
                            "experiment {table} n={n}: error {:.2e} above bound {:.2e}",
                            report.max_abs_error, report.max_bound
                        ));
                    }
                }
                Err(error) => {
                    failures.push(format!("experiment {table} n={n}: {error}"));
                    continue;
                }
            }
            let mut corrupted = raster.clone();
            corrupted.areas[7] += 10.0 * corrupted.bound;
            if cross_validate(&partition, &corrupted).is_ok() {
                failures.push(format!(
                    "experiment {table} n={n}: 10x-bound corruption not detected"
                ));
            }
        }
    }
    conclude(
        7,
        "raster areas at m=2000 agree within bound; corruption detected",
        failures,
    );
}

#[test]
fn criterion_8_three_gap_oracle() {
    let cfg = PrecisionConfig::default();
    let constants = [
        ConstantSpec::sqrt(2).unwrap(),
        ConstantSpec::sqrt(3).unwrap(),
        ConstantSpec::sqrt(5).unwrap(),
        ConstantSpec::sqrt(6).unwrap(),
        ConstantSpec::cbrt(2).unwrap(),
        ConstantSpec::cbrt(3).unwrap(),
        ConstantSpec::e(),
        ConstantSpec::pi(),
    ];
    let mut failures = Vec::new();
    for alpha in constants {
        // Every prefix n ≤ 10^4 is checked inside the sweep with exact
        // integer arithmetic.
        if let Err(error) = three_gap_sweep(&alpha, 10_000, &cfg) {
            failures.push(format!("{alpha}: {error}"));
            continue;
        }
        let gaps = one_dim_gaps(&alpha, 10_000, &cfg).expect("gaps");
        if gaps.lengths.len() > 3 {
            failures.push(format!("{alpha}: {} distinct lengths", gaps.lengths.len()));
            continue;
        }
        if gaps.lengths.len() == 3 {
            let sum = &gaps.lengths[0] + &gaps.lengths[1];
            let diff = (&gaps.lengths[2] - &sum).abs();
            let tolerance = Real::exp10_neg(80, diff.digits());
            if diff.cmp_value(&tolerance) != std::cmp::Ordering::Less {
                failures.push(format!(
                    "{alpha}: longest gap differs from the sum of the others by {}",
                    diff.to_decimal_string()
                ));
            }
        }
        let total: usize = gaps.counts.iter().sum();
        if total != 10_000 {
            failures.push(format!("{alpha}: gap multiplicities sum to {total}"));
        }
    }
    conclude(
        8,
        "≤3 gap lengths with the sum identity for all constants to n=10^4",
        failures,
    );
}

#[test]
fn criterion_9_thread_count_determinism() {
    let mut failures = Vec::new();
    let dirs = [
        tempfile::tempdir().expect("tempdir"),
        tempfile::tempdir().expect("tempdir"),
    ];
    for (threads, dir) in [1usize, 4].into_iter().zip(&dirs) {
        let mut config = RunConfig::new(
            cli::parse_vector("sqrt(2),sqrt(3)").expect("vector"),
            vec![20, 30],
        );
        config.outputs = [OutputKind::Json, OutputKind::Csv].into_iter().collect();
        config.out_dir = Some(dir.path().to_path_buf());
        config.threads = Some(threads);
        let outcome = cli::run(&config).expect("run");
        assert!(outcome.all_ok(), "{:?}", outcome.failures);
    }
    for name in [
        "report_n20.json",
        "report_n30.json",
        "partition_n20.json",
        "partition_n30.json",
        "table.csv",
    ] {
        let first = std::fs::read(dirs[0].path().join(name)).expect("first run output");
        let second = std::fs::read(dirs[1].path().join(name)).expect("second run output");
        if first != second {
            failures.push(format!("{name} differs between thread counts"));
        }
    }
    conclude(9, "byte-identical JSON/CSV outputs across thread counts", failures);
}
