//! Reference measurements for the eight built-in experiments.
//!
//! Each column records, for one generating vector and one order `n`,
//! the published distinct-area count `S(n)` and census `M_k(n)` that
//! the pipeline is expected to reproduce. Four columns carry a note:
//! their published integers either violate the exact identities
//! `Σ M_k = n`, `Σ k·M_k = 6n` or fail recomputation, and the stored
//! values are the corrected ones (the note preserves what was
//! published).

/// One expected table column.
pub struct Column {
    /// Experiment preset index, 1..=8.
    pub table: u8,
    pub n: usize,
    /// Distinct-area count at tolerance 10^-80.
    pub s: usize,
    /// Census as (k, count) pairs, nonzero counts only, ascending k.
    pub m: &'static [(usize, usize)],
    /// Present when the stored values correct the published ones.
    pub note: Option<&'static str>,
}

const fn col(
    table: u8,
    n: usize,
    s: usize,
    m: &'static [(usize, usize)],
) -> Column {
    Column { table, n, s, m, note: None }
}

const fn fixed(
    table: u8,
    n: usize,
    s: usize,
    m: &'static [(usize, usize)],
    note: &'static str,
) -> Column {
    Column { table, n, s, m, note: Some(note) }
}

pub const COLUMNS: &[Column] = &[
    // Experiment 1: v = (sqrt(2), sqrt(3)).
    col(1, 20, 6, &[(5, 6), (6, 8), (7, 6)]),
    col(1, 30, 6, &[(5, 8), (6, 14), (7, 8)]),
    col(1, 40, 6, &[(5, 12), (6, 18), (7, 8), (8, 2)]),
    col(1, 50, 6, &[(5, 30), (6, 2), (7, 6), (8, 12)]),
    col(1, 60, 6, &[(5, 24), (6, 20), (7, 8), (8, 8)]),
    col(1, 70, 8, &[(5, 24), (6, 22), (7, 24)]),
    fixed(
        1,
        80,
        7,
        &[(5, 30), (6, 20), (7, 30)],
        "published S=8; exact recomputation gives 7 distinct areas \
         (census unchanged)",
    ),
    col(1, 90, 7, &[(4, 8), (5, 14), (6, 44), (7, 18), (8, 6)]),
    fixed(
        1,
        100,
        7,
        &[(4, 18), (6, 46), (7, 36)],
        "published S=8 with census {5:18, 7:46, 8:36}, which violates \
         sum(k*M_k)=6n; exact recomputation gives S=7 and {4:18, 6:46, 7:36}",
    ),
    col(1, 110, 7, &[(4, 16), (5, 12), (6, 38), (7, 44)]),
    col(1, 120, 7, &[(4, 6), (5, 32), (6, 38), (7, 44)]),
    col(1, 130, 7, &[(5, 44), (6, 42), (7, 44)]),
    col(1, 140, 7, &[(5, 44), (6, 52), (7, 44)]),
    col(1, 150, 7, &[(5, 44), (6, 62), (7, 44)]),
    col(1, 200, 7, &[(5, 40), (6, 120), (7, 40)]),
    fixed(
        1,
        500,
        7,
        &[(4, 104), (5, 38), (6, 276), (9, 82)],
        "published census {3:104, 4:38, 5:276, 8:82} violates \
         sum(k*M_k)=6n; exact recomputation gives {4:104, 5:38, 6:276, 9:82}",
    ),
    col(1, 1000, 10, &[(5, 328), (6, 508), (7, 82), (9, 82)]),
    // Experiment 2: v = (sqrt(2), sqrt(5)).
    col(2, 20, 6, &[(5, 8), (6, 4), (7, 8)]),
    col(2, 30, 7, &[(5, 8), (6, 18), (8, 4)]),
    fixed(
        2,
        40,
        7,
        &[(4, 6), (6, 22), (7, 12)],
        "published census {5:6, 7:22, 8:12} violates sum(k*M_k)=6n; \
         exact recomputation gives {4:6, 6:22, 7:12}",
    ),
    col(2, 50, 7, &[(4, 16), (6, 2), (7, 32)]),
    col(2, 60, 6, &[(4, 26), (7, 16), (8, 18)]),
    col(2, 70, 8, &[(4, 22), (5, 14), (7, 10), (8, 24)]),
    col(2, 80, 8, &[(4, 12), (5, 34), (7, 10), (8, 24)]),
    col(2, 90, 8, &[(4, 2), (5, 54), (7, 10), (8, 24)]),
    col(2, 100, 8, &[(5, 46), (6, 20), (7, 22), (8, 12)]),
    col(2, 110, 7, &[(5, 34), (6, 50), (7, 18), (8, 8)]),
    col(2, 120, 9, &[(5, 34), (6, 62), (7, 14), (8, 10)]),
    col(2, 130, 7, &[(5, 34), (6, 72), (7, 14), (8, 10)]),
    col(2, 140, 6, &[(5, 24), (6, 92), (7, 24)]),
    col(2, 150, 8, &[(5, 24), (6, 102), (7, 24)]),
    col(2, 200, 8, &[(5, 62), (6, 76), (7, 62)]),
    col(2, 500, 6, &[(5, 102), (6, 296), (7, 102)]),
    col(2, 1000, 6, &[(5, 170), (6, 660), (7, 170)]),
    // Experiment 3: v = (sqrt(3), sqrt(5)).
    col(3, 20, 5, &[(5, 2), (6, 16), (7, 2)]),
    col(3, 30, 5, &[(5, 8), (6, 14), (7, 8)]),
    col(3, 40, 9, &[(4, 8), (5, 8), (6, 8), (7, 8), (8, 8)]),
    col(3, 50, 8, &[(4, 8), (5, 4), (6, 28), (8, 10)]),
    col(3, 60, 5, &[(5, 6), (6, 48), (7, 6)]),
    col(3, 70, 8, &[(5, 14), (6, 42), (7, 14)]),
    col(3, 80, 8, &[(5, 16), (6, 48), (7, 16)]),
    col(3, 90, 8, &[(5, 14), (6, 68), (7, 2), (8, 6)]),
    col(3, 100, 8, &[(5, 14), (6, 72), (7, 14)]),
    col(3, 110, 8, &[(5, 16), (6, 78), (7, 16)]),
    col(3, 120, 8, &[(5, 14), (6, 92), (7, 14)]),
    col(3, 130, 6, &[(5, 6), (6, 118), (7, 6)]),
    col(3, 140, 6, &[(5, 26), (6, 88), (7, 26)]),
    col(3, 150, 6, &[(5, 46), (6, 58), (7, 46)]),
    col(3, 200, 7, &[(5, 60), (6, 86), (7, 48), (8, 6)]),
    col(3, 500, 6, &[(5, 60), (6, 380), (7, 60)]),
    col(3, 1000, 7, &[(4, 246), (6, 262), (7, 492)]),
    // Experiment 4: v = (sqrt(5), sqrt(6)).
    col(4, 20, 5, &[(4, 2), (6, 14), (7, 4)]),
    col(4, 30, 6, &[(5, 2), (6, 26), (7, 2)]),
    col(4, 40, 6, &[(5, 4), (6, 32), (7, 4)]),
    col(4, 50, 7, &[(5, 18), (6, 14), (7, 18)]),
    col(4, 60, 6, &[(5, 18), (6, 26), (7, 14), (8, 2)]),
    col(4, 70, 7, &[(5, 12), (6, 52), (8, 6)]),
    col(4, 80, 5, &[(4, 4), (6, 68), (7, 8)]),
    col(4, 90, 6, &[(5, 2), (6, 86), (7, 2)]),
    col(4, 100, 6, &[(5, 22), (6, 56), (7, 22)]),
    col(4, 110, 6, &[(5, 42), (6, 34), (7, 26), (8, 8)]),
    col(4, 120, 6, &[(5, 62), (6, 14), (7, 26), (8, 18)]),
    col(4, 130, 6, &[(5, 76), (6, 6), (7, 20), (8, 28)]),
    col(4, 140, 5, &[(5, 76), (6, 26), (8, 38)]),
    col(4, 150, 6, &[(5, 76), (6, 26), (7, 20), (8, 28)]),
    col(4, 200, 6, &[(5, 76), (6, 48), (7, 76)]),
    col(4, 500, 6, &[(5, 76), (6, 348), (7, 76)]),
    col(4, 1000, 7, &[(5, 178), (6, 644), (7, 178)]),
    // Experiment 5: v = (sqrt(2), cbrt(3)).
    col(5, 20, 4, &[(6, 20)]),
    col(5, 30, 6, &[(5, 4), (6, 22), (7, 4)]),
    col(5, 40, 6, &[(5, 12), (6, 16), (7, 12)]),
    col(5, 50, 7, &[(5, 14), (6, 22), (7, 14)]),
    col(5, 60, 7, &[(5, 14), (6, 38), (7, 2), (8, 6)]),
    col(5, 70, 4, &[(6, 70)]),
    col(5, 80, 6, &[(5, 20), (6, 48), (7, 4), (8, 8)]),
    col(5, 90, 6, &[(5, 40), (6, 28), (7, 4), (8, 18)]),
    col(5, 100, 6, &[(5, 60), (6, 8), (7, 4), (8, 28)]),
    col(5, 110, 7, &[(5, 60), (6, 20), (8, 30)]),
    col(5, 120, 7, &[(5, 40), (6, 60), (8, 20)]),
    col(5, 130, 7, &[(5, 20), (6, 100), (8, 10)]),
    col(5, 140, 5, &[(6, 140)]),
    col(5, 150, 7, &[(4, 4), (5, 6), (6, 126), (7, 14)]),
    col(5, 200, 7, &[(5, 52), (6, 96), (7, 52)]),
    col(5, 500, 8, &[(5, 208), (6, 84), (7, 208)]),
    col(5, 1000, 7, &[(5, 140), (6, 720), (7, 140)]),
    // Experiment 6: v = (sqrt(2), e).
    col(6, 20, 6, &[(5, 6), (6, 8), (7, 6)]),
    col(6, 30, 8, &[(4, 4), (5, 6), (6, 6), (7, 14)]),
    col(6, 40, 7, &[(5, 6), (6, 28), (7, 6)]),
    col(6, 50, 6, &[(5, 8), (6, 34), (7, 8)]),
    col(6, 60, 6, &[(5, 14), (6, 32), (7, 14)]),
    col(6, 70, 8, &[(5, 14), (6, 42), (7, 14)]),
    col(6, 80, 7, &[(5, 4), (6, 72), (7, 4)]),
    col(6, 90, 6, &[(5, 14), (6, 62), (7, 14)]),
    col(6, 100, 6, &[(5, 14), (6, 72), (7, 14)]),
    col(6, 110, 6, &[(5, 14), (6, 82), (7, 14)]),
    col(6, 120, 6, &[(5, 14), (6, 92), (7, 14)]),
    col(6, 130, 6, &[(5, 4), (6, 122), (7, 4)]),
    col(6, 140, 6, &[(5, 14), (6, 112), (7, 14)]),
    col(6, 150, 6, &[(5, 14), (6, 122), (7, 14)]),
    col(6, 200, 6, &[(5, 38), (6, 124), (7, 38)]),
    col(6, 500, 8, &[(5, 92), (6, 316), (7, 92)]),
    col(6, 1000, 7, &[(5, 52), (6, 896), (7, 52)]),
    // Experiment 7: v = (cbrt(2), e).
    col(7, 50, 4, &[(5, 8), (6, 34), (7, 8)]),
    col(7, 100, 6, &[(5, 8), (6, 84), (7, 8)]),
    col(7, 110, 7, &[(5, 8), (6, 94), (7, 8)]),
    col(7, 120, 7, &[(5, 8), (6, 104), (7, 8)]),
    col(7, 130, 7, &[(5, 8), (6, 114), (7, 8)]),
    col(7, 140, 7, &[(5, 8), (6, 124), (7, 8)]),
    col(7, 150, 7, &[(5, 8), (6, 134), (7, 8)]),
    col(7, 200, 6, &[(5, 38), (6, 124), (7, 38)]),
    col(7, 500, 7, &[(5, 8), (6, 484), (7, 8)]),
    col(7, 1000, 6, &[(5, 362), (6, 284), (7, 346), (8, 8)]),
    // Experiment 8: v = (e, pi).
    col(8, 50, 4, &[(5, 6), (6, 38), (7, 6)]),
    col(8, 100, 12, &[(4, 42), (5, 22), (6, 22), (13, 6), (14, 8)]),
    col(8, 110, 13, &[(4, 32), (5, 22), (6, 42), (12, 12), (13, 2)]),
    col(8, 120, 11, &[(4, 22), (5, 22), (6, 62), (10, 4), (11, 10)]),
    col(8, 130, 10, &[(4, 26), (5, 4), (6, 76), (7, 10), (9, 10), (10, 4)]),
    col(8, 140, 12, &[(4, 16), (5, 40), (6, 56), (7, 14), (10, 12), (11, 2)]),
    col(8, 150, 13, &[(4, 6), (5, 80), (6, 36), (7, 14), (11, 6), (12, 8)]),
    col(8, 200, 10, &[(5, 56), (6, 122), (7, 8), (9, 8), (10, 6)]),
    col(8, 500, 11, &[(5, 58), (6, 428), (10, 12), (11, 2)]),
    col(8, 1000, 6, &[(5, 142), (6, 716), (7, 142)]),
];

/// Columns of one experiment, ascending `n`.
pub fn table_columns(table: u8) -> Vec<&'static Column> {
    COLUMNS.iter().filter(|c| c.table == table).collect()
}
