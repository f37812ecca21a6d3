//! Reproduction of the bundled tables.

use std::time::Instant;

use bubble_core::classify::{table1_color, Color};
use bubble_core::primes::{find_lex_smallest, kp, DEFAULT_P1_CEILING};
use bubble_core::{bubbles, Low};
use serde::Serialize;

use crate::golden::{self, TupleRow};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Mismatch {
    pub w: Vec<u64>,
    pub expected: Vec<(Vec<i64>, u128, &'static str)>,
    pub found: Vec<(Vec<i64>, u128, &'static str)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub rows: usize,
    pub bubbles: usize,
    pub mismatches: Vec<Table1Mismatch>,
    pub elapsed_ms: u128,
}

impl Table1Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Bubbles of `w` with positive coordinates as `(u, dot, colour)`, in table order.
pub fn table1_entries(w: &[u64]) -> bubble_core::Result<Vec<(Vec<i64>, u128, Color)>> {
    Ok(bubbles(w, Low::One)?
        .into_iter()
        .map(|b| {
            let c = table1_color(w, &b);
            (b.u, b.dot, c)
        })
        .collect())
}

pub fn check_table1() -> Table1Report {
    let start = Instant::now();
    let rows = golden::table1();
    let mut mismatches = Vec::new();
    let mut count = 0;
    for row in &rows {
        count += row.bubbles.len();
        let expected: Vec<_> = row.bubbles.iter().map(|b| (b.u.clone(), b.dot, b.color.as_str())).collect();
        let found: Vec<_> = match table1_entries(&row.w) {
            Ok(v) => v.into_iter().map(|(u, dot, c)| (u, dot, c.as_str())).collect(),
            Err(_) => Vec::new(),
        };
        if expected != found {
            mismatches.push(Table1Mismatch { w: row.w.clone(), expected, found });
        }
    }
    Table1Report { rows: rows.len(), bubbles: count, mismatches, elapsed_ms: start.elapsed().as_millis() }
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleCheck {
    pub m: usize,
    pub p: Vec<u64>,
    pub k: Option<u64>,
    pub k_ok: bool,
    /// `None` when the row lies above the minimality limit.
    pub minimal: Option<bool>,
    pub found: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleReport {
    pub table: u8,
    pub limit: usize,
    pub rows: Vec<TupleCheck>,
    pub elapsed_ms: u128,
}

impl TupleReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.k_ok && r.minimal != Some(false))
    }
}

/// Target invariant of a row: 1 for the first tuple table, `m - 1` for the second.
pub fn target_k(table: u8, m: usize) -> u64 {
    if table == 2 {
        1
    } else {
        m as u64 - 1
    }
}

fn check_row(table: u8, row: &TupleRow, limit: usize) -> TupleCheck {
    let target = target_k(table, row.m);
    let k = kp(&row.p).ok().map(|t| t.k);
    let (minimal, found) = if row.m <= limit {
        match find_lex_smallest(row.m, target, DEFAULT_P1_CEILING) {
            Ok(t) => (Some(t.p == row.p), Some(t.p)),
            Err(_) => (Some(false), None),
        }
    } else {
        (None, None)
    };
    TupleCheck { m: row.m, p: row.p.clone(), k, k_ok: k == Some(target) && row.p.len() == row.m, minimal, found }
}

/// Checks the invariant of every row and lexicographic minimality for `m <= limit`.
pub fn check_tuples(table: u8, limit: usize) -> TupleReport {
    let start = Instant::now();
    let rows = if table == 2 { golden::table2() } else { golden::table3() };
    let rows = rows.iter().map(|r| check_row(table, r, limit)).collect();
    TupleReport { table, limit, rows, elapsed_ms: start.elapsed().as_millis() }
}
