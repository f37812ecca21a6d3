//! Bundled copies of the published tables.

use bubble_core::classify::Color;
use serde::Deserialize;

const TABLE1: &str = include_str!("../data/table1.csv");
const TABLE2: &str = include_str!("../data/table2.csv");
const TABLE3: &str = include_str!("../data/table3.csv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenBubble {
    pub u: Vec<i64>,
    pub dot: u128,
    pub color: Color,
}

/// One weight vector of the bubble table with its bubbles in printed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub w: Vec<u64>,
    pub bubbles: Vec<GoldenBubble>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleRow {
    pub m: usize,
    pub p: Vec<u64>,
}

#[derive(Deserialize)]
struct RawBubble {
    w: String,
    u: String,
    dot: u128,
    color: String,
}

#[derive(Deserialize)]
struct RawTuple {
    m: usize,
    p: String,
}

fn numbers<T: std::str::FromStr>(s: &str) -> Vec<T>
where
    T::Err: std::fmt::Debug,
{
    s.split_whitespace().map(|x| x.parse().expect("numeric table cell")).collect()
}

pub fn table1() -> Vec<Table1Row> {
    let mut rows: Vec<Table1Row> = Vec::new();
    for rec in csv::Reader::from_reader(TABLE1.as_bytes()).deserialize::<RawBubble>() {
        let rec = rec.expect("well-formed table1.csv");
        let w: Vec<u64> = numbers(&rec.w);
        let b = GoldenBubble {
            u: numbers(&rec.u),
            dot: rec.dot,
            color: Color::parse(&rec.color).expect("known colour"),
        };
        match rows.last_mut() {
            Some(last) if last.w == w => last.bubbles.push(b),
            _ => rows.push(Table1Row { w, bubbles: vec![b] }),
        }
    }
    rows
}

fn tuples(src: &str) -> Vec<TupleRow> {
    csv::Reader::from_reader(src.as_bytes())
        .deserialize::<RawTuple>()
        .map(|r| {
            let r = r.expect("well-formed tuple table");
            TupleRow { m: r.m, p: numbers(&r.p) }
        })
        .collect()
}

/// Smallest tuples with invariant 1, by length.
pub fn table2() -> Vec<TupleRow> {
    tuples(TABLE2)
}

/// Smallest tuples with invariant `m - 1`, by length.
pub fn table3() -> Vec<TupleRow> {
    tuples(TABLE3)
}
