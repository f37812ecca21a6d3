//! Pruned lattice search and the bubble enumerator built on it.

use serde::Serialize;

use crate::arith::{arrangement, ThresholdList, WeightVector};
use crate::bounds::{divisor_step_bound, epsilon_bound, max_one_weight_bound, positive_bound};
use crate::error::Result;

/// Inputs of one recursive search. Vectors are indexed like `weights`.
#[derive(Clone, Debug)]
pub struct SearchFrame<'a> {
    pub weights: &'a [u64],
    pub mins: Vec<i64>,
    /// Entries may be negative, which makes the frame infeasible.
    pub maxs: Vec<i64>,
    pub min_product: i128,
    /// Must be arranged and marked.
    pub thresholds: &'a ThresholdList,
    pub return_one: bool,
    /// Take the upper bound from the smallest axis threshold anywhere in the list instead of
    /// only the first item.
    pub axis_scan: bool,
}

impl<'a> SearchFrame<'a> {
    pub fn new(weights: &'a [u64], mins: Vec<i64>, maxs: Vec<i64>, min_product: i128, thresholds: &'a ThresholdList) -> Self {
        SearchFrame { weights, mins, maxs, min_product, thresholds, return_one: false, axis_scan: true }
    }

    pub fn return_one(mut self, yes: bool) -> Self {
        self.return_one = yes;
        self
    }
}

struct Search<'f> {
    n: usize,
    w: Vec<i128>,
    mins: &'f [i64],
    maxs: &'f [i64],
    /// `cap[c]` bounds the dot product over coordinates `0..c` from above.
    cap: Vec<i128>,
    rows: Vec<i64>,
    return_one: bool,
    axis_scan: bool,
    cur: Vec<i64>,
    lists: Vec<Vec<u32>>,
    out: Vec<Vec<i64>>,
}

fn ceil_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && a > 0 {
        q + 1
    } else {
        q
    }
}

impl Search<'_> {
    fn row(&self, r: u32) -> &[i64] {
        let s = r as usize * self.n;
        &self.rows[s..s + self.n]
    }

    /// Largest admissible value of coordinate `c` given the arranged list on `0..=c`.
    fn upper(&self, c: usize, list: &[u32]) -> i64 {
        let axis = |r: &&u32| self.row(**r)[..c].iter().all(|&x| x == 0);
        let first = if self.axis_scan {
            list.iter().filter(axis).map(|&r| self.row(r)[c]).min()
        } else {
            list.first().map(|&r| self.row(r)[c])
        };
        debug_assert!(first.is_some(), "threshold list lost its marking");
        let b = first.map_or(i64::MIN, |v| v - 1);
        b.min(self.maxs[c])
    }

    /// Returns true once `return_one` is satisfied.
    fn go(&mut self, c: usize, min_product: i128, list: &[u32]) -> bool {
        let b = self.upper(c, list);
        let a = (self.mins[c] as i128).max(ceil_div(min_product - self.cap[c], self.w[c]));
        if a > b as i128 {
            return false;
        }
        let a = a as i64;
        if c == 0 {
            if self.return_one {
                self.cur[0] = a;
                self.out.push(self.cur.clone());
                return true;
            }
            for x in a..=b {
                self.cur[0] = x;
                self.out.push(self.cur.clone());
            }
            return false;
        }
        let mut next = std::mem::take(&mut self.lists[c - 1]);
        for x in a..=b {
            next.clear();
            for &r in list {
                let v = self.row(r);
                if v[c] > x {
                    continue;
                }
                if let Some(&last) = next.last() {
                    let kept = self.row(last);
                    if kept[..c].iter().zip(&v[..c]).all(|(p, q)| p <= q) {
                        continue;
                    }
                }
                next.push(r);
            }
            self.cur[c] = x;
            if self.go(c - 1, min_product - x as i128 * self.w[c], &next) {
                self.lists[c - 1] = next;
                return true;
            }
        }
        self.lists[c - 1] = next;
        false
    }
}

/// All `u` with `mins ⪯ u ⪯ maxs`, `w·u >= min_product` and no threshold `⪯ u`.
///
/// With `return_one`, at most the reverse-lexicographically smallest such `u`.
pub fn recursive_search(frame: &SearchFrame) -> Vec<Vec<i64>> {
    let n = frame.weights.len();
    assert!(n > 0 && frame.mins.len() == n && frame.maxs.len() == n);
    debug_assert!(frame.thresholds.is_arranged() && frame.thresholds.is_marked(n));
    let w: Vec<i128> = frame.weights.iter().map(|&x| x as i128).collect();
    let mut cap = vec![0i128; n];
    for c in 1..n {
        cap[c] = cap[c - 1] + w[c - 1] * frame.maxs[c - 1] as i128;
    }
    let items = frame.thresholds.items();
    let mut search = Search {
        n,
        w,
        mins: &frame.mins,
        maxs: &frame.maxs,
        cap,
        rows: items.iter().flatten().copied().collect(),
        return_one: frame.return_one,
        axis_scan: frame.axis_scan,
        cur: vec![0; n],
        lists: vec![Vec::new(); n],
        out: Vec::new(),
    };
    let top: Vec<u32> = (0..items.len() as u32).collect();
    search.go(n - 1, frame.min_product, &top);
    search.out
}

/// All `v ⪯ ceiling` with `w·v = target`.
pub fn enumerate_level_set(weights: &[u64], target: i128, ceiling: &[i64]) -> Vec<Vec<i64>> {
    let n = weights.len();
    let mut out = Vec::new();
    if target < 0 || n == 0 || ceiling.iter().any(|&c| c < 0) {
        return out;
    }
    let mut reach = vec![0i128; n];
    for c in 1..n {
        reach[c] = reach[c - 1] + weights[c - 1] as i128 * ceiling[c - 1] as i128;
    }
    let mut cur = vec![0i64; n];
    level_dfs(weights, ceiling, &reach, n - 1, target, &mut cur, &mut out);
    out
}

fn level_dfs(w: &[u64], ceiling: &[i64], reach: &[i128], c: usize, t: i128, cur: &mut [i64], out: &mut Vec<Vec<i64>>) {
    let wc = w[c] as i128;
    if c == 0 {
        if t % wc == 0 && t / wc <= ceiling[0] as i128 {
            cur[0] = (t / wc) as i64;
            out.push(cur.to_vec());
        }
        return;
    }
    let lo = ceil_div(t - reach[c], wc).max(0);
    let hi = (t / wc).min(ceiling[c] as i128);
    for x in lo..=hi {
        cur[c] = x as i64;
        level_dfs(w, ceiling, reach, c - 1, t - x as i128 * wc, cur, out);
    }
    cur[c] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bubble {
    pub u: Vec<i64>,
    pub dot: u128,
    pub k: u128,
    pub div_d: bool,
}

impl Bubble {
    pub fn new(weights: &[u64], d: u128, u: Vec<i64>) -> Self {
        let dot = crate::arith::checked_dot(weights, &u).expect("bubble dot fits") as u128;
        Bubble { u, dot, k: dot / d, div_d: dot % d == 0 }
    }
}

/// Lower bound on every coordinate of the enumerated bubbles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Low {
    Zero,
    One,
}

impl Low {
    pub fn value(self) -> i64 {
        match self {
            Low::Zero => 0,
            Low::One => 1,
        }
    }
}

/// Where the enumerator stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    ArityBelowThree,
    MaxOneWeight,
    DivisorStep,
    PositiveNonpositive,
    PositiveBound,
    Probe,
    Enumerated,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::ArityBelowThree => "fewer than three weights",
            Stage::MaxOneWeight => "maximum-one-weight bound",
            Stage::DivisorStep => "divisor-step bound",
            Stage::PositiveNonpositive => "positive-coordinate bound nonpositive",
            Stage::PositiveBound => "positive-coordinate bound",
            Stage::Probe => "feasibility probe",
            Stage::Enumerated => "enumerated",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BubbleRun {
    pub stage: Stage,
    pub bubbles: Vec<Bubble>,
}

fn weighted(w: &[u64], v: &[i64]) -> i128 {
    w.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()
}

/// `{(ceiling_i + 1)·e_i} ∪ {v ∈ V(d) : v ⪯ ceiling}`, arranged.
fn threshold_set(w: &WeightVector, ceiling: &[i64]) -> ThresholdList {
    let n = w.len();
    let mut items: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = (ceiling[i] + 1).max(0);
            e
        })
        .collect();
    items.extend(enumerate_level_set(w.weights(), w.d() as i128, ceiling));
    arrangement(items)
}

/// Staged enumeration on a sorted, gcd-free weight vector; results in the same coordinates.
fn run_sorted(w: &WeightVector, low: Low, probe_only: bool) -> (Stage, Vec<Vec<i64>>) {
    let n = w.len();
    if n < 3 {
        return (Stage::ArityBelowThree, Vec::new());
    }
    let ws = w.weights();
    let two_d = 2 * w.d() as i128;
    let alpha = max_one_weight_bound(w).expect("n >= 3");
    if weighted(ws, &alpha) < two_d {
        return (Stage::MaxOneWeight, Vec::new());
    }
    let epsilon = epsilon_bound(w, &alpha);
    let zeta = divisor_step_bound(w, &epsilon);
    let beta: Vec<i64> = epsilon.iter().zip(&zeta).map(|(&e, &z)| e.min(z - 1)).collect();
    if weighted(ws, &beta) < two_d {
        return (Stage::DivisorStep, Vec::new());
    }
    let (gamma, delta) = match low {
        Low::One => {
            let delta = positive_bound(w).expect("n >= 3");
            let gamma: Vec<i64> = delta.iter().zip(&zeta).map(|(&d, &z)| d.min(z)).collect();
            if gamma.iter().any(|&g| g <= 0) {
                return (Stage::PositiveNonpositive, Vec::new());
            }
            if weighted(ws, &gamma) < two_d {
                return (Stage::PositiveBound, Vec::new());
            }
            (gamma, delta)
        }
        Low::Zero => (beta, epsilon),
    };
    let mins = vec![low.value(); n];
    let probe_thresholds = threshold_set(w, &gamma);
    let probe = SearchFrame::new(ws, mins.clone(), gamma, two_d, &probe_thresholds).return_one(true);
    let hit = recursive_search(&probe);
    if hit.is_empty() {
        return (Stage::Probe, Vec::new());
    }
    if probe_only {
        return (Stage::Probe, hit);
    }
    let thresholds = threshold_set(w, &delta);
    let full = SearchFrame::new(ws, mins, delta, two_d, &thresholds);
    (Stage::Enumerated, recursive_search(&full))
}

fn finish(w: &WeightVector, found: Vec<Vec<i64>>) -> Vec<Bubble> {
    let input = w.input_weights();
    let mut out: Vec<Bubble> = found
        .into_iter()
        .map(|u| Bubble::new(&input, w.d(), w.to_input_order(&u)))
        .collect();
    out.sort_by(|a, b| a.dot.cmp(&b.dot).then_with(|| a.u.cmp(&b.u)));
    out
}

/// Every bubble `u` of `raw` with `u_i >= low` for all `i`, sorted by `w·u` and then lexicographically.
pub fn bubbles(raw: &[u64], low: Low) -> Result<Vec<Bubble>> {
    Ok(bubbles_traced(raw, low)?.bubbles)
}

pub fn bubbles_traced(raw: &[u64], low: Low) -> Result<BubbleRun> {
    let w = WeightVector::new(raw)?;
    let (stage, found) = run_sorted(&w.reduced(), low, false);
    Ok(BubbleRun { stage, bubbles: finish(&w, found) })
}

/// Whether some bubble with coordinates `>= low` exists; stops after the probe.
pub fn has_bubble(raw: &[u64], low: Low) -> Result<bool> {
    let w = WeightVector::new(raw)?;
    Ok(!run_sorted(&w.reduced(), low, true).1.is_empty())
}

/// Like [`bubbles`] for input that is already sorted nondecreasingly; skips the permutation.
pub fn bubbles_sorted(sorted: &[u64], low: Low) -> Result<BubbleRun> {
    let w = WeightVector::from_sorted(sorted.to_vec())?;
    let (stage, found) = run_sorted(&w.reduced(), low, false);
    Ok(BubbleRun { stage, bubbles: finish(&w, found) })
}

/// The maximum-one-weight screen on sorted input, with `d` supplied by the caller.
///
/// Equivalent to the first filter of [`bubbles`]: false means no bubble exists.
pub fn passes_max_one_weight(sorted: &[u64], d: u128) -> bool {
    let n = sorted.len();
    if n < 3 {
        return false;
    }
    let g = crate::arith::gcd_vector(sorted) as u128;
    let (d, top, next) = (d / g, sorted[n - 1] as u128 / g, sorted[n - 2] as u128 / g);
    let rest: u128 = sorted[..n - 1].iter().map(|&x| x as u128).sum::<u128>() / g;
    // Entries below two only arise for n >= 3 when the top weights are tiny; keep the exact
    // signed form there.
    if top < 2 || next < 2 {
        let alpha_dot = (top as i128 - 2) * rest as i128 + (next as i128 - 2) * top as i128;
        return alpha_dot >= 2 * d as i128;
    }
    (top - 2) * rest + (next - 2) * top >= 2 * d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::lcm_vector;

    fn us(b: &[Bubble]) -> Vec<Vec<i64>> {
        b.iter().map(|x| x.u.clone()).collect()
    }

    #[test]
    fn table_rows() {
        assert_eq!(us(&bubbles(&[6, 14, 21], Low::One).unwrap()), vec![vec![6, 2, 1]]);
        assert_eq!(us(&bubbles(&[1, 6, 10, 15], Low::One).unwrap()), vec![vec![1, 4, 2, 1]]);
        assert_eq!(us(&bubbles(&[12, 15, 20], Low::One).unwrap()), vec![vec![3, 3, 2], vec![4, 3, 2]]);
        assert!(bubbles(&[2, 3, 5], Low::Zero).unwrap().is_empty());
    }

    #[test]
    fn permuted_and_scaled_input() {
        let b = bubbles(&[21, 6, 14], Low::One).unwrap();
        assert_eq!(us(&b), vec![vec![1, 6, 2]]);
        let b = bubbles(&[24, 30, 40], Low::One).unwrap();
        assert_eq!(us(&b), vec![vec![3, 3, 2], vec![4, 3, 2]]);
        assert_eq!((b[0].dot, b[0].k, b[0].div_d), (242, 2, false));
    }

    #[test]
    fn probe_frame_contains_table_bubble() {
        let w = WeightVector::new(&[6, 14, 21]).unwrap();
        let t = threshold_set(&w, &[6, 2, 1]);
        let frame = SearchFrame::new(w.weights(), vec![1, 1, 1], vec![6, 2, 1], 84, &t);
        assert!(recursive_search(&frame).contains(&vec![6, 2, 1]));
    }

    #[test]
    fn degenerate_frames() {
        let t = arrangement(vec![vec![3]]);
        let frame = SearchFrame::new(&[2], vec![4], vec![9], 0, &t);
        assert!(recursive_search(&frame).is_empty());
        let t = arrangement(vec![vec![0, 0], vec![5, 0], vec![0, 5]]);
        let frame = SearchFrame::new(&[1, 1], vec![0, 0], vec![4, 4], 0, &t);
        assert!(recursive_search(&frame).is_empty());
        let t = arrangement(vec![vec![5, 0], vec![0, 5]]);
        let frame = SearchFrame::new(&[1, 1], vec![0, 0], vec![4, 4], 0, &t);
        assert_eq!(recursive_search(&frame).len(), 25);
    }

    #[test]
    fn return_one_is_reverse_lex_smallest() {
        let t = arrangement(vec![vec![5, 0], vec![0, 5]]);
        let frame = SearchFrame::new(&[1, 1], vec![0, 0], vec![4, 4], 5, &t).return_one(true);
        assert_eq!(recursive_search(&frame), vec![vec![4, 1]]);
    }

    #[test]
    fn level_set_examples() {
        assert!(enumerate_level_set(&[6, 14, 21], 42, &[6, 2, 1]).is_empty());
        let mut v = enumerate_level_set(&[1, 2], 2, &[2, 1]);
        v.sort();
        assert_eq!(v, vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(enumerate_level_set(&[3, 5], 0, &[1, 1]), vec![vec![0, 0]]);
        assert!(enumerate_level_set(&[3, 5], 0, &[1, -1]).is_empty());
    }

    #[test]
    fn stages() {
        assert_eq!(bubbles_traced(&[3, 4], Low::Zero).unwrap().stage, Stage::ArityBelowThree);
        assert_eq!(bubbles_traced(&[2, 3, 5], Low::One).unwrap().stage, Stage::MaxOneWeight);
        assert_eq!(bubbles_traced(&[1, 3, 5, 5, 12, 15, 25], Low::One).unwrap().stage, Stage::PositiveNonpositive);
        assert_eq!(bubbles_traced(&[6, 14, 21], Low::One).unwrap().stage, Stage::Enumerated);
    }

    #[test]
    fn screen_matches_first_filter() {
        for w in [[2u64, 3, 5], [6, 14, 21], [1, 1, 1], [1, 2, 2], [12, 15, 20]] {
            let d = lcm_vector(&w).unwrap();
            let stage = bubbles_traced(&w, Low::One).unwrap().stage;
            assert_eq!(passes_max_one_weight(&w, d), stage != Stage::MaxOneWeight, "{w:?}");
        }
    }
}
