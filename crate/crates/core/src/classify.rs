//! Verdicts derived from bubble sets: generation in degree one, the very-ampleness condition,
//! table colouring and fundamental vectors.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::arith::{checked_dot, gcd, gcd_vector, lcm_vector, WeightVector};
use crate::bounds::{chain_partition_bound, is_pairwise_coprime, special_chain_check};
use crate::enumeration::{bubbles, bubbles_traced, Bubble, Low, Stage};
use crate::error::Result;

/// Depth-first search for a split of a vector into parts of weight at least `part`.
struct Splitter<'a> {
    w: &'a [u64],
    part: i128,
    failed: HashSet<(Vec<i64>, usize)>,
}

/// One candidate part under construction.
struct PartWalk<'b> {
    w: &'b [u64],
    rem: &'b [i64],
    order: Vec<usize>,
    /// gcd of the weights at positions `j..` of `order`.
    tail_gcd: Vec<i128>,
    /// Largest weight reachable with positions `j..` of `order`.
    tail_reach: Vec<i128>,
    first: usize,
}

impl PartWalk<'_> {
    /// Can positions `j..` produce a weight in `[lo, hi]`?
    fn feasible(&self, j: usize, lo: i128, hi: i128) -> bool {
        let lo = lo.max(0);
        let hi = hi.min(self.tail_reach[j]);
        if lo > hi {
            return false;
        }
        let g = self.tail_gcd[j];
        if g == 0 {
            return lo == 0;
        }
        let first_multiple = (lo + g - 1) / g * g;
        first_multiple <= hi
    }
}

impl Splitter<'_> {
    fn solve(&mut self, rem: &[i64], parts: usize) -> Option<Vec<Vec<i64>>> {
        let total = checked_dot(self.w, rem).ok()?;
        if total < parts as i128 * self.part {
            return None;
        }
        if parts == 1 {
            return Some(vec![rem.to_vec()]);
        }
        let key = (rem.to_vec(), parts);
        if self.failed.contains(&key) {
            return None;
        }
        let slack = total - parts as i128 * self.part;
        let mut order: Vec<usize> = (0..rem.len()).filter(|&i| rem[i] > 0).collect();
        order.sort_by_key(|&i| (rem[i], std::cmp::Reverse(self.w[i])));
        let len = order.len();
        let mut tail_gcd = vec![0i128; len + 1];
        let mut tail_reach = vec![0i128; len + 1];
        for j in (0..len).rev() {
            let i = order[j];
            tail_gcd[j] = gcd(tail_gcd[j + 1] as u128, self.w[i] as u128) as i128;
            tail_reach[j] = tail_reach[j + 1] + self.w[i] as i128 * rem[i] as i128;
        }
        // Some part holds a unit of the first coordinate; take it to be the current one.
        let walk = PartWalk { w: self.w, rem, order, tail_gcd, tail_reach, first: 0 };
        let mut v = vec![0i64; rem.len()];
        let found = self.parts_from(&walk, 0, self.part, self.part + slack, &mut v, parts);
        if found.is_none() {
            self.failed.insert(key);
        }
        found
    }

    fn parts_from(&mut self, walk: &PartWalk, j: usize, lo: i128, hi: i128, v: &mut Vec<i64>, parts: usize) -> Option<Vec<Vec<i64>>> {
        if j == walk.order.len() {
            if lo > 0 {
                return None;
            }
            let rest: Vec<i64> = walk.rem.iter().zip(v.iter()).map(|(a, b)| a - b).collect();
            let mut tail = self.solve(&rest, parts - 1)?;
            tail.insert(0, v.clone());
            return Some(tail);
        }
        let i = walk.order[j];
        let wi = walk.w[i] as i128;
        let min_x = if j == walk.first { 1 } else { 0 };
        let max_x = (walk.rem[i] as i128).min(hi.max(0) / wi);
        // Values below `lo - tail_reach` can never be topped up by later coordinates.
        let need = lo - walk.tail_reach[j + 1];
        let start = if need > 0 { min_x.max((need + wi - 1) / wi) } else { min_x };
        for x in start..=max_x {
            let used = x * wi;
            if !walk.feasible(j + 1, lo - used, hi - used) {
                continue;
            }
            v[i] = x as i64;
            if let Some(found) = self.parts_from(walk, j + 1, lo - used, hi - used, v, parts) {
                v[i] = 0;
                return Some(found);
            }
        }
        v[i] = 0;
        None
    }
}

/// A split of `u` into `m` parts each of weight at least `l·d`, if one exists.
pub fn find_mvplus_split(w: &[u64], u: &[i64], m: usize, l: u64) -> Option<Vec<Vec<i64>>> {
    if m == 0 || u.len() != w.len() || u.iter().any(|&x| x < 0) {
        return None;
    }
    let d = lcm_vector(w).ok()?;
    let mut s = Splitter { w, part: d as i128 * l as i128, failed: HashSet::new() };
    s.solve(u, m)
}

/// Is `u ∈ m·V⁺(l·d)`?
pub fn in_mvplus(w: &[u64], u: &[i64], m: usize, l: u64) -> bool {
    find_mvplus_split(w, u, m, l).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub i: usize,
    pub m: usize,
    pub parts: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Condition22Status {
    /// For every coordinate a split exists at some admissible `m`.
    Fails { witnesses: Vec<SplitWitness> },
    /// Decided by the single-coordinate criterion at `l = 1`.
    HoldsByLemma,
    /// Some coordinate admits no split for any `m` up to the cap; larger `m` were not tried.
    HoldsUpToCap { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition22Verdict {
    #[serde(flatten)]
    pub status: Condition22Status,
    pub l: u64,
    pub i_witness: Option<usize>,
}

impl Condition22Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self.status, Condition22Status::Fails { .. })
    }

    pub fn label(&self) -> String {
        match &self.status {
            Condition22Status::Fails { .. } => "fails".into(),
            Condition22Status::HoldsByLemma => "holds".into(),
            Condition22Status::HoldsUpToCap { cap } => format!("holds up to m={cap}"),
        }
    }
}

fn shifted(u: &[i64], i: usize, by: i128) -> Option<Vec<i64>> {
    let mut out = u.to_vec();
    out[i] = i64::try_from(out[i] as i128 + by).ok()?;
    Some(out)
}

/// Decides, or bounds, whether `(w, u, l)` satisfies the very-ampleness condition.
///
/// `m_cap` defaults to `4k` with `k = floor(w·u / d)`.
pub fn condition_2_2(w: &[u64], u: &[i64], l: u64, m_cap: Option<usize>) -> Result<Condition22Verdict> {
    let d = lcm_vector(w)?;
    let dot = checked_dot(w, u)?;
    let k = (dot / d as i128) as usize;
    let n = w.len();
    let unit = |i: usize| (d / w[i] as u128) as i128;
    if l == 1 && dot < 3 * d as i128 {
        if let Some(i) = (0..n).find(|&i| u[i] as i128 == unit(i) - 1) {
            return Ok(match find_mvplus_split(w, u, 2, 1) {
                None => Condition22Verdict { status: Condition22Status::HoldsByLemma, l, i_witness: Some(i) },
                Some(parts) => {
                    let witnesses = (0..n).map(|i| SplitWitness { i, m: 2, parts: parts.clone() }).collect();
                    Condition22Verdict { status: Condition22Status::Fails { witnesses }, l, i_witness: None }
                }
            });
        }
    }
    let l_us = l as usize;
    let m_lo = k.div_ceil(l_us).max(1);
    let cap = m_cap.unwrap_or(4 * k).max(m_lo);
    // Coordinates already carrying weight tend to witness the condition; try them first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (u[i] == 0, unit(i)));
    let mut witnesses = Vec::with_capacity(n);
    for i in order {
        let mut hit = None;
        for m in m_lo..=cap {
            let extra = (l_us * m - k) as i128 * unit(i);
            let Some(target) = shifted(u, i, extra) else { continue };
            if let Some(parts) = find_mvplus_split(w, &target, m, l) {
                hit = Some(SplitWitness { i, m, parts });
                break;
            }
        }
        match hit {
            Some(wit) => witnesses.push(wit),
            None => {
                return Ok(Condition22Verdict { status: Condition22Status::HoldsUpToCap { cap }, l, i_witness: Some(i) });
            }
        }
    }
    witnesses.sort_by_key(|x| x.i);
    Ok(Condition22Verdict { status: Condition22Status::Fails { witnesses }, l, i_witness: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Orange,
    None,
}

impl Color {
    pub fn as_str(self) -> &'static str {
        match self {
            Color::Blue => "blue",
            Color::Orange => "orange",
            Color::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Color> {
        match s {
            "blue" => Some(Color::Blue),
            "orange" => Some(Color::Orange),
            "none" | "" => Some(Color::None),
            _ => None,
        }
    }
}

pub fn table1_color(w: &[u64], bubble: &Bubble) -> Color {
    let d = lcm_vector(w).expect("bubble weights have an lcm");
    if bubble.div_d {
        Color::Blue
    } else if bubble.dot > 2 * d && !in_mvplus(w, &bubble.u, 2, 1) {
        Color::Orange
    } else {
        Color::None
    }
}

/// Structural reasons for a bubble-free weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    TooFewWeights,
    PairwiseCoprime,
    SpecialChain,
    ChainPartition { chains: usize },
    Bound { stage: Stage },
    BubbleSet { count: usize },
}

impl Certificate {
    pub fn label(&self) -> String {
        match self {
            Certificate::TooFewWeights => "fewer than three weights".into(),
            Certificate::PairwiseCoprime => "pairwise coprime".into(),
            Certificate::SpecialChain => "special chain".into(),
            Certificate::ChainPartition { chains } => format!("chain partition ({chains} chains)"),
            Certificate::Bound { stage } => format!("bound: {}", stage.label()),
            Certificate::BubbleSet { count } => format!("bubble set ({count} bubbles)"),
        }
    }
}

/// Every structural criterion that rules out bubbles for `raw`.
pub fn no_bubble_certificates(raw: &[u64]) -> Result<Vec<Certificate>> {
    let w = WeightVector::new(raw)?;
    let mut out = Vec::new();
    if w.len() < 3 {
        out.push(Certificate::TooFewWeights);
        return Ok(out);
    }
    let reduced = w.reduced();
    if is_pairwise_coprime(&reduced) {
        out.push(Certificate::PairwiseCoprime);
    }
    if special_chain_check(&reduced)? {
        out.push(Certificate::SpecialChain);
    }
    let chains = chain_partition_bound(&reduced);
    if chains <= 2 {
        out.push(Certificate::ChainPartition { chains });
    }
    Ok(out)
}

/// Largest index-subset size the subset reduction will enumerate.
pub const SUBSET_MAX_N: usize = 20;

/// All bubbles with `max(w) < 42`, assembled from positive-coordinate bubbles of the
/// sub-vectors that keep the lcm.
pub fn bubbles_by_subsets(raw: &[u64]) -> Result<Vec<Bubble>> {
    let d = lcm_vector(raw)?;
    let n = raw.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub: Vec<u64> = idx.iter().map(|&i| raw[i]).collect();
        if lcm_vector(&sub)? != d {
            continue;
        }
        for b in bubbles(&sub, Low::One)? {
            let mut u = vec![0i64; n];
            for (&i, &x) in idx.iter().zip(&b.u) {
                u[i] = x;
            }
            out.push(Bubble::new(raw, d, u));
        }
    }
    out.sort_by(|a, b| a.dot.cmp(&b.dot).then_with(|| a.u.cmp(&b.u)));
    Ok(out)
}

/// The complete bubble set, through the subset reduction when it applies.
pub fn all_bubbles(raw: &[u64]) -> Result<Vec<Bubble>> {
    let max = raw.iter().copied().max().unwrap_or(0);
    if max < 42 && raw.len() <= SUBSET_MAX_N {
        bubbles_by_subsets(raw)
    } else {
        bubbles(raw, Low::Zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationVerdict {
    pub generated: bool,
    /// False when `generated = false` only means the sufficient test did not apply.
    pub exact: bool,
    pub certificate: Certificate,
}

fn level_verdict(bs: &[Bubble], d: u128, k: u64, graded: bool, w: &[u64], certs: &[Certificate]) -> GenerationVerdict {
    if let Some(c) = certs.first() {
        return GenerationVerdict { generated: true, exact: true, certificate: c.clone() };
    }
    let certificate = Certificate::BubbleSet { count: bs.len() };
    if k == 1 {
        let generated = if graded {
            !bs.iter().any(|b| b.div_d)
        } else {
            bs.iter().all(|b| in_mvplus(w, &b.u, b.k as usize, 1))
        };
        return GenerationVerdict { generated, exact: true, certificate };
    }
    let level = (k as u128 + 1) * d;
    let obstructs = |b: &&Bubble| b.dot >= level && (!graded || b.div_d);
    let generated = !bs.iter().any(|b| obstructs(&b));
    GenerationVerdict { generated, exact: generated, certificate }
}

fn generation(raw: &[u64], k: u64, graded: bool) -> Result<GenerationVerdict> {
    let d = lcm_vector(raw)?;
    let certs = no_bubble_certificates(raw)?;
    let bs = if certs.is_empty() { all_bubbles(raw)? } else { Vec::new() };
    Ok(level_verdict(&bs, d, k, graded, raw, &certs))
}

/// Is the `kd`-th Veronese subring of the graded polynomial ring generated in degree one?
///
/// Exact for `k = 1`. For `k >= 2` a `true` is proven; a `false` comes with `exact = false`.
pub fn graded_generated(raw: &[u64], k: u64) -> Result<GenerationVerdict> {
    generation(raw, k, true)
}

/// Same question for the Rees ring generated by the variables.
pub fn rees_generated(raw: &[u64], k: u64) -> Result<GenerationVerdict> {
    generation(raw, k, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub graded_at_d: bool,
    pub rees_at_d: bool,
    pub graded_min_k: u64,
    pub graded_min_k_exact: bool,
    pub rees_min_k: u64,
    pub rees_min_k_exact: bool,
    pub certificates: Vec<Certificate>,
}

fn min_level(bs: &[Bubble], d: u128, graded: bool, w: &[u64], certs: &[Certificate]) -> (u64, bool, bool) {
    let first = level_verdict(bs, d, 1, graded, w, certs);
    if first.generated {
        return (1, true, true);
    }
    let top = bs.iter().map(|b| b.k).max().unwrap_or(0) as u64;
    let k = (2..=top.max(2))
        .find(|&k| level_verdict(bs, d, k, graded, w, certs).generated)
        .unwrap_or(top.max(2));
    (k, false, k == 2)
}

pub fn generation_report(raw: &[u64], bs: &[Bubble]) -> Result<GenerationReport> {
    let d = lcm_vector(raw)?;
    let certificates = no_bubble_certificates(raw)?;
    let (graded_min_k, graded_at_d, graded_min_k_exact) = min_level(bs, d, true, raw, &certificates);
    let (rees_min_k, rees_at_d, rees_min_k_exact) = min_level(bs, d, false, raw, &certificates);
    Ok(GenerationReport { graded_at_d, rees_at_d, graded_min_k, graded_min_k_exact, rees_min_k, rees_min_k_exact, certificates })
}

/// Is `w` obtained from `base` by permuting and inserting entries that divide `lcm(base)`?
pub fn expansion_member(w: &[u64], base: &[u64]) -> bool {
    let Ok(m) = lcm_vector(base) else { return false };
    let mut counts: HashMap<u64, i64> = HashMap::new();
    for &x in w {
        *counts.entry(x).or_default() += 1;
    }
    for &x in base {
        *counts.entry(x).or_default() -= 1;
    }
    counts.iter().all(|(&x, &c)| c == 0 || (c > 0 && m % x as u128 == 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorSelector {
    Blue,
    Orange,
    AnyColored,
}

impl ColorSelector {
    pub fn accepts(self, c: Color) -> bool {
        match self {
            ColorSelector::Blue => c == Color::Blue,
            ColorSelector::Orange => c == Color::Orange,
            ColorSelector::AnyColored => c != Color::None,
        }
    }
}

/// Minimal vectors, under expansion, among rows with a bubble of the selected colour.
///
/// Rows are weight vectors with the colours of their bubbles; output is sorted.
pub fn fundamental_set(rows: &[(Vec<u64>, Vec<Color>)], selector: ColorSelector) -> Vec<Vec<u64>> {
    let mut cands: Vec<Vec<u64>> = rows
        .iter()
        .filter(|(_, colors)| colors.iter().any(|&c| selector.accepts(c)))
        .map(|(w, _)| {
            let mut s = w.clone();
            s.sort_unstable();
            s
        })
        .collect();
    cands.sort();
    cands.dedup();
    let minimal: Vec<Vec<u64>> = cands
        .iter()
        .filter(|f| !cands.iter().any(|g| g != *f && expansion_member(f, g)))
        .cloned()
        .collect();
    minimal
}

/// Some weight equals a prime power times `gcd(w)`.
pub fn fraction_field_sufficient(w: &[u64]) -> bool {
    let g = gcd_vector(w);
    w.iter().any(|&x| is_prime_power_or_one(x / g))
}

fn is_prime_power_or_one(mut x: u64) -> bool {
    if x <= 1 {
        return x == 1;
    }
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            while x % p == 0 {
                x /= p;
            }
            return x == 1;
        }
        p += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BubbleReport {
    #[serde(flatten)]
    pub bubble: Bubble,
    pub color: Color,
    pub condition_2_2: Condition22Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub weights: Vec<u64>,
    pub d: u128,
    pub low: i64,
    pub stage: Stage,
    pub bubbles: Vec<BubbleReport>,
    pub certificates: Vec<Certificate>,
    pub generation: GenerationReport,
    /// When false, the very-ampleness verdicts are statements about the combinatorial condition only.
    pub fraction_field_sufficient: bool,
}

/// Everything known about one weight vector.
pub fn analyze(raw: &[u64], low: Low, l: u64, m_cap: Option<usize>) -> Result<AnalysisReport> {
    let d = lcm_vector(raw)?;
    let run = bubbles_traced(raw, low)?;
    let full = match low {
        Low::Zero => run.bubbles.clone(),
        Low::One => all_bubbles(raw)?,
    };
    let generation = generation_report(raw, &full)?;
    let mut certificates = generation.certificates.clone();
    if run.bubbles.is_empty() && run.stage != Stage::Probe && run.stage != Stage::Enumerated {
        certificates.push(Certificate::Bound { stage: run.stage });
    }
    let mut reports = Vec::with_capacity(run.bubbles.len());
    for b in run.bubbles {
        let color = table1_color(raw, &b);
        let condition_2_2 = condition_2_2(raw, &b.u, l, m_cap)?;
        reports.push(BubbleReport { bubble: b, color, condition_2_2 });
    }
    Ok(AnalysisReport {
        weights: raw.to_vec(),
        d,
        low: low.value(),
        stage: run.stage,
        bubbles: reports,
        certificates,
        generation,
        fraction_field_sufficient: fraction_field_sufficient(raw),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_decompose;

    #[test]
    fn split_examples() {
        let parts = find_mvplus_split(&[6, 22, 33], &[10, 2, 1], 2, 1).unwrap();
        assert_eq!(parts.iter().map(|p| p.iter().sum::<i64>()).sum::<i64>(), 13);
        assert!(!in_mvplus(&[6, 14, 21], &[6, 2, 1], 2, 1));
        assert!(in_mvplus(&[6, 14, 21], &[6, 2, 1], 1, 1));
        assert!(!in_mvplus(&[6, 14, 21], &[6, 2, 1], 1, 3));
    }

    #[test]
    fn split_matches_oracle_on_small_cases() {
        let w = [4, 6, 9];
        for a in 0..5 {
            for b in 0..4 {
                for c in 0..4 {
                    let u = [a, b, c];
                    for m in 1..4 {
                        assert_eq!(in_mvplus(&w, &u, m, 1), oracle_decompose(&w, &u, m, 1).is_some(), "{u:?} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn condition_examples() {
        let v = condition_2_2(&[1, 6, 10, 15], &[1, 4, 2, 1], 1, None).unwrap();
        assert_eq!(v.status, Condition22Status::HoldsByLemma);
        let v = condition_2_2(&[24, 30, 40], &[3, 3, 2], 1, None).unwrap();
        assert_eq!(v.status, Condition22Status::HoldsByLemma);
        let v = condition_2_2(&[6, 22, 33], &[10, 2, 1], 1, None).unwrap();
        match v.status {
            Condition22Status::Fails { witnesses } => {
                assert_eq!(witnesses.len(), 3);
                assert!(witnesses.iter().all(|x| x.m == 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn colors() {
        let b = |w: &[u64], u: Vec<i64>| Bubble::new(w, lcm_vector(w).unwrap(), u);
        assert_eq!(table1_color(&[1, 6, 10, 15], &b(&[1, 6, 10, 15], vec![1, 4, 2, 1])), Color::Blue);
        assert_eq!(table1_color(&[6, 14, 21], &b(&[6, 14, 21], vec![6, 2, 1])), Color::Orange);
        assert_eq!(table1_color(&[6, 22, 33], &b(&[6, 22, 33], vec![10, 2, 1])), Color::None);
    }

    #[test]
    fn generation_examples() {
        assert!(!graded_generated(&[1, 6, 10, 15], 1).unwrap().generated);
        let v = graded_generated(&[1, 6, 10, 15], 2).unwrap();
        assert!(v.generated && v.exact);
        assert!(graded_generated(&[6, 14, 21], 1).unwrap().generated);
        assert!(!rees_generated(&[6, 14, 21], 1).unwrap().generated);
        let v = rees_generated(&[2, 3, 5], 1).unwrap();
        assert!(v.generated);
        assert_eq!(v.certificate, Certificate::PairwiseCoprime);
        assert!(!rees_generated(&[1, 6, 10, 15], 1).unwrap().generated);
    }

    #[test]
    fn certificates() {
        let c = no_bubble_certificates(&[7, 5, 4, 1]).unwrap();
        assert!(c.contains(&Certificate::SpecialChain));
        let c = no_bubble_certificates(&[2, 3, 5]).unwrap();
        assert!(c.contains(&Certificate::PairwiseCoprime));
        assert!(no_bubble_certificates(&[6, 14, 21]).unwrap().is_empty());
    }

    #[test]
    fn subset_reduction_matches_full_enumeration() {
        for w in [[6u64, 14, 21, 42].as_slice(), &[1, 6, 10, 15], &[2, 12, 15, 20], &[4, 15, 24, 30, 40]] {
            assert_eq!(bubbles_by_subsets(w).unwrap(), bubbles(w, Low::Zero).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn expansion_examples() {
        assert!(expansion_member(&[1, 2, 6, 10, 15], &[1, 6, 10, 15]));
        assert!(expansion_member(&[6, 14, 21], &[6, 14, 21]));
        assert!(!expansion_member(&[1, 6, 10, 14], &[1, 6, 10, 15]));
        assert!(!expansion_member(&[1, 6, 10, 15, 4], &[1, 6, 10, 15]));
        assert!(expansion_member(&[15, 10, 6, 1, 1], &[1, 6, 10, 15]));
    }

    #[test]
    fn fundamental_examples() {
        let rows = vec![(vec![6, 14, 21], vec![Color::Orange])];
        assert_eq!(fundamental_set(&rows, ColorSelector::Orange), vec![vec![6, 14, 21]]);
        let rows = vec![
            (vec![1, 6, 10, 15], vec![Color::Blue]),
            (vec![1, 2, 6, 10, 15], vec![Color::Blue, Color::None]),
            (vec![6, 14, 21], vec![Color::Orange]),
        ];
        assert_eq!(fundamental_set(&rows, ColorSelector::Blue), vec![vec![1, 6, 10, 15]]);
        assert_eq!(fundamental_set(&rows, ColorSelector::AnyColored).len(), 2);
    }

    #[test]
    fn fraction_field_examples() {
        assert!(fraction_field_sufficient(&[1, 6, 10, 15]));
        assert!(!fraction_field_sufficient(&[6, 10, 15]));
        assert!(fraction_field_sufficient(&[4, 6, 10]));
    }

    #[test]
    fn analyze_example() {
        let r = analyze(&[1, 6, 10, 15], Low::Zero, 1, None).unwrap();
        assert_eq!(r.bubbles.len(), 1);
        assert_eq!(r.bubbles[0].color, Color::Blue);
        assert!(!r.generation.graded_at_d && !r.generation.rees_at_d);
        assert_eq!(r.generation.graded_min_k, 2);
        assert!(r.generation.graded_min_k_exact);
    }
}
