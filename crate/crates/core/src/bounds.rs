//! Coordinate bounds for bubbles and structural criteria that rule bubbles out.
//!
//! All vectors here are indexed in the sorted order of the [`WeightVector`]. Bound entries are
//! allowed to be negative; a negative entry means no bubble has a positive coordinate there.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul};
use serde::Serialize;

use crate::arith::{gcd_u64, gcd_vector, lcm, WeightVector};
use crate::error::{Error, Result};

fn clamp_i64(x: u128) -> i64 {
    i64::try_from(x).unwrap_or(i64::MAX)
}

/// `d/w_i - 1` for every coordinate.
pub fn first_upper_bound(w: &WeightVector) -> Vec<i64> {
    w.weights().iter().map(|&x| clamp_i64(w.d() / x as u128) - 1).collect()
}

/// `w_n - 2` everywhere except the last coordinate, which gets `w_{n-1} - 2`.
pub fn max_one_weight_bound(w: &WeightVector) -> Result<Vec<i64>> {
    let n = w.len();
    if n < 2 {
        return Err(Error::ArityTooSmall { need: 2, got: n });
    }
    let ws = w.weights();
    let mut alpha = vec![ws[n - 1] as i64 - 2; n];
    alpha[n - 1] = ws[n - 2] as i64 - 2;
    Ok(alpha)
}

/// `min(alpha_i, d/w_i - 1)`.
pub fn epsilon_bound(w: &WeightVector, alpha: &[i64]) -> Vec<i64> {
    first_upper_bound(w).into_iter().zip(alpha).map(|(a, &b)| a.min(b)).collect()
}

/// `zeta_i = min({epsilon_i + 1} ∪ {w_j/w_i : j > i, w_i | w_j})`.
pub fn divisor_step_bound(w: &WeightVector, epsilon: &[i64]) -> Vec<i64> {
    let ws = w.weights();
    (0..ws.len())
        .map(|i| {
            ws[i + 1..]
                .iter()
                .filter(|&&x| x % ws[i] == 0)
                .map(|&x| (x / ws[i]) as i64)
                .fold(epsilon[i] + 1, i64::min)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueTable {
    /// `b_values[r]` is the least `w·b` over 0/1 vectors `b` with `b_i = 0` and `w·b ≡ r (mod w_i)`.
    pub b_values: Vec<u64>,
    pub c_value: u64,
}

fn max_excluding(ws: &[u64], i: usize) -> u64 {
    ws.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).max().unwrap_or(0)
}

/// 0/1 min-sum table over residues mod `w_i`, each other index used at most once.
pub fn residue_table(w: &WeightVector, i: usize) -> ResidueTable {
    let ws = w.weights();
    let m = ws[i] as usize;
    let mut dp = vec![u64::MAX; m];
    dp[0] = 0;
    let mut next = dp.clone();
    for (j, &x) in ws.iter().enumerate() {
        if j == i {
            continue;
        }
        next.copy_from_slice(&dp);
        for r in 0..m {
            if dp[r] == u64::MAX {
                continue;
            }
            let s = dp[r] + x;
            let t = (s % m as u64) as usize;
            if s < next[t] {
                next[t] = s;
            }
        }
        std::mem::swap(&mut dp, &mut next);
    }
    let empty = (ws[i] - 1) * max_excluding(ws, i);
    for b in &mut dp {
        if *b == u64::MAX {
            *b = empty;
        }
    }
    let c_value = dp.iter().copied().max().unwrap_or(0);
    ResidueTable { b_values: dp, c_value }
}

/// `floor((max(π_i w) + c_{w,i}) / w_i) - 2`, the estimate for positive-coordinate bubbles,
/// taken without checking the hypothesis under which it is valid.
pub fn positive_estimate(w: &WeightVector, i: usize) -> i64 {
    let ws = w.weights();
    let c = residue_table(w, i).c_value;
    ((max_excluding(ws, i) + c) / ws[i]) as i64 - 2
}

/// Whether `Σ_{j≠i} w_j < d + w_i`, which the positive-coordinate estimate needs.
pub fn positive_hypothesis(w: &WeightVector, i: usize) -> bool {
    let total: u128 = w.weights().iter().map(|&x| x as u128).sum();
    let wi = w.weights()[i] as u128;
    total - wi < w.d() + wi
}

fn positive_bound_from(w: &WeightVector, epsilon: &[i64]) -> Vec<i64> {
    (0..w.len())
        .map(|i| {
            if positive_hypothesis(w, i) {
                epsilon[i].min(positive_estimate(w, i))
            } else {
                epsilon[i]
            }
        })
        .collect()
}

/// Bound valid for bubbles whose coordinates are all positive; falls back to `epsilon_i`
/// wherever the estimate's hypothesis fails.
pub fn positive_bound(w: &WeightVector) -> Result<Vec<i64>> {
    let alpha = max_one_weight_bound(w)?;
    Ok(positive_bound_from(w, &epsilon_bound(w, &alpha)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundProfile {
    pub alpha: Vec<i64>,
    pub epsilon: Vec<i64>,
    pub zeta: Vec<i64>,
    pub beta: Vec<i64>,
    pub delta: Option<Vec<i64>>,
    pub gamma: Option<Vec<i64>>,
}

impl BoundProfile {
    pub fn compute(w: &WeightVector, positive: bool) -> Result<Self> {
        let alpha = max_one_weight_bound(w)?;
        let epsilon = epsilon_bound(w, &alpha);
        let zeta = divisor_step_bound(w, &epsilon);
        let beta = epsilon.iter().zip(&zeta).map(|(&e, &z)| e.min(z - 1)).collect();
        let (delta, gamma) = if positive {
            let delta = positive_bound_from(w, &epsilon);
            let gamma = delta.iter().zip(&zeta).map(|(&d, &z)| d.min(z)).collect();
            (Some(delta), Some(gamma))
        } else {
            (None, None)
        };
        Ok(BoundProfile { alpha, epsilon, zeta, beta, delta, gamma })
    }
}

/// Kuhn augmenting path from left vertex `i`.
fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if mate[j].is_none_or(|k| augment(k, adj, seen, mate)) {
            mate[j] = Some(i);
            return true;
        }
    }
    false
}

/// Minimum number of divisibility chains covering the weights (`n` minus a maximum matching).
///
/// Equal weights are chained in index order so the relation stays acyclic.
pub fn chain_partition_bound(w: &WeightVector) -> usize {
    let ws = w.weights();
    let n = ws.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && ws[j] % ws[i] == 0 && (ws[i] < ws[j] || i < j)).collect())
        .collect();
    let mut mate = vec![None; n];
    let mut matched = 0;
    for i in 0..n {
        let mut seen = vec![false; n];
        if augment(i, &adj, &mut seen, &mut mate) {
            matched += 1;
        }
    }
    n - matched
}

/// Some ordering satisfies `w_1 | w_2 | ... | w_{n-2} | w_{n-1} + w_n`.
pub fn special_chain_check(w: &WeightVector) -> Result<bool> {
    let ws = w.weights();
    let n = ws.len();
    if n < 3 {
        return Err(Error::ArityTooSmall { need: 3, got: n });
    }
    for a in 0..n {
        for b in a + 1..n {
            // `ws` is sorted, so the rest is too.
            let rest: Vec<u64> = (0..n).filter(|&j| j != a && j != b).map(|j| ws[j]).collect();
            let chain = rest.windows(2).all(|p| p[1] % p[0] == 0);
            if chain && (ws[a] + ws[b]) % rest[rest.len() - 1] == 0 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `Σ_{i∈I} w_i u_i <= d + (|I| - 1)·lcm(w_I) - Σ_{i∈I} w_i`.
pub fn lcm_subset_bound(w: &WeightVector, u: &[i64], subset: &[usize]) -> bool {
    let ws = w.weights();
    let m = subset.iter().fold(1u128, |acc, &i| lcm(acc, ws[i] as u128).expect("divides d"));
    let lhs: i128 = subset.iter().map(|&i| ws[i] as i128 * u[i] as i128).sum();
    let sum_w: i128 = subset.iter().map(|&i| ws[i] as i128).sum();
    lhs <= w.d() as i128 + (subset.len() as i128 - 1) * m as i128 - sum_w
}

pub fn is_pairwise_coprime(w: &WeightVector) -> bool {
    let ws = w.weights();
    (0..ws.len()).all(|i| (i + 1..ws.len()).all(|j| gcd_u64(ws[i], ws[j]) == 1))
}

/// Every `n - 1` of the weights are coprime.
pub fn is_well_formed(w: &WeightVector) -> bool {
    let ws = w.weights();
    (0..ws.len()).all(|i| {
        let g = ws.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |acc, (_, &x)| gcd_u64(acc, x));
        g == 1
    })
}

pub const DELORME_MAX_N: usize = 30;

fn subset_lcm_sums(ws: &[u64], start: usize, size: usize, acc: u128, sums: &mut [u128]) -> Result<()> {
    for j in start..ws.len() {
        let m = lcm(acc, ws[j] as u128)?;
        sums[size + 1] = sums[size + 1].checked_add(m).ok_or(Error::Overflow)?;
        subset_lcm_sums(ws, j + 1, size + 1, m, sums)?;
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Delorme's bound `G(w)`, computed exactly.
pub fn delorme_g(w: &WeightVector) -> Result<Ratio<i128>> {
    let ws = w.weights();
    let n = ws.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > DELORME_MAX_N {
        return Err(Error::ArityTooLarge { max: DELORME_MAX_N, got: n });
    }
    let total: i128 = ws.iter().map(|&x| x as i128).sum();
    if n == 1 {
        return Ok(Ratio::from_integer(-total));
    }
    let mut sums = vec![0u128; n + 1];
    subset_lcm_sums(ws, 0, 0, 1, &mut sums)?;
    let mut acc = Ratio::from_integer(0i128);
    for (v, &s) in sums.iter().enumerate().skip(2) {
        let s = i128::try_from(s).map_err(|_| Error::Overflow)?;
        let term = Ratio::new(s, binomial(n as u64 - 2, v as u64 - 2));
        acc = acc.checked_add(&term).ok_or(Error::Overflow)?;
    }
    let scaled = acc.checked_mul(&Ratio::new(1, n as i128 - 1)).ok_or(Error::Overflow)?;
    scaled.checked_add(&Ratio::from_integer(-total)).ok_or(Error::Overflow)
}

/// gcd of the weights other than `i`.
pub fn gcd_without(w: &WeightVector, i: usize) -> u64 {
    let ws = w.weights();
    gcd_vector(&[&ws[..i], &ws[i + 1..]].concat())
}
