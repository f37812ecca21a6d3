//! Integer helpers, weight normalization and arranged threshold lists.

use crate::error::{Error, Result};

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd(a as u128, b as u128) as u64
}

/// `lcm(a, b)`, or `Overflow` past 128 bits.
pub fn lcm(a: u128, b: u128) -> Result<u128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow)
}

pub fn lcm_vector(w: &[u64]) -> Result<u128> {
    if w.is_empty() {
        return Err(Error::EmptyInput);
    }
    if w.contains(&0) {
        return Err(Error::ZeroWeight);
    }
    w.iter().try_fold(1u128, |acc, &x| lcm(acc, x as u128))
}

/// gcd of all entries; 0 for an empty slice.
pub fn gcd_vector(w: &[u64]) -> u64 {
    w.iter().fold(0, |acc, &x| gcd_u64(acc, x))
}

pub fn checked_dot(w: &[u64], u: &[i64]) -> Result<i128> {
    if w.len() != u.len() {
        return Err(Error::LengthMismatch { left: w.len(), right: u.len() });
    }
    w.iter().zip(u).try_fold(0i128, |acc, (&wi, &ui)| {
        (wi as i128)
            .checked_mul(ui as i128)
            .and_then(|t| acc.checked_add(t))
            .ok_or(Error::Overflow)
    })
}

/// Product order: `a ⪯ b`.
pub fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Weights sorted nondecreasingly, with the lcm, gcd and the sorting permutation cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<u64>,
    d: u128,
    g: u64,
    /// `sort_perm[j]` is the input position of the `j`-th smallest weight.
    sort_perm: Vec<usize>,
}

pub fn normalize(raw: &[u64]) -> Result<WeightVector> {
    WeightVector::new(raw)
}

impl WeightVector {
    pub fn new(raw: &[u64]) -> Result<Self> {
        let d = lcm_vector(raw)?;
        let mut sort_perm: Vec<usize> = (0..raw.len()).collect();
        sort_perm.sort_by_key(|&i| raw[i]);
        let weights = sort_perm.iter().map(|&i| raw[i]).collect();
        Ok(WeightVector { weights, d, g: gcd_vector(raw), sort_perm })
    }

    /// Skips the sort; `weights` must already be nondecreasing and positive.
    pub fn from_sorted(weights: Vec<u64>) -> Result<Self> {
        debug_assert!(weights.windows(2).all(|p| p[0] <= p[1]));
        let d = lcm_vector(&weights)?;
        let g = gcd_vector(&weights);
        let sort_perm = (0..weights.len()).collect();
        Ok(WeightVector { weights, d, g, sort_perm })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn d(&self) -> u128 {
        self.d
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn sort_perm(&self) -> &[usize] {
        &self.sort_perm
    }

    pub fn input_weights(&self) -> Vec<u64> {
        self.to_input_order(&self.weights)
    }

    /// The same vector with every weight divided by the gcd.
    pub fn reduced(&self) -> WeightVector {
        let g = self.g;
        WeightVector {
            weights: self.weights.iter().map(|&x| x / g).collect(),
            d: self.d / g as u128,
            g: 1,
            sort_perm: self.sort_perm.clone(),
        }
    }

    /// Moves a sorted-order vector back to input order.
    pub fn to_input_order<T: Copy + Default>(&self, sorted: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); sorted.len()];
        for (j, &i) in self.sort_perm.iter().enumerate() {
            out[i] = sorted[j];
        }
        out
    }

    pub fn to_sorted_order<T: Copy>(&self, input: &[T]) -> Vec<T> {
        self.sort_perm.iter().map(|&i| input[i]).collect()
    }

    pub fn dot(&self, u: &[i64]) -> Result<i128> {
        checked_dot(&self.weights, u)
    }
}

/// A lexicographically sorted list in which no two neighbours are comparable under `⪯`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThresholdList {
    items: Vec<Vec<i64>>,
}

/// Lex sort, then one pass that drops anything dominating the last kept item.
///
/// Every minimal element survives: after sorting, a later item can never be `⪯` an earlier one
/// unless the two are equal.
pub fn arrangement(mut items: Vec<Vec<i64>>) -> ThresholdList {
    items.sort_unstable();
    let mut kept: Vec<Vec<i64>> = Vec::with_capacity(items.len());
    for v in items {
        if kept.last().is_some_and(|last| leq(last, &v)) {
            continue;
        }
        kept.push(v);
    }
    ThresholdList { items: kept }
}

impl ThresholdList {
    /// Accepts an already arranged list.
    pub fn from_arranged(items: Vec<Vec<i64>>) -> Result<Self> {
        let list = ThresholdList { items };
        if let Some(n) = list.items.first().map(Vec::len) {
            if list.items.iter().any(|v| v.len() != n) {
                return Err(Error::InvalidThresholds("ragged items".into()));
            }
        }
        if !list.is_arranged() {
            return Err(Error::InvalidThresholds("not arranged".into()));
        }
        Ok(list)
    }

    pub fn items(&self) -> &[Vec<i64>] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Vec<i64>> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_arranged(&self) -> bool {
        self.items.windows(2).all(|p| p[0] < p[1] && !leq(&p[0], &p[1]) && !leq(&p[1], &p[0]))
    }

    /// Every coordinate axis carries some multiple `c·e_i`.
    pub fn is_marked(&self, n: usize) -> bool {
        (0..n).all(|i| {
            self.items
                .iter()
                .any(|v| v.iter().enumerate().all(|(j, &x)| j == i || x == 0))
        })
    }

    /// Is some item `⪯ u`?
    pub fn blocks(&self, u: &[i64]) -> bool {
        self.items.iter().any(|v| leq(v, u))
    }
}
