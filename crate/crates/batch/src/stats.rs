//! Population statistics: comparison with Delorme's bound and bubble-free density.

use bubble_core::bounds::{delorme_g, positive_estimate, BoundProfile};
use bubble_core::enumeration::has_bubble;
use bubble_core::{Low, Result, WeightVector};
use num_rational::Ratio;
use serde::Serialize;

/// Strictly increasing vectors with entries in `1..=max_entry` and length in `n_min..=n_max`,
/// in colexicographic order of the underlying subsets.
pub fn increasing_vectors(max_entry: u32, n_min: usize, n_max: usize) -> impl Iterator<Item = Vec<u64>> {
    (1u64..1u64 << max_entry).filter_map(move |mask| {
        let n = mask.count_ones() as usize;
        (n_min..=n_max).contains(&n).then(|| crate::sweep::mask_to_vector(mask))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DelormeSummary {
    pub max_entry: u32,
    pub n_min: usize,
    pub n_max: usize,
    pub vectors: usize,
    /// Vectors where the all-positive coordinate estimate beats `G(w)`.
    pub estimate_wins: usize,
    /// Vectors where the enumeration box of the bubble search beats `G(w)`.
    pub gamma_wins: usize,
}

impl DelormeSummary {
    pub fn estimate_fraction(&self) -> f64 {
        self.estimate_wins as f64 / self.vectors as f64
    }

    pub fn gamma_fraction(&self) -> f64 {
        self.gamma_wins as f64 / self.vectors as f64
    }
}

fn bound_below(w: &WeightVector, v: &[i64], g: &Ratio<i128>) -> Result<bool> {
    let value = w.dot(v)? - w.d() as i128;
    Ok(Ratio::from_integer(value) < *g)
}

/// `(estimate < G, gamma < G)` for one vector, evaluated on the gcd-reduced weights.
pub fn delorme_compare(raw: &[u64]) -> Result<(bool, bool)> {
    let w = WeightVector::new(raw)?.reduced();
    let g = delorme_g(&w)?;
    let v: Vec<i64> = (0..w.len()).map(|i| positive_estimate(&w, i)).collect();
    let gamma = BoundProfile::compute(&w, true)?.gamma.expect("positive profile has gamma");
    Ok((bound_below(&w, &v, &g)?, bound_below(&w, &gamma, &g)?))
}

pub fn delorme_stats(max_entry: u32, n_min: usize, n_max: usize) -> Result<DelormeSummary> {
    let mut s = DelormeSummary { max_entry, n_min, n_max, vectors: 0, estimate_wins: 0, gamma_wins: 0 };
    for w in increasing_vectors(max_entry, n_min, n_max) {
        let (a, b) = delorme_compare(&w)?;
        s.vectors += 1;
        s.estimate_wins += a as usize;
        s.gamma_wins += b as usize;
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityPoint {
    pub n: usize,
    pub m: u64,
    pub total: u128,
    pub bubble_free: u128,
}

impl DensityPoint {
    pub fn fraction(&self) -> f64 {
        self.bubble_free as f64 / self.total as f64
    }
}

/// Exact `p(n, M)`: the share of `{1..M}^n` without bubbles.
///
/// Bubble existence is invariant under permutation, so each nondecreasing vector is counted
/// with the number of orderings it represents.
pub fn density_exact(n: usize, m: u64) -> Result<DensityPoint> {
    let total = (m as u128).pow(n as u32);
    let mut free = 0u128;
    let mut cur = vec![1u64; n];
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    loop {
        if n < 3 || !has_bubble(&cur, Low::Zero)? {
            let mut orderings = fact(n);
            let mut run = 1;
            for j in 1..=n {
                if j < n && cur[j] == cur[j - 1] {
                    run += 1;
                } else {
                    orderings /= fact(run);
                    run = 1;
                }
            }
            free += orderings;
        }
        // Next nondecreasing vector.
        let Some(j) = (0..n).rev().find(|&j| cur[j] < m) else { break };
        let x = cur[j] + 1;
        cur[j..].iter_mut().for_each(|c| *c = x);
    }
    Ok(DensityPoint { n, m, total, bubble_free: free })
}
