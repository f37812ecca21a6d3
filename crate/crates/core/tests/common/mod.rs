#![allow(dead_code)]

use proptest::prelude::*;

/// Vectors of divisors of a highly composite number; bubbles are common among these.
pub fn divisor_weights(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<u64>> {
    let bases = vec![12u64, 24, 30, 36, 42, 60, 72, 84, 90, 120, 126, 180, 210];
    (prop::sample::select(bases), prop::collection::vec(any::<prop::sample::Index>(), n)).prop_map(|(m, idx)| {
        let divs: Vec<u64> = (1..=m).filter(|x| m % x == 0).collect();
        idx.iter().map(|i| divs[i.index(divs.len())]).collect()
    })
}

/// Small weights in any order, with repeats.
pub fn small_weights(n: std::ops::RangeInclusive<usize>, max: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=max, n)
}

/// Each weight is a product of two or three primes from a small pool, with an optional extra
/// factor; vectors like `(6, 14, 21)` arise this way.
pub fn prime_product_weights() -> impl Strategy<Value = Vec<u64>> {
    let pool = [2u64, 3, 5, 7];
    prop::collection::vec((prop::sample::subsequence(pool.to_vec(), 2..=3), 1u64..=2), 3..=5)
        .prop_map(|ws| ws.into_iter().map(|(ps, extra)| ps.iter().product::<u64>() * extra).collect())
}

pub fn mixed_weights() -> impl Strategy<Value = Vec<u64>> {
    prop_oneof![divisor_weights(3..=6), small_weights(3..=5, 40), prime_product_weights()]
}

pub fn sorted_by_dot(mut v: Vec<bubble_core::Bubble>) -> Vec<bubble_core::Bubble> {
    v.sort_by(|a, b| a.dot.cmp(&b.dot).then_with(|| a.u.cmp(&b.u)));
    v
}

/// Strictly increasing vectors with entries `<= max`, from the bits of a mask.
pub fn increasing(max: u32) -> impl Iterator<Item = Vec<u64>> {
    (1u64..1 << max).map(|mut m| {
        let mut v = Vec::new();
        while m != 0 {
            v.push(m.trailing_zeros() as u64 + 1);
            m &= m - 1;
        }
        v
    })
}
