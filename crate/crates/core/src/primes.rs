//! Prime tuples `p` with their invariant `k_p`, and the weight families built from them.

use serde::Serialize;

use crate::arith::{checked_dot, WeightVector};
use crate::bounds::{chain_partition_bound, is_well_formed};
use crate::classify::{condition_2_2, Condition22Verdict};
use crate::enumeration::{bubbles, Low};
use crate::error::{Error, Result};
use crate::oracle::oracle_is_bubble;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin; these bases are exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u128, m: u128) -> Option<u128> {
    let (mut r0, mut r1) = ((a % m) as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return (m == 1).then_some(0);
    }
    Some(s0.rem_euclid(m as i128) as u128)
}

/// Solves `x ≡ r_i (mod m_i)` for pairwise coprime moduli; returns `(x, Π m_i)`.
pub fn crt(residues: &[u128], moduli: &[u128]) -> Result<(u128, u128)> {
    let mut x = 0u128;
    let mut m = 1u128;
    for (&r, &mi) in residues.iter().zip(moduli) {
        let inv = mod_inverse(m % mi, mi).ok_or_else(|| Error::PreconditionViolated("moduli not coprime".into()))?;
        let diff = (r % mi + mi - x % mi) % mi;
        let t = diff * inv % mi;
        x = x.checked_add(m.checked_mul(t).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
        m = m.checked_mul(mi).ok_or(Error::Overflow)?;
    }
    Ok((x % m, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeTuple {
    /// Strictly decreasing.
    pub p: Vec<u64>,
    /// `1 <= alpha_i < p_i` with `Σ alpha_i/p_i - Π 1/p_i = k`.
    pub alpha: Vec<u64>,
    pub k: u64,
}

impl PrimeTuple {
    pub fn product(&self) -> u128 {
        self.p.iter().map(|&x| x as u128).product()
    }

    /// `⌈Σ_{j≠i} alpha_j/p_j⌉ = k` for every `i`, checked in integers.
    pub fn ceiling_identity_holds(&self) -> bool {
        let big = self.product();
        let terms: Vec<u128> = self.p.iter().zip(&self.alpha).map(|(&p, &a)| a as u128 * (big / p as u128)).collect();
        let total: u128 = terms.iter().sum();
        terms.iter().all(|&t| (total - t).div_ceil(big) == self.k as u128)
    }
}

fn check_primes(p: &[u64]) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::ArityTooSmall { need: 2, got: p.len() });
    }
    if let Some(&x) = p.iter().find(|&&x| !is_prime(x)) {
        return Err(Error::NotPrime(x));
    }
    let mut s = p.to_vec();
    s.sort_unstable();
    if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Duplicate(w[0]));
    }
    Ok(())
}

/// `alpha_i = (Π_{j≠i} p_j)^{-1} mod p_i`, and `k` from `Σ alpha_i·Πp/p_i = 1 + k·Πp`.
pub fn kp(p: &[u64]) -> Result<PrimeTuple> {
    check_primes(p)?;
    let mut p = p.to_vec();
    p.sort_unstable_by(|a, b| b.cmp(a));
    let big = p.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128)).ok_or(Error::Overflow)?;
    let mut alpha = Vec::with_capacity(p.len());
    let mut total = 0u128;
    for &pi in &p {
        let cof = big / pi as u128;
        let a = mod_inverse(cof % pi as u128, pi as u128).expect("distinct primes") as u64;
        alpha.push(a);
        total = total.checked_add(a as u128 * cof).ok_or(Error::Overflow)?;
    }
    debug_assert_eq!(total % big, 1);
    let k = ((total - 1) / big) as u64;
    Ok(PrimeTuple { p, alpha, k })
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&x| is_prime(x)).collect()
}

pub const DEFAULT_P1_CEILING: u64 = 200;

/// First tuple of `m` distinct primes, in lexicographic order of `(p_1, p_2, ...)` with
/// `p_1 > p_2 > ...`, whose invariant equals `target`.
pub fn find_lex_smallest(m: usize, target: u64, ceiling: u64) -> Result<PrimeTuple> {
    if m < 2 {
        return Err(Error::ArityTooSmall { need: 2, got: m });
    }
    let primes = primes_up_to(ceiling);
    let mut chosen = Vec::with_capacity(m);
    fn dfs(primes: &[u64], below: usize, m: usize, target: u64, chosen: &mut Vec<u64>) -> Option<PrimeTuple> {
        if chosen.len() == m {
            let t = kp(chosen).expect("distinct primes");
            return (t.k == target).then_some(t);
        }
        let left = m - chosen.len();
        // Position needs `left - 1` smaller primes after it.
        for idx in left - 1..below {
            chosen.push(primes[idx]);
            let hit = dfs(primes, idx, m, target, chosen);
            chosen.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
    for top in m - 1..primes.len() {
        chosen.push(primes[top]);
        let hit = dfs(&primes, top, m, target, &mut chosen);
        chosen.pop();
        if let Some(t) = hit {
            return Ok(t);
        }
    }
    Err(Error::CeilingExceeded(ceiling))
}

pub const DEFAULT_SCAN_BUDGET: u64 = 1_000_000;

/// Completes `tail` with a new prime `p_1` so that the tail keeps the residues `u_tail`.
///
/// The result is sorted decreasingly, so `p_1` need not come first.
pub fn extend_tuple(tail: &[u64], u_tail: &[u64], budget: u64) -> Result<PrimeTuple> {
    if tail.is_empty() {
        return Err(Error::ArityTooSmall { need: 1, got: 0 });
    }
    if tail.len() != u_tail.len() {
        return Err(Error::LengthMismatch { left: tail.len(), right: u_tail.len() });
    }
    if let Some(&x) = tail.iter().find(|&&x| !is_prime(x)) {
        return Err(Error::NotPrime(x));
    }
    if tail.len() > 1 {
        check_primes(tail)?;
    }
    if tail.iter().zip(u_tail).any(|(&p, &u)| u == 0 || u >= p) {
        return Err(Error::PreconditionViolated("residues must lie in 1..p-1".into()));
    }
    let q = tail.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128)).ok_or(Error::Overflow)?;
    let moduli: Vec<u128> = tail.iter().map(|&p| p as u128).collect();
    let residues: Vec<u128> = tail
        .iter()
        .zip(u_tail)
        .map(|(&p, &u)| {
            let p = p as u128;
            mod_inverse(u as u128 * (q / p) % p, p).expect("unit mod p")
        })
        .collect();
    let (x0, _) = crt(&residues, &moduli)?;
    for t in 0..budget {
        let x = x0 + t as u128 * q;
        let Ok(x) = u64::try_from(x) else { break };
        if x < 2 || tail.contains(&x) || !is_prime(x) {
            continue;
        }
        let tuple = kp(&[&[x], tail].concat())?;
        let expected: u128 = tail.iter().zip(u_tail).map(|(&p, &u)| u as u128 * (q / p as u128)).sum::<u128>().div_ceil(q);
        debug_assert_eq!(tuple.k as u128, expected);
        return Ok(tuple);
    }
    Err(Error::NoSolutionInBudget(budget))
}

/// A weight vector and bubble from one of the prime-tuple families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    /// Weights and bubble in the order of the defining formula.
    pub w: Vec<u64>,
    pub u: Vec<i64>,
    /// The same pair with weights sorted nondecreasingly.
    pub w_sorted: Vec<u64>,
    pub u_sorted: Vec<i64>,
    pub k: u64,
    pub d: u128,
    pub dot: u128,
    pub expected_dot: u128,
}

fn assemble(w: Vec<u64>, u: Vec<i64>, k: u64, expected_dot: u128) -> Result<Family> {
    let wv = WeightVector::new(&w)?;
    let dot = checked_dot(&w, &u)? as u128;
    if dot != expected_dot || !oracle_is_bubble(&w, &u) {
        return Err(Error::PreconditionViolated(format!("constructed vector {u:?} is not a bubble of {w:?} with weight {expected_dot}")));
    }
    Ok(Family { w_sorted: wv.weights().to_vec(), u_sorted: wv.to_sorted_order(&u), k, d: wv.d(), dot, expected_dot, w, u })
}

fn cofactors(t: &PrimeTuple) -> Result<(u64, Vec<u64>)> {
    let big = u64::try_from(t.product()).map_err(|_| Error::Overflow)?;
    Ok((big, t.p.iter().map(|&p| big / p).collect()))
}

/// The graded family: products `Πp/p_i`, then `1`, then copies of `Πp`; bubble weight `k·d`.
pub fn family_graded(t: &PrimeTuple, n: usize) -> Result<Family> {
    if t.k != 1 {
        return Err(Error::PreconditionViolated(format!("need k_p = 1, got {}", t.k)));
    }
    let k = t.p.len() as u64 - 1;
    if k < 2 || n < k as usize + 2 {
        return Err(Error::PreconditionViolated(format!("need 2 <= k <= n - 2, got k = {k}, n = {n}")));
    }
    let (big, mut w) = cofactors(t)?;
    let mut u: Vec<i64> = t.p.iter().zip(&t.alpha).map(|(&p, &a)| (p - a) as i64).collect();
    w.push(1);
    u.push(1);
    w.resize(n, big);
    u.resize(n, 0);
    assemble(w, u, k, k as u128 * big as u128)
}

/// The Rees family: products `Πp/p_i` padded with copies of `Πp`; bubble weight `k·d + 1`.
pub fn family_rees(t: &PrimeTuple, n: usize) -> Result<Family> {
    let k = t.k;
    if t.p.len() as u64 != k + 1 || k < 2 || n < k as usize + 1 {
        return Err(Error::PreconditionViolated(format!("need k_p = len - 1 >= 2 and n >= k + 1, got k = {k}, n = {n}")));
    }
    let (big, mut w) = cofactors(t)?;
    let mut u: Vec<i64> = t.alpha.iter().map(|&a| a as i64).collect();
    w.resize(n, big);
    u.resize(n, 0);
    assemble(w, u, k, k as u128 * big as u128 + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub is_bubble: bool,
    pub dot_ok: bool,
    pub condition_2_2: Condition22Verdict,
    pub upper_bound_ok: bool,
    /// `"chain partition"` or `"enumeration"`.
    pub upper_bound_method: &'static str,
    pub well_formed: bool,
}

impl FamilyReport {
    pub fn passes(&self) -> bool {
        self.is_bubble && self.dot_ok && self.condition_2_2.holds() && self.upper_bound_ok
    }
}

/// Checks the claims attached to a family member, with multiplier `l = k - 1`.
pub fn verify_family(f: &Family, m_cap: Option<usize>) -> Result<FamilyReport> {
    let is_bubble = oracle_is_bubble(&f.w, &f.u);
    let dot_ok = checked_dot(&f.w, &f.u)? as u128 == f.expected_dot;
    let l = (f.k - 1).max(1);
    let condition = condition_2_2(&f.w, &f.u, l, m_cap)?;
    let wv = WeightVector::new(&f.w)?;
    let chains = chain_partition_bound(&wv);
    let limit = (f.k as u128 + 1) * f.d;
    let (upper_bound_ok, upper_bound_method) = if chains as u64 <= f.k + 1 {
        (true, "chain partition")
    } else {
        let all = bubbles(&f.w, Low::Zero)?;
        (all.iter().all(|b| b.dot < limit), "enumeration")
    };
    Ok(FamilyReport {
        is_bubble,
        dot_ok,
        condition_2_2: condition,
        upper_bound_ok,
        upper_bound_method,
        well_formed: is_well_formed(&wv),
    })
}
