//! Brute-force references. Nothing here shares code with the optimized search or its bounds.

use crate::arith::{checked_dot, lcm_vector};
use crate::enumeration::Bubble;
use crate::error::{Error, Result};

pub const DEFAULT_BOX_CAP: u128 = 10_000_000;

/// Does some `v ⪯ u` have `w·v = target`? Depth-first over coordinates, heaviest first.
fn hits_exactly(w: &[u64], u: &[i64], target: i128) -> bool {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(w[i]));
    let ws: Vec<i128> = order.iter().map(|&i| w[i] as i128).collect();
    let us: Vec<i128> = order.iter().map(|&i| u[i].max(0) as i128).collect();
    let mut rest = vec![0i128; ws.len() + 1];
    for j in (0..ws.len()).rev() {
        rest[j] = rest[j + 1] + ws[j] * us[j];
    }
    fn dfs(ws: &[i128], us: &[i128], rest: &[i128], j: usize, t: i128) -> bool {
        if t == 0 {
            return true;
        }
        if j == ws.len() || t > rest[j] {
            return false;
        }
        if j + 1 == ws.len() {
            return t % ws[j] == 0 && t / ws[j] <= us[j];
        }
        let hi = us[j].min(t / ws[j]);
        (0..=hi).rev().any(|x| dfs(ws, us, rest, j + 1, t - x * ws[j]))
    }
    dfs(&ws, &us, &rest, 0, target)
}

/// Checks the definition directly: `w·u >= 2d` and no `v ⪯ u` of weight `d`.
pub fn oracle_is_bubble(w: &[u64], u: &[i64]) -> bool {
    let Ok(d) = lcm_vector(w) else { return false };
    if u.len() != w.len() || u.iter().any(|&x| x < 0) {
        return false;
    }
    let Ok(dot) = checked_dot(w, u) else { return false };
    dot >= 2 * d as i128 && !hits_exactly(w, u, d as i128)
}

/// The box `∏ [0, d/w_i - 1]` that contains every bubble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBox {
    pub ceiling: Vec<i64>,
    pub volume: u128,
}

impl OracleBox {
    pub fn new(w: &[u64]) -> Result<Self> {
        let d = lcm_vector(w)?;
        let ceiling: Vec<i64> = w.iter().map(|&x| (d / x as u128) as i64 - 1).collect();
        let volume = ceiling
            .iter()
            .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128 + 1))
            .unwrap_or(u128::MAX);
        Ok(OracleBox { ceiling, volume })
    }
}

/// Bitset of reachable sums `0..=d`.
#[derive(Clone)]
struct Reach {
    words: Vec<u64>,
    d: usize,
}

impl Reach {
    fn zero(d: usize) -> Self {
        let mut words = vec![0u64; d / 64 + 1];
        words[0] = 1;
        Reach { words, d }
    }

    fn has_d(&self) -> bool {
        self.words[self.d / 64] >> (self.d % 64) & 1 == 1
    }

    /// `self |= base << s`, truncated past `d`.
    fn or_shifted(&mut self, base: &Reach, s: usize) {
        if s > self.d {
            return;
        }
        let (ws, bs) = (s / 64, s % 64);
        let len = self.words.len();
        for i in (ws..len).rev() {
            let src = i - ws;
            let mut v = base.words[src] << bs;
            if bs != 0 && src > 0 {
                v |= base.words[src - 1] >> (64 - bs);
            }
            self.words[i] |= v;
        }
        let extra = 63 - self.d % 64;
        self.words[len - 1] &= u64::MAX >> extra;
    }
}

struct BoxWalk<'a> {
    w: &'a [u64],
    ceiling: &'a [i64],
    order: Vec<usize>,
    tail_cap: Vec<i128>,
    two_d: i128,
    cur: Vec<i64>,
    out: Vec<Vec<i64>>,
}

impl BoxWalk<'_> {
    fn walk(&mut self, j: usize, dot: i128, reach: &Reach) {
        if j == self.order.len() {
            if dot >= self.two_d {
                self.out.push(self.cur.clone());
            }
            return;
        }
        let i = self.order[j];
        let wi = self.w[i] as usize;
        let mut r = reach.clone();
        for c in 0..=self.ceiling[i] {
            if c > 0 {
                r.or_shifted(reach, c as usize * wi);
            }
            if r.has_d() {
                break;
            }
            let dot_c = dot + c as i128 * wi as i128;
            if dot_c + self.tail_cap[j + 1] < self.two_d {
                continue;
            }
            self.cur[i] = c;
            self.walk(j + 1, dot_c, &r);
        }
        self.cur[i] = 0;
    }
}

/// Every bubble, found by walking the whole box.
pub fn oracle_bubbles(w: &[u64], cap: u128) -> Result<Vec<Bubble>> {
    let d = lcm_vector(w)?;
    let b = OracleBox::new(w)?;
    if b.volume > cap {
        return Err(Error::BoxTooLarge { volume: b.volume, cap });
    }
    let d_bits = usize::try_from(d).map_err(|_| Error::Overflow)?;
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(w[i]));
    let mut tail_cap = vec![0i128; w.len() + 1];
    for j in (0..w.len()).rev() {
        let i = order[j];
        tail_cap[j] = tail_cap[j + 1] + w[i] as i128 * b.ceiling[i] as i128;
    }
    let mut walk = BoxWalk {
        w,
        ceiling: &b.ceiling,
        order,
        tail_cap,
        two_d: 2 * d as i128,
        cur: vec![0; w.len()],
        out: Vec::new(),
    };
    walk.walk(0, 0, &Reach::zero(d_bits));
    let mut out: Vec<Bubble> = walk.out.into_iter().map(|u| Bubble::new(w, d, u)).collect();
    out.sort_by(|a, b| a.dot.cmp(&b.dot).then_with(|| a.u.cmp(&b.u)));
    Ok(out)
}

/// Splits `u` into `m` parts of weight at least `l·d` by trying every sub-box point.
pub fn oracle_decompose(w: &[u64], u: &[i64], m: usize, l: u64) -> Option<Vec<Vec<i64>>> {
    let d = lcm_vector(w).ok()?;
    let part = d as i128 * l as i128;
    fn split(w: &[u64], rem: &[i64], m: usize, part: i128) -> Option<Vec<Vec<i64>>> {
        let total = checked_dot(w, rem).ok()?;
        if total < m as i128 * part {
            return None;
        }
        if m == 1 {
            return Some(vec![rem.to_vec()]);
        }
        let mut v = vec![0i64; rem.len()];
        loop {
            let wv = checked_dot(w, &v).ok()?;
            if wv >= part && total - wv >= (m as i128 - 1) * part {
                let rest: Vec<i64> = rem.iter().zip(&v).map(|(a, b)| a - b).collect();
                if let Some(mut parts) = split(w, &rest, m - 1, part) {
                    parts.insert(0, v.clone());
                    return Some(parts);
                }
            }
            // Odometer step over the box `0 ⪯ v ⪯ rem`.
            let mut i = 0;
            while i < v.len() && v[i] == rem[i] {
                v[i] = 0;
                i += 1;
            }
            if i == v.len() {
                return None;
            }
            v[i] += 1;
        }
    }
    if m == 0 || u.len() != w.len() {
        return None;
    }
    split(w, u, m, part)
}

/// `(k, alpha)` by scanning every `u` with `1 <= u_i < p_i` for `Σ u_i/p_i - Π 1/p_i ∈ Z`.
///
/// Fails unless the scan finds exactly one solution.
pub fn oracle_kp(p: &[u64], cap: u128) -> Result<(u64, Vec<u64>)> {
    if p.len() < 2 {
        return Err(Error::ArityTooSmall { need: 2, got: p.len() });
    }
    let volume = p.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128 - 1)).unwrap_or(u128::MAX);
    if volume > cap {
        return Err(Error::BoxTooLarge { volume, cap });
    }
    let big: u128 = p.iter().map(|&x| x as u128).product();
    let cof: Vec<u128> = p.iter().map(|&x| big / x as u128).collect();
    let mut u = vec![1u64; p.len()];
    let mut found = Vec::new();
    loop {
        let s: u128 = u.iter().zip(&cof).map(|(&a, &c)| a as u128 * c).sum();
        if s % big == 1 % big {
            found.push(((s / big) as u64, u.clone()));
        }
        let mut i = 0;
        while i < u.len() && u[i] == p[i] - 1 {
            u[i] = 1;
            i += 1;
        }
        if i == u.len() {
            break;
        }
        u[i] += 1;
    }
    if found.len() != 1 {
        return Err(Error::PreconditionViolated(format!("{} solutions for {p:?}", found.len())));
    }
    Ok(found.pop().expect("one solution"))
}
