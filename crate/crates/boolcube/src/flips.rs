//! Prefix/suffix flips and single coordinate flips, plus exhaustive audits
//! of the injections built from them.

use crate::error::{CubeError, Result};
use crate::rational::{lcm_denominators, scale_to_i64, Rational};
use num_traits::{Num, Signed};
use std::collections::HashSet;

/// How the partial sum must compare with `r` to stop a suffix flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    /// `S_i ≥ r`
    AtLeast,
    /// `S_i > r`
    Above,
}

impl Crossing {
    fn hit<T: PartialOrd>(self, s: &T, r: &T) -> bool {
        match self {
            Crossing::AtLeast => s >= r,
            Crossing::Above => s > r,
        }
    }
}

/// First `t ∈ 0..=n` whose partial difference sum crosses `r`.
pub fn flip_index<T: Num + Clone + PartialOrd>(u: &[T], v: &[T], r: &T, crossing: Crossing) -> Option<usize> {
    let mut s = T::zero();
    if crossing.hit(&s, r) {
        return Some(0);
    }
    for (i, (a, b)) in u.iter().zip(v).enumerate() {
        s = s + a.clone() - b.clone();
        if crossing.hit(&s, r) {
            return Some(i + 1);
        }
    }
    None
}

pub fn suffix_flip_by<T: Num + Clone + PartialOrd>(u: &[T], v: &[T], r: &T, crossing: Crossing) -> Result<(Vec<T>, Vec<T>)> {
    if u.len() != v.len() {
        return Err(CubeError::Length { expected: u.len(), got: v.len() });
    }
    let t = flip_index(u, v, r, crossing).ok_or_else(|| CubeError::Domain("no partial sum reaches r".into()))?;
    let mut a = u.to_vec();
    let mut b = v.to_vec();
    a[t..].clone_from_slice(&v[t..]);
    b[t..].clone_from_slice(&u[t..]);
    Ok((a, b))
}

/// Swap every coordinate after the first index whose partial difference sum is `≥ r`.
pub fn suffix_flip<T: Num + Clone + PartialOrd>(u: &[T], v: &[T], r: &T) -> Result<(Vec<T>, Vec<T>)> {
    suffix_flip_by(u, v, r, Crossing::AtLeast)
}

/// Negate the prefix ending at the first index with `Σ_{i≤t} 2u_i ≥ r`.
pub fn prefix_flip<T: Num + Clone + PartialOrd + Signed>(u: &[T], r: &T) -> Result<Vec<T>> {
    let neg: Vec<T> = u.iter().map(|x| -x.clone()).collect();
    let (_, v) = suffix_flip(u, &neg, r)?;
    Ok(v)
}

fn check_signs(x: &[i8]) -> Result<()> {
    if x.iter().all(|&s| s == 1 || s == -1) {
        Ok(())
    } else {
        Err(CubeError::Domain("entries must be ±1".into()))
    }
}

/// Index of the first maximal partial sum, if that maximum is positive.
fn first_argmax(x: &[i8]) -> Option<usize> {
    let (mut s, mut best, mut at) = (0i32, 0i32, None);
    for (i, &xi) in x.iter().enumerate() {
        s += xi as i32;
        if s > best {
            best = s;
            at = Some(i);
        }
    }
    at
}

/// Last `t ∈ 0..n` maximising `S_t`, with `S_0 = 0` included.
pub fn last_argmax(x: &[i8]) -> usize {
    let (mut s, mut best, mut at) = (0i32, 0i32, 0usize);
    for (i, &xi) in x.iter().enumerate().take(x.len().saturating_sub(1)) {
        s += xi as i32;
        if s >= best {
            best = s;
            at = i + 1;
        }
    }
    at
}

pub fn scf(x: &[i8]) -> Result<Vec<i8>> {
    check_signs(x)?;
    let t = first_argmax(x).ok_or_else(|| CubeError::Domain("all partial sums ≤ 0".into()))?;
    let mut y = x.to_vec();
    y[t] = -y[t];
    Ok(y)
}

pub fn iscf(y: &[i8]) -> Result<Vec<i8>> {
    check_signs(y)?;
    if y.is_empty() {
        return Err(CubeError::Domain("empty vector".into()));
    }
    let t = last_argmax(y);
    let mut x = y.to_vec();
    x[t] = -x[t];
    Ok(x)
}

/// Stable order of positions by descending weight.
pub fn weight_order<T: PartialOrd>(a: &[T]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..a.len()).collect();
    p.sort_by(|&i, &j| a[j].partial_cmp(&a[i]).unwrap_or(std::cmp::Ordering::Equal));
    p
}

fn permuted(a_len: usize, order: &[usize], x: &[i8], f: impl Fn(&[i8]) -> Result<Vec<i8>>) -> Result<Vec<i8>> {
    let sorted: Vec<i8> = order.iter().map(|&i| x[i]).collect();
    let out = f(&sorted)?;
    let mut y = vec![0i8; a_len];
    for (k, &i) in order.iter().enumerate() {
        y[i] = out[k];
    }
    Ok(y)
}

fn dot<T: Num + Clone + PartialOrd + Signed>(a: &[T], x: &[i8]) -> T {
    a.iter().zip(x).fold(T::zero(), |acc, (w, &s)| if s > 0 { acc + w.clone() } else { acc - w.clone() })
}

pub fn scf_a<T: Num + Clone + PartialOrd + Signed>(a: &[T], x: &[i8]) -> Result<Vec<i8>> {
    if a.len() != x.len() {
        return Err(CubeError::Length { expected: a.len(), got: x.len() });
    }
    if a.iter().any(|w| w.is_negative()) {
        return Err(CubeError::Params("weights must be nonnegative".into()));
    }
    if !dot(a, x).is_positive() {
        return Err(CubeError::Domain("a·x ≤ 0".into()));
    }
    permuted(a.len(), &weight_order(a), x, scf)
}

pub fn iscf_a<T: Num + Clone + PartialOrd + Signed>(a: &[T], y: &[i8]) -> Result<Vec<i8>> {
    if a.len() != y.len() {
        return Err(CubeError::Length { expected: a.len(), got: y.len() });
    }
    permuted(a.len(), &weight_order(a), y, iscf)
}

/// Signs of bit pattern `m`: bit `i` set means `+1`.
pub fn signs(m: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if m >> i & 1 == 1 { 1 } else { -1 }).collect()
}

pub fn pattern(x: &[i8]) -> u64 {
    x.iter().enumerate().fold(0, |m, (i, &s)| if s > 0 { m | 1 << i } else { m })
}

fn weighted(a: &[i64], x: &[i8]) -> Vec<i64> {
    a.iter().zip(x).map(|(w, &s)| w * s as i64).collect()
}

/// Violation counts from an exhaustive pass over `{−1,1}^n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlipAudit {
    pub n: usize,
    pub inputs: u64,
    pub suffix_not_involution: u64,
    pub suffix_collisions: u64,
    pub prefix_in_domain: u64,
    pub prefix_drop_violations: u64,
    pub prefix_collisions: u64,
    pub scf_in_domain: u64,
    pub scf_not_inverted: u64,
    pub scf_collisions: u64,
    pub scf_a_in_domain: u64,
    pub scf_a_not_inverted: u64,
    pub scf_a_collisions: u64,
}

impl FlipAudit {
    pub fn violations(&self) -> u64 {
        self.suffix_not_involution
            + self.suffix_collisions
            + self.prefix_drop_violations
            + self.prefix_collisions
            + self.scf_not_inverted
            + self.scf_collisions
            + self.scf_a_not_inverted
            + self.scf_a_collisions
    }
}

/// Runs every flip over all sign patterns with integer weights `a` and parameter `r`.
///
/// The suffix flip is exercised on pairs `(a∘x, a∘x̄)` with `x̄` the reversed
/// complement of `x`, so each input determines its partner.
pub fn audit_flips(a: &[i64], r: i64) -> Result<FlipAudit> {
    let n = a.len();
    if n > 20 {
        return Err(CubeError::Budget("exhaustive flip audit limited to n ≤ 20".into()));
    }
    let amax = a.iter().map(|w| w.abs()).max().unwrap_or(0);
    let mut out = FlipAudit { n, ..Default::default() };
    let (mut seen_sf, mut seen_pf, mut seen_scf, mut seen_scfa) = (HashSet::new(), HashSet::new(), HashSet::new(), HashSet::new());
    for m in 0..1u64 << n {
        out.inputs += 1;
        let x = signs(m, n);
        let u = weighted(a, &x);
        let partner: Vec<i8> = x.iter().rev().map(|s| -s).collect();
        let v = weighted(a, &partner);
        if let Ok((p, q)) = suffix_flip(&u, &v, &r) {
            if suffix_flip(&p, &q, &r).ok() != Some((u.clone(), v.clone())) {
                out.suffix_not_involution += 1;
            }
            if !seen_sf.insert((p, q)) {
                out.suffix_collisions += 1;
            }
        }
        if let Ok(w) = prefix_flip(&u, &r) {
            out.prefix_in_domain += 1;
            let drop: i64 = u.iter().sum::<i64>() - w.iter().sum::<i64>();
            if !(drop >= r.max(0) && drop < r.max(0) + 2 * amax) && !(r <= 0 && drop == 0) {
                out.prefix_drop_violations += 1;
            }
            if !seen_pf.insert(w) {
                out.prefix_collisions += 1;
            }
        }
        if let Ok(y) = scf(&x) {
            out.scf_in_domain += 1;
            if iscf(&y)? != x {
                out.scf_not_inverted += 1;
            }
            if !seen_scf.insert(pattern(&y)) {
                out.scf_collisions += 1;
            }
        }
        if let Ok(y) = scf_a(a, &x) {
            out.scf_a_in_domain += 1;
            if iscf_a(a, &y)? != x {
                out.scf_a_not_inverted += 1;
            }
            if !seen_scfa.insert(pattern(&y)) {
                out.scf_a_collisions += 1;
            }
        }
    }
    Ok(out)
}

/// Result of rebuilding the interval-decay injections on one instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FourMapAudit {
    /// `#{Σ ∈ (s+m, s+3m]}`
    pub domain: u64,
    /// `#{Σ ∈ (s−m, s+m]}`
    pub target: u64,
    pub pieces: [u64; 4],
    pub uncovered: u64,
    pub outside_target: u64,
    pub collisions: u64,
    /// `#{Σ ∈ (t−m, t+m]}` and the prefix-flip images escaping `(s−m, s+3m]`.
    pub shifted: u64,
    pub shift_escapes: u64,
    pub shift_collisions: u64,
}

impl FourMapAudit {
    pub fn violations(&self) -> u64 {
        self.uncovered + self.outside_target + self.collisions + self.shift_escapes + self.shift_collisions
    }

    /// The counting consequence `domain ≤ 4·target`.
    pub fn bound_holds(&self) -> bool {
        self.domain <= 4 * self.target
    }
}

/// Applies `scf_b` to the big coordinates only.
fn psi3(x: &[i64], big: &[usize]) -> Result<Vec<i64>> {
    let b: Vec<i64> = big.iter().map(|&i| x[i].abs()).collect();
    let sg: Vec<i8> = big.iter().map(|&i| if x[i] > 0 { 1 } else { -1 }).collect();
    let flipped = scf_a(&b, &sg)?;
    let mut y = x.to_vec();
    for (k, &i) in big.iter().enumerate() {
        y[i] = b[k] * flipped[k] as i64;
    }
    Ok(y)
}

/// Exhaustive reconstruction of the four injections for weights `a`
/// (integers), `m ≥ max a_i`, `0 ≤ s ≤ t`.
pub fn audit_four_maps(a: &[i64], m: i64, s: i64, t: i64) -> Result<FourMapAudit> {
    let n = a.len();
    if n > 20 {
        return Err(CubeError::Budget("exhaustive audit limited to n ≤ 20".into()));
    }
    if a.iter().any(|&w| w < 0 || w > m) || s < 0 || s > t {
        return Err(CubeError::Params("need 0 ≤ a_i ≤ m and 0 ≤ s ≤ t".into()));
    }
    // |x_i| ≤ m/2  ⇔  2|x_i| ≤ m
    let small: Vec<usize> = (0..n).filter(|&i| 2 * a[i] <= m).collect();
    let big: Vec<usize> = (0..n).filter(|&i| 2 * a[i] > m).collect();
    let in_target = |v: i64| v > s - m && v <= s + m;
    let mut out = FourMapAudit::default();
    let mut images: [HashSet<Vec<i64>>; 4] = Default::default();
    let mut shift_images = HashSet::new();
    let r0 = t - s - 2 * m;
    for mask in 0..1u64 << n {
        let x = weighted(a, &signs(mask, n));
        let total: i64 = x.iter().sum();
        if total > s - m && total <= s + m {
            out.target += 1;
        }
        if total > t - m && total <= t + m {
            out.shifted += 1;
            if r0 > 0 {
                let v = prefix_flip(&x, &r0)?;
                let sv: i64 = v.iter().sum();
                if !(sv > s - m && sv <= s + 3 * m) {
                    out.shift_escapes += 1;
                }
                if !shift_images.insert(v) {
                    out.shift_collisions += 1;
                }
            } else if !(total > s - m && total <= s + 3 * m) {
                out.shift_escapes += 1;
            }
        }
        if !(total > s + m && total <= s + 3 * m) {
            continue;
        }
        out.domain += 1;
        let ss: i64 = small.iter().map(|&i| x[i]).sum();
        let (piece, y) = if ss >= s + m {
            let r = if total <= s + 2 * m { m } else { 2 * m };
            let part: Vec<i64> = small.iter().map(|&i| x[i]).collect();
            let flipped = prefix_flip(&part, &r)?;
            let mut y = x.clone();
            for (k, &i) in small.iter().enumerate() {
                y[i] = flipped[k];
            }
            (if r == m { 0 } else { 1 }, y)
        } else {
            match psi3(&x, &big) {
                Ok(y) if in_target(y.iter().sum()) => (2, y),
                Ok(y) => match psi3(&y, &big) {
                    Ok(z) => (3, z),
                    Err(_) => {
                        out.uncovered += 1;
                        continue;
                    }
                },
                Err(_) => {
                    out.uncovered += 1;
                    continue;
                }
            }
        };
        out.pieces[piece] += 1;
        if !in_target(y.iter().sum()) {
            out.outside_target += 1;
        }
        if !images[piece].insert(y) {
            out.collisions += 1;
        }
    }
    Ok(out)
}

/// Rational front end: rescales to a common integer grid.
pub fn audit_four_maps_rational(a: &[Rational], m: &Rational, s: &Rational, t: &Rational) -> Result<FourMapAudit> {
    let l = lcm_denominators(a.iter().chain([m, s, t]))?;
    let ai = a.iter().map(|w| scale_to_i64(w, l)).collect::<Result<Vec<_>>>()?;
    audit_four_maps(&ai, scale_to_i64(m, l)?, scale_to_i64(s, l)?, scale_to_i64(t, l)?)
}
