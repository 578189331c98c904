//! Exact distribution of `a·x` for uniform `x ∈ {-1,1}^n`.
//!
//! Weights are integers (rationals pre-multiplied by `scale`). Two backends:
//! a dense subset-sum table when `Σ a_i ≤ DENSE_BUDGET`, and two sorted
//! half-enumerations for `n ≤ MITM_MAX_N` otherwise.

use crate::error::{CubeError, Result};
use crate::rational::{ceil_clamped, floor_clamped, int, prob, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub const DENSE_BUDGET: i64 = 10_000_000;
pub const MITM_MAX_N: usize = 40;
const MAX_N: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interval {
    /// `(lo, hi]`
    OpenClosed,
    /// `[lo, hi]`
    Closed,
    /// `(lo, hi)`
    Open,
    /// `[lo, hi)`
    ClosedOpen,
}

#[derive(Clone, Debug)]
enum Backend {
    Dense { values: Vec<i64>, counts: Vec<u64>, above: Vec<u64> },
    Split { left: Vec<i64>, right: Vec<i64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Dense,
    MeetInTheMiddle,
}

#[derive(Clone, Debug)]
pub struct TailDistribution {
    n: usize,
    scale: i64,
    weights: Vec<i64>,
    total: i64,
    backend: Backend,
}

fn subset_counts(weights: &[i64], total: i64) -> Vec<u64> {
    let mut cnt = vec![0u64; total as usize + 1];
    cnt[0] = 1;
    let mut cur = 0usize;
    for &w in weights {
        let w = w as usize;
        for s in (0..=cur).rev() {
            let c = cnt[s];
            if c != 0 {
                cnt[s + w] += c;
            }
        }
        cur += w;
    }
    cnt
}

fn signed_sums(weights: &[i64]) -> Vec<i64> {
    let mut sums = vec![0i64];
    for &w in weights {
        sums = sums.iter().flat_map(|&s| [s - w, s + w]).collect();
    }
    sums.sort_unstable();
    sums
}

fn dense_from_counts(cnt: &[u64], total: i64) -> Backend {
    let mut values = Vec::new();
    let mut counts = Vec::new();
    for (s, &c) in cnt.iter().enumerate() {
        if c != 0 {
            values.push(2 * s as i64 - total);
            counts.push(c);
        }
    }
    let mut above = vec![0u64; counts.len() + 1];
    for j in (0..counts.len()).rev() {
        above[j] = above[j + 1] + counts[j];
    }
    Backend::Dense { values, counts, above }
}

impl TailDistribution {
    /// Picks the backend automatically.
    pub fn from_scaled(weights: Vec<i64>, scale: i64) -> Result<Self> {
        let total = Self::check(&weights)?;
        if total <= DENSE_BUDGET {
            Self::build(weights, scale, BackendKind::Dense)
        } else if weights.len() <= MITM_MAX_N {
            Self::build(weights, scale, BackendKind::MeetInTheMiddle)
        } else {
            Err(CubeError::Budget(format!(
                "n = {} with scaled weight sum {total} exceeds both tail backends",
                weights.len()
            )))
        }
    }

    fn check(weights: &[i64]) -> Result<i64> {
        if weights.len() > MAX_N {
            return Err(CubeError::Budget(format!("n = {} exceeds {MAX_N}", weights.len())));
        }
        let mut total = 0i64;
        for &w in weights {
            if w <= 0 {
                return Err(CubeError::Params("tail weights must be positive".into()));
            }
            total = total.checked_add(w).ok_or_else(|| CubeError::Budget("weight sum overflows".into()))?;
        }
        if total > i64::MAX / 4 {
            return Err(CubeError::Budget("weight sum overflows".into()));
        }
        Ok(total)
    }

    /// Forces a backend (both must agree wherever both fit).
    pub fn build(mut weights: Vec<i64>, scale: i64, kind: BackendKind) -> Result<Self> {
        let total = Self::check(&weights)?;
        weights.sort_unstable_by(|a, b| b.cmp(a));
        let backend = match kind {
            BackendKind::Dense => {
                if total > DENSE_BUDGET {
                    return Err(CubeError::Budget(format!("dense backend: weight sum {total} > {DENSE_BUDGET}")));
                }
                dense_from_counts(&subset_counts(&weights, total), total)
            }
            BackendKind::MeetInTheMiddle => {
                if weights.len() > MITM_MAX_N {
                    return Err(CubeError::Budget(format!("split backend: n = {} > {MITM_MAX_N}", weights.len())));
                }
                let h = weights.len() / 2;
                Backend::Split { left: signed_sums(&weights[..h]), right: signed_sums(&weights[h..]) }
            }
        };
        Ok(TailDistribution { n: weights.len(), scale, weights, total, backend })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn scaled_weights(&self) -> &[i64] {
        &self.weights
    }

    /// `Σ a_i` in scaled units; also the maximal value.
    pub fn total(&self) -> i64 {
        self.total
    }

    pub fn kind(&self) -> BackendKind {
        match self.backend {
            Backend::Dense { .. } => BackendKind::Dense,
            Backend::Split { .. } => BackendKind::MeetInTheMiddle,
        }
    }

    /// `2^n`.
    pub fn cube_size(&self) -> u64 {
        1u64 << self.n
    }

    /// Sorted support and counts (dense backend only).
    pub fn support(&self) -> Option<(&[i64], &[u64])> {
        match &self.backend {
            Backend::Dense { values, counts, .. } => Some((values, counts)),
            Backend::Split { .. } => None,
        }
    }

    /// Full `(value, count)` list; materialises the split backend when it is small enough.
    pub fn pairs(&self) -> Result<Vec<(i64, u64)>> {
        match &self.backend {
            Backend::Dense { values, counts, .. } => Ok(values.iter().copied().zip(counts.iter().copied()).collect()),
            Backend::Split { left, right } => {
                if left.len() * right.len() > 1 << 24 {
                    return Err(CubeError::Budget("support too large to materialise".into()));
                }
                let mut all: Vec<i64> = left.iter().flat_map(|l| right.iter().map(move |r| l + r)).collect();
                all.sort_unstable();
                let mut out: Vec<(i64, u64)> = Vec::new();
                for v in all {
                    match out.last_mut() {
                        Some((lv, c)) if *lv == v => *c += 1,
                        _ => out.push((v, 1)),
                    }
                }
                Ok(out)
            }
        }
    }

    /// Scaled integer to rational value.
    pub fn unscale(&self, v: i64) -> Rational {
        Rational::new(BigInt::from(v), BigInt::from(self.scale))
    }

    /// Rational value in scaled units.
    pub fn rescale(&self, t: &Rational) -> Rational {
        t * Rational::from_integer(BigInt::from(self.scale))
    }

    /// `#{x : a·x > x0}` in scaled units.
    pub fn count_gt(&self, x0: i64) -> u64 {
        match &self.backend {
            Backend::Dense { values, above, .. } => above[values.partition_point(|v| *v <= x0)],
            Backend::Split { left, right } => {
                let mut p = right.len();
                let mut c = 0u64;
                for &l in left {
                    let need = x0 - l;
                    while p > 0 && right[p - 1] > need {
                        p -= 1;
                    }
                    c += (right.len() - p) as u64;
                }
                c
            }
        }
    }

    pub fn count_ge(&self, x0: i64) -> u64 {
        self.count_gt(x0 - 1)
    }

    /// Smallest achievable value `≥ x0` in scaled units.
    pub fn next_support_ge(&self, x0: i64) -> Option<i64> {
        match &self.backend {
            Backend::Dense { values, .. } => values.get(values.partition_point(|v| *v < x0)).copied(),
            Backend::Split { left, right } => left
                .iter()
                .filter_map(|&l| right.get(right.partition_point(|r| *r < x0 - l)).map(|r| l + r))
                .min(),
        }
    }

    fn floor_scaled(&self, t: &Rational) -> i64 {
        floor_clamped(&self.rescale(t), -self.total - 1, self.total)
    }

    fn ceil_scaled(&self, t: &Rational) -> i64 {
        ceil_clamped(&self.rescale(t), -self.total, self.total + 1)
    }

    /// `#{a·x > t}`.
    pub fn count_above(&self, t: &Rational) -> u64 {
        self.count_gt(self.floor_scaled(t))
    }

    /// `#{a·x ≥ t}`.
    pub fn count_at_least(&self, t: &Rational) -> u64 {
        self.count_ge(self.ceil_scaled(t))
    }

    /// `F(t) = Pr[a·x > t]`.
    pub fn tail(&self, t: &Rational) -> Rational {
        prob(self.count_above(t), self.n)
    }

    pub fn interval_count(&self, lo: &Rational, hi: &Rational, kind: Interval) -> u64 {
        let (a, b) = match kind {
            Interval::OpenClosed => (self.count_above(lo), self.count_above(hi)),
            Interval::Closed => (self.count_at_least(lo), self.count_above(hi)),
            Interval::Open => (self.count_above(lo), self.count_at_least(hi)),
            Interval::ClosedOpen => (self.count_at_least(lo), self.count_at_least(hi)),
        };
        a.saturating_sub(b)
    }

    pub fn interval_prob(&self, lo: &Rational, hi: &Rational, kind: Interval) -> Rational {
        prob(self.interval_count(lo, hi, kind), self.n)
    }

    /// Minimal `δ ≥ 0` with `F(t+δ) ≤ c·F(t)`; attained at a support value.
    pub fn delta_query(&self, t: &Rational, c: &Rational) -> Result<Rational> {
        if c.is_negative() {
            return Err(CubeError::Params("c must be nonnegative".into()));
        }
        let c0 = self.count_above(t);
        if c0 == 0 {
            return Err(CubeError::Degenerate("F(t) = 0".into()));
        }
        let target = c * Rational::from_integer(BigInt::from(c0));
        let ok = |x: i64| Rational::from_integer(BigInt::from(self.count_gt(x))) <= target;
        if Rational::from_integer(BigInt::from(c0)) <= target {
            return Ok(Rational::zero());
        }
        let (mut lo, mut hi) = (self.ceil_scaled(t), self.total);
        // invariant: ok(hi); smallest ok in [lo, hi]
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let d = self.unscale(hi) - t;
        Ok(if d.is_negative() { Rational::zero() } else { d })
    }

    pub fn max_weight(&self) -> Rational {
        self.unscale(self.weights.first().copied().unwrap_or(0))
    }

    /// The distribution with one copy of scaled weight `w` removed.
    pub fn without_weight(&self, w: i64) -> Result<TailDistribution> {
        let pos = self
            .weights
            .iter()
            .position(|&x| x == w)
            .ok_or_else(|| CubeError::Params(format!("weight {w} not present")))?;
        let mut rest = self.weights.clone();
        rest.remove(pos);
        match &self.backend {
            Backend::Dense { values, counts, .. } => {
                let mut full = vec![0u64; self.total as usize + 1];
                for (v, c) in values.iter().zip(counts) {
                    full[((v + self.total) / 2) as usize] = *c;
                }
                let nt = (self.total - w) as usize;
                let wu = w as usize;
                let mut q = vec![0u64; nt + 1];
                for s in 0..=nt {
                    q[s] = if s >= wu { full[s] - q[s - wu] } else { full[s] };
                }
                Ok(TailDistribution {
                    n: self.n - 1,
                    scale: self.scale,
                    weights: rest,
                    total: nt as i64,
                    backend: dense_from_counts(&q, nt as i64),
                })
            }
            Backend::Split { .. } => TailDistribution::from_scaled(rest, self.scale),
        }
    }

    /// β, γ and δ at threshold `t`; `k` adds the geometric level-`k` variant.
    pub fn decay_thresholds(&self, t: &Rational, k: Option<usize>) -> Result<DecayThresholds> {
        let beta = self.delta_query(t, &Rational::new(1.into(), 3.into()))?;
        let gamma = self.delta_query(t, &Rational::new(1.into(), 6.into()))?;
        let m = int(2) * self.max_weight();
        let geometric = match k {
            None => None,
            Some(k) => {
                if k == 0 {
                    return Err(CubeError::Params("k must be ≥ 1".into()));
                }
                let c0 = self.count_above(t);
                let base = BigInt::from(6 * k as u64);
                let mut gamma_k = Rational::zero();
                let mut l = 1u32;
                loop {
                    let denom = num_traits::pow(base.clone(), l as usize);
                    let c = Rational::new(BigInt::one(), denom.clone());
                    let d = self.delta_query(t, &c)? / Rational::from_integer(BigInt::from(l));
                    if d > gamma_k {
                        gamma_k = d;
                    }
                    if BigInt::from(c0) < denom {
                        break;
                    }
                    l += 1;
                }
                Some(gamma_k.clone())
            }
        };
        let delta = &beta + &gamma;
        let delta_k = geometric.as_ref().map(|g| &beta + g);
        Ok(DecayThresholds { beta, gamma, delta, gamma_k: geometric, delta_k, m })
    }

    /// `P[a·x = v]` count at a scaled value.
    pub fn count_eq(&self, v: i64) -> u64 {
        self.count_ge(v) - self.count_gt(v)
    }
}

/// Shifts that drop `F(t)` to given fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayThresholds {
    /// Minimal with `F(t+β) ≤ F(t)/3`.
    pub beta: Rational,
    /// Minimal with `F(t+γ) ≤ F(t)/6`.
    pub gamma: Rational,
    /// `β + γ`.
    pub delta: Rational,
    /// Minimal with `F(t+lγ) ≤ F(t)/(6k)^l` for all `l ≥ 1`.
    pub gamma_k: Option<Rational>,
    /// `β + γ_k`.
    pub delta_k: Option<Rational>,
    /// `2·max a_i`.
    pub m: Rational,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn brute(weights: &[i64]) -> Vec<(i64, u64)> {
        let n = weights.len();
        let mut m = std::collections::BTreeMap::new();
        for mask in 0..(1usize << n) {
            let v: i64 = (0..n).map(|i| if (mask >> i) & 1 == 1 { weights[i] } else { -weights[i] }).sum();
            *m.entry(v).or_insert(0u64) += 1;
        }
        m.into_iter().collect()
    }

    #[test]
    fn binomial_example() {
        let d = TailDistribution::from_scaled(vec![1; 4], 1).unwrap();
        assert_eq!(d.pairs().unwrap(), vec![(-4, 1), (-2, 4), (0, 6), (2, 4), (4, 1)]);
    }

    #[test]
    fn tail_examples() {
        let maj5 = TailDistribution::from_scaled(vec![1; 5], 1).unwrap();
        assert_eq!(maj5.tail(&int(0)), rat(1, 2));
        // weights 1/2 ×4 ⇒ scale 2
        let h = TailDistribution::from_scaled(vec![1; 4], 2).unwrap();
        assert_eq!(h.tail(&int(0)), rat(5, 16));
        assert_eq!(h.tail(&int(1)), rat(1, 16));
        assert_eq!(h.tail(&int(-3)), int(1));
        assert_eq!(h.tail(&int(2)), int(0));
    }

    #[test]
    fn delta_examples() {
        let h = TailDistribution::from_scaled(vec![1; 4], 2).unwrap();
        assert_eq!(h.delta_query(&int(0), &rat(1, 2)).unwrap(), int(1));
        assert_eq!(h.delta_query(&int(0), &int(1)).unwrap(), int(0));
        let m3 = TailDistribution::from_scaled(vec![1; 3], 1).unwrap();
        assert_eq!(m3.delta_query(&int(0), &rat(1, 3)).unwrap(), int(1));
        assert!(m3.delta_query(&int(3), &rat(1, 2)).is_err());
        // non-support threshold: F(1/2) = 1/2 ⇒ need ≤ 1/4 ⇒ reach 1 ⇒ δ = 1/2
        assert_eq!(m3.delta_query(&rat(1, 2), &rat(1, 4)).unwrap(), rat(1, 2));
    }

    #[test]
    fn intervals() {
        let d = TailDistribution::from_scaled(vec![1; 4], 1).unwrap();
        assert_eq!(d.interval_count(&int(-2), &int(2), Interval::OpenClosed), 10);
        assert_eq!(d.interval_count(&int(-2), &int(2), Interval::Closed), 14);
        assert_eq!(d.interval_count(&int(-2), &int(2), Interval::Open), 6);
        assert_eq!(d.interval_count(&int(-2), &int(2), Interval::ClosedOpen), 10);
        assert_eq!(d.interval_count(&int(2), &int(-2), Interval::Closed), 0);
    }

    #[test]
    fn decay_thresholds_small() {
        let d = TailDistribution::from_scaled(vec![1; 5], 1).unwrap();
        let th = d.decay_thresholds(&int(1), Some(2)).unwrap();
        // F(1) = 6/32; F(3) = 1/32 ≤ 2/32 ⇒ β = 2; γ: need ≤ 1/32 ⇒ 2
        assert_eq!(th.beta, int(2));
        assert_eq!(th.gamma, int(2));
        assert_eq!(th.m, int(2));
        assert!(th.gamma_k.unwrap() >= int(2));
    }

    #[test]
    fn removing_a_weight_matches_rebuild() {
        let d = TailDistribution::from_scaled(vec![5, 3, 3, 2, 1], 1).unwrap();
        let r = d.without_weight(3).unwrap();
        assert_eq!(r.pairs().unwrap(), brute(&[5, 3, 2, 1]));
        assert!(d.without_weight(4).is_err());
    }

    proptest! {
        #[test]
        fn backends_agree(ws in proptest::collection::vec(1i64..40, 1..12), x in -500i64..500) {
            let d = TailDistribution::build(ws.clone(), 1, BackendKind::Dense).unwrap();
            let s = TailDistribution::build(ws.clone(), 1, BackendKind::MeetInTheMiddle).unwrap();
            prop_assert_eq!(d.count_gt(x), s.count_gt(x));
            prop_assert_eq!(d.next_support_ge(x), s.next_support_ge(x));
            prop_assert_eq!(d.pairs().unwrap(), brute(&ws));
            prop_assert_eq!(s.pairs().unwrap(), brute(&ws));
        }

        #[test]
        fn symmetric_and_normalised(ws in proptest::collection::vec(1i64..60, 1..10)) {
            let d = TailDistribution::from_scaled(ws, 1).unwrap();
            let pairs = d.pairs().unwrap();
            let total: u64 = pairs.iter().map(|p| p.1).sum();
            prop_assert_eq!(total, d.cube_size());
            for w in pairs.windows(2) { prop_assert!(w[0].0 < w[1].0); }
            for &(v, c) in &pairs { prop_assert_eq!(d.count_eq(-v), c); }
            prop_assert_eq!(d.count_gt(-d.total() - 1), d.cube_size());
            prop_assert_eq!(d.count_gt(d.total()), 0);
        }

        #[test]
        fn delta_is_minimal(ws in proptest::collection::vec(1i64..20, 1..9), tn in -30i64..30, cn in 1i64..10) {
            let d = TailDistribution::from_scaled(ws, 2).unwrap();
            let t = rat(tn, 3);
            let c = rat(cn, 10);
            if d.count_above(&t) == 0 { return Ok(()); }
            let delta = d.delta_query(&t, &c).unwrap();
            let f0 = d.tail(&t);
            prop_assert!(d.tail(&(&t + &delta)) <= &c * &f0);
            if delta > Rational::zero() {
                // anything strictly smaller fails
                let eps = rat(1, 1000);
                let below = &t + &delta - eps;
                prop_assert!(d.tail(&below) > &c * &f0);
            }
        }
    }
}
