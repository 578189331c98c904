//! Halfspaces `1{a·x > t}` over rational weights.

use crate::bfcore::{check_arity, BooleanFunction};
use crate::error::{CubeError, Result};
use crate::rational::{floor_clamped, format_rational, int, lcm_denominators, prob, scale_to_i64, Rational};
use crate::tail::{DecayThresholds, Interval, TailDistribution, DENSE_BUDGET};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::OnceLock;

#[derive(Clone, Debug)]
pub struct Halfspace {
    arity: usize,
    /// `true` where the input coordinate was negated to make its weight nonnegative.
    negated: Vec<bool>,
    /// Positive weights, descending.
    weights: Vec<Rational>,
    /// `perm[k]` is the original coordinate of sorted position `k`.
    perm: Vec<usize>,
    /// Sorted position of each original coordinate, `None` for zero weights.
    position: Vec<Option<usize>>,
    threshold: Rational,
    scale: i64,
    scaled: Vec<i64>,
    tail: OnceLock<TailDistribution>,
}

impl PartialEq for Halfspace {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.negated == other.negated
            && self.weights == other.weights
            && self.perm == other.perm
            && self.threshold == other.threshold
    }
}

impl Halfspace {
    /// Nonnegative weights; zeros are dropped, the rest sorted descending.
    pub fn new(weights: &[Rational], threshold: Rational) -> Result<Self> {
        if weights.iter().any(|w| w.is_negative()) {
            return Err(CubeError::Params("negative weight".into()));
        }
        Self::from_signed(weights, threshold)
    }

    /// Accepts mixed signs by negating the affected input coordinates.
    pub fn from_signed(weights: &[Rational], threshold: Rational) -> Result<Self> {
        let arity = weights.len();
        let negated: Vec<bool> = weights.iter().map(|w| w.is_negative()).collect();
        let abs: Vec<Rational> = weights.iter().map(|w| w.abs()).collect();
        let mut perm: Vec<usize> = (0..arity).filter(|&i| !abs[i].is_zero()).collect();
        if perm.is_empty() {
            return Err(CubeError::Params("all weights are zero".into()));
        }
        perm.sort_by(|&i, &j| abs[j].cmp(&abs[i]).then(i.cmp(&j)));
        let mut position = vec![None; arity];
        for (k, &i) in perm.iter().enumerate() {
            position[i] = Some(k);
        }
        let sorted: Vec<Rational> = perm.iter().map(|&i| abs[i].clone()).collect();
        let scale = lcm_denominators(&sorted)?;
        let scaled = sorted.iter().map(|w| scale_to_i64(w, scale)).collect::<Result<Vec<_>>>()?;
        Ok(Halfspace { arity, negated, weights: sorted, perm, position, threshold, scale, scaled, tail: OnceLock::new() })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of positive weights.
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn position(&self, original: usize) -> Option<usize> {
        self.position.get(original).copied().flatten()
    }

    pub fn threshold(&self) -> &Rational {
        &self.threshold
    }

    pub fn with_threshold(&self, t: Rational) -> Self {
        let mut h = self.clone();
        h.threshold = t;
        h
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn scaled_weights(&self) -> &[i64] {
        &self.scaled
    }

    pub fn max_weight(&self) -> &Rational {
        &self.weights[0]
    }

    pub fn sum_weights(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, b| a + b)
    }

    /// `Σ a_i²`.
    pub fn sum_sq(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, b| a + b * b)
    }

    /// The same halfspace with weights and threshold multiplied by `lambda > 0`.
    pub fn scaled_by(&self, lambda: &Rational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(CubeError::Params("scale factor must be positive".into()));
        }
        let ws: Vec<Rational> = (0..self.arity)
            .map(|i| match self.position(i) {
                Some(k) => {
                    let w = &self.weights[k] * lambda;
                    if self.negated[i] {
                        -w
                    } else {
                        w
                    }
                }
                None => Rational::zero(),
            })
            .collect();
        Self::from_signed(&ws, &self.threshold * lambda)
    }

    /// Signed weights in original coordinate order.
    pub fn signed_weights(&self) -> Vec<Rational> {
        (0..self.arity)
            .map(|i| match self.position(i) {
                Some(k) if self.negated[i] => -self.weights[k].clone(),
                Some(k) => self.weights[k].clone(),
                None => Rational::zero(),
            })
            .collect()
    }

    /// `ltf:a1,...;t` in original coordinate order.
    pub fn to_text(&self) -> String {
        let ws: Vec<String> = self.signed_weights().iter().map(format_rational).collect();
        format!("ltf:{};{}", ws.join(","), format_rational(&self.threshold))
    }

    pub fn tail(&self) -> Result<&TailDistribution> {
        if let Some(t) = self.tail.get() {
            return Ok(t);
        }
        let d = TailDistribution::from_scaled(self.scaled.clone(), self.scale)?;
        let _ = self.tail.set(d);
        Ok(self.tail.get().expect("set above"))
    }

    fn scaled_threshold_floor(&self, t: &Rational) -> i64 {
        let total: i64 = self.scaled.iter().sum();
        floor_clamped(&(t * Rational::from_integer(BigInt::from(self.scale))), -total - 1, total)
    }

    /// Signed scaled weight per original coordinate.
    fn coordinate_weights(&self) -> Vec<i64> {
        (0..self.arity)
            .map(|i| match self.position(i) {
                Some(k) if self.negated[i] => -self.scaled[k],
                Some(k) => self.scaled[k],
                None => 0,
            })
            .collect()
    }

    /// Evaluates at point index `m` (bit `i` set ⇔ `x_i = +1`).
    pub fn evaluate(&self, m: usize) -> bool {
        let c = self.coordinate_weights();
        let s: i64 = c.iter().enumerate().map(|(i, w)| if (m >> i) & 1 == 1 { *w } else { -*w }).sum();
        s > self.scaled_threshold_floor(&self.threshold)
    }

    /// Truth table over all `arity` coordinates at the stored threshold.
    pub fn truth_table(&self) -> Result<BooleanFunction> {
        self.truth_table_at(&self.threshold)
    }

    pub fn truth_table_at(&self, t: &Rational) -> Result<BooleanFunction> {
        check_arity(self.arity)?;
        let c = self.coordinate_weights();
        let tf = self.scaled_threshold_floor(t);
        let lo_bits = self.arity.min(12);
        let sums = |cs: &[i64]| -> Vec<i64> {
            let mut v = vec![-cs.iter().sum::<i64>()];
            for (i, w) in cs.iter().enumerate() {
                for m in 0..(1usize << i) {
                    let x = v[m] + 2 * w;
                    v.push(x);
                }
            }
            v
        };
        let low = sums(&c[..lo_bits]);
        let high = sums(&c[lo_bits..]);
        let mask = (1usize << lo_bits) - 1;
        BooleanFunction::from_fn(self.arity, |m| low[m & mask] + high[m >> lo_bits] > tf)
    }

    /// `μ = F(t)`.
    pub fn mean(&self) -> Result<Rational> {
        Ok(self.tail()?.tail(&self.threshold))
    }

    /// Distribution of `a·x − a_k x_k` for sorted position `k`.
    pub fn reduced_tail(&self, k: usize) -> Result<TailDistribution> {
        self.tail()?.without_weight(self.scaled[k])
    }

    /// Reduced distributions keyed by scaled weight value.
    pub fn reduced_tails(&self) -> Result<HashMap<i64, TailDistribution>> {
        let mut out = HashMap::new();
        for (k, &w) in self.scaled.iter().enumerate() {
            if !out.contains_key(&w) {
                out.insert(w, self.reduced_tail(k)?);
            }
        }
        Ok(out)
    }

    /// `I_i(f_r) = Pr[a·x − a_i x_i ∈ (r − a_i, r + a_i]]` for original coordinate `i`.
    pub fn influence_at(&self, i: usize, r: &Rational) -> Result<Rational> {
        if i >= self.arity {
            return Err(CubeError::Params(format!("coordinate {i} out of range")));
        }
        let Some(k) = self.position(i) else { return Ok(Rational::zero()) };
        let red = self.reduced_tail(k)?;
        Ok(influence_from_reduced(&red, r, &self.weights[k]))
    }

    pub fn influence(&self, i: usize) -> Result<Rational> {
        self.influence_at(i, &self.threshold)
    }

    /// Influences in original coordinate order at threshold `r`.
    pub fn influences_at(&self, r: &Rational) -> Result<Vec<Rational>> {
        let red = self.reduced_tails()?;
        Ok((0..self.arity)
            .map(|i| match self.position(i) {
                Some(k) => influence_from_reduced(&red[&self.scaled[k]], r, &self.weights[k]),
                None => Rational::zero(),
            })
            .collect())
    }

    /// `I_1(f_r)` for the largest weight.
    pub fn top_influence_at(&self, r: &Rational) -> Result<Rational> {
        let red = self.reduced_tail(0)?;
        Ok(influence_from_reduced(&red, r, &self.weights[0]))
    }

    /// `(vb0, vb1)` at threshold `r` without a truth table.
    ///
    /// With descending weights, a point with `f = 1` is on the boundary iff
    /// flipping its first `+1` coordinate (the heaviest one) drops `f`; the
    /// symmetric statement holds for `f = 0`.
    pub fn vertex_boundary_at(&self, r: &Rational) -> Result<(Rational, Rational)> {
        let n = self.n();
        let total: i64 = self.scaled.iter().sum();
        if total > DENSE_BUDGET || n > 62 {
            return Err(CubeError::Budget("vertex boundary needs the dense backend".into()));
        }
        let tf = self.scaled_threshold_floor(r);
        let prefix: Vec<i64> = std::iter::once(0)
            .chain(self.scaled.iter().scan(0i64, |s, w| {
                *s += w;
                Some(*s)
            }))
            .collect();
        // suffix subset-sum counts for coordinates > k, built from the end
        let mut cnt: Vec<u64> = vec![1];
        let mut suffix_total = 0i64;
        let (mut c0, mut c1) = (0u64, 0u64);
        for k in (0..n).rev() {
            let w = self.scaled[k];
            let mut cum = vec![0u64; cnt.len() + 1];
            for (s, c) in cnt.iter().enumerate() {
                cum[s + 1] = cum[s] + c;
            }
            // count of Y ∈ (lo, hi] where Y = 2s − suffix_total
            let range = |lo: i64, hi: i64| -> u64 {
                let s_of = |y: i64| -> i64 { (y + suffix_total).div_euclid(2) };
                let a = (s_of(lo) + 1).clamp(0, cnt.len() as i64) as usize;
                let b = (s_of(hi) + 1).clamp(0, cnt.len() as i64) as usize;
                if b > a {
                    cum[b] - cum[a]
                } else {
                    0
                }
            };
            let p = prefix[k];
            c1 += range(tf + p - w, tf + p + w);
            c0 += range(tf - p - w, tf - p + w);
            let mut next = vec![0u64; cnt.len() + w as usize];
            for (s, c) in cnt.iter().enumerate() {
                next[s] += c;
                next[s + w as usize] += c;
            }
            cnt = next;
            suffix_total += w;
        }
        Ok((prob(c0, n), prob(c1, n)))
    }

    pub fn delta_query(&self, t: &Rational, c: &Rational) -> Result<Rational> {
        self.tail()?.delta_query(t, c)
    }

    pub fn decay_thresholds(&self, t: &Rational, k: Option<usize>) -> Result<DecayThresholds> {
        self.tail()?.decay_thresholds(t, k)
    }

    /// `e_i^δ = E_{s∼U(0,δ)} I_i(f_{t+s})` by exact breakpoint integration.
    pub fn smoothed_influence(&self, t: &Rational, i: usize, delta: &Rational) -> Result<Rational> {
        if !delta.is_positive() {
            return Err(CubeError::Params("δ must be positive".into()));
        }
        if i >= self.arity {
            return Err(CubeError::Params(format!("coordinate {i} out of range")));
        }
        let Some(k) = self.position(i) else { return Ok(Rational::zero()) };
        let red = self.reduced_tail(k)?;
        smoothed_from_reduced(&red, t, &self.weights[k], delta)
    }

    /// Right side of the smoothed-influence lower bound: `(a_i/δ)·Pr[a·x ∈ [t+a_i, t+δ−a_i]]`.
    pub fn smoothed_influence_floor(&self, t: &Rational, i: usize, delta: &Rational) -> Result<Rational> {
        let Some(k) = self.position(i) else { return Ok(Rational::zero()) };
        let a = &self.weights[k];
        let p = self.tail()?.interval_prob(&(t + a), &(t + delta - a), Interval::Closed);
        Ok(a / delta * p)
    }
}

/// `Pr[Y ∈ (r − a, r + a]]`.
pub fn influence_from_reduced(red: &TailDistribution, r: &Rational, a: &Rational) -> Rational {
    red.interval_prob(&(r - a), &(r + a), Interval::OpenClosed)
}

/// `(1/δ)·Σ_v p(v)·|(0,δ) ∩ [v−t−a, v−t+a)|` over the reduced support.
pub fn smoothed_from_reduced(red: &TailDistribution, t: &Rational, a: &Rational, delta: &Rational) -> Result<Rational> {
    let pairs = red.pairs()?;
    let l = Rational::from_integer(BigInt::from(red.scale()));
    // common integer grid: everything times scale·q
    let q = {
        let ts = t * &l;
        let ds = delta * &l;
        let a_s = a * &l;
        num_integer::Integer::lcm(&num_integer::Integer::lcm(ts.denom(), ds.denom()), a_s.denom())
    };
    let qs = Rational::from_integer(q.clone());
    let to_i = |r: Rational| -> Option<i128> { (r * &l * &qs).to_integer().to_i128() };
    let (Some(ti), Some(di), Some(ai)) = (to_i(t.clone()), to_i(delta.clone()), to_i(a.clone())) else {
        return Err(CubeError::Budget("smoothed influence grid overflows".into()));
    };
    let qi = q.to_i128().ok_or_else(|| CubeError::Budget("grid overflow".into()))?;
    let mut acc = BigInt::zero();
    for (v, c) in pairs {
        let vi = v as i128 * qi;
        let lo = (vi - ti - ai).max(0);
        let hi = (vi - ti + ai).min(di);
        if hi > lo {
            acc += BigInt::from(c) * BigInt::from(hi - lo);
        }
    }
    let den = (BigInt::from(1) << red.n()) * BigInt::from(di);
    Ok(Rational::new(acc, den))
}

/// Uniform-weight convenience constructor.
pub fn uniform(n: usize, t: Rational) -> Result<Halfspace> {
    Halfspace::new(&vec![int(1); n], t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bfcore::{dictator, majority, BooleanFunction};
    use crate::influence::{influences, vertex_boundary};
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn sorting_and_dictator_example() {
        let h = Halfspace::new(&[rat(3, 5), rat(4, 5)], int(0)).unwrap();
        assert_eq!(h.weights(), &[rat(4, 5), rat(3, 5)]);
        assert_eq!(h.perm(), &[1, 0]);
        let d = BooleanFunction::from_fn(2, |m| m & 0b10 != 0).unwrap();
        assert_eq!(h.truth_table().unwrap(), d);
        assert_eq!(h.influence(0).unwrap(), int(0));
        assert_eq!(h.influence(1).unwrap(), int(1));
    }

    #[test]
    fn majority_example() {
        let h = uniform(3, int(0)).unwrap();
        assert_eq!(h.truth_table().unwrap(), majority(3).unwrap());
        for i in 0..3 {
            assert_eq!(h.influence(i).unwrap(), rat(1, 2));
        }
        let d = Halfspace::new(&[int(1)], int(0)).unwrap();
        assert_eq!(d.influence(0).unwrap(), int(1));
        assert_eq!(d.truth_table().unwrap(), dictator(1).unwrap());
    }

    #[test]
    fn errors() {
        assert!(Halfspace::new(&[int(0), int(0)], int(0)).is_err());
        assert!(Halfspace::new(&[int(-1), int(2)], int(0)).is_err());
        assert!(Halfspace::from_signed(&[int(-1), int(2)], int(0)).is_ok());
        let h = uniform(3, int(0)).unwrap();
        assert!(h.influence(3).is_err());
        assert!(h.smoothed_influence(&int(0), 0, &int(0)).is_err());
    }

    #[test]
    fn five_four_family_member() {
        let mut w = vec![int(5); 4];
        w.extend(vec![int(4); 5]);
        let h = Halfspace::new(&w, int(1)).unwrap();
        let f = h.truth_table().unwrap();
        let expect = BooleanFunction::from_fn(9, |m| {
            let x = |i: usize| if (m >> i) & 1 == 1 { 1i64 } else { -1 };
            5 * (0..4).map(x).sum::<i64>() + 4 * (4..9).map(x).sum::<i64>() > 1
        })
        .unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn mixed_signs_negate_inputs() {
        let h = Halfspace::from_signed(&[int(1), int(-1)], int(0)).unwrap();
        // 1{x1 - x2 > 0}: only x1 = 1, x2 = -1  (index 0b01)
        let f = h.truth_table().unwrap();
        assert_eq!(f, BooleanFunction::from_fn(2, |m| m == 1).unwrap());
        assert_eq!(h.to_text(), "ltf:1,-1;0");
    }

    #[test]
    fn smoothed_examples() {
        let d = Halfspace::new(&[int(1)], int(0)).unwrap();
        assert_eq!(d.smoothed_influence(&int(0), 0, &int(2)).unwrap(), rat(1, 2));
        assert_eq!(d.smoothed_influence(&int(0), 0, &int(1)).unwrap(), int(1));
        // reduced sum of two ±1 lies in (s-1, s+1] iff it is 0, for s ∈ (0,1)
        let m3 = uniform(3, int(0)).unwrap();
        assert_eq!(m3.smoothed_influence(&int(0), 0, &int(1)).unwrap(), rat(1, 2));
        assert_eq!(m3.smoothed_influence_floor(&int(0), 0, &int(1)).unwrap(), int(0));
    }

    /// Riemann-sum oracle on a fine grid of midpoints: exact for step functions
    /// whose breakpoints lie on the grid.
    fn smoothed_oracle(h: &Halfspace, t: &Rational, i: usize, delta: &Rational, steps: i64) -> Rational {
        let mut acc = Rational::zero();
        for j in 0..steps {
            let s = delta * rat(2 * j + 1, 2 * steps);
            acc += h.influence_at(i, &(t + s)).unwrap();
        }
        acc / int(steps)
    }

    #[test]
    fn smoothed_matches_grid_oracle() {
        let h = Halfspace::new(&[int(3), int(2), int(2), int(1), int(1)], int(1)).unwrap();
        for i in 0..5 {
            for d in [1i64, 2, 3, 5] {
                let exact = h.smoothed_influence(&int(1), i, &int(d)).unwrap();
                assert_eq!(exact, smoothed_oracle(&h, &int(1), i, &int(d), 4 * d));
            }
        }
    }

    #[test]
    fn vertex_boundary_without_table() {
        let h = uniform(3, int(0)).unwrap();
        let (vb0, vb1) = h.vertex_boundary_at(&int(0)).unwrap();
        assert_eq!(vb1, rat(3, 8));
        assert_eq!(vb0, rat(3, 8));
    }

    proptest! {
        #[test]
        fn table_and_tail_agree(ws in proptest::collection::vec((0i64..12, 1i64..4), 1..9), tn in -20i64..20) {
            let weights: Vec<Rational> = ws.iter().map(|(p, q)| rat(*p, *q)).collect();
            prop_assume!(weights.iter().any(|w| !w.is_zero()));
            let t = rat(tn, 3);
            let h = Halfspace::new(&weights, t.clone()).unwrap();
            let f = h.truth_table().unwrap();
            prop_assert_eq!(f.mean(), h.mean().unwrap());
            let prof = influences(&f);
            let hi = h.influences_at(&t).unwrap();
            for i in 0..h.arity() {
                prop_assert_eq!(prof.influence(i), hi[i].clone());
            }
            let (vb0, vb1) = h.vertex_boundary_at(&t).unwrap();
            prop_assert_eq!(vb1, vertex_boundary(&f, true));
            prop_assert_eq!(vb0, vertex_boundary(&f, false));
            for m in 0..f.size() { prop_assert_eq!(h.evaluate(m), f.get(m)); }
        }

        #[test]
        fn dual_is_reflected_threshold(ws in proptest::collection::vec(1i64..9, 1..8), tn in -20i64..20) {
            // 1 - 1{a·(-x) > t} = 1{a·x ≥ -t}
            let weights: Vec<Rational> = ws.iter().map(|w| int(*w)).collect();
            let h = Halfspace::new(&weights, int(tn)).unwrap();
            let g = h.truth_table().unwrap().dual();
            let h2 = Halfspace::new(&weights, int(-tn) - rat(1, 2)).unwrap();
            prop_assert_eq!(g, h2.truth_table().unwrap());
        }
    }
}
