//! Local Chernoff statistics and tail-shape inequalities on exact tails.

pub use crate::check::CheckRecord;
use crate::error::{CubeError, Result};
use crate::halfspace::Halfspace;
use crate::rational::{format_rational, int, rat, to_f64, Rational};
use crate::tail::{Interval, TailDistribution};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Big/small split of the sorted coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub big: Vec<usize>,
    pub small: Vec<usize>,
}

impl Partition {
    /// `B = {i : a_i > cut}` over sorted positions.
    pub fn by_cut(h: &Halfspace, cut: &Rational) -> Self {
        let (big, small) = (0..h.n()).partition(|&k| h.weights()[k] > *cut);
        Partition { big, small }
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        let mut all: Vec<usize> = self.big.iter().chain(&self.small).copied().collect();
        all.sort_unstable();
        all == (0..n).collect::<Vec<_>>()
    }
}

fn instance_label(dist: &TailDistribution) -> String {
    let ws: Vec<String> = dist.scaled_weights().iter().map(|w| format_rational(&dist.unscale(*w))).collect();
    format!("tail:{}", ws.join(","))
}

/// `F(d)F(b) ≤ F(c)F(b+d−c−m)`.
pub fn check_log_concavity(dist: &TailDistribution, b: &Rational, c: &Rational, d: &Rational, m: &Rational) -> Result<CheckRecord> {
    if !(b <= c && c <= d) {
        return Err(CubeError::Params("need b ≤ c ≤ d".into()));
    }
    let lhs = dist.tail(d) * dist.tail(b);
    let rhs = dist.tail(c) * dist.tail(&(b + d - c - m));
    Ok(CheckRecord::le("LEM111", &instance_label(dist), lhs, rhs, 0.0)
        .with_note(format!("b={} c={} d={} m={}", format_rational(b), format_rational(c), format_rational(d), format_rational(m))))
}

/// Integer-count version of the log-concavity test, for bulk scans.
pub fn log_concavity_holds(dist: &TailDistribution, b: i64, c: i64, d: i64, m: i64) -> bool {
    let lhs = dist.count_gt(d) as u128 * dist.count_gt(b) as u128;
    let rhs = dist.count_gt(c) as u128 * dist.count_gt(b + d - c - m) as u128;
    lhs <= rhs
}

/// `Pr[X ∈ (t−m, t+m]] ≤ 5·Pr[X ∈ (s−m, s+m]]`; the ratio is reported.
pub fn check_interval_decay(dist: &TailDistribution, s: &Rational, t: &Rational, m: &Rational) -> Result<CheckRecord> {
    if s.is_negative() || s > t {
        return Err(CubeError::Params("need 0 ≤ s ≤ t".into()));
    }
    let top = dist.interval_prob(&(t - m), &(t + m), Interval::OpenClosed);
    let bottom = dist.interval_prob(&(s - m), &(s + m), Interval::OpenClosed);
    let note = if bottom.is_zero() {
        "ratio undefined".to_string()
    } else {
        format!("ratio={}", format_rational(&(&top / &bottom)))
    };
    Ok(CheckRecord::le("LEM32", &instance_label(dist), top, int(5) * bottom, 0.0).with_note(note))
}

/// `Pr[X ∈ (t−m,t+m]] / Pr[X ∈ (s−m,s+m]]`, `None` when the denominator vanishes.
pub fn interval_decay_ratio(dist: &TailDistribution, s: &Rational, t: &Rational, m: &Rational) -> Option<Rational> {
    let top = dist.interval_prob(&(t - m), &(t + m), Interval::OpenClosed);
    let bottom = dist.interval_prob(&(s - m), &(s + m), Interval::OpenClosed);
    if bottom.is_zero() {
        None
    } else {
        Some(top / bottom)
    }
}

/// `F(t+δ+m)^l ≤ 2F(t)^{l+1}` with `l = 1 + ⌊t/δ⌋`, compared on integer counts.
pub fn check_log_concave_exp(dist: &TailDistribution, t: &Rational, delta: &Rational, m: &Rational) -> Result<CheckRecord> {
    if t.is_negative() || !delta.is_positive() {
        return Err(CubeError::Params("need t ≥ 0 and δ > 0".into()));
    }
    let l = (t / delta).floor().to_integer().to_u32().ok_or_else(|| CubeError::Budget("exponent too large".into()))? + 1;
    let c1 = BigUint::from(dist.count_above(&(t + delta + m)));
    let c0 = BigUint::from(dist.count_above(t));
    // (c1/2^n)^l ≤ 2 (c0/2^n)^{l+1}  ⇔  c1^l · 2^n ≤ 2 · c0^{l+1}
    let lhs_int = num_traits::pow(c1.clone(), l as usize) << dist.n();
    let rhs_int = num_traits::pow(c0.clone(), l as usize + 1) << 1usize;
    let pass = lhs_int <= rhs_int;
    let n = dist.n();
    let p1 = Rational::new(BigInt::from(c1), BigInt::one() << n);
    let p0 = Rational::new(BigInt::from(c0), BigInt::one() << n);
    let lhs = num_traits::pow(p1, l as usize);
    let rhs = int(2) * num_traits::pow(p0, l as usize + 1);
    let rec = CheckRecord::le("LEM42", &instance_label(dist), lhs, rhs, 0.0).with_note(format!("l={l}"));
    debug_assert_eq!(rec.passed(), pass);
    Ok(rec)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Variant {
    /// `D = δ_{1/2}·√ln(1/ε)` on normalised weights.
    Strong,
    /// `D_S = δ_{1/2}/√(Σ_S a_i²/ln(1/ε))`, or the large-`B` branch.
    Partitioned(Partition),
    /// `(δ_c − m)_+·√ln(1/ε)/ln(2/c)` on normalised weights.
    Weak(Rational),
}

impl Variant {
    pub fn check_id(&self) -> &'static str {
        match self {
            Variant::Strong => "THM18",
            Variant::Partitioned(_) => "THM19",
            Variant::Weak(_) => "THM110",
        }
    }
}

/// Value of a local Chernoff statistic and which branch produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernoffStatistic {
    pub value: f64,
    pub epsilon: Rational,
    pub delta: Rational,
    pub large_b: bool,
}

/// `sign(x)·√(x²/q)` computed from the exact ratio `x²/q`, so the result is
/// invariant under common rescaling of `x` and `√q`.
fn normalised(x: &Rational, q: &Rational) -> f64 {
    let v = to_f64(&(x * x / q)).sqrt();
    if x.is_negative() {
        -v
    } else {
        v
    }
}

pub fn local_chernoff_statistic(h: &Halfspace, t: &Rational, variant: &Variant) -> Result<ChernoffStatistic> {
    let dist = h.tail()?;
    let eps = dist.tail(t);
    if eps.is_zero() {
        return Err(CubeError::Degenerate("ε = 0".into()));
    }
    let ln_inv = -to_f64(&eps).ln();
    match variant {
        Variant::Strong => {
            let delta = dist.delta_query(t, &rat(1, 2))?;
            let value = normalised(&delta, &h.sum_sq()) * ln_inv.sqrt();
            Ok(ChernoffStatistic { value, epsilon: eps, delta, large_b: false })
        }
        Variant::Partitioned(p) => {
            if !p.is_valid_for(h.n()) {
                return Err(CubeError::Params("partition does not cover the coordinates".into()));
            }
            let delta = dist.delta_query(t, &rat(1, 2))?;
            if p.big.len() as f64 >= 0.5 * ln_inv {
                return Ok(ChernoffStatistic { value: 0.0, epsilon: eps, delta, large_b: true });
            }
            if p.small.is_empty() {
                return Err(CubeError::Params("empty S with small B".into()));
            }
            let ss = p.small.iter().fold(Rational::zero(), |a, &k| a + &h.weights()[k] * &h.weights()[k]);
            let value = normalised(&delta, &ss) * ln_inv.sqrt();
            Ok(ChernoffStatistic { value, epsilon: eps, delta, large_b: false })
        }
        Variant::Weak(c) => {
            if !c.is_positive() {
                return Err(CubeError::Params("c must be positive".into()));
            }
            let delta = dist.delta_query(t, c)?;
            let m = int(2) * h.max_weight();
            let excess = if delta > m { &delta - &m } else { Rational::zero() };
            let log2c = (2.0 / to_f64(c)).ln();
            let value = normalised(&excess, &h.sum_sq()) * ln_inv.sqrt() / log2c;
            Ok(ChernoffStatistic { value, epsilon: eps, delta, large_b: false })
        }
    }
}

/// Statistic checked against a pinned constant; reported when none is pinned.
pub fn check_local_chernoff(h: &Halfspace, t: &Rational, variant: &Variant, pinned: Option<f64>) -> Result<CheckRecord> {
    let st = local_chernoff_statistic(h, t, variant)?;
    let inst = format!("{}@t={}", h.to_text(), format_rational(t));
    let mut rec = match pinned {
        Some(c) => CheckRecord::le(variant.check_id(), &inst, st.value, c, 0.0),
        None => CheckRecord::reported(variant.check_id(), &inst, st.value),
    };
    if st.large_b {
        rec = rec.with_note("large-B branch");
    }
    Ok(rec.with_note(format!("eps={} delta={}", format_rational(&st.epsilon), format_rational(&st.delta))))
}

/// Standard normal upper tail.
pub fn normal_tail(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(z / std::f64::consts::SQRT_2)
}

pub const GAUSSIAN_COMPARISON: f64 = 3.178;

/// `F(t)/Φ̄(t/‖a‖)` with `t` in the halfspace's own units.
pub fn gaussian_tail_ratio(h: &Halfspace, t: &Rational) -> Result<f64> {
    let f = to_f64(&h.tail()?.tail(t));
    let z = normalised(t, &h.sum_sq());
    Ok(f / normal_tail(z))
}

/// `Pr[X ≥ t]/Φ̄(t/‖a‖)`, the left limit of the same ratio.
pub fn gaussian_tail_ratio_closed(h: &Halfspace, t: &Rational) -> Result<f64> {
    let d = h.tail()?;
    let f = to_f64(&crate::rational::prob(d.count_at_least(t), d.n()));
    Ok(f / normal_tail(normalised(t, &h.sum_sq())))
}
