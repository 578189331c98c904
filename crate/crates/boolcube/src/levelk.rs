//! Irwin–Hall CDFs, symmetric sums, degree-`k` smoothed Fourier
//! coefficients, and the level-`k` lower-bound pipeline.

use crate::bfcore::BooleanFunction;
use crate::check::CheckRecord;
use crate::error::{CubeError, Result};
use crate::halfspace::Halfspace;
use crate::rational::{format_rational, int, rat, to_f64, Rational};
use crate::spectral::fwht_spectrum;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn binom_i128(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

fn factorial_f64(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn raw_cdf(k: usize, x: f64) -> f64 {
    // Kahan-compensated alternating sum
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let top = x.floor() as usize;
    for j in 0..=top.min(k) {
        let term = binom_i128(k as u64, j as u64) as f64 * (x - j as f64).powi(k as i32);
        let term = if j % 2 == 0 { term } else { -term };
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum / factorial_f64(k)
}

/// `G_k(x)`, the CDF of a sum of `k` independent `U(0,1)` variables.
pub fn irwin_hall_cdf(k: usize, x: f64) -> Result<f64> {
    if k == 0 {
        return Err(CubeError::Params("k must be ≥ 1".into()));
    }
    let kf = k as f64;
    Ok(if x.is_nan() {
        f64::NAN
    } else if x <= 0.0 {
        0.0
    } else if x >= kf {
        1.0
    } else if x > kf / 2.0 {
        1.0 - raw_cdf(k, kf - x)
    } else {
        raw_cdf(k, x)
    })
}

/// Exact `G_k(x)` at a rational point.
pub fn irwin_hall_exact(k: usize, x: &Rational) -> Result<Rational> {
    if k == 0 {
        return Err(CubeError::Params("k must be ≥ 1".into()));
    }
    if !x.is_positive() {
        return Ok(Rational::zero());
    }
    if *x >= int(k as i64) {
        return Ok(Rational::one());
    }
    let top = x.floor().to_integer().to_usize().unwrap_or(0);
    let mut sum = Rational::zero();
    for j in 0..=top {
        let term = Rational::from_integer(BigInt::from(binom_i128(k as u64, j as u64))) * num_traits::pow(x - int(j as i64), k);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
    Ok(sum / Rational::from_integer(fact))
}

/// `G_k^{(k)}(x) = (−1)^{⌊x⌋}·C(k−1, ⌊x⌋)` away from the integers.
pub fn irwin_hall_kth_derivative(k: usize, x: f64) -> f64 {
    if x <= 0.0 || x >= k as f64 {
        return 0.0;
    }
    let j = x.floor() as u64;
    let c = binom_i128(k as u64 - 1, j) as f64;
    if j % 2 == 0 {
        c
    } else {
        -c
    }
}

/// `k`-th central difference of `G_k` at `x` with step `h`, divided by `h^k`.
pub fn central_difference(k: usize, x: f64, h: f64) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..=k {
        let c = binom_i128(k as u64, i as u64) as f64;
        let g = irwin_hall_cdf(k, x + (k as f64 / 2.0 - i as f64) * h)?;
        acc += if i % 2 == 0 { c * g } else { -c * g };
    }
    Ok(acc / h.powi(k as i32))
}

/// Largest deviation of the finite difference from the derivative law over `points`.
pub fn check_ih_derivative(k: usize, points: &[f64], h: f64) -> Result<CheckRecord> {
    let mut worst = 0.0f64;
    for &x in points {
        let d = central_difference(k, x, h)?;
        worst = worst.max((d - irwin_hall_kth_derivative(k, x)).abs());
    }
    Ok(CheckRecord::le("IH-DERIV", &format!("k={k} points={} h={h}", points.len()), worst, 1e-5, 0.0))
}

/// Elementary symmetric sums `e_m` and power sums `s_m` of `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricStats {
    pub b: Vec<Rational>,
    /// `e[0..=m_max]`
    pub e: Vec<Rational>,
    /// `s[0..=m_max]`, with `s[0] = len(b)`
    pub s: Vec<Rational>,
}

pub fn symmetric_stats(b: &[Rational], m_max: usize) -> Result<SymmetricStats> {
    if m_max > b.len() {
        return Err(CubeError::Params(format!("m_max = {m_max} exceeds {}", b.len())));
    }
    let mut e = vec![Rational::zero(); m_max + 1];
    e[0] = Rational::one();
    for x in b {
        for m in (1..=m_max).rev() {
            let add = &e[m - 1] * x;
            e[m] += add;
        }
    }
    let s = (0..=m_max).map(|m| b.iter().fold(Rational::zero(), |acc, x| acc + num_traits::pow(x.clone(), m))).collect();
    Ok(SymmetricStats { b: b.to_vec(), e, s })
}

impl SymmetricStats {
    pub fn m_max(&self) -> usize {
        self.e.len() - 1
    }

    /// `m·e_m − Σ_{i≤m} (−1)^{i−1} s_i e_{m−i}` for each `m ≥ 1`.
    pub fn newton_girard_residuals(&self) -> Vec<Rational> {
        (1..=self.m_max())
            .map(|m| {
                let mut rhs = Rational::zero();
                for i in 1..=m {
                    let t = &self.s[i] * &self.e[m - i];
                    if i % 2 == 1 {
                        rhs += t;
                    } else {
                        rhs -= t;
                    }
                }
                int(m as i64) * &self.e[m] - rhs
            })
            .collect()
    }

    pub fn newton_girard_holds(&self) -> bool {
        self.newton_girard_residuals().iter().all(|r| r.is_zero())
    }

    /// `s_1 = 1` and `s_{i+1} ≤ s_i/(4k)` for `i < k`.
    pub fn chain_hypothesis(&self, k: usize) -> bool {
        k <= self.m_max()
            && self.s.get(1).is_some_and(|s1| s1.is_one())
            && (1..k).all(|i| self.s[i + 1] <= &self.s[i] / int(4 * k as i64))
    }

    /// `e_{m−1} ≤ 2m·e_m` for all `1 ≤ m ≤ k`.
    pub fn chain_holds(&self, k: usize) -> bool {
        (1..=k.min(self.m_max())).all(|m| self.e[m - 1] <= int(2 * m as i64) * &self.e[m])
    }

    /// `2^{1−k}/k!`
    pub fn chain_floor(k: usize) -> Rational {
        let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
        Rational::new(BigInt::from(2), (BigInt::one() << k) * fact)
    }
}

/// Newton–Girard on the given values.
pub fn check_newton_girard(b: &[Rational], m_max: usize) -> Result<CheckRecord> {
    let st = symmetric_stats(b, m_max)?;
    let worst = st.newton_girard_residuals().into_iter().map(|r| r.abs()).max().unwrap_or_else(Rational::zero);
    Ok(CheckRecord::eq("NG", &format!("len={} m_max={m_max}", b.len()), worst, Rational::zero()))
}

/// Squared normalised weights `a_i²/Σa_j²`.
pub fn normalised_squares(h: &Halfspace) -> Vec<Rational> {
    let ss = h.sum_sq();
    h.weights().iter().map(|a| a * a / &ss).collect()
}

/// The symmetric-sum chain on `b_i = a_i²/‖a‖²`: `Σ_{|S|=k}(a^S)² ≥ 2^{1−k}/k!`.
pub fn check_chain(h: &Halfspace, k: usize) -> Result<CheckRecord> {
    let st = symmetric_stats(&normalised_squares(h), k.min(h.n()))?;
    let inst = format!("{} k={k}", h.to_text());
    let floor = SymmetricStats::chain_floor(k);
    let ek = st.e.get(k).cloned().unwrap_or_else(Rational::zero);
    if !st.chain_hypothesis(k) {
        return Ok(CheckRecord::not_applicable("NG-CHAIN", &inst, floor, Some(ek.into()), "s_{i+1} ≤ s_i/(4k) fails"));
    }
    let rec = CheckRecord::le("NG-CHAIN", &inst, floor, ek, 0.0);
    Ok(if st.chain_holds(k) { rec } else { rec.with_note("e_{m-1} ≤ 2m e_m violated") })
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self, m: usize) -> Poly {
        let mut c = self.0.clone();
        for _ in 0..m {
            c = c.iter().enumerate().skip(1).map(|(i, v)| v * int(i as i64)).collect();
        }
        Poly(c)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Min and max over `[lo, hi]`, for degree ≤ 2.
    pub fn range_on(&self, lo: &Rational, hi: &Rational) -> Result<(Rational, Rational)> {
        if self.degree() > 2 {
            return Err(CubeError::Params("range only for degree ≤ 2".into()));
        }
        let mut cands = vec![self.eval(lo), self.eval(hi)];
        if self.degree() == 2 {
            let v = -&self.0[1] / (int(2) * &self.0[2]);
            if &v > lo && &v < hi {
                cands.push(self.eval(&v));
            }
        }
        let mn = cands.iter().min().cloned().expect("nonempty");
        let mx = cands.iter().max().cloned().expect("nonempty");
        Ok((mn, mx))
    }
}

/// `E_x[x^{[m]} g(s + a·x)]` against `∏a·[inf, sup] g^{(m)}` on `(s−Σa, s+Σa)`.
///
/// `lhs` is the excess outside the band (`≤ 0` passes).
pub fn check_fderiv(g: &Poly, a: &[Rational], s: &Rational) -> Result<CheckRecord> {
    let m = a.len();
    if m == 0 || m > 20 || a.iter().any(|x| x.is_negative()) {
        return Err(CubeError::Params("need 1 ≤ m ≤ 20 nonnegative weights".into()));
    }
    let mut acc = Rational::zero();
    for mask in 0..1u64 << m {
        let mut arg = s.clone();
        let mut sign = 1;
        for (i, w) in a.iter().enumerate() {
            if mask >> i & 1 == 1 {
                arg += w;
            } else {
                arg -= w;
                sign = -sign;
            }
        }
        let v = g.eval(&arg);
        if sign > 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    let val = acc / Rational::from_integer(BigInt::one() << m);
    let total: Rational = a.iter().fold(Rational::zero(), |x, y| x + y);
    let prod: Rational = a.iter().fold(Rational::one(), |x, y| x * y);
    let (lo, hi) = g.derivative(m).range_on(&(s - &total), &(s + &total))?;
    let (lo, hi) = (&prod * lo, &prod * hi);
    let excess = std::cmp::max(&lo - &val, &val - &hi);
    Ok(CheckRecord::le("FDERIV", &format!("m={m} deg={}", g.degree()), excess, Rational::zero(), 0.0)
        .with_note(format!("value={} band=[{},{}]", format_rational(&val), format_rational(&lo), format_rational(&hi))))
}

/// `e_k` of integers from their power sums, exactly.
fn elementary_from_powers(p: &[i128], k: usize) -> Option<i128> {
    let mut e = vec![0i128; k + 1];
    e[0] = 1;
    for m in 1..=k {
        let mut acc: i128 = 0;
        for i in 1..=m {
            let t = p[i].checked_mul(e[m - i])?;
            acc = if i % 2 == 1 { acc.checked_add(t)? } else { acc.checked_sub(t)? };
        }
        e[m] = acc / m as i128;
    }
    Some(e[k])
}

/// Outcome of scanning `Σ_{|S|=k} a^S x^S` over `{f = 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCondition {
    pub k: usize,
    pub checked: u64,
    pub violations: u64,
    /// Normalised `a_1 ≤ (1/16)/√k` and `t ≥ 4√k`.
    pub hypotheses_met: bool,
}

fn sign_hypotheses(a1: f64, norm: f64, t: f64, k: usize) -> bool {
    let kf = k as f64;
    a1 / norm <= 1.0 / (16.0 * kf.sqrt()) && t / norm >= 4.0 * kf.sqrt()
}

/// Exhaustive scan in the halfspace's sorted nonnegative form.
pub fn sign_condition(h: &Halfspace, k: usize) -> Result<SignCondition> {
    let n = h.n();
    if k == 0 || k > n {
        return Err(CubeError::Params("need 1 ≤ k ≤ n".into()));
    }
    crate::bfcore::check_arity(n)?;
    let w: Vec<i128> = h.scaled_weights().iter().map(|&x| x as i128).collect();
    let scale = Rational::from_integer(BigInt::from(h.scale()));
    let tf = (h.threshold() * &scale).floor().to_integer().to_i128().ok_or_else(|| CubeError::Budget("threshold".into()))?;
    // odd power sums move with the signs; even ones are constant
    let pw: Vec<Vec<i128>> = (0..=k).map(|j| w.iter().map(|x| x.pow(j as u32)).collect()).collect();
    // start at all −1: odd sums are −Σ, even sums +Σ
    let mut p: Vec<i128> = (0..=k)
        .map(|j| {
            let s: i128 = pw[j].iter().sum();
            if j % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    let mut x = vec![false; n];
    let (mut checked, mut violations) = (0u64, 0u64);
    let total = 1u64 << n;
    for g in 0..total {
        if g > 0 {
            let i = g.trailing_zeros() as usize;
            x[i] = !x[i];
            let d = if x[i] { 2 } else { -2 };
            for j in (1..=k).step_by(2) {
                p[j] += d * pw[j][i];
            }
        }
        if p[1] > tf {
            checked += 1;
            let e = elementary_from_powers(&p, k).ok_or_else(|| CubeError::Budget("e_k overflows".into()))?;
            if e < 0 {
                violations += 1;
            }
        }
    }
    let norm = to_f64(&h.sum_sq()).sqrt();
    let hyp = sign_hypotheses(to_f64(h.max_weight()), norm, to_f64(h.threshold()), k);
    Ok(SignCondition { k, checked, violations, hypotheses_met: hyp })
}

/// Equal unit weights, grouped by the number of `+1` coordinates; `checked`
/// counts groups rather than points.
pub fn sign_condition_uniform(n: usize, k: usize, t: &Rational) -> Result<SignCondition> {
    if k == 0 || k > n {
        return Err(CubeError::Params("need 1 ≤ k ≤ n".into()));
    }
    let (mut checked, mut violations) = (0u64, 0u64);
    for j in 0..=n {
        if int(2 * j as i64 - n as i64) > *t {
            checked += 1;
            let mut e: i128 = 0;
            for i in 0..=k {
                let term = binom_i128((n - j) as u64, i as u64) * binom_i128(j as u64, (k - i) as u64);
                e += if i % 2 == 0 { term } else { -term };
            }
            if e < 0 {
                violations += 1;
            }
        }
    }
    let hyp = sign_hypotheses(1.0, (n as f64).sqrt(), to_f64(t), k);
    Ok(SignCondition { k, checked, violations, hypotheses_met: hyp })
}

pub fn check_sign_condition(h: &Halfspace, k: usize) -> Result<CheckRecord> {
    let sc = sign_condition(h, k)?;
    let inst = format!("{} k={k}", h.to_text());
    let v = int(sc.violations as i64);
    Ok(if sc.hypotheses_met {
        CheckRecord::eq("SIGN-COND", &inst, v, Rational::zero())
    } else {
        CheckRecord::not_applicable("SIGN-COND", &inst, v, Some(Rational::zero().into()), "a_1 or t outside the claim's range")
    }
    .with_note(format!("points={}", sc.checked)))
}

/// `e_S^δ = E_{s∼δT}[f̂_{t+s}(S)]` for original coordinates `set`.
pub fn smoothed_fourier(h: &Halfspace, t: &Rational, set: &[usize], delta: &Rational) -> Result<f64> {
    let k = set.len();
    if k == 0 {
        return Err(CubeError::Params("S must be nonempty".into()));
    }
    if !delta.is_positive() {
        return Err(CubeError::Params("δ must be positive".into()));
    }
    let signed = h.signed_weights();
    let mut sign = 1.0;
    let mut ws = Vec::with_capacity(k);
    let mut seen = std::collections::HashSet::new();
    for &i in set {
        if i >= h.arity() || !seen.insert(i) {
            return Err(CubeError::Params(format!("bad coordinate {i}")));
        }
        match h.position(i) {
            None => return Ok(0.0),
            Some(p) => {
                ws.push(h.scaled_weights()[p]);
                if signed[i].is_negative() {
                    sign = -sign;
                }
            }
        }
    }
    let mut red = h.tail()?.clone();
    if red.n() == k {
        red = crate::tail::TailDistribution::from_scaled(vec![], h.scale())?;
    } else {
        for &w in &ws {
            red = red.without_weight(w)?;
        }
    }
    let pairs = red.pairs()?;
    let scale = h.scale() as f64;
    let ts = to_f64(t) * scale;
    let ds = to_f64(delta) * scale;
    let mut acc = 0.0;
    for (v, c) in pairs {
        let mut inner = 0.0;
        for mask in 0..1u32 << k {
            let (mut sx, mut par) = (0i64, 1.0);
            for (i, w) in ws.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    sx += w;
                } else {
                    sx -= w;
                    par = -par;
                }
            }
            inner += par * irwin_hall_cdf(k, ((sx + v) as f64 - ts) / ds)?;
        }
        acc += c as f64 * inner;
    }
    Ok(sign * acc / (2f64.powi(red.n() as i32) * 2f64.powi(k as i32)))
}

/// Level-`≤k` upper inequality `W^{≤k} ≤ (2e/k)^k μ² ln(1/μ)^k` for `μ < e^{−k/2}`.
pub fn check_level_k_upper(f: &BooleanFunction, k: usize, label: &str) -> Result<CheckRecord> {
    let spec = fwht_spectrum(f);
    let lhs = spec.cumulative(k, false)?;
    let mu = to_f64(&f.mean());
    let kf = k as f64;
    let rhs = (2.0 * std::f64::consts::E / kf).powf(kf) * mu * mu * (1.0 / mu).ln().powf(kf);
    let inst = format!("{label} k={k}");
    if !(mu > 0.0 && mu < (-kf / 2.0).exp()) {
        return Ok(CheckRecord::not_applicable("LVLK-upper", &inst, lhs, Some(rhs.into()), "μ ≥ e^{-k/2}"));
    }
    Ok(CheckRecord::le("LVLK-upper", &inst, lhs, rhs, 1e-12))
}

/// Every quantity in the level-`k` lower-bound argument for one halfspace.
#[derive(Clone, Debug, PartialEq)]
pub struct WkPipeline {
    pub k: usize,
    pub epsilon: Rational,
    pub wk: Rational,
    /// `W^k·k!·(ln 2k)^k/(ε² ln(1/ε)^k)`
    pub ratio: f64,
    /// `I_1/(μ/k)`
    pub influence_stat: f64,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    /// Sum of the `k` largest weights.
    pub a: Rational,
    /// `2k·a_1 < β`
    pub small_a: bool,
    /// Normalised `t ≥ 4√k`.
    pub large_t: bool,
    pub sign: SignCondition,
    /// `M = Σ_{|S|=k} a^S e_S^δ`
    pub m: f64,
    /// `Σ_{|S|=k} (a^S)²`
    pub sq_sum: Rational,
    pub upper: f64,
    pub lower: f64,
}

/// `M = E_z[G_k((a·z − t)/δ)·e_k(a∘z)]`, in scaled units, with `e_k` exact per point.
fn m_statistic(h: &Halfspace, k: usize, t: &Rational, delta: &Rational) -> Result<f64> {
    let n = h.n();
    let w: Vec<i128> = h.scaled_weights().iter().map(|&x| x as i128).collect();
    let scale = h.scale() as f64;
    let total: i64 = h.scaled_weights().iter().sum();
    let ts = to_f64(t) * scale;
    let ds = to_f64(delta) * scale;
    // G by value of a·z: index (v + total)/2
    let mut gcache = vec![f64::NAN; total as usize + 1];
    let pw: Vec<Vec<i128>> = (0..=k).map(|j| w.iter().map(|x| x.pow(j as u32)).collect()).collect();
    let mut p: Vec<i128> = (0..=k)
        .map(|j| {
            let s: i128 = pw[j].iter().sum();
            if j % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    let mut x = vec![false; n];
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for g in 0..1u64 << n {
        if g > 0 {
            let i = g.trailing_zeros() as usize;
            x[i] = !x[i];
            let d = if x[i] { 2 } else { -2 };
            for j in (1..=k).step_by(2) {
                p[j] += d * pw[j][i];
            }
        }
        let idx = ((p[1] + total as i128) / 2) as usize;
        if gcache[idx].is_nan() {
            gcache[idx] = irwin_hall_cdf(k, (p[1] as f64 - ts) / ds)?;
        }
        let gv = gcache[idx];
        if gv == 0.0 {
            continue;
        }
        let e = elementary_from_powers(&p, k).ok_or_else(|| CubeError::Budget("e_k overflows".into()))?;
        let y = gv * e as f64 - comp;
        let s2 = sum + y;
        comp = (s2 - sum) - y;
        sum = s2;
    }
    Ok(sum / 2f64.powi(n as i32) / scale.powi(k as i32))
}

pub fn wk_pipeline(h: &Halfspace, k: usize) -> Result<WkPipeline> {
    let n = h.n();
    if k == 0 || k > n {
        return Err(CubeError::Params("need 1 ≤ k ≤ n".into()));
    }
    crate::bfcore::check_arity(h.arity())?;
    let t = h.threshold().clone();
    let dist = h.tail()?;
    let eps = dist.tail(&t);
    if eps.is_zero() {
        return Err(CubeError::Degenerate("ε = 0".into()));
    }
    if eps > rat(1, 2) {
        return Err(CubeError::Params("needs μ ≤ 1/2".into()));
    }
    let f = h.truth_table()?;
    let wk = fwht_spectrum(&f).level_weight(k)?;
    let ef = to_f64(&eps);
    let kf = k as f64;
    let l = (1.0 / ef).ln();
    let ratio = to_f64(&wk) * factorial_f64(k) * (2.0 * kf).ln().powf(kf) / (ef * ef * l.powf(kf));
    let i1 = to_f64(&h.top_influence_at(&t)?);
    let th = dist.decay_thresholds(&t, Some(k))?;
    let gamma = th.gamma_k.clone().expect("k given");
    let delta = th.delta_k.clone().expect("k given");
    let a: Rational = h.weights().iter().take(k).fold(Rational::zero(), |x, y| x + y);
    let small_a = int(2 * k as i64) * h.max_weight() < th.beta;
    let norm = to_f64(&h.sum_sq()).sqrt();
    let large_t = to_f64(&t) / norm >= 4.0 * kf.sqrt();
    let sign = sign_condition(h, k)?;
    let sq = symmetric_stats(&h.weights().iter().map(|w| w * w).collect::<Vec<_>>(), k)?;
    let sq_sum = sq.e[k].clone();
    let m = if delta.is_positive() { m_statistic(h, k, &t, &delta)? } else { f64::NAN };
    let upper = to_f64(&wk).sqrt() * to_f64(&sq_sum).sqrt();
    let lower = ef / (9.0 * to_f64(&delta).powi(k as i32)) * to_f64(&sq_sum);
    Ok(WkPipeline {
        k,
        epsilon: eps,
        wk,
        ratio,
        influence_stat: i1 / (ef / kf),
        beta: th.beta,
        gamma,
        delta,
        a,
        small_a,
        large_t,
        sign,
        m,
        sq_sum,
        upper,
        lower,
    })
}

/// Both sides of the `M` sandwich, each asserted only where its proof step applies.
pub fn verify_wk_lower(h: &Halfspace, k: usize) -> Result<Vec<CheckRecord>> {
    let p = wk_pipeline(h, k)?;
    let inst = format!("{} k={k}", h.to_text());
    let tol = 1e-9;
    let note = format!(
        "R={:.6e} I1/(mu/k)={:.6e} beta={} delta={} 2ka1<beta={} t>=4sqrt(k)={}",
        p.ratio,
        p.influence_stat,
        format_rational(&p.beta),
        format_rational(&p.delta),
        p.small_a,
        p.large_t
    );
    let upper = if p.sign.violations == 0 {
        CheckRecord::le("WK-PIPELINE", &inst, p.m, p.upper, tol)
    } else {
        CheckRecord::not_applicable("WK-PIPELINE", &inst, p.m, Some(p.upper.into()), "sign condition fails")
    }
    .with_note(format!("upper; {note}"));
    let lower = if p.small_a && p.m.is_finite() {
        CheckRecord::le("WK-PIPELINE", &inst, p.lower, p.m, tol)
    } else {
        CheckRecord::not_applicable("WK-PIPELINE", &inst, p.lower, Some(p.m.into()), "2k·a_1 ≥ β")
    }
    .with_note(format!("lower; {note}"));
    Ok(vec![upper, lower])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bfcore::majority;
    use crate::halfspace::uniform;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn irwin_hall_examples() {
        assert!((irwin_hall_cdf(1, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((irwin_hall_cdf(2, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((irwin_hall_cdf(2, 0.5).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(irwin_hall_cdf(3, -1.0).unwrap(), 0.0);
        assert_eq!(irwin_hall_cdf(3, 3.5).unwrap(), 1.0);
        assert!(irwin_hall_cdf(0, 0.5).is_err());
        assert_eq!(irwin_hall_exact(2, &rat(1, 2)).unwrap(), rat(1, 8));
        assert_eq!(irwin_hall_exact(4, &int(2)).unwrap(), rat(1, 2));
    }

    #[test]
    fn float_matches_exact() {
        for k in 1..=12usize {
            for num in 0..=(8 * k as i64) {
                let x = rat(num, 8);
                let e = to_f64(&irwin_hall_exact(k, &x).unwrap());
                let f = irwin_hall_cdf(k, to_f64(&x)).unwrap();
                assert!((e - f).abs() < 1e-12, "k={k} x={num}/8: {e} vs {f}");
            }
        }
    }

    #[test]
    fn derivative_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=6 {
            let pts: Vec<f64> = (0..200).map(|_| rng.gen_range(0..k) as f64 + rng.gen_range(0.3..0.7)).collect();
            let r = check_ih_derivative(k, &pts, 0.1).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(irwin_hall_kth_derivative(4, 1.5), -3.0);
    }

    #[test]
    fn symmetric_examples() {
        let st = symmetric_stats(&[rat(1, 2), rat(1, 2)], 2).unwrap();
        assert_eq!(st.e, vec![int(1), int(1), rat(1, 4)]);
        assert_eq!(st.s[2], rat(1, 2));
        assert!(st.newton_girard_holds());
        let st = symmetric_stats(&[int(1)], 1).unwrap();
        assert_eq!(st.e[1], int(1));
        assert!(symmetric_stats(&[int(1)], 2).is_err());
        let st = symmetric_stats(&vec![rat(1, 9); 9], 2).unwrap();
        assert_eq!(st.e[2], rat(4, 9));
        assert!(st.e[2] >= SymmetricStats::chain_floor(2));
    }

    #[test]
    fn chain_on_uniform() {
        let h = uniform(12, int(4)).unwrap();
        let r = check_chain(&h, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        let h = uniform(3, int(0)).unwrap();
        let r = check_chain(&h, 2).unwrap();
        assert_eq!(r.outcome, crate::check::Outcome::HypothesisNotMet);
    }

    #[test]
    fn fderiv_examples() {
        // g = x^3, m = 2: E[x1 x2 (s + a1x1 + a2x2)^3] = 6 a1 a2 s
        let g = Poly(vec![int(0), int(0), int(0), int(1)]);
        let r = check_fderiv(&g, &[rat(1, 2), rat(1, 3)], &int(2)).unwrap();
        assert!(r.passed());
        assert!(r.notes.contains("value=2"));
        assert!(check_fderiv(&Poly(vec![int(1); 6]), &[int(1)], &int(0)).is_err());
    }

    #[test]
    fn sign_condition_examples() {
        let w = sign_condition_uniform(1024, 2, &int(182)).unwrap();
        assert!(w.hypotheses_met);
        assert_eq!(w.violations, 0);
        let w = sign_condition_uniform(1024, 3, &int(222)).unwrap();
        assert!(w.hypotheses_met && w.violations == 0);
        let s = sign_condition(&uniform(9, int(3)).unwrap(), 2).unwrap();
        // {Σ > 3} is j ≥ 7 plus signs: 36 + 9 + 1 points
        assert_eq!(s.checked, 46);
        assert_eq!(s.violations, 0);
        let s = sign_condition(&uniform(9, int(-9)).unwrap(), 2).unwrap();
        assert!(s.violations > 0);
        let d = Halfspace::new(&[int(1)], int(0)).unwrap();
        assert!(!sign_condition(&d, 1).unwrap().hypotheses_met);
    }

    fn mc_smoothed(h: &Halfspace, t: f64, set: &[usize], delta: f64, samples: usize, seed: u64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ws: Vec<f64> = h.signed_weights().iter().map(to_f64).collect();
        let n = ws.len();
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..samples {
            let x: Vec<f64> = (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
            let tt: f64 = (0..set.len()).map(|_| rng.gen::<f64>()).sum();
            let dot: f64 = ws.iter().zip(&x).map(|(a, b)| a * b).sum();
            let chi: f64 = set.iter().map(|&i| x[i]).product();
            let v = if dot > t + delta * tt { chi } else { 0.0 };
            s1 += v;
            s2 += v * v;
        }
        let m = s1 / samples as f64;
        (m, ((s2 / samples as f64 - m * m) / samples as f64).sqrt())
    }

    #[test]
    fn smoothed_fourier_matches_monte_carlo() {
        let h = uniform(5, int(0)).unwrap();
        let v = smoothed_fourier(&h, &int(0), &[0, 1], &int(4)).unwrap();
        let (m, se) = mc_smoothed(&h, 0.0, &[0, 1], 4.0, 1_000_000, 11);
        assert!((v - m).abs() <= 3.0 * se + 1e-12, "{v} vs {m} ± {se}");
        let z = smoothed_fourier(&h, &int(5), &[0, 1], &int(1)).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn smoothed_fourier_degree_one_is_half_smoothed_influence() {
        let h = Halfspace::new(&[int(3), int(2), int(2), int(1)], int(1)).unwrap();
        for i in 0..4 {
            let a = smoothed_fourier(&h, &int(1), &[i], &rat(5, 2)).unwrap();
            let b = to_f64(&h.smoothed_influence(&int(1), i, &rat(5, 2)).unwrap());
            assert!((a - b / 2.0).abs() < 1e-12, "{i}: {a} vs {b}");
        }
    }

    #[test]
    fn smoothed_fourier_respects_negated_coordinates() {
        let h = Halfspace::from_signed(&[int(2), int(-1), int(1)], int(0)).unwrap();
        let v = smoothed_fourier(&h, &int(0), &[0, 1], &int(2)).unwrap();
        let (m, se) = mc_smoothed(&h, 0.0, &[0, 1], 2.0, 400_000, 5);
        assert!((v - m).abs() <= 4.0 * se + 1e-12, "{v} vs {m}");
    }

    #[test]
    fn m_statistic_matches_set_sum() {
        let h = Halfspace::new(&[int(4), int(3), int(3), int(2), int(2), int(1), int(1)], int(5)).unwrap();
        let delta = rat(7, 2);
        for k in [1usize, 2, 3] {
            let m = m_statistic(&h, k, &int(5), &delta).unwrap();
            let mut direct = 0.0;
            for mask in 0u32..1 << 7 {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let set: Vec<usize> = (0..7).filter(|i| mask >> i & 1 == 1).collect();
                let prod: f64 = set.iter().map(|&i| to_f64(&h.weights()[h.position(i).unwrap()])).product();
                direct += prod * smoothed_fourier(&h, &int(5), &set, &delta).unwrap();
            }
            assert!((m - direct).abs() < 1e-12, "k={k}: {m} vs {direct}");
        }
    }

    #[test]
    fn pipeline_on_majority() {
        // Pr[Σ > 9] = Pr[Σ ≥ 11] = 121/32768, about 2^-8
        let h = uniform(15, int(9)).unwrap();
        let recs = verify_wk_lower(&h, 2).unwrap();
        for r in &recs {
            assert_ne!(r.outcome, crate::check::Outcome::Fail, "{r:?}");
        }
        let p = wk_pipeline(&h, 1).unwrap();
        assert!(p.ratio > 0.0);
        let d = Halfspace::new(&[int(1)], int(0)).unwrap();
        let p = wk_pipeline(&d, 1).unwrap();
        assert!(!p.small_a);
    }

    #[test]
    fn level_k_upper_on_majority() {
        let f = majority(9).unwrap();
        let r = check_level_k_upper(&f, 2, "maj9").unwrap();
        assert_eq!(r.outcome, crate::check::Outcome::HypothesisNotMet);
        let h = uniform(15, int(9)).unwrap();
        for k in [2, 3] {
            let r = check_level_k_upper(&h.truth_table().unwrap(), k, "maj15@9").unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    proptest! {
        #[test]
        fn newton_girard_random(v in prop::collection::vec((0i64..20, 1i64..9), 1..9)) {
            let b: Vec<Rational> = v.iter().map(|(p, q)| rat(*p, *q)).collect();
            let r = check_newton_girard(&b, b.len()).unwrap();
            prop_assert!(r.passed());
        }

        #[test]
        fn fderiv_random(coef in prop::collection::vec(-9i64..10, 3..8), ws in prop::collection::vec(1i64..6, 1..6), s in -5i64..6) {
            let m = ws.len();
            let mut c: Vec<Rational> = coef.iter().map(|&x| rat(x, 3)).collect();
            c.truncate(m + 3);
            let g = Poly(c);
            let a: Vec<Rational> = ws.iter().map(|&w| rat(w, 2)).collect();
            let r = check_fderiv(&g, &a, &int(s)).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }
    }
}
