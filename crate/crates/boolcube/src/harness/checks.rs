//! Per-member and corpus-independent check implementations.

use crate::bfcore::{dictator, paper5, subcube, talagrand_or, BooleanFunction, FunctionSpec};
use crate::check::{CheckRecord, Num};
use crate::chernoff::{self, check_interval_decay, check_local_chernoff, check_log_concave_exp, check_log_concavity, normal_tail, Partition, Variant};
use crate::correlate::{self, best_halfspace_over_form, first_level_form, integral_identity, unbiased_correlator};
use crate::error::{CubeError, Result};
use crate::flips::{audit_flips, audit_four_maps_rational, FourMapAudit};
use crate::halfspace::{uniform, Halfspace};
use crate::influence::{boundary_measures, influences};
use crate::levelk::{self, check_chain, check_fderiv, check_ih_derivative, check_newton_girard, check_sign_condition, normalised_squares, Poly};
use crate::rational::{format_rational, int, prob, rat, scale_to_i64, to_f64, Rational};
use crate::spectral::{fwht_spectrum, naive_spectrum, FourierSpectrum};
use crate::tail::{Interval, TailDistribution};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::cmp::Ordering;
use std::sync::OnceLock;

/// `c0` used by the resistance classification in suite runs.
pub const DEFAULT_RESISTANCE_C0: f64 = 0.5;

/// One corpus entry with its truth table and spectrum built on demand.
pub struct Member {
    pub label: String,
    pub spec: FunctionSpec,
    pub halfspace: Option<Halfspace>,
    table: OnceLock<std::result::Result<BooleanFunction, String>>,
    spectrum: OnceLock<FourierSpectrum>,
}

impl Member {
    pub fn new(spec: FunctionSpec) -> Result<Self> {
        let halfspace = spec.halfspace().transpose()?;
        Ok(Member { label: spec.to_text(), spec, halfspace, table: OnceLock::new(), spectrum: OnceLock::new() })
    }

    pub fn table(&self) -> Result<&BooleanFunction> {
        self.table
            .get_or_init(|| self.spec.build().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| CubeError::Params(format!("truth table unavailable: {e}")))
    }

    pub fn spectrum(&self) -> Result<&FourierSpectrum> {
        let f = self.table()?;
        Ok(self.spectrum.get_or_init(|| fwht_spectrum(f)))
    }

    fn rng(&self, salt: &str) -> ChaCha8Rng {
        let d = Sha256::digest(format!("{salt}:{}", self.label).as_bytes());
        ChaCha8Rng::seed_from_u64(u64::from_le_bytes(d[..8].try_into().expect("8 bytes")))
    }
}

fn ln_inv(x: f64) -> f64 {
    -x.ln()
}

fn count_rat(c: u64) -> Rational {
    Rational::from_integer(c.into())
}

/// `p1/q1` vs `p2/q2` with a zero denominator meaning `+∞`.
fn cmp_frac(p1: u128, q1: u128, p2: u128, q2: u128) -> Ordering {
    match (q1 == 0, q2 == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        _ => (p1 * q2).cmp(&(p2 * q1)),
    }
}

fn na(id: &str, label: &str, why: &str) -> CheckRecord {
    CheckRecord::not_applicable(id, label, f64::NAN, None, why)
}

/// Support values of `a·x` in scaled units.
fn support(dist: &TailDistribution) -> Result<Vec<i64>> {
    Ok(dist.pairs()?.into_iter().map(|(v, _)| v).collect())
}

/// Up to `k` entries spread evenly over `xs`.
fn spread<T: Clone>(xs: &[T], k: usize) -> Vec<T> {
    if xs.len() <= k {
        return xs.to_vec();
    }
    (0..k).map(|i| xs[i * (xs.len() - 1) / (k - 1).max(1)].clone()).collect()
}

/// `#{Y ∈ (r − w, r + w]}` on a reduced distribution, in scaled units.
fn window(red: &TailDistribution, r: i64, w: i64) -> u64 {
    red.count_gt(r - w) - red.count_gt(r + w)
}

fn eps_half(h: &Halfspace) -> Result<Option<(Rational, f64)>> {
    let eps = h.mean()?;
    let e = to_f64(&eps);
    Ok(if e > 0.0 && e <= 0.5 { Some((eps, e)) } else { None })
}

/// `a_1/‖a‖`.
fn normalised_top(h: &Halfspace) -> f64 {
    let a1 = h.max_weight();
    to_f64(&(a1 * a1 / h.sum_sq())).sqrt()
}

/// `min(1, a_1 √ln(1/ε))` with normalised `a_1`, times `ε`.
fn influence_scale(h: &Halfspace, e: f64) -> f64 {
    e * (normalised_top(h) * ln_inv(e).sqrt()).min(1.0)
}

// ------------------------------------------------------------ identities

pub fn parseval(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    Ok(vec![CheckRecord::eq("PARSEVAL", &m.label, m.spectrum()?.total_weight(), f.mean())])
}

pub fn fwht_naive(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    if f.n() > 10 {
        return Ok(vec![na("FWHT-NAIVE", &m.label, "naive transform limited to n ≤ 10")]);
    }
    let a = m.spectrum()?.numerators();
    let b = naive_spectrum(f);
    let bad = a.iter().zip(b.numerators()).filter(|(x, y)| x != y).count();
    Ok(vec![CheckRecord::eq("FWHT-NAIVE", &m.label, int(bad as i64), int(0)).with_note("mismatched coefficients")])
}

/// `f†(x) = 1 − f(−x)`: involution, mean `1 − μ`, and `f̂†(S) = −(−1)^{|S|} f̂(S)` for `S ≠ ∅`.
pub fn dual(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    let d = f.dual();
    let mut bad = 0i64;
    if d.dual() != *f {
        bad += 1;
    }
    if d.mean() != int(1) - f.mean() {
        bad += 1;
    }
    let (a, b) = (m.spectrum()?.numerators(), fwht_spectrum(&d));
    let b = b.numerators();
    for s in 1..a.len() {
        let sign = if s.count_ones() % 2 == 0 { -1 } else { 1 };
        if b[s] != sign * a[s] {
            bad += 1;
        }
    }
    Ok(vec![CheckRecord::eq("DUAL", &m.label, int(bad), int(0)).with_note("mismatches")])
}

/// Influences, mean, tail and boundaries from the tail distribution against the truth table.
pub fn tt_agree(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    if h.arity() > 16 {
        return Ok(vec![na("TT-AGREE", &m.label, "truth-table comparison limited to n ≤ 16")]);
    }
    let f = m.table()?;
    let t = h.threshold();
    let mut bad = 0i64;
    let inf = influences(f).influences();
    if h.influences_at(t)? != inf {
        bad += 1;
    }
    if h.mean()? != f.mean() || h.tail()?.tail(t) != f.mean() {
        bad += 1;
    }
    let b = boundary_measures(f);
    if h.vertex_boundary_at(t)? != (b.vb0, b.vb1) {
        bad += 1;
    }
    if h.truth_table()? != *f {
        bad += 1;
    }
    Ok(vec![CheckRecord::eq("TT-AGREE", &m.label, int(bad), int(0)).with_note("influences, mean, F(t), boundaries, table")])
}

/// Monotone `f`: `f̂({i}) = I_i/2`.
pub fn mono_level1(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    if !f.is_monotone() {
        return Ok(vec![na("MONO-LEVEL1", &m.label, "not monotone")]);
    }
    let spec = m.spectrum()?;
    let inf = influences(f);
    let bad = (0..f.n()).filter(|&i| spec.coeff(1 << i) * int(2) != inf.influence(i)).count();
    Ok(vec![CheckRecord::eq("MONO-LEVEL1", &m.label, int(bad as i64), int(0))])
}

// ------------------------------------------------------------ spectral

pub fn level1_upper(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    let mu = f.mean();
    let e = to_f64(&mu);
    let w1 = m.spectrum()?.level_weight(1)?;
    let rhs = 2.0 * e * e * ln_inv(e);
    if !(e > 0.0 && e <= 0.5) {
        return Ok(vec![CheckRecord::not_applicable("LVL1-upper", &m.label, w1, Some(rhs.into()), "μ outside (0, 1/2]")]);
    }
    Ok(vec![CheckRecord::le("LVL1-upper", &m.label, w1, rhs, 1e-12)])
}

/// `W⁰ + W¹ ≥ 1/2` for the ±1 version `2f − 1`.
pub fn gotsman_linial(m: &Member) -> Result<Vec<CheckRecord>> {
    if m.halfspace.is_none() {
        return Ok(vec![]);
    }
    let spec = m.spectrum()?;
    let mu = m.table()?.mean();
    let c0 = int(2) * &mu - int(1);
    let w = &c0 * &c0 + int(4) * spec.level_weight(1)?;
    Ok(vec![CheckRecord::le("GL-halfplane", &m.label, rat(1, 2), w, 0.0)])
}

/// `W¹/(ε² ln(1/ε))`, pinned from below.
pub fn thm12_lower(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let Some((_, e)) = eps_half(h)? else { return Ok(vec![na("THM12-lower", &m.label, "μ outside (0, 1/2]")]) };
    let w1 = to_f64(&m.spectrum()?.level_weight(1)?);
    Ok(vec![CheckRecord::reported("THM12-lower", &m.label, w1 / (e * e * ln_inv(e)))])
}

pub fn level_k_upper(m: &Member) -> Result<Vec<CheckRecord>> {
    if m.halfspace.is_none() {
        return Ok(vec![]);
    }
    let f = m.table()?;
    [2, 3].iter().map(|&k| levelk::check_level_k_upper(f, k, &m.label)).collect()
}

// ------------------------------------------------------------ influence and boundary

/// `I_max / (ε·min(1, a_1√ln(1/ε)))`.
pub fn thm14_band(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let Some((_, e)) = eps_half(h)? else { return Ok(vec![na("THM14-band", &m.label, "μ outside (0, 1/2]")]) };
    let imax = h.influences_at(h.threshold())?.into_iter().max().unwrap_or_else(Rational::zero);
    Ok(vec![CheckRecord::reported("THM14-band", &m.label, to_f64(&imax) / influence_scale(h, e))])
}

/// `vb1 / (ε·min(1, a_1√ln(1/ε)))`.
pub fn thm15_band(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let Some((_, e)) = eps_half(h)? else { return Ok(vec![na("THM15-band", &m.label, "μ outside (0, 1/2]")]) };
    let (_, vb1) = h.vertex_boundary_at(h.threshold())?;
    Ok(vec![CheckRecord::reported("THM15-band", &m.label, to_f64(&vb1) / influence_scale(h, e))])
}

/// `½I₁ ≤ vb1 ≤ (7/4)I₁`.
pub fn prop71(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    if eps_half(h)?.is_none() {
        return Ok(vec![na("PROP71", &m.label, "μ outside (0, 1/2]")]);
    }
    let i1 = h.top_influence_at(h.threshold())?;
    let (_, vb1) = h.vertex_boundary_at(h.threshold())?;
    Ok(vec![
        CheckRecord::le("PROP71", &m.label, &i1 / int(2), vb1.clone(), 0.0).with_note("lower"),
        CheckRecord::le("PROP71", &m.label, vb1, rat(7, 4) * i1, 0.0).with_note("upper"),
    ])
}

/// `vb0/vb1` over `ln(1/μ)` reported, `vb0 ≥ (2/7)vb1` asserted, subcubes exactly `k`.
pub fn prop72(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let Some((_, e)) = eps_half(h)? else { return Ok(vec![na("PROP72", &m.label, "μ outside (0, 1/2]")]) };
    let (vb0, vb1) = h.vertex_boundary_at(h.threshold())?;
    let mut out = vec![CheckRecord::le("PROP72", &m.label, rat(2, 7) * &vb1, vb0.clone(), 0.0).with_note("vb0 ≥ (2/7)vb1")];
    if !vb1.is_zero() {
        let r = &vb0 / &vb1;
        out.push(CheckRecord::reported("PROP72", &m.label, to_f64(&r) / ln_inv(e)).with_note("(vb0/vb1)/ln(1/μ)"));
        if let FunctionSpec::Subcube(k, _) = m.spec {
            out.push(CheckRecord::eq("PROP72", &m.label, r, int(k as i64)).with_note("subcube vb0/vb1 = k"));
        }
    }
    Ok(out)
}

/// Reduced distribution of the top weight and its scaled value.
fn top_reduced(h: &Halfspace) -> Result<(TailDistribution, i64)> {
    Ok((h.reduced_tail(0)?, h.scaled_weights()[0]))
}

/// `5·I₁(f_s) ≥ I₁(f_t)` for support values `|s| ≤ t`; the worst pair is recorded.
pub fn cor36(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let (red, w) = top_reduced(h)?;
    let sup = support(dist)?;
    let q = |r: i64| window(&red, r, w);
    let i0 = sup.partition_point(|&v| v < 0);
    let mut lp = i0;
    let mut best: Option<(i64, u64)> = None; // argmin s, Q(s)
    let mut worst: Option<(i64, i64, u64, u64)> = None; // (s, t, Q(s), Q(t))
    let mut pairs = 0u64;
    for &t in &sup[i0..] {
        let mut consider = |s: i64| {
            let qs = q(s);
            if best.is_none_or(|(_, b)| qs < b) {
                best = Some((s, qs));
            }
        };
        consider(t);
        while lp > 0 && sup[lp - 1] >= -t {
            lp -= 1;
            consider(sup[lp]);
        }
        let (s, qs) = best.expect("window is nonempty");
        let qt = q(t);
        pairs += 1;
        let worse = match worst {
            None => true,
            Some((_, _, ws, wt)) => cmp_frac(qt as u128, qs as u128, wt as u128, ws as u128) == Ordering::Greater,
        };
        if worse {
            worst = Some((s, t, qs, qt));
        }
    }
    let Some((s, t, qs, qt)) = worst else { return Ok(vec![na("COR36", &m.label, "no nonnegative support value")]) };
    let nr = red.n();
    Ok(vec![CheckRecord::le("COR36", &m.label, prob(qt, nr), int(5) * prob(qs, nr), 0.0).with_note(format!(
        "s={} t={} thresholds={pairs}",
        format_rational(&dist.unscale(s)),
        format_rational(&dist.unscale(t))
    ))])
}

/// Thresholds `t ≥ 0` with `F(t) > 0`: the corpus threshold and a spread of support values.
fn threshold_grid(h: &Halfspace, k: usize) -> Result<Vec<Rational>> {
    let dist = h.tail()?;
    let vals: Vec<i64> = support(dist)?.into_iter().filter(|&v| v >= 0 && dist.count_gt(v) > 0).collect();
    let mut out: Vec<Rational> = spread(&vals, k).into_iter().map(|v| dist.unscale(v)).collect();
    let t = h.threshold();
    if !t.is_negative() && dist.count_above(t) > 0 && !out.contains(t) {
        out.insert(0, t.clone());
    }
    Ok(out)
}

/// `a_i > β/2 ⇒ I_i(f_t) ≥ (2/3)F(t)` over a grid of `t ≥ 0`.
pub fn lem51(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let reds = h.reduced_tails()?;
    let scale = h.scale();
    let mut worst: Option<(Rational, Rational, Rational, Rational)> = None; // (lhs, rhs, t, a)
    let mut cases = 0u64;
    for t in threshold_grid(h, 16)? {
        let beta = dist.decay_thresholds(&t, None)?.beta;
        let f = dist.tail(&t);
        let tf = dist.rescale(&t);
        let mut seen = Vec::new();
        for &w in h.scaled_weights() {
            if seen.contains(&w) || Rational::from_integer((2 * w).into()) <= dist.rescale(&beta) {
                continue;
            }
            seen.push(w);
            cases += 1;
            let red = &reds[&w];
            let wr = Rational::from_integer(w.into());
            let i = red.interval_prob(&((&tf - &wr) / int(scale)), &((&tf + &wr) / int(scale)), Interval::OpenClosed);
            let lhs = rat(2, 3) * &f;
            let worse = match &worst {
                None => true,
                Some((l, r, _, _)) => &lhs * r > l * &i,
            };
            if worse {
                worst = Some((lhs, i, t.clone(), dist.unscale(w)));
            }
        }
    }
    let Some((lhs, rhs, t, a)) = worst else { return Ok(vec![na("LEM51", &m.label, "no weight exceeds β/2 on the grid")]) };
    Ok(vec![CheckRecord::le("LEM51", &m.label, lhs, rhs, 0.0).with_note(format!(
        "t={} a_i={} cases={cases}",
        format_rational(&t),
        format_rational(&a)
    ))])
}

/// `e_i^δ ≥ (a_i/δ)·Pr[a·x ∈ [t+a_i, t+δ−a_i]]` for `δ ≥ a_i`.
pub fn lem52(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let t = h.threshold();
    let a1 = h.max_weight().clone();
    let mut deltas = vec![a1.clone(), int(2) * &a1, int(4) * &a1];
    if h.tail()?.count_above(t) > 0 {
        let d = h.decay_thresholds(t, None)?.delta;
        if d.is_positive() {
            deltas.push(d);
        }
    }
    let n = h.n();
    let coords: Vec<usize> = {
        let mut ks = vec![0, n / 2, n - 1];
        ks.dedup();
        ks.into_iter().map(|k| h.perm()[k]).collect()
    };
    let mut worst: Option<(Rational, Rational, usize, Rational)> = None;
    let mut cases = 0u64;
    for delta in &deltas {
        for &i in &coords {
            let a = &h.weights()[h.position(i).expect("positive weight")];
            if delta < a {
                continue;
            }
            cases += 1;
            let e = h.smoothed_influence(t, i, delta)?;
            let floor = h.smoothed_influence_floor(t, i, delta)?;
            let worse = match &worst {
                None => true,
                Some((fl, ev, _, _)) => &floor * ev > fl * &e,
            };
            if worse {
                worst = Some((floor, e, i, delta.clone()));
            }
        }
    }
    let Some((floor, e, i, delta)) = worst else { return Ok(vec![na("LEM52", &m.label, "no δ ≥ a_i")]) };
    Ok(vec![CheckRecord::le("LEM52", &m.label, floor, e, 0.0).with_note(format!("i={i} delta={} cases={cases}", format_rational(&delta)))])
}

/// `I₁(f_s)/E[f_s] ≤ 6·I₁(f_t)/E[f_t]` for support values `0 ≤ s ≤ t` with `F(t) > 0`.
pub fn lem62(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let (red, w) = top_reduced(h)?;
    let vals: Vec<i64> = support(dist)?.into_iter().filter(|&v| v >= 0 && dist.count_gt(v) > 0).collect();
    if vals.is_empty() {
        return Ok(vec![na("LEM62", &m.label, "no threshold t ≥ 0 with F(t) > 0")]);
    }
    // running max of Q(s)/C(s); worst of max/(Q(t)/C(t))
    let mut best: Option<(i64, u64, u64)> = None;
    let mut worst: Option<(i64, u64, u64, i64, u64, u64)> = None;
    for &t in &vals {
        let (qt, ct) = (window(&red, t, w), dist.count_gt(t));
        if best.is_none_or(|(_, q, c)| cmp_frac(qt as u128, ct as u128, q as u128, c as u128) == Ordering::Greater) {
            best = Some((t, qt, ct));
        }
        let (s, qs, cs) = best.expect("set above");
        // badness = (qs/cs) / (qt/ct) = qs·ct / (cs·qt)
        let worse = match worst {
            None => true,
            Some((_, wqs, wcs, _, wqt, wct)) => cmp_frac(qs as u128 * ct as u128, cs as u128 * qt as u128, wqs as u128 * wct as u128, wcs as u128 * wqt as u128) == Ordering::Greater,
        };
        if worse {
            worst = Some((s, qs, cs, t, qt, ct));
        }
    }
    let (s, qs, cs, t, qt, ct) = worst.expect("nonempty grid");
    // I/E = (q/2^{n−1})/(c/2^n) = 2q/c
    let lhs = int(2) * count_rat(qs) / count_rat(cs);
    let rhs = int(12) * count_rat(qt) / count_rat(ct);
    Ok(vec![CheckRecord::le("LEM62", &m.label, lhs, rhs, 0.0).with_note(format!(
        "s={} t={} thresholds={}",
        format_rational(&dist.unscale(s)),
        format_rational(&dist.unscale(t)),
        vals.len()
    ))])
}

/// `Σ_{i∈S} a_i I_i(f_t) ≥ Σ_{i∈S} a_i I_i(f_{t+s})` for all `s > 0`, when
/// `|B| ≤ ½·log₂(1/ε)` and `ε < 1/4` with `B = {a_i > β}`.
pub fn prop5(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let t = h.threshold();
    let eps = dist.tail(t);
    let e = to_f64(&eps);
    if !(e > 0.0 && e < 0.25) {
        return Ok(vec![na("PROP5", &m.label, "ε outside (0, 1/4)")]);
    }
    let beta = dist.decay_thresholds(t, None)?.beta;
    let part = Partition::by_cut(h, &beta);
    if part.big.len() as f64 > 0.5 * (1.0 / e).log2() {
        return Ok(vec![na("PROP5", &m.label, "|B| > ½·log₂(1/ε)")]);
    }
    let reds = h.reduced_tails()?;
    let mut groups: Vec<(i64, u64)> = Vec::new(); // (scaled weight, multiplicity) over S
    for &k in &part.small {
        let w = h.scaled_weights()[k];
        match groups.iter_mut().find(|(v, _)| *v == w) {
            Some(g) => g.1 += 1,
            None => groups.push((w, 1)),
        }
    }
    // Σ_S w·count(r) in scaled weight × reduced counts; I_i is constant on [k, k+1) in scaled units
    let value = |r: i64| -> i128 { groups.iter().map(|&(w, c)| w as i128 * c as i128 * window(&reds[&w], r, w) as i128).sum() };
    let tf = dist.rescale(t);
    let base = crate::rational::floor_clamped(&tf, -dist.total() - 1, dist.total());
    let v0 = value(base);
    let (mut vmax, mut rmax) = (i128::MIN, base);
    for r in base + 1..=dist.total() + h.scaled_weights()[0] {
        let v = value(r);
        if v > vmax {
            vmax = v;
            rmax = r;
        }
    }
    if vmax == i128::MIN {
        vmax = 0;
    }
    let den = Rational::from_integer((num_bigint::BigInt::from(1) << (dist.n() - 1)) * dist.scale());
    let to_r = |v: i128| Rational::from_integer(v.into()) / &den;
    Ok(vec![CheckRecord::le("PROP5", &m.label, to_r(vmax), to_r(v0), 0.0).with_note(format!(
        "|B|={} worst t+s={}",
        part.big.len(),
        format_rational(&dist.unscale(rmax))
    ))])
}

/// `Pr[l(x) ∈ (t, t+2m]] / (ε·min(1, m√ln(1/ε)))` on normalised weights, `m ∈ {a_1, 2a_1, 4a_1}`.
pub fn thm64(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let t = h.threshold();
    let f = to_f64(&dist.tail(t));
    if f == 0.0 {
        return Ok(vec![na("THM64", &m.label, "F(t) = 0")]);
    }
    let e = f.min(0.5);
    let a1 = h.max_weight();
    let mut out = Vec::new();
    for mult in [1i64, 2, 4] {
        let mm = a1 * int(mult);
        if t < &(-&mm) {
            out.push(na("THM64", &m.label, "t < −m"));
            continue;
        }
        let p = dist.interval_prob(t, &(t + int(2) * &mm), Interval::OpenClosed);
        let mn = to_f64(&(&mm * &mm / h.sum_sq())).sqrt();
        let stat = to_f64(&p) / (e * (mn * ln_inv(e).sqrt()).min(1.0));
        out.push(CheckRecord::reported("THM64", &m.label, stat).with_note(format!("m={mult}·a1")));
    }
    Ok(out)
}

// ------------------------------------------------------------ tail shape

/// `F(d)F(b) ≤ F(c)F(b+d−c−m)` on 1000 sampled triples; the worst triple is recorded.
pub fn lem111(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let sup = support(dist)?;
    let mm = 2 * h.scaled_weights()[0];
    let span = dist.total() + mm;
    let mut rng = m.rng("LEM111");
    let mut worst: Option<([i64; 3], u128, u128)> = None;
    let mut violations = 0u64;
    for _ in 0..1000 {
        let mut tr = [0i64; 3];
        for x in tr.iter_mut() {
            *x = if rng.gen_bool(0.5) { sup[rng.gen_range(0..sup.len())] } else { rng.gen_range(-span..=span) };
        }
        tr.sort_unstable();
        let [b, c, d] = tr;
        let lhs = dist.count_gt(d) as u128 * dist.count_gt(b) as u128;
        let rhs = dist.count_gt(c) as u128 * dist.count_gt(b + d - c - mm) as u128;
        if lhs > rhs {
            violations += 1;
        }
        if worst.is_none_or(|(_, wl, wr)| cmp_frac(lhs, rhs, wl, wr) == Ordering::Greater) {
            worst = Some((tr, lhs, rhs));
        }
    }
    let ([b, c, d], _, _) = worst.expect("1000 triples");
    let u = |v: i64| dist.unscale(v);
    Ok(vec![check_log_concavity(dist, &u(b), &u(c), &u(d), &u(mm))?.with_note(format!("triples=1000 violations={violations}"))])
}

/// `Pr[X ∈ (t−m,t+m]] ≤ 5·Pr[X ∈ (s−m,s+m]]` over all support pairs `0 ≤ s ≤ t`, `m = a_1`.
pub fn lem32(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let w = h.scaled_weights()[0];
    let vals: Vec<i64> = support(dist)?.into_iter().filter(|&v| v >= 0).collect();
    let p = |v: i64| dist.count_gt(v - w) - dist.count_gt(v + w);
    let mut min_s: Option<(i64, u64)> = None;
    let mut worst: Option<(i64, i64, u64, u64)> = None;
    for &t in &vals {
        let pt = p(t);
        if min_s.is_none_or(|(_, q)| pt < q) {
            min_s = Some((t, pt));
        }
        let (s, ps) = min_s.expect("set above");
        if worst.is_none_or(|(_, _, ws, wt)| cmp_frac(pt as u128, ps as u128, wt as u128, ws as u128) == Ordering::Greater) {
            worst = Some((s, t, ps, pt));
        }
    }
    let Some((s, t, _, _)) = worst else { return Ok(vec![na("LEM32", &m.label, "no nonnegative support value")]) };
    let u = |v: i64| dist.unscale(v);
    let pairs = vals.len() * (vals.len() + 1) / 2;
    Ok(vec![check_interval_decay(dist, &u(s), &u(t), &u(w))?.with_note(format!("s={} t={} pairs={pairs}", format_rational(&u(s)), format_rational(&u(t))))])
}

/// `F(t+δ+m)^l ≤ 2F(t)^{l+1}` over a grid of `(t, δ)` with `l ≤ 17`.
pub fn lem42(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    let a1 = h.max_weight().clone();
    let mm = int(2) * &a1;
    let mut worst: Option<CheckRecord> = None;
    let mut worst_ratio = Rational::zero();
    let mut cases = 0u64;
    for t in threshold_grid(h, 12)? {
        let mut deltas: Vec<Rational> = vec![&a1 / int(2), a1.clone(), int(2) * &a1, int(4) * &a1];
        if t.is_positive() {
            deltas.extend((1..=8).map(|j| &t / int(j)));
        }
        for d in deltas {
            if !t.is_zero() && &t / &d > int(16) {
                continue;
            }
            cases += 1;
            let rec = check_log_concave_exp(dist, &t, &d, &mm)?;
            let (Some(Num::Exact(r)), Num::Exact(l)) = (&rec.rhs, &rec.lhs) else { unreachable!("exact sides") };
            let ratio = if r.is_zero() { if l.is_zero() { Rational::zero() } else { int(i64::MAX) } } else { l / r };
            if worst.is_none() || ratio > worst_ratio {
                worst_ratio = ratio;
                worst = Some(rec.with_note(format!("t={} delta={}", format_rational(&t), format_rational(&d))));
            }
        }
    }
    Ok(vec![match worst {
        Some(r) => r.with_note(format!("grid={cases}")),
        None => na("LEM42", &m.label, "no threshold t ≥ 0 with F(t) > 0"),
    }])
}

fn chernoff_records(m: &Member, variant: Variant) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let t = h.threshold();
    if h.tail()?.count_above(t) == 0 {
        return Ok(vec![na(variant.check_id(), &m.label, "ε = 0")]);
    }
    Ok(vec![check_local_chernoff(h, t, &variant, None)?])
}

pub fn thm18(m: &Member) -> Result<Vec<CheckRecord>> {
    chernoff_records(m, Variant::Strong)
}

/// Partition at `B = {a_i > β}`.
pub fn thm19(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let t = h.threshold();
    if h.tail()?.count_above(t) == 0 {
        return Ok(vec![na("THM19", &m.label, "ε = 0")]);
    }
    let beta = h.decay_thresholds(t, None)?.beta;
    let part = Partition::by_cut(h, &beta);
    if part.small.is_empty() && (part.big.len() as f64) < 0.5 * ln_inv(to_f64(&h.mean()?)) {
        return Ok(vec![na("THM19", &m.label, "S empty with small B")]);
    }
    chernoff_records(m, Variant::Partitioned(part))
}

pub fn thm110(m: &Member) -> Result<Vec<CheckRecord>> {
    let mut out = chernoff_records(m, Variant::Weak(rat(1, 2)))?;
    out.extend(chernoff_records(m, Variant::Weak(rat(1, 8)))?);
    Ok(out.into_iter().enumerate().map(|(i, r)| r.with_note(if i == 0 { "c=1/2" } else { "c=1/8" })).collect())
}

/// `F(t)/Φ̄(t)` on normalised weights over a grid of `t ≥ 0`: every support
/// value and the midpoints between consecutive ones. The supremum of the
/// left limits `Pr[a·x ≥ v]/Φ̄(v)` is reported alongside.
pub fn gauss_eaton(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    let dist = h.tail()?;
    // scaled units: values are twice the support so midpoints stay integral
    let sigma = 2.0 * to_f64(&h.sum_sq()).sqrt() * dist.scale() as f64;
    let size = dist.cube_size() as f64;
    let vals: Vec<i64> = support(dist)?.into_iter().filter(|&v| v >= 0).collect();
    let mut grid = vec![0i64];
    for (i, &v) in vals.iter().enumerate() {
        if i > 0 {
            grid.push(vals[i - 1] + v);
        }
        grid.push(2 * v);
    }
    let (mut best, mut at) = (0.0f64, 0i64);
    for &g in &grid {
        let r = dist.count_gt(g.div_euclid(2)) as f64 / size / normal_tail(g as f64 / sigma);
        if r > best {
            best = r;
            at = g;
        }
    }
    let (mut left, mut left_at) = (0.0f64, 0i64);
    for &v in &vals {
        let r = dist.count_ge(v) as f64 / size / normal_tail(2.0 * v as f64 / sigma);
        if r > left {
            left = r;
            left_at = v;
        }
    }
    let half = |g: i64| dist.unscale(g) / int(2);
    Ok(vec![
        CheckRecord::le("GAUSS-EATON", &m.label, best, chernoff::GAUSSIAN_COMPARISON, 1e-9)
            .with_note(format!("t={} grid={}", format_rational(&half(at)), grid.len())),
        CheckRecord::reported("GAUSS-EATON", &m.label, left).with_note(format!("left-limit supremum at t={}", format_rational(&dist.unscale(left_at)))),
    ])
}

// ------------------------------------------------------------ level k

pub fn newton_girard(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    Ok(vec![check_newton_girard(&normalised_squares(h), h.n().min(6))?.with_note(m.label.clone())])
}

pub fn ng_chain(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    [2, 3].iter().filter(|&&k| k <= h.n()).map(|&k| check_chain(h, k)).collect()
}

pub fn sign_cond(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    if h.n() > 22 {
        return Ok(vec![na("SIGN-COND", &m.label, "exhaustive scan limited to n ≤ 22")]);
    }
    [2, 3].iter().filter(|&&k| k <= h.n()).map(|&k| check_sign_condition(h, k)).collect()
}

pub fn wk_pipeline(m: &Member) -> Result<Vec<CheckRecord>> {
    let Some(h) = &m.halfspace else { return Ok(vec![]) };
    if eps_half(h)?.is_none() {
        return Ok(vec![na("WK-PIPELINE", &m.label, "μ outside (0, 1/2]")]);
    }
    let mut out = Vec::new();
    for k in [2, 3] {
        if k <= h.n() && h.n() <= 22 {
            out.extend(levelk::verify_wk_lower(h, k)?);
        }
    }
    Ok(out)
}

// ------------------------------------------------------------ correlation

fn nondegenerate(f: &BooleanFunction) -> bool {
    let c = f.count_ones();
    c > 0 && c < f.size() as u64
}

pub fn thm17(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    if !nondegenerate(f) || first_level_form(f).is_zero() {
        return Ok(vec![na("THM17", &m.label, "constant or vanishing first level")]);
    }
    Ok(vec![correlate::correlation_record(f, &m.label, None)?])
}

/// `Σ Cov(f, g_t)·width = W¹` over the cut steps.
pub fn cov_integral(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    let l = first_level_form(f);
    if l.is_zero() {
        return Ok(vec![na("COV-INTEGRAL", &m.label, "first level vanishes")]);
    }
    let (sum, w1) = integral_identity(f, &l)?;
    Ok(vec![CheckRecord::eq("COV-INTEGRAL", &m.label, sum, w1)])
}

/// Best unbiased correlator covariance over `min(μ, 1−μ)`.
pub fn prop92(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    if !nondegenerate(f) || first_level_form(f).is_zero() {
        return Ok(vec![na("PROP92", &m.label, "constant or vanishing first level")]);
    }
    let r = unbiased_correlator(f, false)?;
    let mu = to_f64(&f.mean());
    Ok(vec![CheckRecord::reported("PROP92", &m.label, to_f64(&r.covariance) / mu.min(1.0 - mu)).with_note(format!(
        "cov={} base={} flipped={:?}",
        format_rational(&r.covariance),
        format_rational(&r.base_covariance),
        r.flipped
    ))])
}

pub fn prop93(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    if !nondegenerate(f) || first_level_form(f).is_zero() {
        return Ok(vec![na("PROP93", &m.label, "constant or vanishing first level")]);
    }
    correlate::check_biased(f, &m.label)
}

pub fn prop16(m: &Member) -> Result<Vec<CheckRecord>> {
    let f = m.table()?;
    if !nondegenerate(f) {
        return Ok(vec![na("PROP16", &m.label, "constant function")]);
    }
    let c = correlate::noise_resistance_class(f, DEFAULT_RESISTANCE_C0, correlate::DEFAULT_RHO_CONSTANT)?;
    let params = format!("c0={} c={}", DEFAULT_RESISTANCE_C0, correlate::DEFAULT_RHO_CONSTANT);
    let mut out = vec![
        CheckRecord::reported("PROP16", &m.label, c.fourier_ratio).with_note(format!("W1/(mu^2 ln(1/mu)); resistant={}; {params}", c.fourier_resistant)),
        CheckRecord::reported("PROP16", &m.label, c.stability_ratio).with_note(format!("S_rho/mu^2 at rho={:.6}; resistant={}", c.rho, c.stability_resistant)),
    ];
    if let Some(r) = c.correlation_ratio {
        out.push(CheckRecord::reported("PROP16", &m.label, r).with_note("best cut covariance/mu"));
    }
    Ok(out)
}

pub fn ns_remark(m: &Member) -> Result<Vec<CheckRecord>> {
    if m.halfspace.is_none() {
        return Ok(vec![]);
    }
    let f = m.table()?;
    let mu = to_f64(&f.mean());
    let mut out = Vec::new();
    for delta in [0.25, 1.0] {
        let note = format!("delta={delta}");
        out.push(if !(mu > 0.0 && mu < 1.0) {
            na("NSREMARK", &m.label, "μ ∈ {0, 1}")
        } else if delta / ln_inv(mu) > 0.5 {
            na("NSREMARK", &m.label, "flip rate above 1/2")
        } else {
            CheckRecord::reported("NSREMARK", &m.label, correlate::ns_metric(f, delta)?)
        }
        .with_note(note));
    }
    Ok(out)
}

// ------------------------------------------------------------ corpus-independent

pub fn ih_deriv_global() -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    (1..=6)
        .map(|k| {
            let pts: Vec<f64> = (0..200).map(|_| rng.gen_range(0..k) as f64 + rng.gen_range(0.3..0.7)).collect();
            check_ih_derivative(k, &pts, 0.1)
        })
        .collect()
}

pub fn ng_global() -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(86);
    (0..20)
        .map(|_| {
            let len = rng.gen_range(1..=12);
            let b: Vec<Rational> = (0..len).map(|_| rat(rng.gen_range(0..20), rng.gen_range(1..9))).collect();
            check_newton_girard(&b, len.min(8))
        })
        .collect()
}

pub fn fderiv_global() -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(84);
    (0..50)
        .map(|_| {
            let m = rng.gen_range(1..=6);
            let deg = rng.gen_range(m..=m + 2);
            let g = Poly((0..=deg).map(|_| rat(rng.gen_range(-9..10), 3)).collect());
            let a: Vec<Rational> = (0..m).map(|_| rat(rng.gen_range(1..6), 2)).collect();
            check_fderiv(&g, &a, &int(rng.gen_range(-5..6)))
        })
        .collect()
}

/// Uniform weights at `n = 1024`, where the sign condition's hypotheses hold.
pub fn sign_cond_global() -> Result<Vec<CheckRecord>> {
    [(2usize, 182i64), (3, 222)]
        .iter()
        .map(|&(k, t)| {
            let sc = levelk::sign_condition_uniform(1024, k, &int(t))?;
            let inst = format!("uniform:1024;{t} k={k}");
            let v = int(sc.violations as i64);
            let rec = if sc.hypotheses_met {
                CheckRecord::eq("SIGN-COND", &inst, v, int(0))
            } else {
                CheckRecord::not_applicable("SIGN-COND", &inst, v, Some(int(0).into()), "hypotheses fail")
            };
            Ok(rec.with_note(format!("points={}", sc.checked)))
        })
        .collect()
}

/// Random rational weight vectors for the injection audits: `n ∈ 5..=14`.
pub fn injection_weights() -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(85);
    (0..20)
        .map(|j| {
            let n = if j % 2 == 0 { 14 } else { 5 + j / 2 };
            (0..n).map(|_| rat(rng.gen_range(1..=12), rng.gen_range(1..=4))).collect()
        })
        .collect()
}

fn integer_grid(a: &[Rational]) -> Result<(Vec<i64>, i64)> {
    let l = crate::rational::lcm_denominators(a)?;
    Ok((a.iter().map(|w| scale_to_i64(w, l)).collect::<Result<Vec<_>>>()?, l))
}

/// Suffix/prefix flips, `scf` and `scf_a` over every sign pattern.
pub fn flip_audit_global() -> Result<Vec<CheckRecord>> {
    injection_weights()
        .iter()
        .map(|a| {
            let (ai, l) = integer_grid(a)?;
            let total: i64 = ai.iter().sum();
            let amax = *ai.iter().max().expect("nonempty");
            let (mut bad, mut inputs) = (0u64, 0u64);
            for r in [-amax, 0, amax, total / 4, total / 2] {
                let au = audit_flips(&ai, r)?;
                bad += au.violations();
                inputs += au.inputs;
            }
            let inst = format!("n={} scale={l}", a.len());
            Ok(CheckRecord::eq("FLIP-AUDIT", &inst, int(bad as i64), int(0)).with_note(format!("patterns={inputs}")))
        })
        .collect()
}

/// The four interval-decay injections on the first `min(n, 12)` weights.
pub fn four_map_global() -> Result<Vec<CheckRecord>> {
    injection_weights()
        .iter()
        .map(|a| {
            let a: Vec<Rational> = a.iter().take(12).cloned().collect();
            let amax = a.iter().max().expect("nonempty").clone();
            let mut total = FourMapAudit::default();
            let mut runs = 0;
            let mut bound_fail = 0;
            for mm in [amax.clone(), int(2) * &amax] {
                for s in [int(0), &mm / int(2), mm.clone(), int(2) * &mm] {
                    for dt in [int(0), mm.clone(), int(3) * &mm, int(5) * &mm] {
                        let au = audit_four_maps_rational(&a, &mm, &s, &(&s + &dt))?;
                        runs += 1;
                        if !au.bound_holds() {
                            bound_fail += 1;
                        }
                        total.domain += au.domain;
                        total.uncovered += au.uncovered;
                        total.outside_target += au.outside_target;
                        total.collisions += au.collisions;
                        total.shift_escapes += au.shift_escapes;
                        total.shift_collisions += au.shift_collisions;
                    }
                }
            }
            let bad = total.violations() + bound_fail;
            Ok(CheckRecord::eq("FOUR-MAP", &format!("n={}", a.len()), int(bad as i64), int(0))
                .with_note(format!("runs={runs} domain points={} bound failures={bound_fail}", total.domain)))
        })
        .collect()
}

/// First-level coefficients and the two unbiased covariances of the five-variable example.
pub fn paper5_global() -> Result<Vec<CheckRecord>> {
    let f = paper5();
    let l = first_level_form(&f);
    let mut out: Vec<CheckRecord> = l.coefficients.iter().enumerate().map(|(i, c)| CheckRecord::eq("PAPER5-COV", "paper5", c.clone(), rat(1, 16)).with_note(format!("f({{{i}}})"))).collect();
    let u = unbiased_correlator(&f, false)?;
    out.push(CheckRecord::eq("PAPER5-COV", "paper5", u.base_covariance, rat(-1, 16)).with_note("Cov(f, Maj5)"));
    out.push(CheckRecord::eq("PAPER5-COV", "paper5", u.covariance, rat(1, 8)).with_note(format!("best single flip {:?}", u.flipped)));
    let b = best_halfspace_over_form(&f, &l)?;
    out.push(CheckRecord::eq("PAPER5-COV", "paper5", b.covariance, rat(3, 32)).with_note("best first-level cut"));
    Ok(out)
}

/// `vb1 = 2^{−k}`, `vb0 = k·2^{−k}` and `vb0/vb1 = k` for subcubes, `vb1 = ½I₁` for the dictator.
pub fn boundary_global() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for k in 1..=6usize {
        for n in [k, 8] {
            let f = subcube(k, n)?;
            let b = boundary_measures(&f);
            let inst = format!("subcube:{k},{n}");
            let p = rat(1, 1 << k);
            out.push(CheckRecord::eq("SUBCUBE-VB", &inst, b.vb1.clone(), p.clone()).with_note("vb1"));
            out.push(CheckRecord::eq("SUBCUBE-VB", &inst, b.vb0.clone(), int(k as i64) * p).with_note("vb0"));
            out.push(CheckRecord::eq("PROP72", &inst, b.vb0 / b.vb1, int(k as i64)).with_note("subcube vb0/vb1 = k"));
        }
    }
    for n in [1usize, 3, 6] {
        let f = dictator(n)?;
        let b = boundary_measures(&f);
        let i1 = influences(&f).influence(0);
        out.push(CheckRecord::eq("PROP71", &format!("dict:{n}"), b.vb1, i1 / int(2)).with_note("dictator vb1 = I1/2"));
    }
    Ok(out)
}

/// `f₁ = 1{5Σ_{i≤4}x_i + 4Σ_{i>4}x_i > 1}` on `n` variables.
pub fn five_four(n: usize) -> Result<Halfspace> {
    let mut w = vec![int(5); 4];
    w.resize(n, int(4));
    Halfspace::new(&w, int(1))
}

/// `vb1/I₁` for the five-four family.
pub fn five_four_ratio(n: usize) -> Result<Rational> {
    let h = five_four(n)?;
    let (_, vb1) = h.vertex_boundary_at(h.threshold())?;
    Ok(vb1 / h.top_influence_at(h.threshold())?)
}

/// The five-four family at odd `n ∈ 5..=41`; `|vb1/I₁ − 10/9| ≤ 1/50` at `n = 41`.
pub fn ex54_global() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let mut last = Rational::zero();
    for n in (5..=41).step_by(2) {
        let r = five_four_ratio(n)?;
        out.push(CheckRecord::reported("EX54", &format!("five-four:{n}"), r.clone()).with_note(format!("vb1/I1 ≈ {:.6}", to_f64(&r))));
        last = r;
    }
    let dev = (&last - rat(10, 9)).abs();
    out.push(CheckRecord::le("EX54", "five-four:41", dev, rat(1, 50), 0.0).with_note(format!("|vb1/I1 − 10/9| with vb1/I1 = {:.6}", to_f64(&last))));
    Ok(out)
}

/// All-ones weights at `n = 21`, `(m, s, t) = (3/2, 1, 2)`: ratio at least 19/10.
pub fn lem32_lower_global() -> Result<Vec<CheckRecord>> {
    let h = uniform(21, int(0))?;
    let r = chernoff::interval_decay_ratio(h.tail()?, &int(1), &int(2), &rat(3, 2)).ok_or_else(|| CubeError::Degenerate("empty window".into()))?;
    Ok(vec![CheckRecord::le("LEM32-LOWER", "ones:21 m=3/2 s=1 t=2", rat(19, 10), r.clone(), 0.0).with_note(format!("ratio={}", format_rational(&r)))])
}

/// `1/2 ≤ μ ≤ 1/2 + 1/√n` asserted, boundary ratio reported, at `n ∈ {16, 25}`.
pub fn ex74_global() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for n in [16usize, 25] {
        let inst = format!("talagrand:{n}:2024");
        let f = match talagrand_or(n, 2024) {
            Ok(f) => f,
            Err(e) => {
                out.push(na("EX74", &inst, &format!("{e}; raise CUBE_MAX_N to evaluate")));
                continue;
            }
        };
        let mu = f.mean();
        let root = (n as f64).sqrt();
        let upper: Num = if (root.round() as usize).pow(2) == n { (rat(1, 2) + rat(1, root.round() as i64)).into() } else { (0.5 + 1.0 / root).into() };
        out.push(CheckRecord::le("EX74", &inst, rat(1, 2), mu.clone(), 0.0).with_note("μ ≥ 1/2"));
        out.push(CheckRecord::le("EX74", &inst, mu, upper, 0.0).with_note("μ ≤ 1/2 + 1/√n"));
        let b = boundary_measures(&f);
        if !b.vb1.is_zero() {
            out.push(CheckRecord::reported("EX74", &inst, b.vb0 / b.vb1).with_note("vb0/vb1"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::Outcome;

    fn member(s: &str) -> Member {
        Member::new(FunctionSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn majority_member_checks_pass() {
        let m = member("maj:9");
        for run in [parseval, dual, tt_agree, mono_level1, level1_upper, gotsman_linial, cor36, lem62, lem111, lem32, lem42, gauss_eaton] {
            for r in run(&m).unwrap() {
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn subcube_tightness_is_asserted() {
        let recs = prop72(&member("subcube:3,6")).unwrap();
        assert!(recs.iter().any(|r| r.outcome == Outcome::Pass && r.notes.contains("= k")));
    }

    #[test]
    fn ex54_values_are_exact() {
        // vb1/I1 at n = 5 by hand: the table path agrees
        let h = five_four(5).unwrap();
        let f = h.truth_table().unwrap();
        let b = boundary_measures(&f);
        assert_eq!(five_four_ratio(5).unwrap(), b.vb1 / influences(&f).influence(0));
    }

    #[test]
    fn lem32_lower_is_eleven_sixths() {
        let r = lem32_lower_global().unwrap();
        assert_eq!(r[0].rhs, Some(Num::Exact(rat(11, 6))));
        assert_eq!(r[0].outcome, Outcome::Fail);
    }

    #[test]
    fn prop5_on_small_bias() {
        let m = member("ltf:3,2,2,1,1,1,1,1;6");
        for r in prop5(&m).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn paper_examples_match() {
        for r in paper5_global().unwrap().into_iter().chain(boundary_global().unwrap()) {
            assert_eq!(r.outcome, Outcome::Pass, "{r:?}");
        }
    }
}
