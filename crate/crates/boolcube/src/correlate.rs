//! Correlation of Boolean functions with halfspaces built from their first
//! Fourier level, and noise-resistance measures.

use crate::bfcore::BooleanFunction;
use crate::check::CheckRecord;
use crate::error::{CubeError, Result};
use crate::halfspace::Halfspace;
use crate::rational::{dyadic, format_rational, to_f64, Rational};
use crate::spectral::{fwht_spectrum, FourierSpectrum};
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// `l(x) = Σ f̂({i}) x_i`, held as numerators over `2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub n: usize,
    pub numerators: Vec<i64>,
    pub coefficients: Vec<Rational>,
    /// `‖l‖² = W¹(f)`
    pub norm_sq: Rational,
}

impl LinearForm {
    pub fn from_spectrum(spec: &FourierSpectrum) -> Self {
        let n = spec.n();
        let numerators: Vec<i64> = (0..n).map(|i| spec.numerators()[1 << i]).collect();
        let coefficients = (0..n).map(|i| spec.coeff(1 << i)).collect();
        let norm_sq = spec.level_weights().w[1].clone();
        LinearForm { n, numerators, coefficients, norm_sq }
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(|&c| c == 0)
    }

    /// Value of the numerator form at point `m`.
    pub fn numerator_at(&self, m: usize) -> i64 {
        self.numerators.iter().enumerate().map(|(i, &c)| if m >> i & 1 == 1 { c } else { -c }).sum()
    }
}

pub fn first_level_form(f: &BooleanFunction) -> LinearForm {
    LinearForm::from_spectrum(&fwht_spectrum(f))
}

/// Visits `(m, Σ ±c_i)` for every point in Gray-code order.
fn for_each_value(coeffs: &[i64], mut visit: impl FnMut(usize, i64)) {
    let n = coeffs.len();
    let mut v: i64 = -coeffs.iter().sum::<i64>();
    let mut m = 0usize;
    visit(m, v);
    for g in 1..1usize << n {
        let i = g.trailing_zeros() as usize;
        m ^= 1 << i;
        v += if m >> i & 1 == 1 { 2 * coeffs[i] } else { -2 * coeffs[i] };
        visit(m, v);
    }
}

/// `(#points, #points with f = 1)` per value of the form.
fn value_table(f: &BooleanFunction, l: &LinearForm) -> BTreeMap<i64, (u64, u64)> {
    let mut t = BTreeMap::new();
    for_each_value(&l.numerators, |m, v| {
        let e = t.entry(v).or_insert((0u64, 0u64));
        e.0 += 1;
        if f.get(m) {
            e.1 += 1;
        }
    });
    t
}

/// `Cov(f, g)` from `#g`, `#fg` and `#f` over `2^n` points.
fn cov_from_counts(n: usize, ng: u64, nfg: u64, nf: u64) -> Rational {
    let num = (nfg as i128) * (1i128 << n) - (nf as i128) * (ng as i128);
    dyadic(num, 2 * n as u32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationResult {
    /// Lowest `t` attaining the best covariance for `1{l(x) > t}`.
    pub threshold: Rational,
    pub covariance: Rational,
    /// `√(W¹/ln(e/W¹))`
    pub scale: f64,
    /// `covariance / scale`
    pub ratio: f64,
    pub halfspace: Option<String>,
    pub degenerate: bool,
}

impl CorrelationResult {
    /// The lower bound `c·√(W¹/ln(e/W¹))` for a given constant.
    pub fn bound(&self, c: f64) -> f64 {
        c * self.scale
    }
}

fn w1_scale(w1: &Rational) -> f64 {
    let w = to_f64(w1);
    if w <= 0.0 {
        0.0
    } else {
        (w / (std::f64::consts::E / w).ln()).sqrt()
    }
}

/// Scans every cut `1{l(x) > t}` between consecutive values of `l`.
pub fn best_halfspace_over_form(f: &BooleanFunction, l: &LinearForm) -> Result<CorrelationResult> {
    if f.n() != l.n {
        return Err(CubeError::Arity(f.n(), l.n));
    }
    let scale = w1_scale(&l.norm_sq);
    if l.is_zero() {
        return Ok(CorrelationResult {
            threshold: Rational::zero(),
            covariance: Rational::zero(),
            scale,
            ratio: 0.0,
            halfspace: None,
            degenerate: true,
        });
    }
    let n = f.n();
    let table = value_table(f, l);
    let nf = f.count_ones();
    let vals: Vec<(i64, (u64, u64))> = table.into_iter().collect();
    let (mut ng, mut nfg) = (1u64 << n, nf);
    let mut best: Option<(Rational, i64)> = None;
    for j in 0..vals.len() - 1 {
        ng -= vals[j].1 .0;
        nfg -= vals[j].1 .1;
        let c = cov_from_counts(n, ng, nfg, nf);
        if best.as_ref().is_none_or(|(b, _)| c > *b) {
            best = Some((c, vals[j].0));
        }
    }
    let (covariance, tv) = best.expect("at least two values");
    let threshold = dyadic(tv as i128, n as u32);
    let hs = Halfspace::from_signed(&l.coefficients, threshold.clone())?.to_text();
    let ratio = if scale > 0.0 { to_f64(&covariance) / scale } else { 0.0 };
    Ok(CorrelationResult { threshold, covariance, scale, ratio, halfspace: Some(hs), degenerate: false })
}

/// `Σ_j Cov(f, 1{l > v_j})·(v_{j+1} − v_j)` and `W¹(f)`; the two are equal.
pub fn integral_identity(f: &BooleanFunction, l: &LinearForm) -> Result<(Rational, Rational)> {
    if f.n() != l.n {
        return Err(CubeError::Arity(f.n(), l.n));
    }
    let n = f.n();
    let nf = f.count_ones();
    let vals: Vec<(i64, (u64, u64))> = value_table(f, l).into_iter().collect();
    let (mut ng, mut nfg) = (1u64 << n, nf);
    let mut acc = Rational::zero();
    for j in 0..vals.len().saturating_sub(1) {
        ng -= vals[j].1 .0;
        nfg -= vals[j].1 .1;
        let width = dyadic((vals[j + 1].0 - vals[j].0) as i128, n as u32);
        acc += cov_from_counts(n, ng, nfg, nf) * width;
    }
    Ok((acc, l.norm_sq.clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnbiasedResult {
    /// Coordinates whose sign is reversed in the best form.
    pub flipped: Vec<usize>,
    pub covariance: Rational,
    /// Covariance of `1{l(x) > 0}` itself.
    pub base_covariance: Rational,
    pub candidates: usize,
}

fn unbiased_cov(f: &BooleanFunction, coeffs: &[i64], nf: u64) -> Rational {
    let (mut ng, mut nfg) = (0u64, 0u64);
    for_each_value(coeffs, |m, v| {
        if v > 0 {
            ng += 1;
            if f.get(m) {
                nfg += 1;
            }
        }
    });
    cov_from_counts(f.n(), ng, nfg, nf)
}

/// Best `1{Σ (−1)^{α_i} f̂({i}) x_i > 0}` over `α = 0` and single flips, or
/// over every `α` when `full_scan` is set (`n ≤ 16`).
pub fn unbiased_correlator(f: &BooleanFunction, full_scan: bool) -> Result<UnbiasedResult> {
    let mu = f.mean();
    if mu.is_zero() || mu == Rational::from_integer(1.into()) {
        return Err(CubeError::Degenerate("μ must lie in (0,1)".into()));
    }
    let l = first_level_form(f);
    if l.is_zero() {
        return Err(CubeError::Degenerate("first Fourier level vanishes".into()));
    }
    let n = f.n();
    let nf = f.count_ones();
    let patterns: Vec<u64> = if full_scan {
        if n > 16 {
            return Err(CubeError::Budget("full sign scan limited to n ≤ 16".into()));
        }
        (0..1u64 << n).collect()
    } else {
        std::iter::once(0).chain((0..n).map(|i| 1u64 << i)).collect()
    };
    let covs: Vec<Rational> = patterns
        .par_iter()
        .map(|&a| {
            let c: Vec<i64> = l.numerators.iter().enumerate().map(|(i, &x)| if a >> i & 1 == 1 { -x } else { x }).collect();
            unbiased_cov(f, &c, nf)
        })
        .collect();
    // first maximum in candidate order
    let mut bi = 0;
    for (i, c) in covs.iter().enumerate() {
        if *c > covs[bi] {
            bi = i;
        }
    }
    let a = patterns[bi];
    Ok(UnbiasedResult {
        flipped: (0..n).filter(|i| a >> i & 1 == 1).collect(),
        covariance: covs[bi].clone(),
        base_covariance: covs[0].clone(),
        candidates: patterns.len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasedResult {
    pub epsilon: Rational,
    pub alpha: f64,
    /// `½√(α ln(1/ε))`
    pub s: f64,
    pub mean_g: Rational,
    pub mean_fg: Rational,
    /// `ε^{α/8}`
    pub mean_bound: f64,
    /// `(√α/8)·ε`
    pub product_bound: f64,
    /// `α > 4ε²`
    pub hypothesis_met: bool,
}

/// `g_s = 1{l(x)/‖l‖ > s}` with `α` taken from `W¹ = α ε² ln(1/ε)` unless given.
pub fn biased_correlator(f: &BooleanFunction, alpha: Option<f64>) -> Result<BiasedResult> {
    let eps = f.mean();
    let e = to_f64(&eps);
    if !(e > 0.0 && e < 1.0) {
        return Err(CubeError::Degenerate("μ must lie in (0,1)".into()));
    }
    let l = first_level_form(f);
    if l.is_zero() {
        return Err(CubeError::Degenerate("first Fourier level vanishes".into()));
    }
    let lg = (1.0 / e).ln();
    let alpha = alpha.unwrap_or_else(|| to_f64(&l.norm_sq) / (e * e * lg));
    let s = 0.5 * (alpha * lg).sqrt();
    let norm: f64 = l.numerators.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>().sqrt();
    let cut = s * norm;
    let (mut ng, mut nfg) = (0u64, 0u64);
    for_each_value(&l.numerators, |m, v| {
        if v as f64 > cut {
            ng += 1;
            if f.get(m) {
                nfg += 1;
            }
        }
    });
    let n = f.n() as u32;
    Ok(BiasedResult {
        epsilon: eps,
        alpha,
        s,
        mean_g: dyadic(ng as i128, n),
        mean_fg: dyadic(nfg as i128, n),
        mean_bound: e.powf(alpha / 8.0),
        product_bound: alpha.sqrt() / 8.0 * e,
        hypothesis_met: alpha > 4.0 * e * e,
    })
}

pub fn check_biased(f: &BooleanFunction, label: &str) -> Result<Vec<CheckRecord>> {
    let r = biased_correlator(f, None)?;
    let mk = |lhs: crate::check::Num, rhs: crate::check::Num, what: &str| {
        if r.hypothesis_met {
            CheckRecord::le("PROP93", label, lhs, rhs, 1e-12).with_note(what)
        } else {
            CheckRecord::not_applicable("PROP93", label, lhs, Some(rhs), "α ≤ 4ε²").with_note(what)
        }
    };
    Ok(vec![
        mk(r.mean_g.clone().into(), r.mean_bound.into(), "E[g_s] ≤ ε^{α/8}"),
        mk(r.product_bound.into(), r.mean_fg.clone().into(), "E[f g_s] ≥ (√α/8)ε"),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseClass {
    pub mean: Rational,
    pub w1: Rational,
    /// `W¹/(μ² ln(1/μ))`
    pub fourier_ratio: f64,
    pub fourier_resistant: bool,
    /// `c/ln(1/μ)`
    pub rho: f64,
    pub stability: f64,
    /// `S_ρ/μ²`
    pub stability_ratio: f64,
    pub stability_resistant: bool,
    pub monotone: bool,
    /// For monotone, stability-resistant `f` with `μ ≤ 1/2`: best cut covariance over `μ`.
    pub correlation_ratio: Option<f64>,
}

pub const DEFAULT_RHO_CONSTANT: f64 = 0.05;

/// Both resistance notions share the threshold `c0`.
pub fn noise_resistance_class(f: &BooleanFunction, c0: f64, c: f64) -> Result<NoiseClass> {
    let mean = f.mean();
    let mu = to_f64(&mean);
    if !(mu > 0.0 && mu < 1.0) {
        return Err(CubeError::Degenerate("μ must lie in (0,1)".into()));
    }
    let spec = fwht_spectrum(f);
    let w1 = spec.level_weights().w[1].clone();
    let lg = (1.0 / mu).ln();
    let fourier_ratio = to_f64(&w1) / (mu * mu * lg);
    let rho = (c / lg).min(1.0);
    let stability = spec.noise_stability(rho)?;
    let stability_ratio = stability / (mu * mu);
    let monotone = f.is_monotone();
    let stability_resistant = stability_ratio >= c0;
    let correlation_ratio = if monotone && stability_resistant && mu <= 0.5 {
        let best = best_halfspace_over_form(f, &LinearForm::from_spectrum(&spec))?;
        Some(to_f64(&best.covariance) / mu)
    } else {
        None
    };
    Ok(NoiseClass {
        mean,
        w1,
        fourier_ratio,
        fourier_resistant: fourier_ratio >= c0,
        rho,
        stability,
        stability_ratio,
        stability_resistant,
        monotone,
        correlation_ratio,
    })
}

/// `NS_{δ/ln(1/ε)}(f) / (ε√δ)`, with `NS_η = Pr[f(x) ≠ f(y)]` for `y` flipping each bit w.p. `η`.
pub fn ns_metric(f: &BooleanFunction, delta: f64) -> Result<f64> {
    let mu = to_f64(&f.mean());
    if !(mu > 0.0 && mu < 1.0) || delta <= 0.0 {
        return Err(CubeError::Degenerate("needs 0 < μ < 1 and δ > 0".into()));
    }
    let eta = delta / (1.0 / mu).ln();
    if eta > 0.5 {
        return Err(CubeError::Params("flip rate above 1/2".into()));
    }
    let s = fwht_spectrum(f).noise_stability(1.0 - 2.0 * eta)?;
    let ns = 2.0 * (mu - mu * mu - s);
    Ok(ns / (mu * delta.sqrt()))
}

/// `Cov(f, g)` for the best first-level cut, divided by `√(W¹/ln(e/W¹))`.
pub fn correlation_record(f: &BooleanFunction, label: &str, pinned: Option<f64>) -> Result<CheckRecord> {
    let r = best_halfspace_over_form(f, &first_level_form(f))?;
    let note = format!("t*={} cov={}", format_rational(&r.threshold), format_rational(&r.covariance));
    Ok(match pinned {
        Some(c) => CheckRecord::le("THM17", label, c, r.ratio, 0.0),
        None => CheckRecord::reported("THM17", label, r.ratio),
    }
    .with_note(note))
}

/// Integer form of `Σ_i c_i x_i > t` at every point, for callers holding numerators.
pub fn cut_function(coeffs: &[i64], t: i64) -> Result<BooleanFunction> {
    let mut bits = vec![false; 1 << coeffs.len()];
    for_each_value(coeffs, |m, v| bits[m] = v > t);
    BooleanFunction::from_truth_table(&bits, coeffs.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bfcore::{dictator, majority, paper5, tribes};
    use crate::rational::{int, rat};
    use crate::spectral::covariance;

    #[test]
    fn forms() {
        let d = first_level_form(&dictator(3).unwrap());
        assert_eq!(d.coefficients, vec![rat(1, 2), int(0), int(0)]);
        let p = first_level_form(&paper5());
        assert!(p.coefficients.iter().all(|c| *c == rat(1, 16)));
        let m = first_level_form(&majority(3).unwrap());
        assert!(m.coefficients.iter().all(|c| *c == rat(1, 4)));
    }

    #[test]
    fn paper5_best_cut() {
        let f = paper5();
        let r = best_halfspace_over_form(&f, &first_level_form(&f)).unwrap();
        assert_eq!(r.covariance, rat(3, 32));
        assert_eq!(r.threshold, rat(-3, 16));
        // the {Σ ≥ 3} cut ties
        let g = cut_function(&[1; 5], 1).unwrap();
        assert_eq!(covariance(&f, &g).unwrap(), rat(3, 32));
    }

    #[test]
    fn dictator_and_constant() {
        let f = dictator(3).unwrap();
        let r = best_halfspace_over_form(&f, &first_level_form(&f)).unwrap();
        assert_eq!(r.covariance, rat(1, 4));
        let z = BooleanFunction::constant(3, false).unwrap();
        let r = best_halfspace_over_form(&z, &first_level_form(&z)).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.covariance, int(0));
    }

    #[test]
    fn integral_identity_examples() {
        for f in [paper5(), majority(5).unwrap(), tribes(2, 3).unwrap(), dictator(4).unwrap()] {
            let (a, b) = integral_identity(&f, &first_level_form(&f)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn unbiased_examples() {
        let r = unbiased_correlator(&paper5(), false).unwrap();
        assert_eq!(r.base_covariance, rat(-1, 16));
        assert_eq!(r.covariance, rat(1, 8));
        assert_eq!(r.flipped.len(), 1);
        let full = unbiased_correlator(&paper5(), true).unwrap();
        assert!(full.covariance >= r.covariance);
        assert_eq!(full.candidates, 32);
        let d = unbiased_correlator(&dictator(2).unwrap(), false).unwrap();
        assert_eq!(d.covariance, rat(1, 4));
        let m = unbiased_correlator(&majority(3).unwrap(), false).unwrap();
        assert_eq!(m.base_covariance, rat(1, 4));
        assert!(unbiased_correlator(&BooleanFunction::constant(3, true).unwrap(), false).is_err());
    }

    #[test]
    fn biased_examples() {
        let z = BooleanFunction::constant(3, false).unwrap();
        assert!(biased_correlator(&z, None).is_err());
        let h = crate::halfspace::uniform(15, int(9)).unwrap().truth_table().unwrap();
        let r = biased_correlator(&h, None).unwrap();
        assert!(r.hypothesis_met);
        assert!(to_f64(&r.mean_g) <= r.mean_bound);
        assert!(to_f64(&r.mean_fg) >= r.product_bound);
        for rec in check_biased(&h, "maj15@9").unwrap() {
            assert!(rec.passed(), "{rec:?}");
        }
    }

    #[test]
    fn noise_class_examples() {
        let d = noise_resistance_class(&dictator(1).unwrap(), 1.0, DEFAULT_RHO_CONSTANT).unwrap();
        assert!((d.fourier_ratio - 1.0 / 2f64.ln()).abs() < 1e-12);
        assert!(d.fourier_resistant);
        let t = noise_resistance_class(&tribes(4, 4).unwrap(), 1.0, DEFAULT_RHO_CONSTANT).unwrap();
        assert!(t.fourier_ratio > 0.0);
        assert!(noise_resistance_class(&BooleanFunction::constant(2, true).unwrap(), 1.0, 0.05).is_err());
    }

    #[test]
    fn ns_metric_dictator() {
        // NS_η(x1) = η, μ = 1/2
        let v = ns_metric(&dictator(1).unwrap(), 0.25).unwrap();
        let eta = 0.25 / 2f64.ln();
        assert!((v - eta / (0.5 * 0.5)).abs() < 1e-12);
    }
}
