//! Check registry, suites, pinned constants and reports.

pub mod checks;
pub mod corpus;

use crate::bfcore::FunctionSpec;
use crate::check::{CheckRecord, Num, Outcome};
use crate::error::{CubeError, Result};
use checks::Member;
use corpus::Corpus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub type MemberCheck = fn(&Member) -> Result<Vec<CheckRecord>>;
pub type GlobalCheck = fn() -> Result<Vec<CheckRecord>>;

#[derive(Clone, Copy)]
pub enum Runner {
    /// Evaluated once per corpus member.
    Member(MemberCheck),
    /// Evaluated once per run, independent of the corpus.
    Global(GlobalCheck),
}

#[derive(Clone, Copy)]
pub struct CheckDef {
    pub id: &'static str,
    pub statement: &'static str,
    pub runner: Runner,
}

const fn member(id: &'static str, statement: &'static str, f: MemberCheck) -> CheckDef {
    CheckDef { id, statement, runner: Runner::Member(f) }
}

const fn global(id: &'static str, statement: &'static str, f: GlobalCheck) -> CheckDef {
    CheckDef { id, statement, runner: Runner::Global(f) }
}

use checks as c;

/// Every registered check. Some ids have both a member and a global part.
pub const REGISTRY: &[CheckDef] = &[
    member("PARSEVAL", "Σ f̂(S)² = E[f]", c::parseval),
    member("FWHT-NAIVE", "fast and naive Walsh transforms agree", c::fwht_naive),
    member("DUAL", "dual is an involution with mean 1−μ and sign-twisted spectrum", c::dual),
    member("TT-AGREE", "tail-distribution quantities match the truth table", c::tt_agree),
    member("MONO-LEVEL1", "monotone f: f̂({i}) = I_i/2", c::mono_level1),
    member("LVL1-upper", "W¹ ≤ 2μ² ln(1/μ)", c::level1_upper),
    member("GL-halfplane", "halfspaces: W⁰ + W¹ ≥ 1/2 for the ±1 version", c::gotsman_linial),
    member("THM12-lower", "halfspaces: W¹ ≥ c·ε² ln(1/ε)", c::thm12_lower),
    member("LVLK-upper", "W^{≤k} bounded by the level-k inequality", c::level_k_upper),
    member("THM14-band", "I_max ≍ ε·min(1, a_1√ln(1/ε))", c::thm14_band),
    member("THM15-band", "vb1 ≍ ε·min(1, a_1√ln(1/ε))", c::thm15_band),
    member("PROP71", "½I₁ ≤ vb1 ≤ (7/4)I₁", c::prop71),
    member("PROP72", "vb0 ≥ (2/7)vb1; vb0/vb1 = O(ln(1/ε))", c::prop72),
    member("COR36", "I₁(f_t) ≤ 5·I₁(f_s) for |s| ≤ t", c::cor36),
    member("LEM51", "a_i > β/2 ⇒ I_i(f_t) ≥ (2/3)F(t)", c::lem51),
    member("LEM52", "smoothed influence lower bound", c::lem52),
    member("LEM62", "I₁(f_s)/E f_s ≤ 6·I₁(f_t)/E f_t for 0 ≤ s ≤ t", c::lem62),
    member("PROP5", "small-weight influence mass decreases beyond t", c::prop5),
    member("THM64", "Pr[l ∈ (t, t+2m]] ≍ ε·min(1, m√ln(1/ε))", c::thm64),
    member("LEM111", "F(d)F(b) ≤ F(c)F(b+d−c−m)", c::lem111),
    member("LEM32", "interval mass decays by at most 5", c::lem32),
    member("LEM42", "F(t+δ+m)^l ≤ 2F(t)^{l+1}", c::lem42),
    member("THM18", "local Chernoff bound, strong form", c::thm18),
    member("THM19", "local Chernoff bound, partitioned form", c::thm19),
    member("THM110", "local Chernoff bound, weak form", c::thm110),
    member("GAUSS-EATON", "F(t) ≤ 3.178·Φ̄(t/‖a‖)", c::gauss_eaton),
    global("IH-DERIV", "Irwin-Hall k-th derivative by central differences", c::ih_deriv_global),
    global("FDERIV", "finite differences of polynomials", c::fderiv_global),
    member("NG", "Newton-Girard identities on normalised squares", c::newton_girard),
    global("NG", "Newton-Girard identities on random rationals", c::ng_global),
    member("NG-CHAIN", "e_{m−1} ≤ 2m·e_m chain", c::ng_chain),
    member("SIGN-COND", "sign condition on smoothed Fourier coefficients", c::sign_cond),
    global("SIGN-COND", "sign condition on uniform weights, n = 1024", c::sign_cond_global),
    member("WK-PIPELINE", "level-k lower bound pipeline", c::wk_pipeline),
    member("THM17", "Cov(f, g) ≥ c·√(W¹/ln(e/W¹)) for a first-level cut", c::thm17),
    member("COV-INTEGRAL", "Σ Cov(f, cut)·width = W¹", c::cov_integral),
    member("PROP92", "unbiased halfspace correlator", c::prop92),
    member("PROP93", "biased halfspace correlator", c::prop93),
    member("PROP16", "noise-resistance classification", c::prop16),
    member("NSREMARK", "noise sensitivity at rate δ/ln(1/μ)", c::ns_remark),
    global("FLIP-AUDIT", "suffix/prefix flips and scf maps are injective", c::flip_audit_global),
    global("FOUR-MAP", "four interval-decay injections", c::four_map_global),
    global("PAPER5-COV", "five-variable example covariances", c::paper5_global),
    global("SUBCUBE-VB", "subcube boundaries, dictator boundary", c::boundary_global),
    global("EX54", "vb1/I₁ → 10/9 for the five-four family", c::ex54_global),
    global("LEM32-LOWER", "interval decay ratio can approach 2", c::lem32_lower_global),
    global("EX74", "random-OR example: μ near 1/2", c::ex74_global),
];

pub const SUITES: &[&str] =
    &["exact-identities", "spectral", "influence", "chernoff", "levelk", "correlate", "injections", "paper-examples", "pinned", "all"];

/// Check ids of a suite.
pub fn suite_ids(suite: &str) -> Result<Vec<&'static str>> {
    let ids: &[&str] = match suite {
        "exact-identities" => &["PARSEVAL", "FWHT-NAIVE", "DUAL", "TT-AGREE", "MONO-LEVEL1"],
        "spectral" => &["LVL1-upper", "GL-halfplane", "THM12-lower", "LVLK-upper"],
        "influence" => &["THM14-band", "THM15-band", "PROP71", "PROP72", "COR36", "LEM51", "LEM52", "LEM62", "PROP5", "THM64"],
        "chernoff" => &["LEM111", "LEM32", "LEM42", "THM18", "THM19", "THM110", "GAUSS-EATON"],
        "levelk" => &["IH-DERIV", "FDERIV", "NG", "NG-CHAIN", "SIGN-COND", "WK-PIPELINE", "LVLK-upper"],
        "correlate" => &["THM17", "COV-INTEGRAL", "PROP92", "PROP93", "PROP16", "NSREMARK"],
        "injections" => &["FLIP-AUDIT", "FOUR-MAP"],
        "paper-examples" => &["PAPER5-COV", "SUBCUBE-VB", "EX54", "LEM32-LOWER", "EX74"],
        "pinned" => &PINNED_IDS,
        "all" => {
            let mut v: Vec<&str> = Vec::new();
            for d in REGISTRY {
                if !v.contains(&d.id) {
                    v.push(d.id);
                }
            }
            return Ok(v);
        }
        _ => return Err(CubeError::UnknownSuite(suite.into())),
    };
    Ok(ids.to_vec())
}

/// Entries of a suite in registry order.
pub fn suite_checks(suite: &str) -> Result<Vec<&'static CheckDef>> {
    let ids = suite_ids(suite)?;
    Ok(REGISTRY.iter().filter(|d| ids.contains(&d.id)).collect())
}

// ------------------------------------------------------------ pins

pub const PINNED_IDS: [&str; 8] = ["THM12-lower", "THM14-band", "THM15-band", "THM18", "THM19", "THM110", "THM64", "THM17"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinKind {
    /// `stat ≤ C`, pinned at 1.1 × max.
    Upper,
    /// `c ≤ stat`, pinned at 0.9 × min.
    Lower,
    /// Both.
    Band,
}

pub fn pin_kind(id: &str) -> Option<PinKind> {
    Some(match id {
        "THM18" | "THM19" | "THM110" => PinKind::Upper,
        "THM12-lower" | "THM17" => PinKind::Lower,
        "THM14-band" | "THM15-band" | "THM64" => PinKind::Band,
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinnedConstants {
    pub corpus_hash: String,
    pub constants: BTreeMap<String, f64>,
}

impl PinnedConstants {
    /// Constants from the reported statistics of `report`.
    pub fn from_report(report: &Report) -> Self {
        let mut lo: BTreeMap<&str, f64> = BTreeMap::new();
        let mut hi: BTreeMap<&str, f64> = BTreeMap::new();
        for r in &report.records {
            if r.outcome != Outcome::Reported || pin_kind(&r.check_id).is_none() {
                continue;
            }
            let v = r.lhs.to_f64();
            if !v.is_finite() {
                continue;
            }
            let e = lo.entry(r.check_id.as_str()).or_insert(v);
            *e = e.min(v);
            let e = hi.entry(r.check_id.as_str()).or_insert(v);
            *e = e.max(v);
        }
        let mut constants = BTreeMap::new();
        for id in PINNED_IDS {
            let (Some(&l), Some(&h)) = (lo.get(id), hi.get(id)) else { continue };
            match pin_kind(id).expect("pinned id") {
                PinKind::Upper => {
                    constants.insert(id.to_string(), 1.1 * h);
                }
                PinKind::Lower => {
                    constants.insert(id.to_string(), 0.9 * l);
                }
                PinKind::Band => {
                    constants.insert(format!("{id}.lo"), 0.9 * l);
                    constants.insert(format!("{id}.hi"), 1.1 * h);
                }
            }
        }
        PinnedConstants { corpus_hash: report.corpus_hash.clone(), constants }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        Ok(std::fs::write(path, self.to_json()?)?)
    }

    /// SHA-256 of the serialized constants.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().expect("serializable").as_bytes()))
    }

    fn get(&self, key: &str) -> Result<f64> {
        self.constants.get(key).copied().ok_or_else(|| CubeError::Params(format!("no pinned constant {key}")))
    }

    /// Turns reported statistics of pinned checks into assertions.
    pub fn apply(&self, records: Vec<CheckRecord>) -> Result<Vec<CheckRecord>> {
        let mut out = Vec::with_capacity(records.len());
        for r in records {
            let Some(kind) = pin_kind(&r.check_id).filter(|_| r.outcome == Outcome::Reported) else {
                out.push(r);
                continue;
            };
            let stat = r.lhs.to_f64();
            let id = r.check_id.clone();
            let pinned = |rec: CheckRecord, which: &str| rec.with_note(format!("{which}; {}", r.notes));
            match kind {
                PinKind::Upper => out.push(pinned(CheckRecord::le(&id, &r.instance, stat, self.get(&id)?, 0.0), "pinned upper")),
                PinKind::Lower => out.push(pinned(CheckRecord::le(&id, &r.instance, self.get(&id)?, stat, 0.0), "pinned lower")),
                PinKind::Band => {
                    let lo = self.get(&format!("{id}.lo"))?;
                    let hi = self.get(&format!("{id}.hi"))?;
                    out.push(pinned(CheckRecord::le(&id, &r.instance, lo, stat, 0.0), "pinned band lower"));
                    out.push(pinned(CheckRecord::le(&id, &r.instance, stat, hi, 0.0), "pinned band upper"));
                }
            }
        }
        Ok(out)
    }
}

// ------------------------------------------------------------ reports

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Extremal {
    pub count: usize,
    #[serde(serialize_with = "crate::check::serialize_opt_f64")]
    pub min: Option<f64>,
    #[serde(serialize_with = "crate::check::serialize_opt_f64")]
    pub max: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
    pub reported: usize,
    /// Per check id: the range of `lhs/rhs` for assertions, of the value for reported metrics.
    pub extremal: BTreeMap<String, Extremal>,
}

impl Summary {
    pub fn of(records: &[CheckRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.outcome {
                Outcome::Pass => s.pass += 1,
                Outcome::Fail => s.fail += 1,
                Outcome::HypothesisNotMet => s.hypothesis_not_met += 1,
                Outcome::Reported => s.reported += 1,
            }
            let e = s.extremal.entry(r.check_id.clone()).or_default();
            e.count += 1;
            let v = match r.outcome {
                Outcome::Reported => Some(r.lhs.to_f64()),
                Outcome::Pass | Outcome::Fail => r.ratio(),
                Outcome::HypothesisNotMet => None,
            };
            if let Some(v) = v.filter(|v| v.is_finite()) {
                e.min = Some(e.min.map_or(v, |m| m.min(v)));
                e.max = Some(e.max.map_or(v, |m| m.max(v)));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite_id: String,
    pub corpus: String,
    pub corpus_hash: String,
    pub pinned_hash: Option<String>,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.outcome == Outcome::Fail)
    }

    pub fn records_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records.iter().filter(move |r| r.check_id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check_id", "instance", "relation", "lhs", "rhs", "ratio", "tolerance", "pass", "outcome", "notes"])?;
        for r in &self.records {
            let outcome = serde_json::to_value(r.outcome)?;
            let relation = serde_json::to_value(r.relation)?;
            w.write_record([
                r.check_id.clone(),
                r.instance.clone(),
                relation.as_str().unwrap_or_default().to_string(),
                r.lhs.text(),
                r.rhs.as_ref().map(Num::text).unwrap_or_default(),
                r.ratio().map(|x| format!("{x:.16e}")).unwrap_or_default(),
                format!("{:e}", r.tolerance),
                r.passed().to_string(),
                outcome.as_str().unwrap_or_default().to_string(),
                r.notes.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// One line per check id.
    pub fn text_summary(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "suite {} on {} ({}): pass {} fail {} not-applicable {} reported {}\n",
            self.suite_id, self.corpus, &self.corpus_hash[..12.min(self.corpus_hash.len())], s.pass, s.fail, s.hypothesis_not_met, s.reported
        );
        for (id, e) in &s.extremal {
            let fails = self.records_for(id).filter(|r| r.outcome == Outcome::Fail).count();
            let range = match (e.min, e.max) {
                (Some(a), Some(b)) => format!("[{a:.6}, {b:.6}]"),
                _ => "-".into(),
            };
            out.push_str(&format!("  {id:<14} records {:>5} fail {:>4} range {range}\n", e.count, fails));
        }
        out
    }
}

fn run_or_note(id: &str, instance: &str, r: Result<Vec<CheckRecord>>) -> Vec<CheckRecord> {
    match r {
        Ok(v) => v,
        Err(e) => vec![CheckRecord::not_applicable(id, instance, f64::NAN, None, &format!("error: {e}"))],
    }
}

/// Runs `suite` over `corpus`; pinned statistics become assertions when `pins` is given.
pub fn run_suite(suite: &str, corpus: &Corpus, pins: Option<&PinnedConstants>) -> Result<Report> {
    let defs = suite_checks(suite)?;
    let corpus_hash = corpus.hash();
    if let Some(p) = pins {
        if p.corpus_hash != corpus_hash {
            return Err(CubeError::PinMismatch { pinned: p.corpus_hash.clone(), actual: corpus_hash });
        }
    }
    let specs = corpus.specs()?;
    let member_defs: Vec<(&str, MemberCheck)> = defs
        .iter()
        .filter_map(|d| match d.runner {
            Runner::Member(f) => Some((d.id, f)),
            Runner::Global(_) => None,
        })
        .collect();
    let mut records: Vec<CheckRecord> = if member_defs.is_empty() {
        Vec::new()
    } else {
        specs
            .par_iter()
            .map(|spec| run_member(spec, &member_defs))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    for d in &defs {
        if let Runner::Global(f) = d.runner {
            records.extend(run_or_note(d.id, "global", f()));
        }
    }
    if let Some(p) = pins {
        records = p.apply(records)?;
    }
    let summary = Summary::of(&records);
    Ok(Report {
        suite_id: suite.into(),
        corpus: corpus.name.clone(),
        corpus_hash,
        pinned_hash: pins.map(PinnedConstants::hash),
        records,
        summary,
    })
}

fn run_member(spec: &FunctionSpec, defs: &[(&str, MemberCheck)]) -> Vec<CheckRecord> {
    let label = spec.to_text();
    let m = match Member::new(spec.clone()) {
        Ok(m) => m,
        Err(e) => return defs.iter().flat_map(|(id, _)| run_or_note(id, &label, Err(CubeError::Params(e.to_string())))).collect(),
    };
    defs.iter().flat_map(|(id, f)| run_or_note(id, &label, f(&m))).collect()
}

/// Runs the pinned suite without pins and derives constants from it.
pub fn compute_pins(corpus: &Corpus) -> Result<(PinnedConstants, Report)> {
    let raw = run_suite("pinned", corpus, None)?;
    let pins = PinnedConstants::from_report(&raw);
    let report = run_suite("pinned", corpus, Some(&pins))?;
    Ok((pins, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_resolves() {
        for s in SUITES {
            let defs = suite_checks(s).unwrap();
            assert!(!defs.is_empty(), "{s}");
            assert_eq!(suite_ids(s).unwrap().len(), suite_ids(s).unwrap().iter().filter(|id| REGISTRY.iter().any(|d| d.id == **id)).count());
        }
        assert!(matches!(suite_ids("nope"), Err(CubeError::UnknownSuite(_))));
    }

    #[test]
    fn exact_identities_on_builtins() {
        let c = Corpus::resolve("builtin").unwrap();
        let r = run_suite("exact-identities", &c, None).unwrap();
        assert!(r.passed(), "{}", r.text_summary());
        assert!(r.summary.pass > 0);
        let json = r.to_json().unwrap();
        assert_eq!(json, run_suite("exact-identities", &c, None).unwrap().to_json().unwrap());
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), r.records.len() + 1);
    }

    #[test]
    fn pins_roundtrip_and_mismatch() {
        let c = Corpus::resolve("builtin").unwrap();
        let (pins, report) = compute_pins(&c).unwrap();
        assert!(report.passed(), "{}", report.text_summary());
        assert!(pins.constants.contains_key("THM14-band.lo"));
        let mut other = pins.clone();
        other.corpus_hash = "00".into();
        assert!(matches!(run_suite("pinned", &c, Some(&other)), Err(CubeError::PinMismatch { .. })));
    }

    #[test]
    fn lower_pins_read_the_right_way() {
        let pins = PinnedConstants { corpus_hash: String::new(), constants: [("THM17".to_string(), 0.5)].into() };
        let recs = pins.apply(vec![CheckRecord::reported("THM17", "x", 0.4), CheckRecord::reported("THM17", "y", 0.6)]).unwrap();
        assert_eq!(recs[0].outcome, Outcome::Fail);
        assert_eq!(recs[1].outcome, Outcome::Pass);
    }
}
