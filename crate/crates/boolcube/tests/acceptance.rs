//! One line per acceptance criterion; exits nonzero if any criterion fails.

use boolcube::bfcore::BooleanFunction;
use boolcube::harness::corpus::{corpus_gen, Corpus, CorpusKind};
use boolcube::harness::{compute_pins, run_suite, PinnedConstants, Report};
use boolcube::{CheckRecord, Outcome, Result};
use std::path::PathBuf;
use std::process::ExitCode;

type Criterion = fn() -> Result<Verdict>;

struct Verdict {
    ok: bool,
    detail: String,
}

fn of(ids: &[&str], reports: &[&Report]) -> Vec<CheckRecord> {
    reports.iter().flat_map(|r| r.records.iter()).filter(|r| ids.contains(&r.check_id.as_str())).cloned().collect()
}

/// No failures, and at least `min_pass` asserted records per id.
fn verdict(records: &[CheckRecord], ids: &[&str], min_pass: usize) -> Verdict {
    let fails: Vec<&CheckRecord> = records.iter().filter(|r| r.outcome == Outcome::Fail).collect();
    let mut short = Vec::new();
    for id in ids {
        let n = records.iter().filter(|r| r.check_id == *id && r.outcome == Outcome::Pass).count();
        if n < min_pass {
            short.push(format!("{id} has {n} passing records"));
        }
    }
    let pass = records.iter().filter(|r| r.outcome == Outcome::Pass).count();
    let mut detail = format!("{pass} asserted records pass, {} fail", fails.len());
    if let Some(f) = fails.first() {
        detail += &format!("; first failure {} {} lhs={} rhs={}", f.check_id, f.instance, f.lhs.text(), f.rhs.as_ref().map(|x| x.text()).unwrap_or_default());
    }
    if !short.is_empty() {
        detail += &format!("; {}", short.join(", "));
    }
    Verdict { ok: fails.is_empty() && short.is_empty(), detail }
}

fn exact_identities() -> Result<Verdict> {
    let builtin = run_suite("exact-identities", &Corpus::resolve("builtin")?, None)?;
    let n12 = run_suite("exact-identities", &corpus_gen(CorpusKind::RandomFunction { n: 12, count: 100 }, 12)?, None)?;
    let all3: Vec<String> = (0..256usize).map(|k| BooleanFunction::from_fn(3, |m| k >> m & 1 == 1).map(|f| f.to_text())).collect::<Result<_>>()?;
    let n3 = run_suite("exact-identities", &Corpus::listed("all-n3", all3)?, None)?;
    let n10 = run_suite("exact-identities", &corpus_gen(CorpusKind::RandomFunction { n: 10, count: 100 }, 10)?, None)?;
    let halfspaces = run_suite("exact-identities", &Corpus::resolve("small-rational")?, None)?;
    let mut v = verdict(&of(&["PARSEVAL", "FWHT-NAIVE", "DUAL", "TT-AGREE", "MONO-LEVEL1"], &[&builtin, &n12, &n3, &n10, &halfspaces]), &[], 0);
    let count = |r: &Report, id: &str| r.records_for(id).filter(|x| x.outcome == Outcome::Pass).count();
    let coverage = [
        ("PARSEVAL on builtins", count(&builtin, "PARSEVAL"), builtin.records_for("PARSEVAL").count()),
        ("PARSEVAL on n=12", count(&n12, "PARSEVAL"), 100),
        ("FWHT-NAIVE on n=3", count(&n3, "FWHT-NAIVE"), 256),
        ("FWHT-NAIVE on n=10", count(&n10, "FWHT-NAIVE"), 100),
        ("TT-AGREE on halfspaces", count(&halfspaces, "TT-AGREE"), 50),
    ];
    for (what, got, want) in coverage {
        if got != want {
            v.ok = false;
            v.detail += &format!("; {what}: {got}/{want}");
        }
    }
    Ok(v)
}

fn worked_examples() -> Result<Verdict> {
    let r = run_suite("paper-examples", &Corpus::resolve("builtin")?, None)?;
    let ids = ["PAPER5-COV", "SUBCUBE-VB", "PROP71", "PROP72"];
    Ok(verdict(&of(&ids, &[&r]), &ids, 1))
}

fn five_four() -> Result<Verdict> {
    let r = run_suite("paper-examples", &Corpus::resolve("builtin")?, None)?;
    let recs: Vec<CheckRecord> = r.records_for("EX54").filter(|x| x.outcome != Outcome::Reported).cloned().collect();
    let mut v = verdict(&recs, &["EX54"], 1);
    if let Some(x) = recs.first() {
        v.detail = format!("{}; {}", v.detail, x.notes);
    }
    Ok(v)
}

fn injections() -> Result<Verdict> {
    let r = run_suite("injections", &Corpus::resolve("builtin")?, None)?;
    let ids = ["FLIP-AUDIT", "FOUR-MAP"];
    Ok(verdict(&of(&ids, &[&r]), &ids, 20))
}

fn tail_lemmas() -> Result<Verdict> {
    let c = Corpus::resolve("small-rational")?;
    let ids = ["LEM111", "LEM32", "LEM42", "COR36", "LEM51", "LEM52", "LEM62", "PROP5"];
    let a = run_suite("chernoff", &c, None)?;
    let b = run_suite("influence", &c, None)?;
    Ok(verdict(&of(&ids, &[&a, &b]), &ids, 1))
}

fn pinned() -> Result<Verdict> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/pinned.json");
    let c = Corpus::resolve("standard")?;
    let pins = if path.exists() {
        PinnedConstants::load(&path)?
    } else {
        let (p, _) = compute_pins(&c)?;
        p.save(&path)?;
        p
    };
    let r = run_suite("pinned", &c, Some(&pins))?;
    let ids = ["THM12-lower", "THM14-band", "THM15-band", "THM18", "THM19", "THM110", "THM64", "THM17"];
    Ok(verdict(&r.records, &ids, 1))
}

fn gaussian() -> Result<Verdict> {
    let r = run_suite("chernoff", &Corpus::resolve("standard")?, None)?;
    let recs: Vec<CheckRecord> = r.records_for("GAUSS-EATON").cloned().collect();
    let mut v = verdict(&recs, &["GAUSS-EATON"], 100);
    let worst = recs.iter().filter(|x| x.outcome != Outcome::Reported).map(|x| x.lhs.to_f64()).fold(0.0, f64::max);
    let left = recs.iter().filter(|x| x.outcome == Outcome::Reported).map(|x| x.lhs.to_f64()).fold(0.0, f64::max);
    v.detail += &format!("; largest F(t)/Φ̄(t) {worst:.6}, largest left limit {left:.6}");
    Ok(v)
}

fn level_k() -> Result<Verdict> {
    let r = run_suite("levelk", &Corpus::resolve("standard")?, None)?;
    Ok(verdict(&r.records, &["LVLK-upper", "IH-DERIV", "NG", "SIGN-COND", "WK-PIPELINE"], 1))
}

fn lower_witness() -> Result<Verdict> {
    let r = run_suite("paper-examples", &Corpus::resolve("builtin")?, None)?;
    let recs: Vec<CheckRecord> = r.records_for("LEM32-LOWER").cloned().collect();
    let mut v = verdict(&recs, &["LEM32-LOWER"], 1);
    if let Some(x) = recs.first() {
        v.detail = format!("{}; {}", v.detail, x.notes);
    }
    Ok(v)
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("exact identities", exact_identities),
        ("worked-example regression", worked_examples),
        ("five-four family vb1/I1 near 10/9 at n=41", five_four),
        ("constructive injections", injections),
        ("tail-shape lemmas", tail_lemmas),
        ("pinned-constant regressions", pinned),
        ("Gaussian comparison", gaussian),
        ("level-k machinery", level_k),
        ("interval-decay lower witness", lower_witness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run().unwrap_or_else(|e| Verdict { ok: false, detail: format!("error: {e}") });
        if !v.ok {
            failed += 1;
        }
        println!("criterion {}: {} [{name}] {}", i + 1, if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
