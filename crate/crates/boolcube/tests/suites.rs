use boolcube::harness::checks::{self, Member};
use boolcube::harness::corpus::{corpus_gen, Band, Corpus, CorpusKind};
use boolcube::harness::{run_suite, suite_checks, MemberCheck, Runner, REGISTRY, SUITES};
use boolcube::rational::rat;
use boolcube::{FunctionSpec, Outcome};
use proptest::prelude::*;

#[test]
fn report_json_is_deterministic_and_shaped() {
    let c = Corpus::resolve("builtin").unwrap();
    let a = run_suite("spectral", &c, None).unwrap();
    let b = run_suite("spectral", &c, None).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    let v: serde_json::Value = serde_json::from_str(&a.to_json().unwrap()).unwrap();
    for key in ["suite_id", "corpus_hash", "pinned_hash", "records", "summary"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let r = &v["records"][0];
    for key in ["check_id", "instance", "lhs", "rhs", "ratio", "tolerance", "pass", "outcome", "notes"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    let s = &v["summary"];
    let total = ["pass", "fail", "hypothesis_not_met", "reported"].iter().map(|k| s[k].as_u64().unwrap()).sum::<u64>();
    assert_eq!(total as usize, a.records.len());
}

#[test]
fn records_follow_corpus_order() {
    let c = Corpus::resolve("builtin").unwrap();
    let r = run_suite("exact-identities", &c, None).unwrap();
    let parseval: Vec<&str> = r.records_for("PARSEVAL").map(|x| x.instance.as_str()).collect();
    let labels: Vec<String> = c.specs().unwrap().iter().map(|s| s.to_text()).collect();
    assert_eq!(parseval, labels.iter().map(String::as_str).collect::<Vec<_>>());
}

#[test]
fn asserted_records_recompute() {
    let c = Corpus::resolve("builtin").unwrap();
    let r = run_suite("influence", &c, None).unwrap();
    for rec in &r.records {
        if let Some(ok) = rec.recompute() {
            assert_eq!(ok, rec.outcome == Outcome::Pass, "{rec:?}");
        }
    }
}

#[test]
fn suites_cover_the_registry() {
    let all: Vec<&str> = suite_checks("all").unwrap().iter().map(|d| d.id).collect();
    for d in REGISTRY {
        assert!(all.contains(&d.id));
        assert!(SUITES.iter().filter(|s| **s != "all").any(|s| suite_checks(s).unwrap().iter().any(|x| x.id == d.id)), "{} in no suite", d.id);
    }
    assert!(REGISTRY.iter().any(|d| matches!(d.runner, Runner::Global(_))));
}

#[test]
fn five_four_small_cases_match_tables() {
    use boolcube::influence::{boundary_measures, influences};
    for n in [5, 7, 9, 11] {
        let h = checks::five_four(n).unwrap();
        let f = h.truth_table().unwrap();
        let want = boundary_measures(&f).vb1 / influences(&f).influence(0);
        assert_eq!(checks::five_four_ratio(n).unwrap(), want);
    }
}

#[test]
fn corpus_member_errors_become_records() {
    // 25 variables exceed the default truth-table cap
    let c = Corpus::listed("big", vec!["maj:25".into()]).unwrap();
    let r = run_suite("exact-identities", &c, None).unwrap();
    assert!(r.records.iter().all(|x| x.outcome == Outcome::HypothesisNotMet));
    assert!(r.records.iter().any(|x| x.notes.starts_with("error:")));
}

fn halfspace_spec() -> impl Strategy<Value = String> {
    (prop::collection::vec((1i64..=24, 1i64..=3), 3..=10), -6i64..=10).prop_map(|(ws, t)| {
        let w: Vec<String> = ws.iter().map(|(p, q)| boolcube::rational::format_rational(&rat(*p, *q))).collect();
        format!("ltf:{};{}", w.join(","), boolcube::rational::format_rational(&rat(t, 2)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn member_checks_never_fail_on_small_halfspaces(spec in halfspace_spec()) {
        let m = Member::new(FunctionSpec::parse(&spec).unwrap()).unwrap();
        let runs: [MemberCheck; 14] = [
            checks::parseval, checks::dual, checks::tt_agree, checks::mono_level1, checks::gotsman_linial,
            checks::prop71, checks::cor36, checks::lem51, checks::lem52, checks::lem62, checks::prop5,
            checks::lem111, checks::lem32, checks::lem42,
        ];
        for run in runs {
            for r in run(&m).unwrap() {
                prop_assert!(r.passed(), "{:?}", r);
            }
        }
    }

    #[test]
    fn random_halfspace_corpora_land_in_band(seed in 0u64..1000, lo in 4u32..10) {
        let band = Band::dyadic(lo + 2, lo);
        let kind = CorpusKind::RandomHalfspace { n_min: 12, n_max: 14, bits: 5, max_den: 2, bands: vec![band.clone()], count: 3 };
        let c = corpus_gen(kind, seed).unwrap();
        for s in c.specs().unwrap() {
            let h = s.halfspace().unwrap().unwrap();
            prop_assert!(band.contains(&h.mean().unwrap()));
        }
    }
}
