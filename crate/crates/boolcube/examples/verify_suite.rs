//! Run a suite on a generated corpus, then pin and assert the pinned statistics.

use boolcube::harness::corpus::{corpus_gen, Band, CorpusKind};
use boolcube::harness::{compute_pins, run_suite};

fn main() -> boolcube::Result<()> {
    let kind = CorpusKind::RandomHalfspace { n_min: 10, n_max: 14, bits: 5, max_den: 2, bands: vec![Band::dyadic(8, 4)], count: 12 };
    let corpus = corpus_gen(kind, 11)?;
    println!("corpus {} members, hash {}", corpus.len(), &corpus.hash()[..16]);

    let report = run_suite("chernoff", &corpus, None)?;
    print!("{}", report.text_summary());

    let (pins, pinned) = compute_pins(&corpus)?;
    for (k, v) in &pins.constants {
        println!("  pinned {k:<14} {v:.6}");
    }
    println!("pinned suite passes: {}", pinned.passed());
    Ok(())
}
