use boolcube::chernoff::{local_chernoff_statistic, Partition, Variant};
use boolcube::correlate::{best_halfspace_over_form, biased_correlator, first_level_form, noise_resistance_class, unbiased_correlator, DEFAULT_RHO_CONSTANT};
use boolcube::harness::checks::DEFAULT_RESISTANCE_C0;
use boolcube::harness::corpus::{corpus_gen, Band, Corpus, CorpusKind};
use boolcube::harness::{compute_pins, run_suite, PinnedConstants, SUITES};
use boolcube::influence::{boundary_measures, influences};
use boolcube::rational::{format_rational, parse_rational, to_f64};
use boolcube::{fwht_spectrum, CubeError, FunctionSpec, Result};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact Fourier, influence and tail analysis on the Boolean cube.
#[derive(Parser)]
#[command(name = "boolcube", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mean, level weights, influences and boundaries of a function.
    Analyze { spec: FunctionSpec },
    /// Fourier coefficients, as a level table or a CSV file.
    Spectrum {
        spec: FunctionSpec,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Decay thresholds and local Chernoff statistics of a halfspace.
    Chernoff {
        spec: FunctionSpec,
        /// Threshold; defaults to the spec's own.
        #[arg(long)]
        t: Option<String>,
        /// Constant for the `δ_c` query.
        #[arg(long, default_value = "1/2")]
        c: String,
    },
    /// Best first-level cut and halfspace correlators.
    Correlate {
        spec: FunctionSpec,
        /// Search every sign pattern (n ≤ 16).
        #[arg(long)]
        full_scan: bool,
    },
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
    /// Run a check suite and write a JSON report. Exits nonzero on failures.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// `builtin`, `standard`, `small-rational` or a corpus file.
        #[arg(long, default_value = "builtin")]
        corpus: String,
        /// Recompute pinned constants from this corpus and write them to `--pins`.
        #[arg(long)]
        pin: bool,
        #[arg(long)]
        pins: Option<PathBuf>,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Generate a seeded corpus file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Arity (`n_max` for halfspaces).
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long, default_value_t = 6)]
        bits: u32,
        #[arg(long, default_value_t = 1)]
        max_den: u32,
        /// Mean band `lo,hi`; repeatable.
        #[arg(long)]
        band: Vec<String>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    BuiltinAll,
    RandomHalfspace,
    RandomFunction,
    MonotoneRandom,
}

fn analyze(spec: &FunctionSpec) -> Result<()> {
    let f = spec.build()?;
    let mu = f.mean();
    println!("function  {spec}");
    println!("n         {}", f.n());
    println!("mean      {} ({:.6})", format_rational(&mu), to_f64(&mu));
    println!("monotone  {}", f.is_monotone());
    let lw = fwht_spectrum(&f).level_weights();
    for (k, w) in lw.w.iter().enumerate().filter(|(_, w)| !num_traits::Zero::is_zero(*w)) {
        println!("W{k:<8} {} ({:.6})", format_rational(w), to_f64(w));
    }
    let inf = influences(&f);
    let (imax_at, imax) = inf.max();
    println!("I_total   {}", format_rational(&inf.total()));
    println!("I_max     {} at x{imax_at}", format_rational(&imax));
    let b = boundary_measures(&f);
    println!("vb0       {}", format_rational(&b.vb0));
    println!("vb1       {}", format_rational(&b.vb1));
    if let Some(h) = spec.halfspace() {
        let h = h?;
        let t = h.threshold();
        if h.tail()?.count_above(t) > 0 {
            let d = h.decay_thresholds(t, None)?;
            println!("beta      {}", format_rational(&d.beta));
            println!("gamma     {}", format_rational(&d.gamma));
            println!("delta     {}", format_rational(&d.delta));
        }
    }
    Ok(())
}

fn spectrum(spec: &FunctionSpec, csv: Option<PathBuf>) -> Result<()> {
    let s = fwht_spectrum(&spec.build()?);
    match csv {
        Some(p) => {
            s.write_csv(std::io::BufWriter::new(std::fs::File::create(&p)?))?;
            println!("wrote {}", p.display());
        }
        None => {
            for (k, w) in s.level_weights().w.iter().enumerate() {
                println!("{k:>3} {:>24} {:.10}", format_rational(w), to_f64(w));
            }
        }
    }
    Ok(())
}

fn chernoff(spec: &FunctionSpec, t: Option<String>, c: &str) -> Result<()> {
    let h = spec.halfspace().ok_or_else(|| CubeError::Params(format!("{spec} is not a halfspace")))??;
    let t = match t {
        Some(t) => parse_rational(&t)?,
        None => h.threshold().clone(),
    };
    let c = parse_rational(c)?;
    let dist = h.tail()?;
    println!("halfspace {}", h.to_text());
    println!("backend   {:?}", dist.kind());
    println!("F(t)      {}", format_rational(&dist.tail(&t)));
    println!("delta_c   {}", format_rational(&h.delta_query(&t, &c)?));
    let d = h.decay_thresholds(&t, None)?;
    println!("beta      {}", format_rational(&d.beta));
    println!("gamma     {}", format_rational(&d.gamma));
    println!("delta     {}", format_rational(&d.delta));
    let variants = [
        ("strong", Variant::Strong),
        ("partitioned", Variant::Partitioned(Partition::by_cut(&h, &d.beta))),
        ("weak", Variant::Weak(c.clone())),
    ];
    for (name, v) in variants {
        match local_chernoff_statistic(&h, &t, &v) {
            Ok(st) => println!("{name:<12}{:.6}{}", st.value, if st.large_b { " (large B)" } else { "" }),
            Err(e) => println!("{name:<12}n/a ({e})"),
        }
    }
    Ok(())
}

fn correlate(spec: &FunctionSpec, full_scan: bool) -> Result<()> {
    let f = spec.build()?;
    let l = first_level_form(&f);
    let best = best_halfspace_over_form(&f, &l)?;
    println!("W1          {}", format_rational(&l.norm_sq));
    println!("best cut    t*={} cov={} ratio={:.6}", format_rational(&best.threshold), format_rational(&best.covariance), best.ratio);
    if let Some(hs) = &best.halfspace {
        println!("            {hs}");
    }
    match unbiased_correlator(&f, full_scan) {
        Ok(u) => println!(
            "unbiased    cov={} (unflipped {}) flipped={:?} over {} candidates",
            format_rational(&u.covariance),
            format_rational(&u.base_covariance),
            u.flipped,
            u.candidates
        ),
        Err(e) => println!("unbiased    n/a ({e})"),
    }
    match biased_correlator(&f, None) {
        Ok(b) => println!(
            "biased      alpha={:.4} s={:.4} E[g]={} E[fg]={} hypothesis={}",
            b.alpha,
            b.s,
            format_rational(&b.mean_g),
            format_rational(&b.mean_fg),
            b.hypothesis_met
        ),
        Err(e) => println!("biased      n/a ({e})"),
    }
    let nc = noise_resistance_class(&f, DEFAULT_RESISTANCE_C0, DEFAULT_RHO_CONSTANT)?;
    println!("resistance  fourier={} ({:.4}) stability={} ({:.4})", nc.fourier_resistant, nc.fourier_ratio, nc.stability_resistant, nc.stability_ratio);
    Ok(())
}

fn parse_band(s: &str) -> Result<Band> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| CubeError::Parse(format!("expected lo,hi: {s:?}")))?;
    Ok(Band::new(parse_rational(lo)?, parse_rational(hi)?))
}

fn corpus(cmd: CorpusCmd) -> Result<()> {
    let CorpusCmd::Gen { kind, seed, n, n_min, bits, max_den, band, count, out } = cmd;
    let kind = match kind {
        Kind::BuiltinAll => CorpusKind::BuiltinAll,
        Kind::RandomHalfspace => {
            let bands = if band.is_empty() { vec![Band::dyadic(8, 4)] } else { band.iter().map(|b| parse_band(b)).collect::<Result<_>>()? };
            CorpusKind::RandomHalfspace { n_min: n_min.unwrap_or(n), n_max: n, bits, max_den, bands, count }
        }
        Kind::RandomFunction => CorpusKind::RandomFunction { n, count },
        Kind::MonotoneRandom => CorpusKind::MonotoneRandom { n, count },
    };
    let c = corpus_gen(kind, seed)?;
    let text = c.to_json()?;
    match out {
        Some(p) => {
            std::fs::write(&p, text)?;
            eprintln!("wrote {} members to {} (hash {})", c.len(), p.display(), c.hash());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn verify(suite: &str, corpus: &str, pin: bool, pins: Option<PathBuf>, out: PathBuf, csv: Option<PathBuf>) -> Result<bool> {
    if !SUITES.contains(&suite) {
        return Err(CubeError::UnknownSuite(suite.into()));
    }
    let c = Corpus::resolve(corpus)?;
    let report = if pin {
        let path = pins.ok_or_else(|| CubeError::Params("--pin needs --pins <file>".into()))?;
        let (p, report) = compute_pins(&c)?;
        p.save(&path)?;
        eprintln!("pinned {} constants to {}", p.constants.len(), path.display());
        if suite == "pinned" {
            report
        } else {
            run_suite(suite, &c, Some(&p))?
        }
    } else {
        let p = pins.map(|p| PinnedConstants::load(&p)).transpose()?;
        run_suite(suite, &c, p.as_ref())?
    };
    std::fs::write(&out, report.to_json()?)?;
    if let Some(p) = csv {
        report.write_csv(std::io::BufWriter::new(std::fs::File::create(p)?))?;
    }
    print!("{}", report.text_summary());
    for r in report.failures().take(20) {
        println!("FAIL {} {} lhs={} rhs={} {}", r.check_id, r.instance, r.lhs.text(), r.rhs.as_ref().map(|x| x.text()).unwrap_or_default(), r.notes);
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Analyze { spec } => analyze(&spec)?,
        Cmd::Spectrum { spec, csv } => spectrum(&spec, csv)?,
        Cmd::Chernoff { spec, t, c } => chernoff(&spec, t, &c)?,
        Cmd::Correlate { spec, full_scan } => correlate(&spec, full_scan)?,
        Cmd::Corpus { cmd } => corpus(cmd)?,
        Cmd::Verify { suite, corpus, pin, pins, out, csv } => return verify(&suite, &corpus, pin, pins, out, csv),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
