//! Seeded corpora of function specs.

use crate::bfcore::{BooleanFunction, FunctionSpec};
use crate::error::{CubeError, Result};
use crate::halfspace::Halfspace;
use crate::rational::{format_rational, int, parse_rational, prob, rat, to_f64, Rational};
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

fn ser_rat<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn de_rat<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

/// Target interval for `μ`, closed at both ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    #[serde(serialize_with = "ser_rat", deserialize_with = "de_rat")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rat", deserialize_with = "de_rat")]
    pub hi: Rational,
}

impl Band {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Band { lo, hi }
    }

    /// `[2^{-a}, 2^{-b}]`.
    pub fn dyadic(a: u32, b: u32) -> Self {
        Band { lo: rat(1, 1 << a), hi: rat(1, 1 << b) }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CorpusKind {
    BuiltinAll,
    /// Weights `p/q` with `p ∈ [1, 2^bits]`, `q ∈ [1, max_den]`; `count` instances per band.
    RandomHalfspace { n_min: usize, n_max: usize, bits: u32, max_den: u32, bands: Vec<Band>, count: usize },
    RandomFunction { n: usize, count: usize },
    MonotoneRandom { n: usize, count: usize },
    /// Members given explicitly.
    Listed,
}

impl CorpusKind {
    pub fn name(&self) -> &'static str {
        match self {
            CorpusKind::BuiltinAll => "builtin-all",
            CorpusKind::RandomHalfspace { .. } => "random-halfspace",
            CorpusKind::RandomFunction { .. } => "random-function",
            CorpusKind::MonotoneRandom { .. } => "monotone-random",
            CorpusKind::Listed => "listed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub seed: u64,
    pub params: CorpusKind,
    pub members: Vec<String>,
}

impl Corpus {
    pub fn listed(name: &str, members: Vec<String>) -> Result<Self> {
        let c = Corpus { name: name.into(), seed: 0, params: CorpusKind::Listed, members };
        c.specs()?;
        Ok(c)
    }

    /// SHA-256 of the member texts, one per line.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for m in &self.members {
            h.update(m.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn specs(&self) -> Result<Vec<FunctionSpec>> {
        self.members.iter().map(|m| FunctionSpec::parse(m)).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Corpus = serde_json::from_str(text)?;
        c.specs()?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// `builtin`, `standard`, `small-rational`, or a corpus file path.
    pub fn resolve(name: &str) -> Result<Self> {
        match preset(name) {
            Some(c) => c,
            None => Self::load(std::path::Path::new(name)),
        }
    }
}

/// The fixed list of named builtins.
pub fn builtin_specs() -> Vec<String> {
    let mut out: Vec<String> = [3, 5, 7, 9, 15].iter().map(|n| format!("maj:{n}")).collect();
    out.extend(["dict:1".to_string(), "dict:4".to_string()]);
    out.extend((1..=6).map(|k| format!("subcube:{k},6")));
    out.extend([
        "subcube:3,5",
        "ball:9,3",
        "ball:12,4",
        "tribes:2,2",
        "tribes:3,3",
        "tribes:4,4",
        "paper5",
        "talagrand:16:2024",
        "ltf:5,5,5,5,4,4,4,4,4;1",
        "ltf:3,2,2,1,1;1",
        "ltf:1,-2,3;0",
        "ltf:1/2,1/3,1/4,1/5,1/6,1/7;1/5",
    ]
    .map(String::from));
    out
}

/// Named corpora used by the suites and the acceptance targets.
pub fn preset(name: &str) -> Option<Result<Corpus>> {
    Some(match name {
        "builtin" | "builtin-all" => corpus_gen(CorpusKind::BuiltinAll, 0),
        "standard" => standard_corpus(),
        "small-rational" => small_rational_corpus(),
        _ => return None,
    })
}

/// `n ∈ 12..=20`, 6-bit weights, `ε` bands `[2^-12, 2^-8]` and `[2^-8, 2^-4]`, 50 per band, seed 2024.
pub fn standard_corpus() -> Result<Corpus> {
    let kind = CorpusKind::RandomHalfspace {
        n_min: 12,
        n_max: 20,
        bits: 6,
        max_den: 1,
        bands: vec![Band::dyadic(12, 8), Band::dyadic(8, 4)],
        count: 50,
    };
    let mut c = corpus_gen(kind, 2024)?;
    c.name = "standard".into();
    Ok(c)
}

/// Fifty rational-weight halfspaces with `n ≤ 16`, for the tail-shape scans.
pub fn small_rational_corpus() -> Result<Corpus> {
    let kind = CorpusKind::RandomHalfspace {
        n_min: 6,
        n_max: 16,
        bits: 5,
        max_den: 4,
        bands: vec![Band::new(rat(1, 1024), rat(1, 2))],
        count: 50,
    };
    let mut c = corpus_gen(kind, 7)?;
    c.name = "small-rational".into();
    Ok(c)
}

pub fn corpus_gen(kind: CorpusKind, seed: u64) -> Result<Corpus> {
    let members = match &kind {
        CorpusKind::BuiltinAll => builtin_specs(),
        CorpusKind::RandomHalfspace { n_min, n_max, bits, max_den, bands, count } => {
            random_halfspaces(*n_min, *n_max, *bits, *max_den, bands, *count, seed)?
        }
        CorpusKind::RandomFunction { n, count } => random_functions(*n, *count, seed)?,
        CorpusKind::MonotoneRandom { n, count } => monotone_functions(*n, *count, seed)?,
        CorpusKind::Listed => return Err(CubeError::Params("a listed corpus has no generator".into())),
    };
    Ok(Corpus { name: kind.name().into(), seed, params: kind, members })
}

/// Smallest support value `v` with `F(v) ≤ target`, kept if `F(v) ≥ lo`.
fn threshold_in_band(h: &Halfspace, band: &Band, target: f64) -> Result<Option<Rational>> {
    let dist = h.tail()?;
    let values: Vec<i64> = dist.pairs()?.into_iter().map(|(v, _)| v).collect();
    let f = |v: i64| prob(dist.count_gt(v), dist.n());
    let (mut lo, mut hi) = (0usize, values.len() - 1);
    let below = |v: i64| f(v) <= band.hi && dist.count_gt(v) as f64 / dist.cube_size() as f64 <= target;
    // F(values[last]) = 0, so the search is well posed
    while lo < hi {
        let mid = (lo + hi) / 2;
        if below(values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let v = values[lo];
    Ok(if f(v) >= band.lo { Some(dist.unscale(v)) } else { None })
}

fn random_halfspaces(n_min: usize, n_max: usize, bits: u32, max_den: u32, bands: &[Band], count: usize, seed: u64) -> Result<Vec<String>> {
    if n_min == 0 || n_min > n_max || bits == 0 || bits > 20 || max_den == 0 {
        return Err(CubeError::Params("need 1 ≤ n_min ≤ n_max, 1 ≤ bits ≤ 20, max_den ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count * bands.len());
    for band in bands {
        if !(band.lo.is_positive() && band.lo <= band.hi && band.hi <= Rational::one()) {
            return Err(CubeError::Params(format!("bad band [{}, {}]", format_rational(&band.lo), format_rational(&band.hi))));
        }
        if band.hi < prob(1, n_max) {
            return Err(CubeError::Params(format!("empty band: μ ≤ {} needs n > {n_max}", format_rational(&band.hi))));
        }
        let (ln_lo, ln_hi) = (to_f64(&band.lo).ln(), to_f64(&band.hi).ln());
        let (mut made, mut tries) = (0, 0usize);
        while made < count {
            tries += 1;
            if tries > 1000 * count.max(1) {
                return Err(CubeError::Params(format!(
                    "empty band: no threshold lands μ in [{}, {}]",
                    format_rational(&band.lo),
                    format_rational(&band.hi)
                )));
            }
            let n = rng.gen_range(n_min..=n_max);
            let mut weights: Vec<Rational> = (0..n)
                .map(|_| {
                    let p = rng.gen_range(1..=1i64 << bits);
                    let q = rng.gen_range(1..=max_den as i64);
                    rat(p, q)
                })
                .collect();
            weights.sort_by(|a, b| b.cmp(a));
            let h = Halfspace::new(&weights, int(0))?;
            // log-uniform target inside the band
            let target = rng.gen_range(ln_lo..=ln_hi).exp();
            if let Some(t) = threshold_in_band(&h, band, target)? {
                out.push(FunctionSpec::Halfspace { weights, threshold: t }.to_text());
                made += 1;
            }
        }
    }
    Ok(out)
}

fn random_functions(n: usize, count: usize, seed: u64) -> Result<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let bits: Vec<bool> = (0..1usize << n.min(30)).map(|_| rng.gen()).collect();
            Ok(BooleanFunction::from_truth_table(&bits, n)?.to_text())
        })
        .collect()
}

/// Upsets generated by a few random minimal points of middling weight.
fn monotone_functions(n: usize, count: usize, seed: u64) -> Result<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=2 * n);
            let lo = (n / 3).max(1);
            let hi = (2 * n / 3).max(lo);
            let mins: Vec<usize> = (0..k)
                .map(|_| {
                    let size = rng.gen_range(lo..=hi);
                    rand::seq::index::sample(&mut rng, n, size).iter().fold(0usize, |m, i| m | 1 << i)
                })
                .collect();
            Ok(BooleanFunction::from_fn(n, |x| mins.iter().any(|&p| x & p == p))?.to_text())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_halfspace_example() {
        let kind = CorpusKind::RandomHalfspace { n_min: 14, n_max: 14, bits: 6, max_den: 1, bands: vec![Band::dyadic(8, 4)], count: 50 };
        let c = corpus_gen(kind.clone(), 7).unwrap();
        assert_eq!(c.len(), 50);
        for spec in c.specs().unwrap() {
            let h = spec.halfspace().unwrap().unwrap();
            assert_eq!(h.arity(), 14);
            assert!(Band::dyadic(8, 4).contains(&h.mean().unwrap()));
            assert!(h.weights().windows(2).all(|w| w[0] >= w[1]));
        }
        assert_eq!(corpus_gen(kind, 7).unwrap(), c);
    }

    #[test]
    fn empty_band_is_an_error() {
        let kind = CorpusKind::RandomHalfspace { n_min: 4, n_max: 6, bits: 3, max_den: 1, bands: vec![Band::dyadic(12, 10)], count: 1 };
        assert!(corpus_gen(kind, 1).is_err());
    }

    #[test]
    fn builtins_parse_and_build() {
        let c = corpus_gen(CorpusKind::BuiltinAll, 0).unwrap();
        for s in c.specs().unwrap() {
            s.build().unwrap();
        }
        assert!(c.members.contains(&"paper5".to_string()));
    }

    #[test]
    fn json_roundtrip_and_hash() {
        let c = corpus_gen(CorpusKind::MonotoneRandom { n: 6, count: 5 }, 3).unwrap();
        let back = Corpus::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        for s in c.specs().unwrap() {
            assert!(s.build().unwrap().is_monotone());
        }
        let other = corpus_gen(CorpusKind::MonotoneRandom { n: 6, count: 5 }, 4).unwrap();
        assert_ne!(other.hash(), c.hash());
    }

    #[test]
    fn standard_corpus_shape() {
        let c = standard_corpus().unwrap();
        assert_eq!(c.len(), 100);
        let specs = c.specs().unwrap();
        for (i, s) in specs.iter().enumerate() {
            let h = s.halfspace().unwrap().unwrap();
            assert!((12..=20).contains(&h.arity()));
            let band = if i < 50 { Band::dyadic(12, 8) } else { Band::dyadic(8, 4) };
            assert!(band.contains(&h.mean().unwrap()));
        }
    }
}
