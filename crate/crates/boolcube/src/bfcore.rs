//! Bit-packed truth tables over `{-1,1}^n`.
//!
//! Bit `m` of the table holds `f(x)` where `x_i = +1` iff bit `i` of `m` is set.

use crate::error::{CubeError, Result};
use crate::rational::{parse_rational, prob, Rational};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_MAX_N: usize = 24;

/// Arity cap for truth tables; `CUBE_MAX_N` overrides the default of 24.
pub fn max_arity() -> usize {
    std::env::var("CUBE_MAX_N")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|v| (1..=30).contains(v))
        .unwrap_or(DEFAULT_MAX_N)
}

pub(crate) fn check_arity(n: usize) -> Result<()> {
    let cap = max_arity();
    if n == 0 || n > cap {
        return Err(CubeError::Arity(n, cap));
    }
    Ok(())
}

/// Word masks selecting positions whose bit `i` is zero, for `i < 6`.
pub(crate) const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
    ones: u64,
}

impl BooleanFunction {
    fn words_for(n: usize) -> usize {
        if n <= 6 {
            1
        } else {
            1 << (n - 6)
        }
    }

    fn valid_mask(n: usize) -> u64 {
        if n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << n)) - 1
        }
    }

    fn from_words(n: usize, mut words: Vec<u64>) -> Self {
        if n < 6 {
            words[0] &= Self::valid_mask(n);
        }
        let ones = words.iter().map(|w| w.count_ones() as u64).sum();
        BooleanFunction { n, words, ones }
    }

    /// Builds from an explicit bit sequence of length `2^n`.
    pub fn from_truth_table(bits: &[bool], n: usize) -> Result<Self> {
        check_arity(n)?;
        if bits.len() != 1usize << n {
            return Err(CubeError::Length { expected: 1 << n, got: bits.len() });
        }
        Ok(Self::from_fn_unchecked(n, |m| bits[m]))
    }

    /// Builds by evaluating `pred` at every point index.
    pub fn from_fn(n: usize, pred: impl Fn(usize) -> bool) -> Result<Self> {
        check_arity(n)?;
        Ok(Self::from_fn_unchecked(n, pred))
    }

    pub(crate) fn from_fn_unchecked(n: usize, pred: impl Fn(usize) -> bool) -> Self {
        let nw = Self::words_for(n);
        let size = 1usize << n;
        let mut words = vec![0u64; nw];
        for (wi, w) in words.iter_mut().enumerate() {
            let base = wi * 64;
            for b in 0..64.min(size - base.min(size)) {
                if pred(base + b) {
                    *w |= 1 << b;
                }
            }
        }
        Self::from_words(n, words)
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, m: usize) -> bool {
        (self.words[m >> 6] >> (m & 63)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    /// Exact `μ(f) = Pr[f = 1]`.
    pub fn mean(&self) -> Rational {
        prob(self.ones, self.n)
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.size()).map(|m| self.get(m)).collect()
    }

    /// `g(x) = 1 - f(-x)`.
    pub fn dual(&self) -> Self {
        let full = self.size() - 1;
        Self::from_fn_unchecked(self.n, |m| !self.get(m ^ full))
    }

    pub fn not(&self) -> Self {
        let words = self.words.iter().map(|w| !w).collect();
        Self::from_words(self.n, words)
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        if self.n != other.n {
            return Err(CubeError::Params(format!("arity mismatch {} vs {}", self.n, other.n)));
        }
        let words = self.words.iter().zip(&other.words).map(|(a, b)| op(*a, *b)).collect();
        Ok(Self::from_words(self.n, words))
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a ^ b)
    }

    /// Number of points where both functions are 1.
    pub fn and_count(&self, other: &Self) -> Result<u64> {
        if self.n != other.n {
            return Err(CubeError::Params(format!("arity mismatch {} vs {}", self.n, other.n)));
        }
        Ok(self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as u64).sum())
    }

    /// Word `wi` of the table with coordinate `i` flipped at every point.
    pub(crate) fn partner_word(&self, wi: usize, i: usize) -> u64 {
        if i < 6 {
            let s = 1u32 << i;
            let w = self.words[wi];
            let m = LOW_MASKS[i];
            ((w >> s) & m) | ((w & m) << s)
        } else {
            self.words[wi ^ (1 << (i - 6))]
        }
    }

    /// Calls `visit(lo, hi)` for every word pair along coordinate `i`, where
    /// `lo` holds values at points with `x_i = -1` and `hi` the partners with
    /// `x_i = +1`, aligned bitwise.
    pub(crate) fn for_each_edge_word(&self, i: usize, mut visit: impl FnMut(u64, u64)) {
        if i < 6 {
            let s = 1u32 << i;
            let m = LOW_MASKS[i];
            for &w in &self.words {
                visit(w & m, (w >> s) & m);
            }
        } else {
            let stride = 1usize << (i - 6);
            let mut b = 0;
            while b < self.words.len() {
                for j in 0..stride {
                    visit(self.words[b + j], self.words[b + j + stride]);
                }
                b += 2 * stride;
            }
        }
    }

    /// True iff `f(x) ≤ f(y)` whenever `x ≤ y` coordinatewise.
    pub fn is_monotone(&self) -> bool {
        (0..self.n).all(|i| {
            let mut ok = true;
            self.for_each_edge_word(i, |lo, hi| ok &= lo & !hi == 0);
            ok
        })
    }

    /// `tt:<n>:<hex>`; hex digit `j` holds bits `4j..4j+3`, least significant first.
    pub fn to_hex(&self) -> String {
        let digits = self.size().div_ceil(4);
        (0..digits)
            .map(|j| {
                let mut d = 0u32;
                for b in 0..4 {
                    let m = 4 * j + b;
                    if m < self.size() && self.get(m) {
                        d |= 1 << b;
                    }
                }
                std::char::from_digit(d, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        check_arity(n)?;
        let size = 1usize << n;
        let digits = size.div_ceil(4);
        if hex.len() != digits {
            return Err(CubeError::Length { expected: digits, got: hex.len() });
        }
        let vals: Vec<u32> = hex
            .chars()
            .map(|c| c.to_digit(16).ok_or_else(|| CubeError::Parse(format!("bad hex digit {c:?}"))))
            .collect::<Result<_>>()?;
        if size < 4 && vals[0] >> size != 0 {
            return Err(CubeError::Parse("bits set beyond table length".into()));
        }
        Ok(Self::from_fn_unchecked(n, |m| (vals[m / 4] >> (m % 4)) & 1 == 1))
    }

    pub fn to_text(&self) -> String {
        format!("tt:{}:{}", self.n, self.to_hex())
    }
}

// ---------------------------------------------------------------- builtins

fn popcount_low(m: usize, k: usize) -> i64 {
    (m & ((1usize << k) - 1)).count_ones() as i64
}

/// `1{Σ x_i > 0}` for odd `n`.
pub fn majority(n: usize) -> Result<BooleanFunction> {
    if n % 2 == 0 {
        return Err(CubeError::Params(format!("majority needs odd n, got {n}")));
    }
    BooleanFunction::from_fn(n, |m| 2 * (m.count_ones() as usize) > n)
}

/// `1{x_1 > 0}` on `n` variables.
pub fn dictator(n: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, |m| m & 1 == 1)
}

/// `1{Σ_{i≤k} x_i > k - 1/2}`: the subcube `x_1 = … = x_k = 1`.
pub fn subcube(k: usize, n: usize) -> Result<BooleanFunction> {
    if k == 0 || k > n {
        return Err(CubeError::Params(format!("subcube needs 1 ≤ k ≤ n, got k={k}, n={n}")));
    }
    BooleanFunction::from_fn(n, |m| popcount_low(m, k) == k as i64)
}

/// `1{Σ x_i > t}`.
pub fn hamming_ball(n: usize, t: &Rational) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, |m| {
        let s = 2 * m.count_ones() as i64 - n as i64;
        Rational::from_integer(s.into()) > *t
    })
}

/// OR of `a` disjoint ANDs, each over `b` consecutive variables.
pub fn tribes(a: usize, b: usize) -> Result<BooleanFunction> {
    if a == 0 || b == 0 || a * b > max_arity() {
        return Err(CubeError::Params(format!("tribes({a},{b}) needs 1 ≤ a·b ≤ {}", max_arity())));
    }
    let tribe = (1usize << b) - 1;
    BooleanFunction::from_fn(a * b, |m| (0..a).any(|j| (m >> (j * b)) & tribe == tribe))
}

/// The five-variable function with `f = 1` iff `Σ x_i ∈ {-1, 3, 5}`.
pub fn paper5() -> BooleanFunction {
    BooleanFunction::from_fn_unchecked(5, |m| {
        let s = 2 * m.count_ones() as i64 - 5;
        matches!(s, -1 | 3 | 5)
    })
}

/// Parameters of the OR-with-majority construction: `b = ⌈√n⌉`, `a = ⌈2^b/b⌉`.
pub fn talagrand_params(n: usize) -> (usize, usize) {
    let mut b = (n as f64).sqrt().floor() as usize;
    while b * b < n {
        b += 1;
    }
    let a = (1usize << b).div_ceil(b);
    (a, b)
}

/// The random `b`-subsets drawn for [`talagrand_or`].
pub fn talagrand_subsets(n: usize, seed: u64) -> Vec<Vec<usize>> {
    let (a, b) = talagrand_params(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..a)
        .map(|_| {
            let mut s = rand::seq::index::sample(&mut rng, n, b).into_vec();
            s.sort_unstable();
            s
        })
        .collect()
}

/// `h ∨ Maj_n` where `h` is an OR of `a` random `b`-subset ANDs.
///
/// For even `n` the majority breaks ties by `x_1`, so it stays balanced.
pub fn talagrand_or(n: usize, seed: u64) -> Result<BooleanFunction> {
    check_arity(n)?;
    let (_, b) = talagrand_params(n);
    if b > n {
        return Err(CubeError::Params(format!("talagrand-or needs ⌈√n⌉ ≤ n, got n={n}")));
    }
    let masks: Vec<usize> = talagrand_subsets(n, seed)
        .iter()
        .map(|s| s.iter().fold(0usize, |acc, &i| acc | (1 << i)))
        .collect();
    BooleanFunction::from_fn(n, |m| {
        let s = 2 * m.count_ones() as i64 - n as i64;
        let maj = s > 0 || (s == 0 && m & 1 == 1);
        maj || masks.iter().any(|&mask| m & mask == mask)
    })
}

// ------------------------------------------------------------ text forms

/// A parseable descriptor of a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    TruthTable { n: usize, hex: String },
    Halfspace { weights: Vec<Rational>, threshold: Rational },
    Majority(usize),
    Dictator(usize),
    Subcube(usize, usize),
    HammingBall(usize, Rational),
    Tribes(usize, usize),
    Paper5,
    TalagrandOr(usize, u64),
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| CubeError::Parse(format!("not an integer: {s:?}")))
}

fn two_usizes(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(',').ok_or_else(|| CubeError::Parse(format!("expected a,b: {s:?}")))?;
    Ok((parse_usize(a)?, parse_usize(b)?))
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "paper5" {
            return Ok(FunctionSpec::Paper5);
        }
        let (head, rest) = text
            .split_once(':')
            .ok_or_else(|| CubeError::Parse(format!("unrecognised function spec {text:?}")))?;
        match head {
            "tt" => {
                let (n, hex) = rest.split_once(':').ok_or_else(|| CubeError::Parse("expected tt:<n>:<hex>".into()))?;
                let n = parse_usize(n)?;
                let hex = hex.to_ascii_lowercase();
                BooleanFunction::from_hex(n, &hex)?;
                Ok(FunctionSpec::TruthTable { n, hex })
            }
            "ltf" => {
                let (ws, t) = rest.split_once(';').ok_or_else(|| CubeError::Parse("expected ltf:a1,...;t".into()))?;
                let weights = ws.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
                if weights.is_empty() {
                    return Err(CubeError::Parse("ltf needs weights".into()));
                }
                Ok(FunctionSpec::Halfspace { weights, threshold: parse_rational(t)? })
            }
            "maj" => Ok(FunctionSpec::Majority(parse_usize(rest)?)),
            "dict" => Ok(FunctionSpec::Dictator(parse_usize(rest)?)),
            "subcube" => {
                let (k, n) = two_usizes(rest)?;
                Ok(FunctionSpec::Subcube(k, n))
            }
            "ball" => {
                let (n, t) = rest.split_once(',').ok_or_else(|| CubeError::Parse("expected ball:n,t".into()))?;
                Ok(FunctionSpec::HammingBall(parse_usize(n)?, parse_rational(t)?))
            }
            "tribes" => {
                let (a, b) = two_usizes(rest)?;
                Ok(FunctionSpec::Tribes(a, b))
            }
            "talagrand" => {
                let (n, seed) = rest.split_once(':').ok_or_else(|| CubeError::Parse("expected talagrand:n:seed".into()))?;
                let seed = seed.trim().parse().map_err(|_| CubeError::Parse(format!("bad seed {seed:?}")))?;
                Ok(FunctionSpec::TalagrandOr(parse_usize(n)?, seed))
            }
            _ => Err(CubeError::Parse(format!("unknown function family {head:?}"))),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            FunctionSpec::TruthTable { n, .. } => *n,
            FunctionSpec::Halfspace { weights, .. } => weights.len(),
            FunctionSpec::Majority(n) | FunctionSpec::Dictator(n) => *n,
            FunctionSpec::Subcube(_, n) | FunctionSpec::HammingBall(n, _) => *n,
            FunctionSpec::Tribes(a, b) => a * b,
            FunctionSpec::Paper5 => 5,
            FunctionSpec::TalagrandOr(n, _) => *n,
        }
    }

    /// The truth table (the arity cap applies).
    pub fn build(&self) -> Result<BooleanFunction> {
        match self {
            FunctionSpec::TruthTable { n, hex } => BooleanFunction::from_hex(*n, hex),
            FunctionSpec::Halfspace { .. } => self.halfspace().expect("halfspace spec")?.truth_table(),
            FunctionSpec::Majority(n) => majority(*n),
            FunctionSpec::Dictator(n) => dictator(*n),
            FunctionSpec::Subcube(k, n) => subcube(*k, *n),
            FunctionSpec::HammingBall(n, t) => hamming_ball(*n, t),
            FunctionSpec::Tribes(a, b) => tribes(*a, *b),
            FunctionSpec::Paper5 => Ok(paper5()),
            FunctionSpec::TalagrandOr(n, seed) => talagrand_or(*n, *seed),
        }
    }

    /// The halfspace form, for specs that denote one.
    pub fn halfspace(&self) -> Option<Result<crate::halfspace::Halfspace>> {
        use crate::halfspace::Halfspace;
        use crate::rational::{int, rat};
        let ones = |n: usize| vec![int(1); n];
        Some(match self {
            FunctionSpec::Halfspace { weights, threshold } => Halfspace::from_signed(weights, threshold.clone()),
            FunctionSpec::Majority(n) if n % 2 == 1 => Halfspace::new(&ones(*n), int(0)),
            FunctionSpec::Dictator(n) => {
                let mut w = vec![int(0); *n];
                if let Some(first) = w.first_mut() {
                    *first = int(1);
                }
                Halfspace::new(&w, int(0))
            }
            FunctionSpec::Subcube(k, n) if *k >= 1 && k <= n => {
                let mut w = ones(*k);
                w.resize(*n, int(0));
                Halfspace::new(&w, int(*k as i64) - rat(1, 2))
            }
            FunctionSpec::HammingBall(n, t) => Halfspace::new(&ones(*n), t.clone()),
            _ => return None,
        })
    }

    pub fn to_text(&self) -> String {
        use crate::rational::format_rational as fr;
        match self {
            FunctionSpec::TruthTable { n, hex } => format!("tt:{n}:{hex}"),
            FunctionSpec::Halfspace { weights, threshold } => {
                let ws: Vec<String> = weights.iter().map(fr).collect();
                format!("ltf:{};{}", ws.join(","), fr(threshold))
            }
            FunctionSpec::Majority(n) => format!("maj:{n}"),
            FunctionSpec::Dictator(n) => format!("dict:{n}"),
            FunctionSpec::Subcube(k, n) => format!("subcube:{k},{n}"),
            FunctionSpec::HammingBall(n, t) => format!("ball:{n},{}", fr(t)),
            FunctionSpec::Tribes(a, b) => format!("tribes:{a},{b}"),
            FunctionSpec::Paper5 => "paper5".into(),
            FunctionSpec::TalagrandOr(n, s) => format!("talagrand:{n}:{s}"),
        }
    }
}

impl std::fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for FunctionSpec {
    type Err = CubeError;
    fn from_str(s: &str) -> Result<Self> {
        FunctionSpec::parse(s)
    }
}

/// `μ(f)` as a float.
pub fn mean_f64(f: &BooleanFunction) -> f64 {
    f.count_ones().to_f64().unwrap() / f.size() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn maj3_oracle() -> Vec<bool> {
        (0..8).map(|m: usize| m.count_ones() >= 2).collect()
    }

    #[test]
    fn from_bits_examples() {
        let d = BooleanFunction::from_truth_table(&[false, true], 1).unwrap();
        assert_eq!(d.mean(), rat(1, 2));
        assert_eq!(d, dictator(1).unwrap());
        let z = BooleanFunction::from_truth_table(&[false; 8], 3).unwrap();
        assert_eq!(z.mean(), int(0));
        let m = BooleanFunction::from_truth_table(&maj3_oracle(), 3).unwrap();
        assert_eq!(m.mean(), rat(1, 2));
        assert!(m.is_monotone());
        assert_eq!(m, majority(3).unwrap());
    }

    #[test]
    fn errors() {
        assert!(BooleanFunction::from_truth_table(&[true; 3], 1).is_err());
        assert!(BooleanFunction::from_truth_table(&[], 0).is_err());
        assert!(majority(4).is_err());
        assert!(tribes(5, 5).is_err());
        assert!(subcube(0, 3).is_err());
    }

    #[test]
    fn builtin_examples() {
        assert_eq!(subcube(3, 5).unwrap().mean(), rat(1, 8));
        assert_eq!(paper5().mean(), rat(1, 2));
        assert_eq!(dictator(4).unwrap().mean(), rat(1, 2));
        assert!(!paper5().is_monotone());
        let parity2 = BooleanFunction::from_fn(2, |m| m.count_ones() % 2 == 1).unwrap();
        assert!(!parity2.is_monotone());
        assert_eq!(parity2.to_hex(), "6");
        assert_eq!(majority(3).unwrap().to_hex(), "8e");
        assert_eq!(dictator(1).unwrap().to_hex(), "2");
    }

    #[test]
    fn tribes_mean_matches_formula() {
        // 1 - (1 - 2^-b)^a
        let f = tribes(3, 2).unwrap();
        let expected = int(1) - crate::rational::pow_u(&(int(1) - rat(1, 4)), 3);
        assert_eq!(f.mean(), expected);
    }

    #[test]
    fn dual_examples() {
        let z = BooleanFunction::constant(3, false).unwrap();
        assert_eq!(z.dual(), BooleanFunction::constant(3, true).unwrap());
        let d = dictator(3).unwrap();
        assert_eq!(d.dual(), d);
        let g = subcube(2, 4).unwrap().dual();
        assert_eq!(g.mean(), rat(3, 4));
        let or12 = BooleanFunction::from_fn(4, |m| m & 0b11 != 0).unwrap();
        assert_eq!(g, or12);
    }

    #[test]
    fn hex_roundtrip_all_small() {
        for n in 1..=3 {
            for code in 0..(1u32 << (1 << n)) {
                let f = BooleanFunction::from_fn(n, |m| (code >> m) & 1 == 1).unwrap();
                assert_eq!(BooleanFunction::from_hex(n, &f.to_hex()).unwrap(), f);
            }
        }
    }

    #[test]
    fn spec_text_roundtrip() {
        for s in [
            "maj:5", "dict:4", "subcube:3,5", "paper5", "tribes:4,4", "talagrand:16:42",
            "ltf:1/2,-3,0;1/3", "ball:7,1", "tt:3:8e",
        ] {
            let spec = FunctionSpec::parse(s).unwrap();
            assert_eq!(spec.to_text(), s);
            assert_eq!(FunctionSpec::parse(&spec.to_text()).unwrap(), spec);
        }
        assert!(FunctionSpec::parse("nonsense").is_err());
        assert!(FunctionSpec::parse("tt:3:8").is_err());
    }

    #[test]
    fn talagrand_balanced_majority_for_even_n() {
        let f = talagrand_or(4, 1).unwrap();
        assert!(f.is_monotone());
        assert!(f.mean() >= rat(1, 2));
        assert_eq!(talagrand_params(16), (4, 4));
        assert_eq!(talagrand_params(25), (7, 5));
        assert_eq!(talagrand_or(16, 42).unwrap(), talagrand_or(16, 42).unwrap());
    }

    #[test]
    fn monotone_scan_across_words() {
        let f = majority(9).unwrap();
        assert!(f.is_monotone());
        let g = f.not();
        assert!(!g.is_monotone());
        assert_eq!(g.mean(), int(1) - f.mean());
    }
}
