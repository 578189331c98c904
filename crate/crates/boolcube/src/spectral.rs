//! Fourier expansion by fast Walsh–Hadamard transform.

use crate::bfcore::BooleanFunction;
use crate::error::{CubeError, Result};
use crate::rational::{dyadic, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::io::Write;

/// `f̂(S) = num[S] / 2^n`, indexed by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSpectrum {
    n: usize,
    num: Vec<i64>,
}

impl FourierSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Numerators over the common denominator `2^n`.
    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn coeff(&self, mask: usize) -> Rational {
        dyadic(self.num[mask] as i128, self.n as u32)
    }

    pub fn coeff_f64(&self, mask: usize) -> f64 {
        self.num[mask] as f64 / (1u64 << self.n) as f64
    }

    /// Sum of squared numerators per level (over the denominator `4^n`).
    fn level_sums(&self) -> Vec<i128> {
        let mut out = vec![0i128; self.n + 1];
        for (s, &c) in self.num.iter().enumerate() {
            out[s.count_ones() as usize] += (c as i128) * (c as i128);
        }
        out
    }

    pub fn level_weights(&self) -> LevelWeights {
        let w = self
            .level_sums()
            .into_iter()
            .map(|s| Rational::new(BigInt::from(s), BigInt::one() << (2 * self.n)))
            .collect();
        LevelWeights { w }
    }

    /// `W^k = Σ_{|S|=k} f̂(S)²`.
    pub fn level_weight(&self, k: usize) -> Result<Rational> {
        if k > self.n {
            return Err(CubeError::Params(format!("level {k} exceeds n = {}", self.n)));
        }
        Ok(self.level_weights().w[k].clone())
    }

    /// `W^{≤k}`, excluding level 0 unless `include_zero`.
    pub fn cumulative(&self, k: usize, include_zero: bool) -> Result<Rational> {
        if k > self.n {
            return Err(CubeError::Params(format!("level {k} exceeds n = {}", self.n)));
        }
        let lw = self.level_weights();
        let start = if include_zero { 0 } else { 1 };
        Ok((start..=k).fold(Rational::zero(), |a, j| a + &lw.w[j]))
    }

    /// `Σ_S f̂(S)²`.
    pub fn total_weight(&self) -> Rational {
        self.level_weights().w.iter().fold(Rational::zero(), |a, b| a + b)
    }

    /// `S_ρ(f) = Σ_{S≠∅} ρ^{|S|} f̂(S)²`.
    pub fn noise_stability(&self, rho: f64) -> Result<f64> {
        check_rho(rho)?;
        let den = 4f64.powi(self.n as i32);
        let sums = self.level_sums();
        let mut acc = 0.0;
        for (k, s) in sums.iter().enumerate().skip(1) {
            acc += rho.powi(k as i32) * (*s as f64 / den);
        }
        Ok(acc)
    }

    /// Exact `S_ρ(f)` for rational `ρ ∈ [0, 1]`.
    pub fn noise_stability_exact(&self, rho: &Rational) -> Result<Rational> {
        if *rho < Rational::zero() || *rho > Rational::one() {
            return Err(CubeError::Params("rho must lie in [0,1]".into()));
        }
        let lw = self.level_weights();
        let mut acc = Rational::zero();
        let mut p = Rational::one();
        for w in lw.w.iter().skip(1) {
            p *= rho;
            acc += &p * w;
        }
        Ok(acc)
    }

    /// `T_ρ f(x) = Σ_S ρ^{|S|} f̂(S) x^S` at point index `m`.
    pub fn noise_operator_at(&self, rho: f64, m: usize) -> Result<f64> {
        check_rho(rho)?;
        if m >= self.num.len() {
            return Err(CubeError::Params(format!("point index {m} out of range")));
        }
        let den = (1u64 << self.n) as f64;
        let pows: Vec<f64> = (0..=self.n).map(|k| rho.powi(k as i32)).collect();
        let mut acc = 0.0;
        for (s, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            // x^S = (-1)^{|S| - |S ∩ m|}
            let neg = (s.count_ones() - (s & m).count_ones()) % 2 == 1;
            let term = pows[s.count_ones() as usize] * c as f64 / den;
            acc += if neg { -term } else { term };
        }
        Ok(acc)
    }

    /// Rows `mask,numerator,denominator_log2` for every nonzero coefficient,
    /// with each fraction reduced.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "mask,numerator,denominator_log2")?;
        for (s, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let tz = (c.trailing_zeros() as usize).min(self.n);
            writeln!(out, "{s},{},{}", c >> tz, self.n - tz)?;
        }
        Ok(())
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(CubeError::Params(format!("rho {rho} outside [0,1]")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelWeights {
    pub w: Vec<Rational>,
}

impl LevelWeights {
    pub fn prefix(&self, k: usize, include_zero: bool) -> Rational {
        let start = if include_zero { 0 } else { 1 };
        (start..=k.min(self.w.len() - 1)).fold(Rational::zero(), |a, j| a + &self.w[j])
    }
}

/// In-place butterfly, `O(n·2^n)`.
pub fn fwht_spectrum(f: &BooleanFunction) -> FourierSpectrum {
    let n = f.n();
    let mut v: Vec<i64> = (0..f.size()).map(|m| f.get(m) as i64).collect();
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                // lo: x_i = -1, hi: x_i = +1
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = y - x;
            }
        }
        h *= 2;
    }
    FourierSpectrum { n, num: v }
}

/// Direct `O(4^n)` evaluation of `E[f(x) x^S]`, for cross-checking.
pub fn naive_spectrum(f: &BooleanFunction) -> FourierSpectrum {
    let n = f.n();
    let size = f.size();
    let ones: Vec<usize> = (0..size).filter(|&m| f.get(m)).collect();
    let num = (0..size)
        .map(|s| {
            ones.iter()
                .map(|&m| if (s.count_ones() - (s & m).count_ones()) % 2 == 0 { 1 } else { -1 })
                .sum()
        })
        .collect();
    FourierSpectrum { n, num }
}

/// `E[fg] - E[f]E[g]`.
pub fn covariance(f: &BooleanFunction, g: &BooleanFunction) -> Result<Rational> {
    let both = f.and_count(g)? as i128;
    let n = f.n();
    let size = 1i128 << n;
    let num = size * both - (f.count_ones() as i128) * (g.count_ones() as i128);
    Ok(dyadic(num, 2 * n as u32))
}
