//! Exact rational helpers shared by every module.

use crate::error::{CubeError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `num / 2^log2_den`, reduced.
pub fn dyadic(num: i128, log2_den: u32) -> Rational {
    Rational::new(BigInt::from(num), BigInt::one() << log2_den)
}

/// `count / 2^n` for probabilities over the cube.
pub fn prob(count: u64, n: usize) -> Rational {
    Rational::new(BigInt::from(count), BigInt::one() << n)
}

/// Accepts `p/q`, integers and finite decimals such as `0.99` or `-1.5`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || CubeError::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let ip_val: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { ip_abs.parse().map_err(|_| bad())? };
        let fp_val: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Rational::new(ip_val * &den + fp_val, den);
        return Ok(if neg { -mag } else { mag });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: fall back to scaled division
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn floor_big(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_big(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Floor clamped into `[lo, hi]`.
pub fn floor_clamped(r: &Rational, lo: i64, hi: i64) -> i64 {
    let f = floor_big(r);
    if f < BigInt::from(lo) {
        lo
    } else if f > BigInt::from(hi) {
        hi
    } else {
        f.to_i64().expect("clamped")
    }
}

pub fn ceil_clamped(r: &Rational, lo: i64, hi: i64) -> i64 {
    let c = ceil_big(r);
    if c < BigInt::from(lo) {
        lo
    } else if c > BigInt::from(hi) {
        hi
    } else {
        c.to_i64().expect("clamped")
    }
}

/// Least common multiple of the denominators, as i64.
pub fn lcm_denominators<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Result<i64> {
    let mut l = BigInt::one();
    for r in rs {
        l = l.lcm(r.denom());
    }
    l.to_i64()
        .filter(|v| *v < (1i64 << 53))
        .ok_or_else(|| CubeError::Budget(format!("denominator lcm {l} too large")))
}

/// `r * scale` as an exact i64.
pub fn scale_to_i64(r: &Rational, scale: i64) -> Result<i64> {
    let v = r * Rational::from_integer(BigInt::from(scale));
    if !v.is_integer() {
        return Err(CubeError::Params(format!("{} is not a multiple of 1/{scale}", format_rational(r))));
    }
    v.numer()
        .to_i64()
        .ok_or_else(|| CubeError::Budget(format!("scaled weight {} overflows", v.numer())))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn pow_u(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

pub fn max_of(rs: &[Rational]) -> Option<Rational> {
    rs.iter().max().cloned()
}

pub fn sum(rs: &[Rational]) -> Rational {
    rs.iter().fold(Rational::zero(), |a, b| a + b)
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("0.99").unwrap(), rat(99, 100));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn format_roundtrip() {
        for r in [rat(1, 2), int(7), rat(-3, 8), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn floors_and_ceils() {
        assert_eq!(floor_clamped(&rat(-1, 2), -10, 10), -1);
        assert_eq!(ceil_clamped(&rat(-1, 2), -10, 10), 0);
        assert_eq!(floor_clamped(&int(100), -10, 10), 10);
        assert_eq!(ceil_clamped(&rat(7, 2), -10, 10), 4);
    }

    #[test]
    fn lcm_and_scale() {
        let ws = [rat(1, 2), rat(2, 3), int(5)];
        let l = lcm_denominators(&ws).unwrap();
        assert_eq!(l, 6);
        assert_eq!(scale_to_i64(&ws[1], l).unwrap(), 4);
        assert_eq!(dyadic(3, 4), rat(3, 16));
        assert_eq!(prob(6, 4), rat(3, 8));
    }
}
