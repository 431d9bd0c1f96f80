//! Exact rationals and their JSON form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{FnxError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "p/q", an integer, or a finite decimal such as "-0.375".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || FnxError::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().map_err(|_| bad())? };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let v = Rational::new(whole * &den + frac, den);
        return Ok(if neg { -v } else { v });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // scale down huge parts before dividing
            let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
            let shift = shift.max(0) as u64;
            let a = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let b = (r.denom() >> shift).to_f64().unwrap_or(0.0);
            if b == 0.0 {
                if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY }
            } else {
                a / b
            }
        }
    }
}

/// Nearest rational with denominator 2^bits, used for seeding exact work from floats.
pub fn from_f64_dyadic(x: f64, bits: u32) -> Rational {
    let den = BigInt::one() << bits;
    let scaled = (x * 2f64.powi(bits as i32)).round();
    Rational::new(BigInt::from(scaled as i128), den)
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// JSON wrapper: serializes as "p/q" or an integer string, reads strings or numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(i) = self.0.numer().to_i64() {
                return s.serialize_i64(i);
            }
        }
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let r = match &v {
            serde_json::Value::String(s) => parse_rational(s).map_err(serde::de::Error::custom)?,
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    int(i)
                } else {
                    parse_rational(&n.to_string()).map_err(serde::de::Error::custom)?
                }
            }
            _ => return Err(serde::de::Error::custom("expected rational string or number")),
        };
        Ok(Q(r))
    }
}

pub fn to_q_matrix(m: &[Vec<Rational>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().cloned().map(Q).collect()).collect()
}

pub fn from_q_matrix(m: Vec<Vec<Q>>) -> Vec<Vec<Rational>> {
    m.into_iter().map(|r| r.into_iter().map(|q| q.0).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.375").unwrap(), rat(-3, 8));
        assert_eq!(parse_rational("2/-4").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let v = vec![Q(rat(1, 3)), Q(int(5))];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/3",5]"#);
        let back: Vec<Q> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(40, 20), "137846528820".parse::<BigInt>().unwrap());
        assert_eq!(binomial(3, 4), BigInt::zero());
    }

    #[test]
    fn huge_to_f64() {
        let big = Rational::new(BigInt::one() << 2000u32, (BigInt::one() << 1999u32) * 3);
        assert!((to_f64(&big) - 2.0 / 3.0).abs() < 1e-15);
    }
}
