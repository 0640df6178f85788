//! Exact rational helpers. Every height in this crate is a `BigRational`
//! with logarithms normalized so that `log q = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rat {
    BigRational::from_integer(n.clone())
}

/// `base^exp` as a big integer.
pub fn pow_big(base: u64, exp: u64) -> BigInt {
    num_traits::pow::pow(BigInt::from(base), exp as usize)
}

pub fn pos(x: &Rat) -> Rat {
    if x.is_positive() {
        x.clone()
    } else {
        Rat::zero()
    }
}

pub fn max_rat(a: &Rat, b: &Rat) -> Rat {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min_rat(a: &Rat, b: &Rat) -> Rat {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// `floor(x)` for nonnegative `x` that fits a `usize`.
pub fn floor_usize(x: &Rat) -> usize {
    usize::try_from(x.floor().to_integer()).expect("small nonnegative value")
}

/// Serialized form, always `num/den`.
pub fn fmt_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Display form: integers without the `/1`.
pub fn show_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || AlgebraError::Domain(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn lcm_u64(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1u64, |acc, v| acc.lcm(&v))
}

pub fn to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

pub mod serde_rat {
    //! Serialize rationals as `"num/den"` strings.
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}
