//! Exact scalars: reduced rationals, the counting binomial and lcm.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with a positive denominator.
///
/// Displays as `p/q`, or just `p` when the denominator is 1.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: impl Into<BigInt>) -> Rat {
    Rat::from_integer(value.into())
}

/// Parses `"p/q"` or `"p"`; rejects a zero denominator.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Domain(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// `C(m, k)` under the counting convention: zero whenever `m < k`, in
/// particular for every negative `m`.
pub fn binom_count(m: &BigInt, k: u32) -> BigUint {
    let k_big = BigInt::from(k);
    if *m < k_big {
        return BigUint::zero();
    }
    let base = (m - k_big).magnitude().clone();
    let mut acc = BigUint::one();
    // acc = C(base + i, i) after step i, so every division is exact.
    for i in 1..=k {
        acc *= &base + BigUint::from(i);
        acc /= BigUint::from(i);
    }
    acc
}

pub fn lcm_vec(a: &[i64]) -> Result<u64> {
    if a.is_empty() {
        return Err(Error::InvalidWeights("weight vector is empty".into()));
    }
    a.iter().try_fold(1u64, |acc, &x| {
        if x <= 0 {
            return Err(Error::InvalidWeights(format!("weight {x} is not positive")));
        }
        let x = x as u64;
        acc.checked_mul(x / acc.gcd(&x))
            .ok_or_else(|| Error::InvalidWeights("lcm of weights overflows 64 bits".into()))
    })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Converts an integral, nonnegative rational to `BigUint`.
pub(crate) fn rat_to_natural(x: &Rat) -> Option<BigUint> {
    if x.is_integer() && !x.is_negative() {
        Some(x.numer().magnitude().clone())
    } else {
        None
    }
}

pub(crate) fn natural_to_int(x: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x)
}

pub(crate) mod serde_rat {
    use super::{parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize_vec<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rat(s).map_err(de::Error::custom))
            .collect()
    }
}
