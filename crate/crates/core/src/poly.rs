//! Dense univariate polynomials over the rationals and the integers.
//!
//! Coefficients are stored in ascending degree with trailing zeros trimmed, so
//! the zero polynomial is the empty vector and structural equality is
//! mathematical equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{serde_rat, Rat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalPoly {
    #[serde(
        serialize_with = "serde_rat::serialize_vec",
        deserialize_with = "serde_rat::deserialize_vec"
    )]
    coeffs: Vec<Rat>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^degree`
    pub fn monomial(c: Rat, degree: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `slope · x + intercept`
    pub fn linear(slope: Rat, intercept: Rat) -> Self {
        Self::new(vec![intercept, slope])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// The constant value if the polynomial has degree at most 0.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Euclidean division: `self = q · divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &RationalPoly) -> Result<(RationalPoly, RationalPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}·")?;
                    }
                    write!(f, "{var}")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Text rendering in the variable `var`, ascending degree.
    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct In<'a>(&'a RationalPoly, &'a str);
        impl fmt::Display for In<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        In(self, var)
    }
}

/// Renders as e.g. `5/12 + 1/6·n`.
impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "n")
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;

    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        RationalPoly::new(out)
    }
}

macro_rules! forward_owned {
    ($ty:ty, $tr:ident, $m:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(RationalPoly, Add, add);
forward_owned!(RationalPoly, Sub, sub);
forward_owned!(RationalPoly, Mul, mul);

/// The polynomial in `n` equal to `C((n - c)/d + k, k)`, extended from the
/// integers by the falling-factorial product `prod_{i=1..k} ((n - c)/d + i) / k!`.
///
/// Degree is exactly `k` with leading coefficient `1 / (d^k k!)`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn binom_poly_shifted(c: &Rat, d: u64, k: u32) -> RationalPoly {
    assert!(d >= 1, "binom_poly_shifted: modulus must be positive");
    let d = Rat::from_integer(BigInt::from(d));
    let slope = d.recip();
    let shift = c / &d;
    let mut acc = RationalPoly::constant(Rat::one());
    let mut factorial = BigInt::one();
    for i in 1..=k {
        let factor = RationalPoly::linear(slope.clone(), Rat::from_integer(i.into()) - &shift);
        acc = &acc * &factor;
        factorial *= i;
    }
    acc.scale(&Rat::from_integer(factorial).recip())
}

/// Dense polynomial with arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^degree - 1`
    pub fn x_pow_minus_one(degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[degree] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn to_rational(&self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().cloned().map(Rat::from_integer).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient by a monic divisor, `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(divisor.is_monic(), "div_exact_monic: divisor must be monic");
        let dd = divisor.degree()?;
        if self.coeffs.is_empty() {
            return Some(IntPoly::default());
        }
        if self.coeffs.len() <= dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem[..dd]
            .iter()
            .all(Zero::is_zero)
            .then(|| IntPoly::new(quot))
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return IntPoly::default();
        }
        // Sparse inner loop: the factors used here are mostly zero.
        let rhs_terms: Vec<(usize, &BigInt)> = rhs
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(j, y) in &rhs_terms {
                out[i + j] += x * y;
            }
        }
        IntPoly::new(out)
    }
}

forward_owned!(IntPoly, Mul, mul);

/// Renders in the variable `z`, ascending degree.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_rational().display_in("z").fmt(f)
    }
}
