//! Constituent polynomials, the polynomial part and quasi-polynomial assembly.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, rat_to_natural, Rat};
use crate::error::{Error, Result};
use crate::poly::{binom_poly_shifted, RationalPoly};
use crate::weights::{BoxValue, WeightSystem};

/// `sum_v multiplicity(v) · C((n - v)/D + r - 1, r - 1)` as a polynomial in `n`.
fn shifted_binomial_sum<'a>(
    values: impl IntoIterator<Item = &'a BoxValue>,
    period: u64,
    r: usize,
) -> RationalPoly {
    let k = (r - 1) as u32;
    values.into_iter().fold(RationalPoly::zero(), |acc, bv| {
        let term = binom_poly_shifted(&Rat::from_integer(bv.value.into()), period, k);
        &acc + &term.scale(&Rat::from_integer(bv.multiplicity.clone().into()))
    })
}

impl WeightSystem {
    /// The polynomial `q_k` agreeing with `p_a(n)` on `n ≡ k (mod D)`, written
    /// in the global variable `n`.
    pub fn constituent(&self, k: u64) -> Result<RationalPoly> {
        if k >= self.period() {
            return Err(Error::ResidueOutOfRange {
                k,
                modulus: self.period(),
            });
        }
        Ok(shifted_binomial_sum(
            self.bucket(k),
            self.period(),
            self.r(),
        ))
    }

    /// `Poly_a(n) = (1/D) sum_{j in J} C((n - a·j)/D + r - 1, r - 1)`, with no
    /// congruence filter on `j`.
    pub fn polynomial_part(&self) -> RationalPoly {
        let all = self.buckets().iter().flatten();
        shifted_binomial_sum(all, self.period(), self.r())
            .scale(&Rat::new(1.into(), self.period().into()))
    }

    /// `Poly_a(n)` as the average of the `D` constituents.
    pub fn polynomial_part_via_average(&self) -> RationalPoly {
        let sum = (0..self.period())
            .map(|k| self.constituent(k).expect("k < D"))
            .fold(RationalPoly::zero(), |acc, q| &acc + &q);
        sum.scale(&Rat::new(1.into(), self.period().into()))
    }

    /// Expected leading coefficient `1 / ((r-1)! · prod a_i)` of `Poly_a`.
    pub fn expected_leading_coefficient(&self) -> Rat {
        let factorial: BigInt = (1..self.r() as u64).map(BigInt::from).product();
        let product: BigInt = self.weights().iter().map(|&a| BigInt::from(a)).product();
        Rat::new(1.into(), factorial * product)
    }

    pub fn quasi_build(&self) -> QuasiPolynomial {
        QuasiPolynomial {
            period: self.period(),
            constituents: (0..self.period())
                .map(|k| self.constituent(k).expect("k < D"))
                .collect(),
        }
    }
}

/// A period `D` and the constituents `q_0, ..., q_{D-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolynomial {
    #[serde(rename = "D")]
    period: u64,
    constituents: Vec<RationalPoly>,
}

impl QuasiPolynomial {
    pub fn new(constituents: Vec<RationalPoly>) -> Result<Self> {
        if constituents.is_empty() {
            return Err(Error::Domain(
                "a quasi-polynomial needs at least one constituent".into(),
            ));
        }
        Ok(QuasiPolynomial {
            period: constituents.len() as u64,
            constituents,
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn constituents(&self) -> &[RationalPoly] {
        &self.constituents
    }

    pub fn constituent(&self, k: u64) -> Option<&RationalPoly> {
        self.constituents.get(k as usize)
    }

    /// Evaluates `q_{n mod D}(n)`; the result must be a nonnegative integer.
    pub fn eval(&self, n: i64) -> Result<BigUint> {
        if n < 0 {
            return Err(Error::Domain(format!(
                "quasi-polynomial evaluation needs n >= 0, got {n}"
            )));
        }
        let k = n as u64 % self.period;
        let value = self.constituents[k as usize].eval(&Rat::from_integer(n.into()));
        rat_to_natural(&value).ok_or_else(|| Error::NonIntegerEvaluation {
            k,
            n: n.into(),
            value: value.to_string(),
        })
    }
}

/// The two-weight closed form `n/(ab) + 1/(2a) + 1/(2b)` for coprime `a, b`.
pub fn poly_part_closed_r2(a: u64, b: u64) -> Result<RationalPoly> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    let g = gcd(a, b);
    if g != 1 {
        return Err(Error::NotCoprime { a, b, gcd: g });
    }
    let inv = |x: u64| Rat::new(1.into(), x.into());
    let constant = inv(2 * a) + inv(2 * b);
    Ok(RationalPoly::linear(inv(a * b), constant))
}
