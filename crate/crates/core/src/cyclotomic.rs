//! Exact arithmetic in the cyclotomic field `Q(xi_b) = Q[z] / Phi_b(z)`.
//!
//! Elements are stored as rational coefficient vectors of length `deg Phi_b`,
//! fully reduced, so two elements are equal exactly when their vectors are.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::poly::{IntPoly, RationalPoly};

type PhiCache = RwLock<HashMap<u64, Arc<IntPoly>>>;

fn phi_cache() -> &'static PhiCache {
    static CACHE: OnceLock<PhiCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `b`-th cyclotomic polynomial, `(z^b - 1) / prod_{d | b, d < b} Phi_d(z)`.
///
/// Results are memoized process-wide. Concurrent callers may compute the same
/// entry twice; both insert identical values.
///
/// # Panics
///
/// Panics if `b == 0`.
pub fn cyclotomic_poly(b: u64) -> Arc<IntPoly> {
    assert!(b >= 1, "cyclotomic_poly: order must be positive");
    if let Some(p) = phi_cache().read().unwrap().get(&b) {
        return Arc::clone(p);
    }
    let mut acc = IntPoly::x_pow_minus_one(b as usize);
    for d in divisors(b).into_iter().filter(|&d| d < b) {
        acc = acc
            .div_exact_monic(&cyclotomic_poly(d))
            .expect("Phi_d divides z^b - 1 for every d | b");
    }
    let phi = Arc::new(acc);
    phi_cache()
        .write()
        .unwrap()
        .entry(b)
        .or_insert_with(|| Arc::clone(&phi));
    phi
}

struct FieldInner {
    order: u64,
    phi: Arc<IntPoly>,
    modulus: RationalPoly,
}

/// The field `Q(xi_b)`; cheap to clone.
#[derive(Clone)]
pub struct CycField {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(xi_{})", self.order())
    }
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order()
    }
}

impl Eq for CycField {}

impl CycField {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("root-of-unity order must be positive".into()));
        }
        let phi = cyclotomic_poly(order);
        let modulus = phi.to_rational();
        Ok(CycField {
            inner: Arc::new(FieldInner {
                order,
                phi,
                modulus,
            }),
        })
    }

    /// `b`, the order of the root of unity `xi_b`.
    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn phi(&self) -> &IntPoly {
        &self.inner.phi
    }

    /// `[Q(xi_b) : Q] = phi(b)`.
    pub fn degree(&self) -> usize {
        self.inner
            .phi
            .degree()
            .expect("cyclotomic polynomials are nonzero")
    }

    /// Reduces an arbitrary polynomial in `xi_b` to canonical form.
    pub fn reduce(&self, p: &RationalPoly) -> CycNum {
        let (_, rem) = p
            .div_rem(&self.inner.modulus)
            .expect("cyclotomic modulus is nonzero");
        let mut coeffs = rem.coeffs().to_vec();
        coeffs.resize(self.degree(), Rat::zero());
        CycNum {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn from_rat(&self, value: Rat) -> CycNum {
        self.reduce(&RationalPoly::constant(value))
    }

    pub fn zero(&self) -> CycNum {
        self.from_rat(Rat::zero())
    }

    pub fn one(&self) -> CycNum {
        self.from_rat(Rat::one())
    }

    /// `xi_b^e`; the exponent is first reduced into `[0, b)`.
    pub fn root_power(&self, e: i64) -> CycNum {
        let e = e.mod_floor(&(self.order() as i64)) as usize;
        self.reduce(&RationalPoly::monomial(Rat::one(), e))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycNum {
    field: CycField,
    coeffs: Vec<Rat>,
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.as_poly().display_in("xi"), self.field)
    }
}

/// Debug serialization: the coordinate vector as rational strings.
impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl CycNum {
    pub fn field(&self) -> &CycField {
        &self.field
    }

    /// Coordinates in the power basis `1, xi, ..., xi^(phi(b)-1)`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn as_poly(&self) -> RationalPoly {
        RationalPoly::new(self.coeffs.clone())
    }

    fn check_field(&self, other: &CycNum) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            })
        }
    }

    pub fn add(&self, other: &CycNum) -> Result<CycNum> {
        self.check_field(other)?;
        Ok(CycNum {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        })
    }

    pub fn sub(&self, other: &CycNum) -> Result<CycNum> {
        self.check_field(other)?;
        Ok(CycNum {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        })
    }

    pub fn mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check_field(other)?;
        Ok(self.field.reduce(&(&self.as_poly() * &other.as_poly())))
    }

    pub fn scale(&self, factor: &Rat) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycNum {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on
    /// `(x, Phi_b)` over `Q[z]`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Invariant: t_i · x ≡ r_i (mod Phi_b).
        let mut r0 = self.field.inner.modulus.clone();
        let mut r1 = self.as_poly();
        let mut t0 = RationalPoly::zero();
        let mut t1 = RationalPoly::constant(Rat::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        // Phi_b is irreducible, so a nonzero x leaves a nonzero constant gcd.
        let g = r0
            .as_constant()
            .filter(|g| !g.is_zero())
            .ok_or(Error::DivisionByZero)?;
        Ok(self.field.reduce(&t0.scale(&g.recip())))
    }

    /// The element as a rational, certified by every non-constant
    /// coordinate being zero.
    pub fn rational_part(&self) -> Result<Rat> {
        if let Some(degree) = self.coeffs.iter().skip(1).position(|c| !c.is_zero()) {
            return Err(Error::NotRational { degree: degree + 1 });
        }
        Ok(self.coeffs.first().cloned().unwrap_or_else(Rat::zero))
    }
}
