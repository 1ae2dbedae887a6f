//! Fourier-Dedekind sums
//!
//! ```text
//! s_n(a_1, ..., a_m; b) = (1/b) sum_{j=1}^{b-1} xi_b^{jn} / prod_i (1 - xi_b^{j a_i})
//! ```
//!
//! evaluated in `Q(xi_b)` and certified rational, plus the two identities that
//! tie them to the partition function: their average over a full residue
//! system mod `D` vanishes, and `q_k - Poly_a` is a sum of them.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{gcd, Rat};
use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::weights::{first_shared_factor, WeightSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FdSumSpec {
    args: Vec<u64>,
    b: u64,
    n: i64,
}

fn check_args(args: &[u64], b: u64) -> Result<()> {
    if b == 0 {
        return Err(Error::Domain(
            "Fourier-Dedekind modulus must be positive".into(),
        ));
    }
    if let Some(&a) = args.iter().find(|&&a| a == 0) {
        return Err(Error::InvalidWeights(format!(
            "argument {a} is not positive"
        )));
    }
    match args.iter().map(|&a| (a, gcd(a, b))).find(|&(_, g)| g != 1) {
        Some((a, g)) => Err(Error::NotCoprime { a, b, gcd: g }),
        None => Ok(()),
    }
}

impl FdSumSpec {
    /// Validates `b >= 1` and `gcd(a_i, b) = 1` for every argument.
    pub fn new(args: Vec<u64>, b: u64, n: i64) -> Result<Self> {
        check_args(&args, b)?;
        Ok(FdSumSpec { args, b, n })
    }

    pub fn args(&self) -> &[u64] {
        &self.args
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn n(&self) -> i64 {
        self.n
    }
}

/// `s_n(args; b)` for every phase `n mod b`, sharing the inverted
/// denominators `prod_i (1 - xi^{j a_i})^{-1}` across phases.
#[derive(Debug, Clone)]
pub struct FdSumTable {
    args: Vec<u64>,
    b: u64,
    values: Vec<Rat>,
}

impl FdSumTable {
    pub fn new(args: &[u64], b: u64) -> Result<Self> {
        check_args(args, b)?;
        let field = CycField::new(b)?;
        let inverses = denominator_inverses(&field, args)?;
        let values = (0..b as i64)
            .map(|n| phase_sum(&field, &inverses, n))
            .collect::<Result<_>>()?;
        Ok(FdSumTable {
            args: args.to_vec(),
            b,
            values,
        })
    }

    pub fn args(&self) -> &[u64] {
        &self.args
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `s_n(args; b)`; depends only on `n mod b`.
    pub fn value(&self, n: i64) -> &Rat {
        &self.values[n.rem_euclid(self.b as i64) as usize]
    }
}

/// `w_j = prod_i (1 - xi^{j a_i})^{-1}` for `j = 1, ..., b - 1`.
fn denominator_inverses(field: &CycField, args: &[u64]) -> Result<Vec<CycNum>> {
    let b = field.order() as i64;
    (1..b)
        .map(|j| {
            let denom = args.iter().try_fold(field.one(), |acc, &a| {
                let factor = field.one().sub(&field.root_power(j * a as i64))?;
                acc.mul(&factor)
            })?;
            denom.inv()
        })
        .collect()
}

/// `(1/b) sum_j xi^{jn} w_j`, certified rational.
fn phase_sum(field: &CycField, inverses: &[CycNum], n: i64) -> Result<Rat> {
    let b = field.order() as i64;
    let n = n.rem_euclid(b);
    let total = inverses
        .iter()
        .zip(1..)
        .try_fold(field.zero(), |acc, (w, j)| {
            acc.add(&field.root_power(j * n).mul(w)?)
        })?;
    total.scale(&Rat::new(1.into(), b.into())).rational_part()
}

pub fn fd_sum(spec: &FdSumSpec) -> Result<Rat> {
    check_args(&spec.args, spec.b)?;
    let field = CycField::new(spec.b)?;
    let inverses = denominator_inverses(&field, &spec.args)?;
    phase_sum(&field, &inverses, spec.n)
}

/// `(1/D) sum_{k=0}^{D-1} s_{-k}(args; b)`, which vanishes whenever `b | D`.
pub fn fd_residue_average(args: &[u64], b: u64, period: u64) -> Result<Rat> {
    if b == 0 || period == 0 || !period.is_multiple_of(b) {
        return Err(Error::ModulusNotDivisor { b, period });
    }
    let table = FdSumTable::new(args, b)?;
    let sum: Rat = (0..period as i64).map(|k| table.value(-k)).sum();
    Ok(sum / Rat::from_integer(period.into()))
}

/// Both sides of `q_k(n) - Poly_a(n) = sum_i s_{-k}(a without a_i; a_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub k: u64,
    pub lhs: Rat,
    pub rhs: Rat,
    pub equal: bool,
}

fn require_pairwise_coprime(ws: &WeightSystem) -> Result<()> {
    match first_shared_factor(ws.weights()) {
        Some((a, b)) => Err(Error::NotCoprime {
            a,
            b,
            gcd: gcd(a, b),
        }),
        None => Ok(()),
    }
}

/// One table per removed weight: `s_.(a without a_i; a_i)`.
fn removal_tables(ws: &WeightSystem) -> Result<Vec<FdSumTable>> {
    let a = ws.weights();
    (0..a.len())
        .map(|i| {
            let rest: Vec<u64> = a[..i].iter().chain(&a[i + 1..]).copied().collect();
            FdSumTable::new(&rest, a[i])
        })
        .collect()
}

fn decompose(
    ws: &WeightSystem,
    poly_part: &RationalPoly,
    tables: &[FdSumTable],
    k: u64,
) -> Result<Decomposition> {
    let diff = &ws.constituent(k)? - poly_part;
    let lhs = diff.as_constant().ok_or(Error::NonConstantDifference {
        k,
        degree: diff.degree().unwrap_or(0),
    })?;
    let rhs: Rat = tables
        .iter()
        .map(|t| t.value(-(k as i64)))
        .fold(Rat::zero(), |acc, v| acc + v);
    Ok(Decomposition {
        k,
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Checks the constituent decomposition at residue `k`; weights must be
/// pairwise coprime.
pub fn decomposition_check(ws: &WeightSystem, k: u64) -> Result<Decomposition> {
    require_pairwise_coprime(ws)?;
    if k >= ws.period() {
        return Err(Error::ResidueOutOfRange {
            k,
            modulus: ws.period(),
        });
    }
    decompose(ws, &ws.polynomial_part(), &removal_tables(ws)?, k)
}

/// [`decomposition_check`] for every `k` in `[0, D)`.
pub fn decomposition_check_all(ws: &WeightSystem) -> Result<Vec<Decomposition>> {
    require_pairwise_coprime(ws)?;
    let poly_part = ws.polynomial_part();
    let tables = removal_tables(ws)?;
    (0..ws.period())
        .map(|k| decompose(ws, &poly_part, &tables, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn s(args: &[u64], b: u64, n: i64) -> Rat {
        fd_sum(&FdSumSpec::new(args.to_vec(), b, n).unwrap()).unwrap()
    }

    #[test]
    fn fd_sum_examples() {
        assert_eq!(s(&[3], 2, 0), rat(1, 4));
        assert_eq!(s(&[2], 3, 0), rat(1, 3));
        assert_eq!(s(&[5], 1, 0), rat_int(0));
        assert_eq!(s(&[5, 7], 1, 3), rat_int(0));
        // phase -1: (1/2)(-1)/(1 - (-1)) = -1/4
        assert_eq!(s(&[3], 2, -1), rat(-1, 4));
    }

    #[test]
    fn classical_dedekind_sum_relation() {
        // s_0(1, a; b) = (b - 1)/(4b) - s(a, b), s the classical Dedekind sum
        // sum_k ((k/b)) ((ak/b)) with the sawtooth ((x)).
        fn dedekind(a: i64, b: i64) -> Rat {
            let saw = |x: Rat| {
                if x.is_integer() {
                    Rat::zero()
                } else {
                    x.clone() - x.floor() - rat(1, 2)
                }
            };
            (1..b)
                .map(|k| saw(rat(k, b)) * saw(rat(a * k, b)))
                .fold(Rat::zero(), |acc, x| acc + x)
        }
        for (a, b) in [(1, 2), (1, 5), (2, 5), (3, 7), (5, 11), (4, 9)] {
            let expected = -dedekind(a, b) + rat(b - 1, 4 * b);
            assert_eq!(s(&[1, a as u64], b as u64, 0), expected, "a = {a}, b = {b}");
        }
    }

    #[test]
    fn fd_sum_rejects_shared_factors() {
        assert_eq!(
            FdSumSpec::new(vec![4], 6, 0).unwrap_err(),
            Error::NotCoprime { a: 4, b: 6, gcd: 2 }
        );
        assert!(FdSumSpec::new(vec![1], 0, 0).is_err());
        assert!(FdSumTable::new(&[3, 9], 6).is_err());
    }

    #[test]
    fn table_matches_direct_sum() {
        let table = FdSumTable::new(&[2, 5], 7).unwrap();
        for n in -10..10 {
            assert_eq!(*table.value(n), s(&[2, 5], 7, n), "n = {n}");
        }
    }

    #[test]
    fn residue_average_vanishes() {
        assert_eq!(fd_residue_average(&[3], 2, 6).unwrap(), rat_int(0));
        assert_eq!(fd_residue_average(&[2], 3, 6).unwrap(), rat_int(0));
        assert_eq!(fd_residue_average(&[5, 7], 3, 105).unwrap(), rat_int(0));
        assert_eq!(
            fd_residue_average(&[2], 3, 10),
            Err(Error::ModulusNotDivisor { b: 3, period: 10 })
        );
    }

    #[test]
    fn residue_average_by_direct_summation() {
        let d = 105i64;
        let total: Rat = (0..d).map(|k| s(&[5, 7], 3, -k)).sum();
        assert!(total.is_zero());
    }

    #[test]
    fn decomposition_examples() {
        let ws = WeightSystem::new(&[2, 3]).unwrap();
        let d0 = decomposition_check(&ws, 0).unwrap();
        assert_eq!(
            (d0.lhs.clone(), d0.rhs.clone(), d0.equal),
            (rat(7, 12), rat(7, 12), true)
        );
        let d1 = decomposition_check(&ws, 1).unwrap();
        assert_eq!(
            (d1.lhs.clone(), d1.rhs.clone(), d1.equal),
            (rat(-7, 12), rat(-7, 12), true)
        );
        let d = decomposition_check(&WeightSystem::new(&[1]).unwrap(), 0).unwrap();
        assert_eq!((d.lhs, d.rhs, d.equal), (rat_int(0), rat_int(0), true));
    }

    #[test]
    fn decomposition_all_residues() {
        for a in [
            vec![2, 3],
            vec![3, 5, 7],
            vec![1, 4, 9],
            vec![1, 1],
            vec![5, 8],
        ] {
            let ws = WeightSystem::new(&a).unwrap();
            let all = decomposition_check_all(&ws).unwrap();
            assert_eq!(all.len() as u64, ws.period());
            for d in all {
                assert!(d.equal, "a = {a:?}, k = {}: {} vs {}", d.k, d.lhs, d.rhs);
            }
        }
    }

    #[test]
    fn decomposition_preconditions() {
        let ws = WeightSystem::new(&[2, 4]).unwrap();
        assert_eq!(
            decomposition_check(&ws, 0).unwrap_err(),
            Error::NotCoprime { a: 2, b: 4, gcd: 2 }
        );
        let ws = WeightSystem::new(&[2, 3]).unwrap();
        assert!(matches!(
            decomposition_check(&ws, 6),
            Err(Error::ResidueOutOfRange { k: 6, modulus: 6 })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coprime_args() -> impl Strategy<Value = (Vec<u64>, u64)> {
            (1u64..=13, proptest::collection::vec(1u64..=20, 0..=3))
                .prop_filter("arguments coprime to b", |(b, args)| {
                    args.iter().all(|&a| gcd(a, *b) == 1)
                })
                .prop_map(|(b, args)| (args, b))
        }

        proptest! {
            #[test]
            fn phase_periodicity((args, b) in coprime_args(), n in -40i64..40) {
                prop_assert_eq!(s(&args, b, n), s(&args, b, n + b as i64));
            }

            #[test]
            fn permutation_invariance((args, b) in coprime_args(), n in -20i64..20) {
                let mut reversed = args.clone();
                reversed.reverse();
                prop_assert_eq!(s(&args, b, n), s(&reversed, b, n));
            }
        }
    }
}
