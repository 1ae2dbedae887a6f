//! Weight systems, the coin-counting oracle and the box-sum evaluator.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binom_count, lcm_vec, natural_to_int};
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Default `|J|` above which construction logs a warning.
pub const DEFAULT_BOX_GUARD: u64 = 100_000_000;

/// A value `a·j` attained by the box together with how many `j ∈ J` attain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxValue {
    pub value: u64,
    pub multiplicity: BigUint,
}

/// A weight vector `a` with its period `D = lcm(a)` and the values `a·j`
/// over the box `J = prod_i [0, D/a_i)`, bucketed by residue mod `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<u64>,
    period: u64,
    box_dims: Vec<u64>,
    box_size: BigUint,
    buckets: Vec<Vec<BoxValue>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystemJson {
    pub a: Vec<u64>,
    #[serde(rename = "D")]
    pub period: u64,
    #[serde(rename = "boxSize")]
    pub box_size: String,
}

impl WeightSystem {
    pub fn new(weights: &[i64]) -> Result<Self> {
        Self::with_guard(weights, DEFAULT_BOX_GUARD)
    }

    /// Like [`WeightSystem::new`], warning through `log` when `|J| > guard`.
    pub fn with_guard(weights: &[i64], guard: u64) -> Result<Self> {
        let period = lcm_vec(weights)?;
        let weights: Vec<u64> = weights.iter().map(|&a| a as u64).collect();
        let box_dims: Vec<u64> = weights.iter().map(|&a| period / a).collect();
        let box_size: BigUint = box_dims.iter().map(|&d| BigUint::from(d)).product();
        if box_size > BigUint::from(guard) {
            log::warn!(
                "box for weights {weights:?} has {box_size} points (guard {guard}); construction may be slow"
            );
        }
        let counts = box_value_counts(&weights, period)?;

        let mut buckets = vec![Vec::new(); period as usize];
        for (v, m) in counts.into_iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let value = v as u64;
            buckets[(value % period) as usize].push(BoxValue {
                value,
                multiplicity: m.magnitude().clone(),
            });
        }

        Ok(WeightSystem {
            weights,
            period,
            box_dims,
            box_size,
            buckets,
        })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Number of weights.
    pub fn r(&self) -> usize {
        self.weights.len()
    }

    /// `D = lcm(a)`.
    pub fn period(&self) -> u64 {
        self.period
    }

    /// `D / a_i` for each weight.
    pub fn box_dims(&self) -> &[u64] {
        &self.box_dims
    }

    /// `|J| = prod_i D / a_i`.
    pub fn box_size(&self) -> &BigUint {
        &self.box_size
    }

    /// Values `a·j ≡ c (mod D)` in ascending order, unreduced.
    pub fn bucket(&self, c: u64) -> &[BoxValue] {
        &self.buckets[c as usize]
    }

    pub fn buckets(&self) -> &[Vec<BoxValue>] {
        &self.buckets
    }

    /// Largest attainable `a·j`, i.e. `sum_i a_i (D/a_i - 1)`.
    pub fn max_box_value(&self) -> u64 {
        self.weights.iter().map(|&a| self.period - a).sum()
    }

    pub fn pairwise_coprime(&self) -> bool {
        first_shared_factor(&self.weights).is_none()
    }

    /// `p_a(n) = sum_{v in bucket(n mod D)} C((n - v)/D + r - 1, r - 1)`,
    /// zero for negative `n`.
    pub fn box_count(&self, n: i64) -> BigUint {
        let d = self.period as i64;
        let r = self.r() as u32;
        let n_big = BigInt::from(n);
        self.bucket(n.rem_euclid(d) as u64)
            .iter()
            .map(|bv| {
                let top = (&n_big - BigInt::from(bv.value)) / d + BigInt::from(r - 1);
                binom_count(&top, r - 1) * &bv.multiplicity
            })
            .sum()
    }

    /// `sum_{j in J} z^{a·j}` as an integer polynomial.
    pub fn numerator_poly(&self) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.max_box_value() as usize + 1];
        for bv in self.buckets.iter().flatten() {
            coeffs[bv.value as usize] = natural_to_int(bv.multiplicity.clone());
        }
        IntPoly::new(coeffs)
    }

    pub fn to_json(&self) -> WeightSystemJson {
        WeightSystemJson {
            a: self.weights.clone(),
            period: self.period,
            box_size: self.box_size.to_string(),
        }
    }
}

/// Returns the first pair `(a_i, a_l)`, `i < l`, with a common factor.
pub fn first_shared_factor(weights: &[u64]) -> Option<(u64, u64)> {
    weights.iter().enumerate().find_map(|(i, &x)| {
        weights[i + 1..]
            .iter()
            .find(|&&y| num_integer::gcd(x, y) != 1)
            .map(|&y| (x, y))
    })
}

/// `counts[v] = #{ j in J : a·j = v }`, i.e. the coefficients of
/// `prod_i (1 + z^{a_i} + ... + z^{D - a_i})`.
fn box_value_counts(weights: &[u64], period: u64) -> Result<Vec<BigInt>> {
    let max: u64 = weights.iter().map(|&a| period - a).sum();
    let len = usize::try_from(max)
        .ok()
        .and_then(|m| m.checked_add(1))
        .ok_or_else(|| Error::InvalidWeights("box values exceed addressable range".into()))?;
    let mut counts = vec![BigInt::zero(); len];
    counts[0] = BigInt::one();
    let mut top = 0usize;
    let d = period as usize;
    for &a in weights {
        let a = a as usize;
        let old = counts[..=top].to_vec();
        top += d - a;
        // Sliding window of width D/a_i along each residue class mod a_i:
        // new[v] = old[v] + new[v - a] - old[v - D].
        for v in 0..=top {
            let mut x = old.get(v).cloned().unwrap_or_default();
            if v >= a {
                x += &counts[v - a];
            }
            if v >= d {
                if let Some(o) = old.get(v - d) {
                    x -= o;
                }
            }
            counts[v] = x;
        }
    }
    Ok(counts)
}

/// Coefficients `p_a(0), ..., p_a(nmax)` of `prod_i 1/(1 - z^{a_i})`, by the
/// coin-counting recurrence applied one weight at a time.
///
/// # Panics
///
/// Panics if any weight is zero.
pub fn dp_table(weights: &[u64], nmax: usize) -> Vec<BigUint> {
    assert!(
        weights.iter().all(|&a| a > 0),
        "dp_table: weights must be positive"
    );
    let mut ways = vec![BigUint::zero(); nmax + 1];
    ways[0] = BigUint::one();
    for &a in weights {
        let a = a as usize;
        for n in a..=nmax {
            let prev = ways[n - a].clone();
            ways[n] += prev;
        }
    }
    ways
}

/// `p_a(n)` by the coin-counting dynamic program; zero for `n < 0`.
pub fn dp_count(weights: &[u64], n: i64) -> BigUint {
    match usize::try_from(n) {
        Ok(n) => dp_table(weights, n).pop().expect("table has n + 1 entries"),
        Err(_) => BigUint::zero(),
    }
}
