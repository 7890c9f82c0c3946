//! U-statistic ie-merging functions.
//!
//! For e-values `e_1, …, e_K` the U-statistic of order `n` is the average,
//! over all `n`-element subsets, of the product of the subset:
//!
//! ```text
//! U_n(e) = C(K, n)⁻¹ · Σ_{|S| = n} Π_{k ∈ S} e_k        (n ≤ K)
//! U_n(e) = U_K(e)                                       (n > K)
//! ```
//!
//! `U_1` is the arithmetic mean and merges arbitrarily dependent e-values;
//! every `U_n` merges independent ones. Two evaluators are provided: a
//! literal subset enumeration ([`u_stat_direct`]) and an incremental
//! accumulator over elementary symmetric polynomials ([`UStatAccumulator`])
//! that costs `O(n)` per inserted value.
//!
//! Arithmetic saturates: products that overflow become `+∞`, and `0 · ∞` is
//! taken to be `0` so a zero e-value annihilates every product it enters.

use crate::error::{Error, Result};

/// A non-empty vector of e-values, each in `[0, +∞]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EValueVec(Vec<f64>);

impl EValueVec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in values.iter().enumerate() {
            if value.is_nan() {
                return Err(Error::NanEValue { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeEValue { index, value });
            }
        }
        Ok(EValueVec(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for EValueVec {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        EValueVec::new(values)
    }
}

impl AsRef<[f64]> for EValueVec {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Order `n ≥ 1` of a U-statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UStatOrder(usize);

impl UStatOrder {
    /// The arithmetic mean.
    pub const MEAN: UStatOrder = UStatOrder(1);
    pub const PAIRWISE: UStatOrder = UStatOrder(2);

    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            Err(Error::InvalidOrder(n))
        } else {
            Ok(UStatOrder(n))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for UStatOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "U_{}", self.0)
    }
}

/// Product with `0 · ∞ = 0`.
#[inline]
pub(crate) fn mul_sat(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// `C(m, k)` as a float.
///
/// Uses exact integer arithmetic while it fits in `u128`, so the result is
/// the correctly rounded coefficient; beyond that it continues with the
/// floating-point multiplicative formula.
pub fn binomial(m: usize, k: usize) -> f64 {
    if k > m {
        return 0.0;
    }
    let k = k.min(m - k);
    let base = (m - k) as u128;
    let mut exact: u128 = 1;
    for i in 1..=k as u128 {
        // exact * (base + i) / i is C(base + i, i), always an integer.
        match exact.checked_mul(base + i) {
            Some(p) => exact = p / i,
            None => {
                return ((i as usize)..=k).fold(exact as f64, |acc, t| {
                    acc * (base as usize + t) as f64 / t as f64
                });
            }
        }
    }
    exact as f64
}

/// U-statistic of `values` by explicit enumeration of subsets.
///
/// Costs `C(K, min(n, K))` products; used as the reference evaluator.
pub fn u_stat_direct(e: &EValueVec, n: UStatOrder) -> f64 {
    u_stat_slice(e.as_slice(), n)
}

pub(crate) fn u_stat_slice(values: &[f64], n: UStatOrder) -> f64 {
    let m = values.len();
    debug_assert!(m > 0);
    let k = n.get().min(m);

    // Lexicographic walk over k-subsets of 0..m.
    let mut idx: Vec<usize> = (0..k).collect();
    let mut sum = 0.0;
    loop {
        sum += idx.iter().fold(1.0, |acc, &i| mul_sat(acc, values[i]));

        let mut pos = k;
        while pos > 0 && idx[pos - 1] == m - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        for t in pos..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
    sum / binomial(m, k)
}

/// `U_2` through the power-sum identity `((Σe)² − Σe²) / (K(K−1))`.
///
/// This is algebraically equal to `M_1² − var(e)/(K−1)`. Requires `K ≥ 2`;
/// for a single value use the `n > K` convention instead.
pub fn u2_identity(e: &EValueVec) -> Result<f64> {
    let values = e.as_slice();
    let k = values.len();
    if k < 2 {
        return Err(Error::TooFew {
            what: "the U_2 power-sum identity",
            need: 2,
            got: k,
        });
    }

    let infinite = values.iter().filter(|v| v.is_infinite()).count();
    if infinite > 0 {
        // Only a pair (∞, positive) contributes an infinite product.
        let positive = values.iter().filter(|&&v| v > 0.0).count();
        return Ok(if positive >= 2 { f64::INFINITY } else { 0.0 });
    }

    let (sum, sum_sq) = values
        .iter()
        .fold((0.0, 0.0), |(s, q), &v| (s + v, q + v * v));
    let kf = k as f64;
    let value = (sum * sum - sum_sq) / (kf * (kf - 1.0));
    Ok(value.max(0.0))
}

/// Relative sample variance `var(e) / ((K−1) M_1²)`, a number in `[0, 1]`.
///
/// Zero iff all values coincide, one iff exactly one value is nonzero.
/// The zero vector has relative variance `0`.
pub fn rvar(e: &EValueVec) -> Result<f64> {
    let values = e.as_slice();
    let k = values.len();
    if k < 2 {
        return Err(Error::TooFew {
            what: "relative variance",
            need: 2,
            got: k,
        });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| v.is_infinite()) {
        return Err(Error::NonFiniteEValue { index, value });
    }

    let kf = k as f64;
    let mean = values.iter().sum::<f64>() / kf;
    if mean == 0.0 {
        return Ok(0.0);
    }
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / kf;
    Ok((var / ((kf - 1.0) * mean * mean)).clamp(0.0, 1.0))
}

/// Markov calibration of an e-value into a p-value: `min(1, 1/e)`.
pub fn e_to_p(e: f64) -> f64 {
    debug_assert!(e >= 0.0, "e-values are nonnegative");
    1.0 / e.max(1.0)
}

/// Running elementary symmetric polynomials `E_0..=E_n` of a multiset.
///
/// Inserting `v` applies `E_i ← E_i + v·E_{i−1}` for `i = n, …, 1`, so after
/// `m` insertions `E_i` is the sum of products over all `i`-subsets and
/// `U_n = E_{min(n,m)} / C(m, min(n,m))`.
#[derive(Debug, Clone, PartialEq)]
pub struct UStatAccumulator {
    count: usize,
    esp: Vec<f64>,
    order: UStatOrder,
}

impl UStatAccumulator {
    pub fn new(order: UStatOrder) -> Self {
        let mut esp = vec![0.0; order.get() + 1];
        esp[0] = 1.0;
        UStatAccumulator {
            count: 0,
            esp,
            order,
        }
    }

    pub fn insert(&mut self, v: f64) -> Result<()> {
        if v.is_nan() {
            return Err(Error::NanEValue { index: self.count });
        }
        if v < 0.0 {
            return Err(Error::NegativeEValue {
                index: self.count,
                value: v,
            });
        }
        self.push(v);
        Ok(())
    }

    /// Insert without validation; `v` must be a valid e-value.
    #[inline]
    pub(crate) fn push(&mut self, v: f64) {
        // Only E_1..=E_{m+1} can change, and E_i for i > m+1 stays 0.
        let top = self.order.get().min(self.count + 1);
        for i in (1..=top).rev() {
            self.esp[i] += mul_sat(v, self.esp[i - 1]);
        }
        self.count += 1;
    }

    /// Current value of `U_n` on the inserted multiset.
    pub fn u_value(&self) -> Result<f64> {
        if self.count == 0 {
            return Err(Error::EmptyAccumulator);
        }
        Ok(self.value_unchecked())
    }

    #[inline]
    pub(crate) fn value_unchecked(&self) -> f64 {
        let k = self.order.get().min(self.count);
        self.esp[k] / binomial(self.count, k)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `E_0..=E_n`.
    pub fn esp(&self) -> &[f64] {
        &self.esp
    }

    pub fn order(&self) -> UStatOrder {
        self.order
    }
}
