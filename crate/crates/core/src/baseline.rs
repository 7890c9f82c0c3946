//! Brute-force closed testing with Simes local tests.
//!
//! For the rejection set `R_r` of the `r` smallest p-values, the p-value for
//! "at least `j` false nulls in `R_r`" is the largest Simes p-value over all
//! index sets `J` with `|J ∩ R_r| ≥ r − j + 1`: any such `J` could be the set
//! of true nulls, and closed testing must reject each of them. The family is
//! closed under supersets, so this equals the largest closed-testing adjusted
//! p-value over the same family.
//!
//! Enumeration covers all `2^K` subsets, so `K` is capped at
//! [`MAX_BRUTE_FORCE_K`].

use rayon::prelude::*;

use crate::discovery::{PMatrix, TriMatrix};
use crate::error::{Error, Result};

/// Largest `K` accepted by [`ct_discovery_pmatrix`].
pub const MAX_BRUTE_FORCE_K: usize = 20;

/// A non-empty vector of p-values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueVec(Vec<f64>);

impl PValueVec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::PValueOutOfRange { index, value });
            }
        }
        Ok(PValueVec(values))
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
}

/// Simes combination `min_i m·p_(i)/i`, capped at 1.
pub fn simes_p(p: &PValueVec) -> f64 {
    let mut sorted = p.as_slice().to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &p)| m * p / (i + 1) as f64)
        .fold(1.0, f64::min)
}

/// Positions of the p-values in ascending order, ties broken by index.
pub fn rank_order(p: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| p[a].total_cmp(&p[b]).then(a.cmp(&b)));
    idx
}

/// Discovery p-matrix by closed testing over every subset.
pub fn ct_discovery_pmatrix(p: &PValueVec) -> Result<PMatrix> {
    let k = p.len();
    if k > MAX_BRUTE_FORCE_K {
        return Err(Error::TooLarge {
            what: "brute-force closed testing",
            k,
            max: MAX_BRUTE_FORCE_K,
        });
    }

    // Work in rank space: bit t of a mask is the t-th smallest p-value, so
    // R_r is the low r bits and walking bits upward yields order statistics.
    let sorted: Vec<f64> = rank_order(p.as_slice())
        .into_iter()
        .map(|i| p.as_slice()[i])
        .collect();

    // best[r][c] = max Simes p over J with |J ∩ R_r| = c.
    let fresh = || vec![vec![0.0f64; k + 1]; k + 1];
    let best = (1u32..(1u32 << k))
        .into_par_iter()
        .fold(fresh, |mut best, mask| {
            let size = mask.count_ones() as f64;
            let mut simes = 1.0f64;
            let mut i = 0.0;
            for (t, &p) in sorted.iter().enumerate() {
                if mask & (1 << t) != 0 {
                    i += 1.0;
                    simes = simes.min(size * p / i);
                }
            }
            for (r, row) in best.iter_mut().enumerate().skip(1) {
                let c = (mask & ((1u32 << r) - 1)).count_ones() as usize;
                if simes > row[c] {
                    row[c] = simes;
                }
            }
            best
        })
        .reduce(fresh, |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x = x.max(y);
                }
            }
            a
        });

    let entries = TriMatrix::from_fn(k, |r, j| {
        best[r][(r - j + 1)..=r].iter().copied().fold(0.0, f64::max)
    });
    PMatrix::new(entries)
}
