//! Discovery matrices built from a family of U-statistics.
//!
//! With e-values sorted ascending, `e_1 ≤ … ≤ e_K`, entry `(r, j)` bounds the
//! evidence that the `r` hypotheses with the largest e-values contain at
//! least `j` false nulls. It is the smallest merged e-value over the
//! multisets
//!
//! ```text
//! S_{r,j} ∪ {e_1, …, e_i},   S_{r,j} = {e_{K−r+1}, …, e_{K−j+1}},   0 ≤ i ≤ K − r
//! ```
//!
//! where each multiset is merged with `U_n` at its own arity. Two engines
//! compute the same matrix: [`build_dm_reference`] evaluates every candidate
//! from scratch by subset enumeration, and [`build_dm_fast`] seeds a
//! [`UStatAccumulator`] with `S_{r,j}` and streams in `e_1, e_2, …`, for
//! `O(n·K³)` work overall. Cells are independent; the fast engine computes
//! rows on the current rayon pool and its output does not depend on the
//! number of threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::merge::{e_to_p, u_stat_slice, EValueVec, UStatAccumulator, UStatOrder};

/// E-values in ascending order, with the permutation back to input order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedEValues {
    values: Vec<f64>,
    perm: Vec<usize>,
}

/// Stable ascending sort; ties keep their input order.
pub fn sort_evalues(e: &EValueVec) -> SortedEValues {
    let input = e.as_slice();
    let mut perm: Vec<usize> = (0..input.len()).collect();
    perm.sort_by(|&a, &b| input[a].total_cmp(&input[b]));
    let values = perm.iter().map(|&i| input[i]).collect();
    SortedEValues { values, perm }
}

impl SortedEValues {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `perm()[i]` is the 0-based input position of `values()[i]`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The e-values in their original input order.
    pub fn unsorted(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.values.len()];
        for (&src, &v) in self.perm.iter().zip(&self.values) {
            out[src] = v;
        }
        out
    }
}

/// Dense lower-triangular `K×K` storage, indexed 1-based by `(r, j)` with
/// `1 ≤ j ≤ r ≤ K`, rows stored consecutively.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMatrix {
    k: usize,
    data: Vec<f64>,
}

impl TriMatrix {
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(k * (k + 1) / 2);
        for r in 1..=k {
            for j in 1..=r {
                data.push(f(r, j));
            }
        }
        TriMatrix { k, data }
    }

    /// Build from row-major data; `data.len()` must be `k(k+1)/2`.
    pub fn from_rows(k: usize, data: Vec<f64>) -> Option<Self> {
        (data.len() == k * (k + 1) / 2).then_some(TriMatrix { k, data })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, r: usize, j: usize) -> Result<f64> {
        if j == 0 || j > r || r > self.k {
            return Err(Error::IndexOutOfRange { r, j, k: self.k });
        }
        Ok(self.data[offset(r, j)])
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let start = offset(r, 1);
        &self.data[start..start + r]
    }

    /// `(r, j, value)` with `r` ascending, then `j` ascending.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..=self.k).flat_map(move |r| {
            self.row(r)
                .iter()
                .enumerate()
                .map(move |(j, &v)| (r, j + 1, v))
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> TriMatrix {
        TriMatrix {
            k: self.k,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl AsRef<TriMatrix> for TriMatrix {
    fn as_ref(&self) -> &TriMatrix {
        self
    }
}

#[inline]
fn offset(r: usize, j: usize) -> usize {
    (r - 1) * r / 2 + (j - 1)
}

/// Lower-triangular matrix of e-values produced by the `U_n` family.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryMatrix {
    order: UStatOrder,
    entries: TriMatrix,
}

impl DiscoveryMatrix {
    pub fn order(&self) -> UStatOrder {
        self.order
    }

    pub fn k(&self) -> usize {
        self.entries.k()
    }

    pub fn entries(&self) -> &TriMatrix {
        &self.entries
    }

    /// Evidence that the top `r` hypotheses hold at least `j` false nulls.
    pub fn query(&self, r: usize, j: usize) -> Result<f64> {
        self.entries.get(r, j)
    }
}

impl AsRef<TriMatrix> for DiscoveryMatrix {
    fn as_ref(&self) -> &TriMatrix {
        &self.entries
    }
}

/// Lower-triangular matrix of p-values.
#[derive(Debug, Clone, PartialEq)]
pub struct PMatrix {
    entries: TriMatrix,
}

impl PMatrix {
    pub fn new(entries: TriMatrix) -> Result<Self> {
        for (index, &value) in entries.values().iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::PValueOutOfRange { index, value });
            }
        }
        Ok(PMatrix { entries })
    }

    pub fn k(&self) -> usize {
        self.entries.k()
    }

    pub fn entries(&self) -> &TriMatrix {
        &self.entries
    }

    pub fn query(&self, r: usize, j: usize) -> Result<f64> {
        self.entries.get(r, j)
    }
}

impl AsRef<TriMatrix> for PMatrix {
    fn as_ref(&self) -> &TriMatrix {
        &self.entries
    }
}

/// Zero-based bounds of `S_{r,j}` in the sorted values: `lo..=hi`.
#[inline]
fn block(k: usize, r: usize, j: usize) -> (usize, usize) {
    (k - r, k - j)
}

/// Every candidate multiset merged from scratch by subset enumeration.
///
/// Costs `O(K^{3+n})`; meant as an oracle for small `K`.
pub fn build_dm_reference(s: &SortedEValues, n: UStatOrder) -> DiscoveryMatrix {
    let v = s.values();
    let k = v.len();
    let entries = TriMatrix::from_fn(k, |r, j| {
        let (lo, hi) = block(k, r, j);
        let mut best = f64::INFINITY;
        for i in 0..=(k - r) {
            let mut multiset = v[lo..=hi].to_vec();
            multiset.extend_from_slice(&v[..i]);
            let candidate = u_stat_slice(&multiset, n);
            if i == 0 || candidate < best {
                best = candidate;
            }
        }
        best
    });
    DiscoveryMatrix { order: n, entries }
}

/// Incremental engine: `O(n)` per candidate via running symmetric polynomials.
pub fn build_dm_fast(s: &SortedEValues, n: UStatOrder) -> DiscoveryMatrix {
    let v = s.values();
    let k = v.len();
    let rows: Vec<Vec<f64>> = (1..=k)
        .into_par_iter()
        .map(|r| (1..=r).map(|j| fast_cell(v, n, r, j)).collect())
        .collect();
    let entries = TriMatrix::from_rows(k, rows.concat()).expect("one row per r");
    DiscoveryMatrix { order: n, entries }
}

fn fast_cell(v: &[f64], n: UStatOrder, r: usize, j: usize) -> f64 {
    let k = v.len();
    let (lo, hi) = block(k, r, j);
    let mut acc = UStatAccumulator::new(n);
    for &e in &v[lo..=hi] {
        acc.push(e);
    }
    let mut best = acc.value_unchecked();
    for &e in &v[..k - r] {
        acc.push(e);
        let candidate = acc.value_unchecked();
        if candidate < best {
            best = candidate;
        }
    }
    best
}

/// Sort and build with the fast engine.
pub fn discovery_matrix(e: &EValueVec, n: UStatOrder) -> DiscoveryMatrix {
    build_dm_fast(&sort_evalues(e), n)
}

/// Entrywise Markov calibration `min(1, 1/DM_{r,j})`.
pub fn dm_to_pmatrix(dm: &DiscoveryMatrix) -> PMatrix {
    PMatrix {
        entries: dm.entries.map(e_to_p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(v: &[f64]) -> SortedEValues {
        sort_evalues(&EValueVec::new(v.to_vec()).unwrap())
    }

    fn order(n: usize) -> UStatOrder {
        UStatOrder::new(n).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn sorting() {
        let s = sorted(&[8.0, 1.0, 2.0]);
        assert_eq!(s.values(), &[1.0, 2.0, 8.0]);
        assert_eq!(s.perm(), &[1, 2, 0]);
        assert_eq!(s.unsorted(), vec![8.0, 1.0, 2.0]);

        let ties = sorted(&[5.0, 5.0, 5.0]);
        assert_eq!(ties.perm(), &[0, 1, 2]);

        let inf = sorted(&[f64::INFINITY, 0.0]);
        assert_eq!(inf.values(), &[0.0, f64::INFINITY]);
    }

    #[test]
    fn trimatrix_indexing() {
        let m = TriMatrix::from_fn(3, |r, j| (10 * r + j) as f64);
        assert_eq!(m.get(3, 2).unwrap(), 32.0);
        assert_eq!(m.row(2), &[21.0, 22.0]);
        assert!(m.get(2, 3).is_err());
        assert!(m.get(4, 1).is_err());
        assert!(m.get(1, 0).is_err());
        let cells: Vec<_> = m.iter().map(|(r, j, _)| (r, j)).collect();
        assert_eq!(cells, vec![(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]);
        assert!(TriMatrix::from_rows(3, vec![0.0; 5]).is_none());
    }

    // Hand-traced from the candidate multisets for e = (1, 2, 8).
    #[test]
    fn hand_trace_mean() {
        let s = sorted(&[1.0, 2.0, 8.0]);
        for dm in [build_dm_reference(&s, order(1)), build_dm_fast(&s, order(1))] {
            let expected = [
                ((1, 1), 11.0 / 3.0),
                ((2, 1), 11.0 / 3.0),
                ((2, 2), 1.5),
                ((3, 1), 11.0 / 3.0),
                ((3, 2), 1.5),
                ((3, 3), 1.0),
            ];
            for ((r, j), want) in expected {
                assert!(close(dm.query(r, j).unwrap(), want), "({r},{j})");
            }
        }
    }

    #[test]
    fn hand_trace_pairwise() {
        // min(U_2(8), U_2(8, 1), U_2(8, 1, 2)) = min(8, 8, 26/3)
        let s = sorted(&[1.0, 2.0, 8.0]);
        assert_eq!(build_dm_reference(&s, order(2)).query(1, 1).unwrap(), 8.0);
        assert_eq!(build_dm_fast(&s, order(2)).query(1, 1).unwrap(), 8.0);
    }

    #[test]
    fn constant_inputs() {
        let dm = build_dm_fast(&sorted(&[2.0; 4]), order(2));
        for (r, j, v) in dm.entries().iter() {
            assert_eq!(v, if j < r { 4.0 } else { 2.0 }, "({r},{j})");
        }
        let dm = build_dm_fast(&sorted(&[0.7; 5]), order(1));
        assert!(dm.entries().values().iter().all(|&v| close(v, 0.7)));
    }

    #[test]
    fn single_value() {
        for n in 1..=3 {
            let dm = build_dm_fast(&sorted(&[3.5]), order(n));
            assert_eq!(dm.k(), 1);
            assert_eq!(dm.query(1, 1).unwrap(), 3.5);
        }
    }

    #[test]
    fn query_bounds() {
        let dm = build_dm_fast(&sorted(&[1.0, 2.0, 8.0]), order(1));
        assert_eq!(dm.query(3, 3).unwrap(), 1.0);
        assert_eq!(
            dm.query(2, 3),
            Err(Error::IndexOutOfRange { r: 2, j: 3, k: 3 })
        );
    }

    #[test]
    fn calibration() {
        let dm = build_dm_fast(&sorted(&[0.0, 20.0, f64::INFINITY]), order(1));
        let pm = dm_to_pmatrix(&dm);
        assert_eq!(dm.query(1, 1).unwrap(), f64::INFINITY);
        assert_eq!(pm.query(1, 1).unwrap(), 0.0);
        // min(U_1(20), U_1(20, 0))
        assert_eq!(dm.query(2, 2).unwrap(), 10.0);
        assert!(close(pm.query(2, 2).unwrap(), 0.1));
        assert_eq!(pm.query(3, 3).unwrap(), 1.0);
    }

    #[test]
    fn pmatrix_validates() {
        assert!(PMatrix::new(TriMatrix::from_fn(2, |_, _| 0.5)).is_ok());
        assert!(PMatrix::new(TriMatrix::from_fn(2, |r, _| r as f64)).is_err());
    }
}
