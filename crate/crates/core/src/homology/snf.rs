//! Smith normal form of integer matrices.
//!
//! The matrix is first stripped of unit pivots by sparse elimination, which
//! for coboundary matrices removes almost everything. What survives is put
//! into normal form densely, always pivoting on the entry of least absolute
//! value. Arithmetic runs on `i64` with every operation checked; if a value
//! leaves the safe range the whole computation restarts on `BigInt`.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse integer matrix, one sorted `(column, value)` list per row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let sparse = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, &v)| (c, v))
                    .collect()
            })
            .collect();
        Self {
            nrows: rows.len(),
            ncols,
            rows: sparse,
        }
    }

    /// Builds from per-row entry lists; entries are sorted and zeros dropped.
    pub fn from_sparse_rows(ncols: usize, rows: Vec<Vec<(usize, i64)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|&(_, v)| v != 0);
                r.sort_by_key(|&(c, _)| c);
                r
            })
            .collect::<Vec<_>>();
        Self {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.rows[r]
            .binary_search_by_key(&c, |&(col, _)| col)
            .map_or(0, |k| self.rows[r][k].1)
    }

    pub fn row_entries(&self, r: usize) -> &[(usize, i64)] {
        &self.rows[r]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0; self.ncols];
                for &(c, v) in r {
                    d[c] = v;
                }
                d
            })
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = vec![0i64; other.ncols];
                for &(k, a) in r {
                    for &(c, b) in &other.rows[k] {
                        acc[c] += a * b;
                    }
                }
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != 0)
                    .collect()
            })
            .collect();
        IntMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }
}

/// Invariant factors `d_1 | d_2 | … | d_k`, zeros included, `k = min(rows, cols)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| !Zero::is_zero(*d) && !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let nonzero = match run::<Small>(a) {
        Some(f) => f,
        None => run::<BigInt>(a).expect("arbitrary precision cannot overflow"),
    };
    let k = a.nrows.min(a.ncols);
    let mut factors = nonzero;
    factors.resize(k, BigInt::zero());
    SmithForm { factors }
}

/// Ring operations the elimination needs; `None` signals overflow.
trait Entry: Clone + Debug + PartialEq {
    fn from_i64(v: i64) -> Option<Self>;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> Ordering;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn add(&self, b: &Self) -> Option<Self>;
    fn mul(&self, b: &Self) -> Option<Self>;
    /// Quotient rounding toward negative infinity.
    fn div_floor(&self, b: &Self) -> Self;
    fn divides(&self, b: &Self) -> bool;
    fn to_big_abs(&self) -> BigInt;
}

/// `i64` restricted to ±2^62 so that negation and floor division are safe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Small(i64);

const SMALL_BOUND: i128 = 1 << 62;

impl Small {
    fn checked(v: i128) -> Option<Small> {
        (v.abs() < SMALL_BOUND).then_some(Small(v as i64))
    }
}

impl Entry for Small {
    fn from_i64(v: i64) -> Option<Self> {
        Small::checked(v as i128)
    }
    fn is_nil(&self) -> bool {
        self.0 == 0
    }
    fn is_unit(&self) -> bool {
        self.0 == 1 || self.0 == -1
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.0.abs().cmp(&other.0.abs())
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Small::checked(self.0 as i128 - q.0 as i128 * b.0 as i128)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        Small::checked(self.0 as i128 + b.0 as i128)
    }
    fn mul(&self, b: &Self) -> Option<Self> {
        Small::checked(self.0 as i128 * b.0 as i128)
    }
    fn div_floor(&self, b: &Self) -> Self {
        Small(Integer::div_floor(&self.0, &b.0))
    }
    fn divides(&self, b: &Self) -> bool {
        b.0 % self.0 == 0
    }
    fn to_big_abs(&self) -> BigInt {
        BigInt::from(self.0.abs())
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> Option<Self> {
        Some(BigInt::from(v))
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        Some(self + b)
    }
    fn mul(&self, b: &Self) -> Option<Self> {
        Some(self * b)
    }
    fn div_floor(&self, b: &Self) -> Self {
        Integer::div_floor(self, b)
    }
    fn divides(&self, b: &Self) -> bool {
        Zero::is_zero(&(b % self))
    }
    fn to_big_abs(&self) -> BigInt {
        self.abs()
    }
}

type Row<T> = Vec<(usize, T)>;

/// `target - q * pivot` over sorted sparse rows.
fn row_sub_mul<T: Entry>(target: &Row<T>, q: &T, pivot: &Row<T>) -> Option<Row<T>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    let zero = T::from_i64(0)?;
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        match ci.cmp(&cj) {
            Ordering::Less => {
                out.push(target[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let v = zero.sub_mul(q, &pivot[j].1)?;
                out.push((cj, v));
                j += 1;
            }
            Ordering::Equal => {
                let v = target[i].1.sub_mul(q, &pivot[j].1)?;
                if !v.is_nil() {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Some(out)
}

/// Nonzero invariant factors (absolute values, ascending), or `None` on overflow.
fn run<T: Entry>(a: &IntMatrix) -> Option<Vec<BigInt>> {
    let mut rows: Vec<Option<Row<T>>> = Vec::with_capacity(a.nrows);
    for r in &a.rows {
        let mut row = Vec::with_capacity(r.len());
        for &(c, v) in r {
            row.push((c, T::from_i64(v)?));
        }
        rows.push((!row.is_empty()).then_some(row));
    }
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); a.ncols];
    for (r, row) in rows.iter().enumerate() {
        if let Some(row) = row {
            for (c, _) in row {
                col_rows[*c].push(r);
            }
        }
    }
    let mut col_done = vec![false; a.ncols];
    let mut units = 0usize;

    // sparse phase: eliminate unit pivots until none remain
    let mut progress = true;
    while progress {
        progress = false;
        for c in 0..a.ncols {
            if col_done[c] {
                continue;
            }
            // refresh the (possibly stale) list of rows touching column c
            let holders: Vec<(usize, T)> = {
                let mut seen = std::mem::take(&mut col_rows[c]);
                seen.sort_unstable();
                seen.dedup();
                let live: Vec<(usize, T)> = seen
                    .into_iter()
                    .filter_map(|r| {
                        rows[r].as_ref().and_then(|row| {
                            row.binary_search_by_key(&c, |e| e.0)
                                .ok()
                                .map(|k| (r, row[k].1.clone()))
                        })
                    })
                    .collect();
                col_rows[c] = live.iter().map(|(r, _)| *r).collect();
                live
            };
            if holders.is_empty() {
                col_done[c] = true;
                continue;
            }
            let pivot = holders
                .iter()
                .filter(|(_, v)| v.is_unit())
                .min_by_key(|(r, _)| rows[*r].as_ref().map_or(0, Vec::len));
            let Some((pr, pv)) = pivot.cloned() else { continue };
            let pivot_row = rows[pr].take().unwrap();
            for (r, v) in holders {
                if r == pr {
                    continue;
                }
                // v - (v * pv) * pv = 0 since pv = ±1
                let q = v.mul(&pv)?;
                let old = rows[r].take().unwrap();
                let new = row_sub_mul(&old, &q, &pivot_row)?;
                for (cc, _) in &new {
                    if !col_done[*cc] {
                        col_rows[*cc].push(r);
                    }
                }
                rows[r] = (!new.is_empty()).then_some(new);
            }
            col_done[c] = true;
            col_rows[c].clear();
            units += 1;
            progress = true;
        }
    }

    // dense phase on whatever is left
    let live_rows: Vec<Row<T>> = rows.into_iter().flatten().collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let zero = T::from_i64(0)?;
    let mut dense: Vec<Vec<T>> = live_rows
        .iter()
        .map(|r| {
            let mut d = vec![zero.clone(); live_cols.len()];
            for (c, v) in r {
                let k = live_cols.binary_search(c).unwrap();
                d[k] = v.clone();
            }
            d
        })
        .collect();
    let mut factors: Vec<BigInt> = vec![BigInt::one(); units];
    factors.extend(dense_snf(&mut dense)?);
    factors.sort();
    Some(factors)
}

/// Diagonalizes `m` in place; returns nonzero diagonal absolute values.
fn dense_snf<T: Entry>(m: &mut [Vec<T>]) -> Option<Vec<BigInt>> {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // minimal nonzero absolute value in the active block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !m[i][j].is_nil()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs_cmp(&m[bi][bj]) == Ordering::Less)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nr {
                if !m[i][t].is_nil() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    for j in t..nc {
                        m[i][j] = m[i][j].sub_mul(&q, &m[t][j])?;
                    }
                    if !m[i][t].is_nil() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..nc {
                if !m[t][j].is_nil() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    for i in t..nr {
                        m[i][j] = m[i][j].sub_mul(&q, &m[i][t])?;
                    }
                    if !m[t][j].is_nil() {
                        clean = false;
                    }
                }
            }
            if !clean {
                move_min_to_pivot(m, t);
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (t + 1..nr).find_map(|i| {
                (t + 1..nc)
                    .find(|&j| !m[t][t].divides(&m[i][j]))
                    .map(|_| i)
            });
            match bad {
                Some(i) => {
                    for j in t..nc {
                        m[t][j] = m[t][j].add(&m[i][j])?;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].to_big_abs());
        t += 1;
    }
    Some(out)
}

/// Moves the least nonzero entry of row `t` / column `t` onto the diagonal.
fn move_min_to_pivot<T: Entry>(m: &mut [Vec<T>], t: usize) {
    let nr = m.len();
    let nc = m[0].len();
    let mut best = (t, t);
    for i in t..nr {
        if !m[i][t].is_nil() && m[i][t].abs_cmp(&m[best.0][best.1]) == Ordering::Less {
            best = (i, t);
        }
    }
    for j in t..nc {
        if !m[t][j].is_nil() && m[t][j].abs_cmp(&m[best.0][best.1]) == Ordering::Less {
            best = (t, j);
        }
    }
    m.swap(t, best.0);
    for row in m.iter_mut() {
        row.swap(t, best.1);
    }
}

/// Prime-power decomposition of `n ≥ 2`, ascending.
pub fn primary_parts(n: &BigInt) -> Vec<u64> {
    let mut n = n.to_u64().expect("torsion coefficient exceeds u64");
    let mut parts = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            parts.push(q);
        }
        p += 1;
    }
    if n > 1 {
        parts.push(n);
    }
    parts.sort_unstable();
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_dense(rows))
            .factors
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf(&[vec![0, 0, 0], vec![0, 0, 0]]), vec![0, 0]);
        assert_eq!(snf(&[vec![2, 0], vec![0, 2]]), vec![2, 2]);
    }

    #[test]
    fn mixed_matrix() {
        // classic example with invariant factors 2, 6, 12
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(snf(&a), vec![2, 6, 12]);
    }

    #[test]
    fn unit_elimination_then_dense() {
        let a = vec![vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 4]];
        assert_eq!(snf(&a), vec![1, 2, 4]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1i64 << 61;
        let a = vec![vec![big, 3], vec![5, big]];
        let f = smith_normal_form(&IntMatrix::from_dense(&a)).factors;
        // det = 2^122 - 15, gcd of entries = 1
        assert_eq!(f[0], BigInt::one());
        let det = BigInt::from(big) * BigInt::from(big) - 15;
        assert_eq!(f[1], det);
    }

    #[test]
    fn primary_decomposition() {
        assert_eq!(primary_parts(&BigInt::from(12)), vec![3, 4]);
        assert_eq!(primary_parts(&BigInt::from(2)), vec![2]);
        assert_eq!(primary_parts(&BigInt::from(360)), vec![5, 8, 9]);
    }
}
