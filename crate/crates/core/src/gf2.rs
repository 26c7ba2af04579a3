//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words, bit `i` living in word `i / 64`.
//! Every listing produced here (kernel bases, row spaces) is returned in a
//! canonical order so downstream results are reproducible.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of rows `row_space` is willing to expand.
pub const DEFAULT_ROW_SPACE_LIMIT: usize = 30;

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector from 0/1 entries; any nonzero entry counts as 1.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Reads the low `len` bits of `mask`, bit `i` becoming coordinate `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len.min(64) {
            if mask >> i & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Checked access; `None` outside `[0, len)`.
    pub fn try_get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// The vector read as a binary integer (low index = low bit); `len <= 64`.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= 64, "vector too long for a u64 mask");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

}

impl Ord for BitVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A `rows × cols` matrix over GF(2), stored row by row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
            cols: n,
        }
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {bad} has length {} but the matrix has {cols} columns",
                rows[bad].len()
            )));
        }
        Ok(Self { rows, cols })
    }

    /// Builds a matrix from 0/1 rows; entries other than 0 and 1 are rejected.
    pub fn from_u8_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut out = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has length {} but row 0 has {cols}",
                    row.len()
                )));
            }
            if let Some(c) = row.iter().position(|&x| x > 1) {
                return Err(Error::Dimension(format!(
                    "entry ({r},{c}) = {} is not 0 or 1",
                    row[c]
                )));
            }
            out.push(BitVec::from_bits(row.iter().map(|&x| x == 1)));
        }
        Ok(Self { rows: out, cols })
    }

    /// Builds a matrix whose `j`th column is `columns[j]`.
    pub fn from_columns(columns: &[BitVec], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {j} has length {} but the matrix has {rows} rows",
                    c.len()
                )));
            }
            for i in c.iter_ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_bits(self.rows.iter().map(|r| r.get(j)))
    }

    pub fn columns(&self) -> Vec<BitVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        BitVec::from_bits(self.rows.iter().map(|r| r.dot(v)))
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch in matrix product");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix {
            rows,
            cols: other.cols,
        }
    }

    /// Reduced row echelon form together with the pivot column of each nonzero row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        (
            BitMatrix {
                rows,
                cols: self.cols,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        for r in &self.rows {
            basis.insert(r.clone());
        }
        basis.rank()
    }

    /// Basis of `{x : Ax = 0}`, sorted ascending as binary integers.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis: Vec<BitVec> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVec::unit(self.cols, f);
                for (k, &p) in pivots.iter().enumerate() {
                    if rref.rows[k].get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect();
        basis.sort();
        basis
    }

    /// All elements of the row space, see [`RowSpace`].
    pub fn row_space(&self) -> Result<RowSpace> {
        self.row_space_with_limit(DEFAULT_ROW_SPACE_LIMIT)
    }

    pub fn row_space_with_limit(&self, limit: usize) -> Result<RowSpace> {
        if self.rows.len() > limit {
            return Err(Error::RowSpaceTooLarge {
                rows: self.rows.len(),
                limit,
            });
        }
        // greedy basis: keep each row that is independent of the earlier ones
        let mut echelon = EchelonBasis::new(self.cols);
        let mut basis_rows = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            if echelon.insert(r.clone()) {
                basis_rows.push(i);
            }
        }
        let k = basis_rows.len();
        let mut elements = Vec::with_capacity(1 << k);
        for mask in 0u64..(1u64 << k) {
            let mut v = BitVec::zeros(self.cols);
            for (b, &i) in basis_rows.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    v.xor_assign(&self.rows[i]);
                }
            }
            elements.push(RowSpaceElement {
                coefficients: BitVec::from_mask(k, mask),
                vector: v,
            });
        }
        Ok(RowSpace {
            basis_rows,
            elements,
        })
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        let mut a = self.rows.clone();
        let mut inv: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
        for c in 0..n {
            let p = (c..n).find(|&i| a[i].get(c))?;
            a.swap(c, p);
            inv.swap(c, p);
            let (pa, pi) = (a[c].clone(), inv[c].clone());
            for i in 0..n {
                if i != c && a[i].get(c) {
                    a[i].xor_assign(&pa);
                    inv[i].xor_assign(&pi);
                }
            }
        }
        Some(BitMatrix { rows: inv, cols: n })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, "]")
    }
}

/// One element of a row space with its coordinates over the chosen row basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpaceElement {
    pub coefficients: BitVec,
    pub vector: BitVec,
}

/// The full row space of a matrix, ordered by ascending coefficient bitmask.
#[derive(Clone, Debug)]
pub struct RowSpace {
    /// Indices of the matrix rows used as the basis.
    pub basis_rows: Vec<usize>,
    pub elements: Vec<RowSpaceElement>,
}

impl RowSpace {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Returns the invertible `G` with `G · vectors[i] = e_{i+1}`.
pub fn find_basis_change(vectors: &[BitVec], n: usize) -> Result<BitMatrix> {
    if vectors.len() != n {
        return Err(Error::Dimension(format!(
            "expected {n} vectors, got {}",
            vectors.len()
        )));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::Dimension(format!(
            "vector of length {} in Z_2^{n}",
            v.len()
        )));
    }
    let v = BitMatrix::from_columns(vectors, n)?;
    v.inverse().ok_or(Error::DependentVectors)
}

/// Incremental echelon basis keyed by lowest set bit.
///
/// Each stored vector has a distinct lowest set bit (its pivot) and is zero at
/// every other pivot lower than its own, so `reduce` is a single ascending pass.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    by_pivot: Vec<Option<BitVec>>,
    pivot_mask: Vec<u64>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            by_pivot: vec![None; len],
            pivot_mask: vec![0; len.div_ceil(64)],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.by_pivot[i].is_some()
    }

    /// Adds `v` to the span; returns `true` if the rank grew.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.len);
        while let Some(p) = v.first_one() {
            match &self.by_pivot[p] {
                Some(row) => v.xor_assign(row),
                None => {
                    self.pivot_mask[p / 64] |= 1u64 << (p % 64);
                    self.by_pivot[p] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    /// Reduces `v` so that it vanishes on every pivot coordinate.
    pub fn reduce(&self, v: &mut BitVec) {
        debug_assert_eq!(v.len(), self.len);
        // a row with pivot p only touches bits >= p, so one ascending pass suffices
        for k in 0..self.pivot_mask.len() {
            loop {
                let w = v.words[k] & self.pivot_mask[k];
                if w == 0 {
                    break;
                }
                let p = k * 64 + w.trailing_zeros() as usize;
                v.xor_assign(self.by_pivot[p].as_ref().unwrap());
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_u8_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn bv(bits: &[u8]) -> BitVec {
        BitVec::from_bits(bits.iter().map(|&b| b == 1))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 0, 1], &[0, 1, 1]]).rank(), 2);
        assert_eq!(BitMatrix::zeros(2, 3).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(m(&[&[1, 0, 1], &[0, 1, 1]]).kernel_basis(), vec![bv(&[1, 1, 1])]);
        assert!(BitMatrix::identity(2).kernel_basis().is_empty());
        let k = BitMatrix::zeros(2, 3).kernel_basis();
        assert_eq!(k, vec![bv(&[1, 0, 0]), bv(&[0, 1, 0]), bv(&[0, 0, 1])]);
    }

    #[test]
    fn row_space_examples() {
        let rs = m(&[&[1, 0, 1], &[0, 1, 1]]).row_space().unwrap();
        let vs: Vec<_> = rs.elements.iter().map(|e| e.vector.clone()).collect();
        assert_eq!(vs, vec![bv(&[0, 0, 0]), bv(&[1, 0, 1]), bv(&[0, 1, 1]), bv(&[1, 1, 0])]);
        let rs = BitMatrix::zeros(1, 3).row_space().unwrap();
        assert_eq!(rs.len(), 1);
        assert!(rs.elements[0].vector.is_zero());
        assert_eq!(BitMatrix::identity(2).row_space().unwrap().len(), 4);
    }

    #[test]
    fn row_space_guard() {
        let a = BitMatrix::zeros(31, 2);
        assert!(matches!(a.row_space(), Err(Error::RowSpaceTooLarge { rows: 31, .. })));
        assert!(a.row_space_with_limit(40).is_ok());
    }

    #[test]
    fn basis_change_examples() {
        let e = |i| BitVec::unit(3, i);
        assert_eq!(find_basis_change(&[e(0), e(1), e(2)], 3).unwrap(), BitMatrix::identity(3));
        // G e1 = e1 and G(e1+e2) = e2 force the columns (1,0) and (1,1)
        let g = find_basis_change(&[bv(&[1, 0]), bv(&[1, 1])], 2).unwrap();
        assert_eq!(g, BitMatrix::from_columns(&[bv(&[1, 0]), bv(&[1, 1])], 2).unwrap());
        // columns of G are (1,1,1), e2, e3
        let g = find_basis_change(&[bv(&[1, 1, 1]), e(1), e(2)], 3).unwrap();
        assert_eq!(g, BitMatrix::from_columns(&[bv(&[1, 1, 1]), e(1), e(2)], 3).unwrap());
        for (i, v) in [bv(&[1, 1, 1]), e(1), e(2)].iter().enumerate() {
            assert_eq!(g.mul_vec(v), e(i));
        }
    }

    #[test]
    fn basis_change_errors() {
        let e = |i| BitVec::unit(2, i);
        assert!(matches!(find_basis_change(&[e(0), e(0)], 2), Err(Error::DependentVectors)));
        assert!(find_basis_change(&[e(0)], 2).is_err());
    }

    #[test]
    fn out_of_range_access() {
        let v = BitVec::zeros(3);
        assert_eq!(v.try_get(3), None);
        assert!(std::panic::catch_unwind(|| v.get(5)).is_err());
    }

    #[test]
    fn ordering_is_binary_integer_order() {
        assert!(bv(&[1, 1, 0]) < bv(&[0, 0, 1]));
        assert!(bv(&[0, 1, 0]) > bv(&[1, 0, 0]));
    }
}
