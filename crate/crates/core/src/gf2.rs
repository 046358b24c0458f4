//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are packed into `u64` words, least significant bit first. Padding
//! bits past the last column are kept at zero so that whole-word operations
//! (popcount, equality, hashing) never see garbage.
//!
//! Row reduction follows one fixed procedure: columns are scanned left to
//! right, the first row at or below the current rank with a 1 in that column
//! becomes the pivot, it is swapped into place and the column is cleared
//! from every other row. Kernel bases and their weight statistics depend on
//! this order, so it must not change.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Fixed-length bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_padding();
        v
    }

    /// Vector of length `len` with the listed positions set. Repeated
    /// indices cancel.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        let mut v = Self { len, words };
        v.clear_padding();
        v
    }

    fn clear_padding(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        parity_and(&self.words, &other.words)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        xor_words(&mut self.words, &other.words);
    }
}

impl std::ops::BitXor for &BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}](", self.len)?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

#[inline]
fn parity_and(a: &[u64], b: &[u64]) -> bool {
    let ones: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
    ones & 1 == 1
}

/// Row-major bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

/// Output of [`BinaryMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrefResult {
    pub rref: BinaryMatrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has length {}, expected {cols}",
                    row.len()
                )));
            }
            m.row_words_mut(r).copy_from_slice(row.words());
        }
        Ok(m)
    }

    /// Builds a matrix from a dense 0/1 table; any nonzero entry counts as 1.
    pub fn from_dense(cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has length {}, expected {cols}",
                    row.len()
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                if x != 0 {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_iter(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.row_weight(r)).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut out = vec![0; self.cols];
        for r in 0..self.rows {
            for c in self.row(r).ones_iter() {
                out[c] += 1;
            }
        }
        out
    }

    /// Sorted column indices of the set entries in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).ones_iter().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones_iter() {
                t.set(c, r, true);
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.bits.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// XORs row `src` into row `dst`.
    fn add_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (lo, hi) = self.bits.split_at_mut(dst.max(src) * s);
        let (d, sr) = if dst < src {
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        xor_words(d, sr);
    }

    /// Fully reduced row-echelon form.
    pub fn rref(&self) -> RrefResult {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, piv);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.add_row(r, rank);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        RrefResult {
            rref: m,
            pivot_columns: pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// One basis vector per free column, in increasing free-column order.
    /// The vector for free column `f` has bit `f` set plus the pivot column
    /// of every reduced row that has a 1 at `f`.
    pub fn kernel_basis(&self) -> BinaryMatrix {
        let RrefResult {
            rref,
            pivot_columns,
            ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivot_columns {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BinaryMatrix::zeros(free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, true);
            for (i, &pc) in pivot_columns.iter().enumerate() {
                if rref.get(i, fc) {
                    basis.set(b, pc, true);
                }
            }
        }
        basis
    }

    /// The nonzero rows of the reduced form: a canonical row-space basis.
    pub fn row_space(&self) -> BinaryMatrix {
        let RrefResult { rref, rank, .. } = self.rref();
        let mut out = rref;
        out.rows = rank;
        out.bits.truncate(rank * out.stride);
        out
    }

    /// Whether `v` is a GF(2) combination of the rows of `self`, which must
    /// already be in reduced row-echelon form (e.g. the output of
    /// [`row_space`](Self::row_space)).
    pub fn in_row_space(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match basis width {}",
                v.len(),
                self.cols
            )));
        }
        let mut rest = v.words().to_vec();
        for r in 0..self.rows {
            let row = self.row_words(r);
            let Some(pivot) = first_one_words(row) else {
                continue;
            };
            if (rest[pivot / WORD_BITS] >> (pivot % WORD_BITS)) & 1 == 1 {
                xor_words(&mut rest, row);
            }
        }
        Ok(rest.iter().all(|&w| w == 0))
    }

    /// Computes `self · otherᵀ`, where `other_t` is given row-wise.
    pub fn mat_mul_mod2(&self, other_t: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other_t.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by transpose of {}x{}",
                self.rows, self.cols, other_t.rows, other_t.cols
            )));
        }
        let mut out = BinaryMatrix::zeros(self.rows, other_t.rows);
        for i in 0..self.rows {
            let a = self.row_words(i);
            for j in 0..other_t.rows {
                if parity_and(a, other_t.row_words(j)) {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v` over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match matrix width {}",
                v.len(),
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if parity_and(self.row_words(r), v.words()) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Stacks `v` under the rows of `self`.
    pub fn with_row(&self, v: &BitVec) -> Result<BinaryMatrix> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "row length {} does not match matrix width {}",
                v.len(),
                self.cols
            )));
        }
        let mut out = self.clone();
        out.rows += 1;
        out.bits.extend_from_slice(v.words());
        Ok(out)
    }
}

fn first_one_words(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(wi, &w)| wi * WORD_BITS + w.trailing_zeros() as usize)
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_rref(m: &[Vec<u8>], cols: usize) -> (Vec<Vec<u8>>, Vec<usize>) {
        let mut m = m.to_vec();
        let rows = m.len();
        let mut pivots = vec![];
        let mut r = 0;
        for col in 0..cols {
            let Some(piv) = (r..rows).find(|&i| m[i][col] == 1) else {
                continue;
            };
            m.swap(r, piv);
            for i in 0..rows {
                if i != r && m[i][col] == 1 {
                    let src = m[r].clone();
                    for (a, b) in m[i].iter_mut().zip(&src) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    // Rank as log2 of the number of distinct row-subset XORs.
    fn brute_rank(m: &BinaryMatrix) -> usize {
        let rows: Vec<BitVec> = m.row_iter().collect();
        let mut span = std::collections::HashSet::new();
        span.insert(BitVec::zeros(m.cols()));
        for row in &rows {
            let next: Vec<BitVec> = span.iter().map(|v| v ^ row).collect();
            span.extend(next);
        }
        span.len().trailing_zeros() as usize
    }

    fn dense_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (usize, Vec<Vec<u8>>)> {
        (1..=max_cols, 0..=max_rows).prop_flat_map(|(cols, rows)| {
            (
                Just(cols),
                prop::collection::vec(prop::collection::vec(0u8..=1, cols), rows),
            )
        })
    }

    fn to_dense(m: &BinaryMatrix) -> Vec<Vec<u8>> {
        (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u8).collect())
            .collect()
    }

    #[test]
    fn identity_rref() {
        let r = BinaryMatrix::identity(2).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_columns, vec![0, 1]);
        assert_eq!(r.rref, BinaryMatrix::identity(2));
    }

    #[test]
    fn zero_matrix_rref() {
        let r = BinaryMatrix::zeros(3, 4).rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivot_columns.is_empty());
        assert!(BinaryMatrix::zeros(3, 4).row_space().rows() == 0);
    }

    #[test]
    fn single_row_rank() {
        let m = BinaryMatrix::from_dense(3, &[vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_small_cases() {
        assert_eq!(BinaryMatrix::identity(5).kernel_basis().rows(), 0);
        let m = BinaryMatrix::from_dense(2, &[vec![1, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), BitVec::from_indices(2, [0, 1]));
        // zero matrix: standard basis
        let k = BinaryMatrix::zeros(3, 3).kernel_basis();
        assert_eq!(k, BinaryMatrix::identity(3));
    }

    #[test]
    fn row_space_of_duplicates() {
        let m = BinaryMatrix::from_dense(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let rs = m.row_space();
        assert_eq!(rs.rows(), 1);
        assert_eq!(rs.row(0), BitVec::from_indices(2, [0, 1]));
    }

    #[test]
    fn in_row_space_length_mismatch() {
        let rs = BinaryMatrix::identity(3).row_space();
        assert!(rs.in_row_space(&BitVec::zeros(4)).is_err());
        assert!(rs.in_row_space(&BitVec::zeros(3)).unwrap());
    }

    #[test]
    fn mat_mul_identity_and_mismatch() {
        let i = BinaryMatrix::identity(70);
        assert_eq!(i.mat_mul_mod2(&i).unwrap(), i);
        assert!(i.mat_mul_mod2(&BinaryMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn padding_stays_clear() {
        let v = BitVec::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
    }

    proptest! {
        #[test]
        fn packed_matches_naive((cols, dense) in dense_strategy(64, 130)) {
            let m = BinaryMatrix::from_dense(cols, &dense).unwrap();
            let got = m.rref();
            let (want, pivots) = naive_rref(&dense, cols);
            prop_assert_eq!(to_dense(&got.rref), want);
            prop_assert_eq!(got.rank, pivots.len());
            prop_assert_eq!(got.pivot_columns, pivots);
        }

        #[test]
        fn rref_is_idempotent((cols, dense) in dense_strategy(24, 40)) {
            let m = BinaryMatrix::from_dense(cols, &dense).unwrap();
            let once = m.rref().rref;
            prop_assert_eq!(once.rref().rref, once);
        }

        #[test]
        fn rank_matches_transpose_and_brute_force((cols, dense) in dense_strategy(12, 20)) {
            let m = BinaryMatrix::from_dense(cols, &dense).unwrap();
            let r = m.rank();
            prop_assert_eq!(r, m.transpose().rank());
            prop_assert_eq!(r, brute_rank(&m));
        }

        #[test]
        fn kernel_is_annihilated((cols, dense) in dense_strategy(30, 80)) {
            let m = BinaryMatrix::from_dense(cols, &dense).unwrap();
            let k = m.kernel_basis();
            prop_assert_eq!(k.rows(), cols - m.rank());
            prop_assert!(m.mat_mul_mod2(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.rows());
        }

        #[test]
        fn membership_matches_augmented_rank(
            (cols, dense) in dense_strategy(16, 24),
            seed in any::<u64>(),
        ) {
            let m = BinaryMatrix::from_dense(cols, &dense).unwrap();
            let rs = m.row_space();
            let mut bits = vec![false; cols];
            let mut s = seed;
            for b in bits.iter_mut() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *b = (s >> 33) & 1 == 1;
            }
            let v = BitVec::from_bools(&bits);
            let augmented = rs.with_row(&v).unwrap().rank();
            prop_assert_eq!(rs.in_row_space(&v).unwrap(), augmented == rs.rows());
            // every row of m is a member
            for row in m.row_iter() {
                prop_assert!(rs.in_row_space(&row).unwrap());
            }
        }
    }
}
