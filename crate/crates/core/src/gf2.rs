//! Dense bit-packed linear algebra over GF(2).

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
fn highest_bit_below(words: &[u64], word_limit: usize) -> Option<usize> {
    words[..word_limit]
        .iter()
        .enumerate()
        .rev()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
}

#[inline]
fn lowest_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

/// A fixed-length vector over GF(2). Padding bits are always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones exactly at `positions`.
    /// Repeated positions cancel.
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in positions {
            v.flip(p);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, index 0 first.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => invalid(format!("not a bit: {other:?}")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        xor_words(&mut self.words, &other.words);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn lowest_set(&self) -> Option<usize> {
        lowest_bit(&self.words)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + b)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Row-major packed matrix over GF(2). Built once through
/// [`BitMatrixBuilder`] and read-only afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct BitMatrixBuilder {
    inner: BitMatrix,
}

impl BitMatrixBuilder {
    pub fn new(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrixBuilder {
            inner: BitMatrix {
                rows,
                cols,
                stride,
                data: vec![0; rows * stride],
            },
        }
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize) -> &mut Self {
        let m = &mut self.inner;
        assert!(row < m.rows && col < m.cols, "({row}, {col}) out of range");
        m.data[row * m.stride + col / WORD] |= 1u64 << (col % WORD);
        self
    }

    #[inline]
    pub fn flip(&mut self, row: usize, col: usize) -> &mut Self {
        let m = &mut self.inner;
        assert!(row < m.rows && col < m.cols, "({row}, {col}) out of range");
        m.data[row * m.stride + col / WORD] ^= 1u64 << (col % WORD);
        self
    }

    pub fn build(self) -> BitMatrix {
        self.inner
    }
}

impl BitMatrix {
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut b = BitMatrixBuilder::new(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return invalid(format!("row {i} has length {}, expected {cols}", r.len()));
            }
            b.inner.data[i * b.inner.stride..(i + 1) * b.inner.stride].copy_from_slice(r.words());
        }
        Ok(b.build())
    }

    pub fn identity(n: usize) -> Self {
        let mut b = BitMatrixBuilder::new(n, n);
        for i in 0..n {
            b.set(i, i);
        }
        b.build()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "({row}, {col}) out of range");
        self.data[row * self.stride + col / WORD] >> (col % WORD) & 1 == 1
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn column_weight(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, j)).count()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut b = BitMatrixBuilder::new(self.cols, self.rows);
        for i in 0..self.rows {
            for (w, &word) in self.row_words(i).iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let j = w * WORD + word.trailing_zeros() as usize;
                    b.set(j, i);
                    word &= word - 1;
                }
            }
        }
        b.build()
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = BitMatrixBuilder::new(self.rows, other.cols);
        let stride = out.inner.stride;
        for i in 0..self.rows {
            let dst = &mut out.inner.data[i * stride..(i + 1) * stride];
            for j in 0..self.cols {
                if self.get(i, j) {
                    xor_words(dst, other.row_words(j));
                }
            }
        }
        Ok(out.build())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Rank over GF(2). Works on a private copy.
    pub fn rank(&self) -> usize {
        Echelon::new(self).rank()
    }

    /// Whether `v` is a GF(2) combination of the rows.
    pub fn in_row_space(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.cols {
            return invalid(format!(
                "vector has length {}, matrix has {} columns",
                v.len(),
                self.cols
            ));
        }
        Ok(Echelon::new(self).reduce(v).is_zero())
    }
}

/// Row echelon form produced by eliminating rows in order.
///
/// Each row is reduced against earlier pivot rows, where the pivot of a row
/// is its highest set bit. A reduced row only has bits at or below its
/// pivot, so each XOR touches the words up to the pivot word and nothing
/// more. For boundary matrices listed in colex order this keeps fill-in
/// local to the low end of the row.
pub(crate) struct Echelon {
    stride: usize,
    cols: usize,
    data: Vec<u64>,
    // pivot_row[c] is the row whose pivot is column c
    pivot_row: Vec<u32>,
    rank: usize,
}

const NO_PIVOT: u32 = u32::MAX;

impl Echelon {
    pub(crate) fn new(m: &BitMatrix) -> Self {
        assert!(m.rows < NO_PIVOT as usize);
        let mut e = Echelon {
            stride: m.stride,
            cols: m.cols,
            data: m.data.clone(),
            pivot_row: vec![NO_PIVOT; m.cols],
            rank: 0,
        };
        for r in 0..m.rows {
            e.eliminate_row(r);
        }
        e
    }

    fn eliminate_row(&mut self, r: usize) {
        let stride = self.stride;
        let (done, rest) = self.data.split_at_mut(r * stride);
        let row = &mut rest[..stride];
        let mut limit = stride;
        while let Some(top) = highest_bit_below(row, limit) {
            let p = self.pivot_row[top];
            if p == NO_PIVOT {
                self.pivot_row[top] = r as u32;
                self.rank += 1;
                return;
            }
            limit = top / WORD + 1;
            let p = p as usize;
            xor_words(&mut row[..limit], &done[p * stride..p * stride + limit]);
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let mut out = v.clone();
        let mut limit = self.stride;
        while let Some(top) = highest_bit_below(&out.words, limit) {
            let p = self.pivot_row[top];
            if p == NO_PIVOT {
                break;
            }
            limit = top / WORD + 1;
            let p = p as usize;
            xor_words(
                &mut out.words[..limit],
                &self.data[p * self.stride..p * self.stride + limit],
            );
        }
        out
    }
}

/// Incrementally maintained basis of a column space.
///
/// Every stored column has a 1 at its own pivot position and 0 at every
/// other pivot position, so reducing a new column costs one XOR per pivot
/// position where that column is set.
#[derive(Clone, Debug)]
pub struct ColumnBasis {
    ambient_dim: usize,
    pivots: Vec<(usize, BitVector)>,
    slot_of: Vec<u32>,
}

impl ColumnBasis {
    pub fn new(ambient_dim: usize) -> Self {
        ColumnBasis {
            ambient_dim,
            pivots: Vec::new(),
            slot_of: vec![NO_PIVOT; ambient_dim],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `(pivot_position, reduced_column)` pairs in insertion order.
    pub fn pivots(&self) -> &[(usize, BitVector)] {
        &self.pivots
    }

    /// Adds `col` to the spanning set. Returns whether the rank increased.
    pub fn insert_column(&mut self, col: &BitVector) -> Result<bool> {
        self.check_len(col)?;
        let residue = self.residue(col);
        Ok(self.absorb(residue))
    }

    /// Same as [`insert_column`](Self::insert_column) for a column given by
    /// its set positions (repeats cancel).
    pub fn insert_sparse(&mut self, positions: &[usize]) -> Result<bool> {
        if let Some(&p) = positions.iter().find(|&&p| p >= self.ambient_dim) {
            return invalid(format!("position {p} outside ambient dimension {}", self.ambient_dim));
        }
        let col = BitVector::from_positions(self.ambient_dim, positions);
        let residue = self.residue(&col);
        Ok(self.absorb(residue))
    }

    /// Whether `v` lies in the span of the inserted columns.
    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        self.check_len(v)?;
        Ok(self.residue(v).is_zero())
    }

    fn check_len(&self, v: &BitVector) -> Result<()> {
        if v.len() != self.ambient_dim {
            return invalid(format!(
                "column has length {}, basis ambient dimension is {}",
                v.len(),
                self.ambient_dim
            ));
        }
        Ok(())
    }

    fn residue(&self, v: &BitVector) -> BitVector {
        // Stored columns vanish on each other's pivots, so the bit of the
        // residue at a pivot is decided by `v` alone.
        let mut acc = v.clone();
        for p in v.iter_ones() {
            let slot = self.slot_of[p];
            if slot != NO_PIVOT {
                acc.xor_assign(&self.pivots[slot as usize].1);
            }
        }
        acc
    }

    fn absorb(&mut self, residue: BitVector) -> bool {
        let Some(pivot) = residue.lowest_set() else {
            return false;
        };
        let first = pivot / WORD;
        let last = residue.words.iter().rposition(|&w| w != 0).unwrap();
        let (word, mask) = (pivot / WORD, 1u64 << (pivot % WORD));
        for (_, col) in self.pivots.iter_mut() {
            if col.words[word] & mask != 0 {
                xor_words(&mut col.words[first..=last], &residue.words[first..=last]);
            }
        }
        self.slot_of[pivot] = self.pivots.len() as u32;
        self.pivots.push((pivot, residue));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matrix(rows: &[&str]) -> BitMatrix {
        let rows: Vec<BitVector> = rows.iter().map(|r| BitVector::parse(r).unwrap()).collect();
        BitMatrix::from_rows(rows[0].len(), &rows).unwrap()
    }

    /// Rank by exhaustive span enumeration: log2 of the number of distinct
    /// row combinations. Independent of the elimination code.
    fn brute_rank(m: &BitMatrix) -> usize {
        assert!(m.rows() <= 16 && m.cols() <= 64);
        let rows: Vec<u64> = (0..m.rows())
            .map(|i| (0..m.cols()).fold(0u64, |acc, j| acc | (m.get(i, j) as u64) << j))
            .collect();
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let v = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |a, (_, r)| a ^ r);
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, density: f64) -> BitMatrix {
        let mut b = BitMatrixBuilder::new(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(density) {
                    b.set(i, j);
                }
            }
        }
        b.build()
    }

    fn k4_incidence() -> BitMatrix {
        // vertices x edges {01,02,12,03,13,23}
        matrix(&["110100", "101010", "011001", "000111"])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(matrix(&["111", "111", "111"]).rank(), 1);
        assert_eq!(k4_incidence().rank(), 3);
        assert_eq!(brute_rank(&k4_incidence()), 3);
        assert_eq!(BitMatrixBuilder::new(0, 5).build().rank(), 0);
        assert_eq!(BitMatrixBuilder::new(4, 0).build().rank(), 0);
    }

    #[test]
    fn rank_does_not_mutate() {
        let m = k4_incidence();
        let copy = m.clone();
        let _ = m.rank();
        assert_eq!(m, copy);
    }

    #[test]
    fn rank_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let rows = rng.gen_range(1..=12);
            let cols = rng.gen_range(1..=64);
            let density = rng.gen_range(0.05..0.7);
            let m = random_matrix(&mut rng, rows, cols, density);
            assert_eq!(m.rank(), brute_rank(&m));
        }
    }

    #[test]
    fn multi_word_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 10, 200, 0.02);
            // same rank computed on the narrow transpose
            assert_eq!(m.rank(), m.transpose().rank());
            assert!(m.rank() <= 10);
        }
    }

    #[test]
    fn in_row_space_examples() {
        let m = matrix(&["110", "011"]);
        assert!(m.in_row_space(&BitVector::parse("000").unwrap()).unwrap());
        assert!(m.in_row_space(&BitVector::parse("110").unwrap()).unwrap());
        assert!(m.in_row_space(&BitVector::parse("011").unwrap()).unwrap());
        assert!(m.in_row_space(&BitVector::parse("101").unwrap()).unwrap());
        assert!(!m.in_row_space(&BitVector::parse("100").unwrap()).unwrap());
        assert!(m.in_row_space(&BitVector::parse("10").unwrap()).is_err());
    }

    #[test]
    fn insert_column_examples() {
        let mut b = ColumnBasis::new(4);
        assert!(!b.insert_column(&BitVector::zeros(4)).unwrap());
        let e1 = BitVector::from_positions(4, &[1]);
        assert!(b.insert_column(&e1).unwrap());
        assert!(!b.insert_column(&e1).unwrap());
        assert_eq!(b.rank(), 1);
        assert!(b.insert_column(&BitVector::zeros(5)).is_err());
        assert!(b.insert_sparse(&[4]).is_err());
    }

    #[test]
    fn k4_columns_any_order() {
        let m = k4_incidence();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let mut cols: Vec<usize> = (0..6).collect();
            rand::seq::SliceRandom::shuffle(&mut cols[..], &mut rng);
            let mut b = ColumnBasis::new(4);
            for c in cols {
                b.insert_column(&m.column(c)).unwrap();
            }
            assert_eq!(b.rank(), 3);
        }
    }

    #[test]
    fn basis_stays_fully_reduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut b = ColumnBasis::new(90);
        for _ in 0..120 {
            let positions: Vec<usize> = (0..3).map(|_| rng.gen_range(0..90)).collect();
            b.insert_sparse(&positions).unwrap();
            for (i, (p, col)) in b.pivots().iter().enumerate() {
                assert!(col.get(*p));
                for (j, (q, _)) in b.pivots().iter().enumerate() {
                    if i != j {
                        assert!(!col.get(*q));
                    }
                }
            }
        }
    }

    #[test]
    fn incremental_rank_matches_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=64);
            let cols = rng.gen_range(1..=64);
            let density = rng.gen_range(0.02..0.6);
            let m = random_matrix(&mut rng, rows, cols, density);
            let mut order: Vec<usize> = (0..cols).collect();
            rand::seq::SliceRandom::shuffle(&mut order[..], &mut rng);
            let mut b = ColumnBasis::new(rows);
            let mut last = 0;
            for c in order {
                b.insert_column(&m.column(c)).unwrap();
                assert!(b.rank() == last || b.rank() == last + 1);
                last = b.rank();
            }
            assert_eq!(b.rank(), m.rank());
            assert!(m.rank() <= rows.min(cols));
        }
    }

    #[test]
    fn mul_and_contains() {
        let m = k4_incidence();
        let mut b = ColumnBasis::new(4);
        for c in 0..6 {
            b.insert_column(&m.column(c)).unwrap();
        }
        // column space of the incidence matrix is the even-weight vectors
        assert!(b.contains(&BitVector::parse("1100").unwrap()).unwrap());
        assert!(b.contains(&BitVector::parse("1111").unwrap()).unwrap());
        assert!(!b.contains(&BitVector::parse("1000").unwrap()).unwrap());
        let ones = matrix(&["1111"]);
        assert!(ones.mul(&m).unwrap().is_zero());
        assert!(m.mul(&m).is_err());
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(seed in any::<u64>(), rows in 1usize..40, cols in 1usize..90) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols, 0.3);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn row_combination_is_in_row_space(seed in any::<u64>(), rows in 1usize..20, cols in 1usize..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols, 0.2);
            let mut v = BitVector::zeros(cols);
            for i in 0..rows {
                if rng.gen_bool(0.5) {
                    v.xor_assign(&m.row(i));
                }
            }
            prop_assert!(m.in_row_space(&v).unwrap());
        }
    }
}
