//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words; matrices are stored column-major
//! so that a column is a chain and a matrix is a list of chains. All
//! elimination uses the same pivot rule (the lowest set bit of each vector,
//! columns processed in index order), so bases and representatives are
//! reproducible from run to run.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(WORD)], len }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b & 1 == 1).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND, i.e. the standard bilinear form.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// Returns true when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Keeps the coordinates where `mask` is set, in order.
    pub fn compress(&self, mask: &BitVec) -> BitVec {
        let kept: Vec<usize> = mask.ones().collect();
        let mut out = BitVec::zeros(kept.len());
        for (new, &old) in kept.iter().enumerate() {
            if self.get(old) {
                out.set(new, true);
            }
        }
        out
    }

    /// Inverse of [`compress`](Self::compress): scatters into a vector of length `mask.len()`.
    pub fn expand(&self, mask: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(mask.len());
        for (new, old) in mask.ones().enumerate() {
            if self.get(new) {
                out.set(old, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

/// A matrix over GF(2), stored as a list of columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    columns: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, columns: vec![BitVec::zeros(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, columns: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<BitVec>) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Self { rows, columns }
    }

    /// Builds a matrix from row-major 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].get(r)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.columns[c].set(r, value)
    }

    pub fn column(&self, c: usize) -> &BitVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<BitVec> {
        self.columns
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_indices(self.cols(), (0..self.cols()).filter(|&c| self.get(r, c)))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_bits()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols(), self.rows);
        for (c, col) in self.columns.iter().enumerate() {
            for r in col.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols(), "dimension mismatch in mul_vec");
        let mut out = BitVec::zeros(self.rows);
        for c in v.ones() {
            out.xor_assign(&self.columns[c]);
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in mul");
        Gf2Matrix { rows: self.rows, columns: rhs.columns.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn add(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()), "dimension mismatch in add");
        let mut out = self.clone();
        for (a, b) in out.columns.iter_mut().zip(&rhs.columns) {
            a.xor_assign(b);
        }
        out
    }

    /// Keeps only the rows selected by `mask`.
    pub fn select_rows(&self, mask: &BitVec) -> Gf2Matrix {
        Gf2Matrix { rows: mask.count_ones(), columns: self.columns.iter().map(|c| c.compress(mask)).collect() }
    }

    pub fn select_cols(&self, indices: &[usize]) -> Gf2Matrix {
        Gf2Matrix { rows: self.rows, columns: indices.iter().map(|&i| self.columns[i].clone()).collect() }
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.rows, 0);
        self.columns.iter().filter(|c| ech.insert((*c).clone(), BitVec::zeros(0)).is_none()).count()
    }

    /// Basis of `{v : Mv = 0}`, one vector per non-pivot column.
    pub fn nullspace_basis(&self) -> Vec<BitVec> {
        let n = self.cols();
        let mut ech = Echelon::new(self.rows, n);
        let mut out = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            if let Some(hist) = ech.insert(col.clone(), BitVec::unit(n, j)) {
                out.push(hist);
            }
        }
        out
    }

    /// Basis of the column space, made of the original pivot columns.
    pub fn image_basis(&self) -> Vec<BitVec> {
        let mut ech = Echelon::new(self.rows, 0);
        self.columns
            .iter()
            .filter(|c| ech.insert((*c).clone(), BitVec::zeros(0)).is_none())
            .cloned()
            .collect()
    }

    /// Solves `Mx = b`, returning one solution if `b` lies in the column space.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        let n = self.cols();
        let mut ech = Echelon::new(self.rows, n);
        for (j, col) in self.columns.iter().enumerate() {
            ech.insert(col.clone(), BitVec::unit(n, j));
        }
        let (rem, hist) = ech.reduce(b.clone());
        rem.is_zero().then_some(hist)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Gf2Matrix> {
        if !self.is_invertible() {
            return None;
        }
        let n = self.rows;
        let cols = (0..n).map(|i| self.solve(&BitVec::unit(n, i))).collect::<Option<Vec<_>>>()?;
        Some(Gf2Matrix::from_columns(n, cols))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols())?;
        for r in 0..self.rows {
            let s: String = (0..self.cols()).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

/// Row-major 0/1 form used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRows {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u8>>,
}

impl From<&Gf2Matrix> for MatrixRows {
    fn from(m: &Gf2Matrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), entries: m.to_rows() }
    }
}

impl From<&MatrixRows> for Gf2Matrix {
    fn from(m: &MatrixRows) -> Self {
        if m.rows == 0 {
            return Gf2Matrix::zeros(0, m.cols);
        }
        Gf2Matrix::from_rows(&m.entries)
    }
}

/// Incremental echelon form keyed by lowest set bit, with a history vector
/// per entry recording which inserted generators it is made of.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pivot_of_row: Vec<Option<usize>>,
    entries: Vec<(BitVec, BitVec)>,
    hist_len: usize,
}

impl Echelon {
    pub(crate) fn new(len: usize, hist_len: usize) -> Self {
        Self { pivot_of_row: vec![None; len], entries: Vec::new(), hist_len }
    }

    /// Reduces `v` as far as possible, returning the remainder and the
    /// history of the entries used.
    pub(crate) fn reduce(&self, mut v: BitVec) -> (BitVec, BitVec) {
        let mut hist = BitVec::zeros(self.hist_len);
        while let Some(p) = v.first_one() {
            match self.pivot_of_row[p] {
                Some(e) => {
                    let (vec, h) = &self.entries[e];
                    v.xor_assign(vec);
                    hist.xor_assign(h);
                }
                None => break,
            }
        }
        (v, hist)
    }

    /// Inserts `v` tagged with `hist`. Returns `None` if `v` was independent
    /// (and is now stored), or `Some(combination)` giving the history of a
    /// linear relation when `v` reduced to zero.
    pub(crate) fn insert(&mut self, v: BitVec, mut hist: BitVec) -> Option<BitVec> {
        let (rem, used) = self.reduce(v);
        hist.xor_assign(&used);
        match rem.first_one() {
            None => Some(hist),
            Some(p) => {
                self.pivot_of_row[p] = Some(self.entries.len());
                self.entries.push((rem, hist));
                None
            }
        }
    }
}

/// A basis of `span(Z) / span(B)` with a coordinate procedure.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    /// Positions in the input `Z` list of the chosen representatives.
    pub chosen: Vec<usize>,
    pub representatives: Vec<BitVec>,
    echelon: Echelon,
    rep_slot: Vec<Option<usize>>,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of `v` (an element of span(Z)) in the quotient basis.
    pub fn coordinates(&self, v: &BitVec) -> Result<BitVec> {
        let (rem, hist) = self.echelon.reduce(v.clone());
        if !rem.is_zero() {
            return Err(Error::NotInSpan);
        }
        let mut out = BitVec::zeros(self.dim());
        for z in hist.ones() {
            if let Some(slot) = self.rep_slot[z] {
                out.flip(slot);
            }
        }
        Ok(out)
    }

    /// True when `v` lies in span(B), i.e. represents the zero class.
    pub fn is_trivial(&self, v: &BitVec) -> Result<bool> {
        Ok(self.coordinates(v)?.is_zero())
    }
}

/// Computes a basis of `span(z) / span(b)`. All vectors must share a length.
pub fn quotient_basis(len: usize, z: &[BitVec], b: &[BitVec]) -> Result<QuotientBasis> {
    let mut zspan = Echelon::new(len, 0);
    for v in z {
        zspan.insert(v.clone(), BitVec::zeros(0));
    }
    if b.iter().any(|v| !zspan.reduce(v.clone()).0.is_zero()) {
        return Err(Error::QuotientPrecondition);
    }
    let mut echelon = Echelon::new(len, z.len());
    for v in b {
        echelon.insert(v.clone(), BitVec::zeros(z.len()));
    }
    let mut chosen = Vec::new();
    let mut rep_slot = vec![None; z.len()];
    for (i, v) in z.iter().enumerate() {
        if echelon.insert(v.clone(), BitVec::unit(z.len(), i)).is_none() {
            rep_slot[i] = Some(chosen.len());
            chosen.push(i);
        }
    }
    let representatives = chosen.iter().map(|&i| z[i].clone()).collect();
    Ok(QuotientBasis { chosen, representatives, echelon, rep_slot })
}
