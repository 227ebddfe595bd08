//! Dense linear algebra over GF(2) with row-major, word-packed storage.
//!
//! Bit `j` of a row lives in word `j / 64` at bit position `j % 64`.
//! Padding bits past `cols` are always zero.

use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

mod bitvec;
pub use bitvec::BitVec;

const WORD: usize = 64;

/// Rows x words above which elimination sweeps run on the rayon pool.
const PAR_THRESHOLD: usize = 1 << 15;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Result of a Gauss-Jordan pass: reduced matrix (rank rows) and pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.reduced.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.reduced.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Null space basis: one vector per free column, with a 1 in that column.
    pub fn kernel(&self) -> BitMatrix {
        let cols = self.reduced.cols;
        let free = self.free_columns();
        let mut out = BitMatrix::zeros(free.len(), cols);
        if free.is_empty() {
            return out;
        }
        // Column access on the reduced matrix goes through its transpose.
        let t = self.reduced.transpose();
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            let col = t.row(f);
            for r in iter_ones(col) {
                out.set(k, self.pivots[r], true);
            }
        }
        out
    }
}

pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            }
        })
    })
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// In-place transpose of a 64x64 block; `a[i]` bit `j` becomes `a[j]` bit `i`.
fn transpose64(a: &mut [u64; 64]) {
    let mut j = 32usize;
    let mut m: u64 = 0x0000_0000_FFFF_FFFF;
    while j != 0 {
        let mut k = 0usize;
        while k < 64 {
            let t = ((a[k] >> j) ^ a[k + j]) & m;
            a[k] ^= t << j;
            a[k + j] ^= t;
            k = (k + j + 1) & !j;
        }
        j >>= 1;
        m ^= m << j;
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 strings, one per row.
    pub fn from_strs(rows: &[&str]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, |r| r.trim().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.trim();
            if r.len() != cols {
                return Err(Gf2Error::Parse {
                    line: i + 1,
                    msg: format!("expected {cols} columns, got {}", r.len()),
                });
            }
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => {
                        return Err(Gf2Error::Parse {
                            line: i + 1,
                            msg: format!("bad character {ch:?}"),
                        })
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[BitVec], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_mut(i).copy_from_slice(r.words());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let bit = 1u64 << (c % WORD);
        if v {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_vec(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row(r).to_vec())
    }

    pub fn col_vec(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        iter_ones(self.row(r))
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.row_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        xor_into(a, b);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = (a.min(b), a.max(b));
        let (x, y) = self.data.split_at_mut(hi * s);
        x[lo * s..lo * s + s].swap_with_slice(&mut y[..s]);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// True when every padding bit is zero.
    pub fn padding_clean(&self) -> bool {
        if self.cols.is_multiple_of(WORD) || self.stride == 0 {
            return true;
        }
        let mask = !tail_mask(self.cols);
        (0..self.rows).all(|r| self.data[r * self.stride + self.stride - 1] & mask == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        let rb = words_for(self.rows);
        let cb = self.stride;
        let mut block = [0u64; 64];
        for bi in 0..rb {
            for bj in 0..cb {
                let r0 = bi * WORD;
                let rn = (self.rows - r0).min(WORD);
                for k in 0..64 {
                    block[k] = if k < rn {
                        self.data[(r0 + k) * self.stride + bj]
                    } else {
                        0
                    };
                }
                transpose64(&mut block);
                let c0 = bj * WORD;
                let cn = (self.cols - c0).min(WORD);
                for (k, &w) in block.iter().enumerate().take(cn) {
                    out.data[(c0 + k) * out.stride + bi] = w;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        out.data
            .chunks_mut(s.max(1))
            .enumerate()
            .for_each(|(i, orow)| {
                if s == 0 {
                    return;
                }
                for k in iter_ones(self.row(i)) {
                    xor_into(orow, other.row(k));
                }
            });
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::Dimension(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let p = self
                .row(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if p & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix (`xᵀ·M`).
    pub fn vec_mul(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        if x.len() != self.rows {
            return Err(Gf2Error::Dimension(format!(
                "vector of length {} times {}x{}",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.cols);
        for r in x.iter_ones() {
            xor_into(out.words_mut(), self.row(r));
        }
        Ok(out)
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Gf2Error::Dimension("add".into()));
        }
        let mut out = self.clone();
        xor_into(&mut out.data, &other.data);
        Ok(out)
    }

    pub fn add_identity(&self) -> BitMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            out.flip(i, i);
        }
        out
    }

    pub fn kronecker(&self, b: &BitMatrix) -> BitMatrix {
        let (p, q) = (b.rows, b.cols);
        let mut out = BitMatrix::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in iter_ones(self.row(i)) {
                for k in 0..p {
                    for l in iter_ones(b.row(k)) {
                        out.set(i * p + k, j * q + l, true);
                    }
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::Dimension("vstack".into()));
        }
        let mut out = self.clone();
        out.rows += other.rows;
        out.data.extend_from_slice(&other.data);
        Ok(out)
    }

    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::Dimension("hstack".into()));
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            out.row_mut(r)[..self.stride].copy_from_slice(self.row(r));
            for c in iter_ones(other.row(r)) {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(idx.len(), self.cols);
        for (k, &r) in idx.iter().enumerate() {
            out.row_mut(k).copy_from_slice(self.row(r));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (k, &c) in idx.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, k, true);
                }
            }
        }
        out
    }

    /// Appends a row; the vector must have `cols` bits.
    pub fn push_row(&mut self, v: &BitVec) {
        assert_eq!(v.len(), self.cols);
        self.data.extend_from_slice(v.words());
        self.rows += 1;
    }

    fn eliminate_with(&mut self, pivot_row: usize, col: usize, all_rows: bool) {
        let s = self.stride;
        let w0 = col / WORD;
        let bit = 1u64 << (col % WORD);
        let piv: Vec<u64> = self.row(pivot_row)[w0..].to_vec();
        let start = if all_rows { 0 } else { pivot_row + 1 };
        let body = &mut self.data[start * s..];
        let sweep = |(k, row): (usize, &mut [u64])| {
            if start + k != pivot_row && row[w0] & bit != 0 {
                xor_into(&mut row[w0..], &piv);
            }
        };
        if body.len() >= PAR_THRESHOLD {
            body.par_chunks_mut(s).enumerate().for_each(sweep);
        } else {
            body.chunks_mut(s).enumerate().for_each(sweep);
        }
    }

    /// Forward (`full = false`) or Gauss-Jordan (`full = true`) elimination in place.
    /// Pivots are chosen as the first nonzero column, lowest row index.
    /// Returns pivot columns; pivot rows are `0..rank`.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        if self.stride == 0 {
            return pivots;
        }
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let w = c / WORD;
            let bit = 1u64 << (c % WORD);
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + w] & bit != 0)
            else {
                continue;
            };
            self.swap_rows(r, p);
            self.eliminate_with(r, c, full);
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows > self.cols {
            return self.transpose().rank();
        }
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Row echelon form with pivot columns; rows beyond the rank are dropped.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.eliminate(false);
        m.truncate_rows(pivots.len());
        Echelon { reduced: m, pivots }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        m.truncate_rows(pivots.len());
        Echelon { reduced: m, pivots }
    }

    /// Consumes the matrix and returns its reduced row echelon form.
    pub fn into_rref(mut self) -> Echelon {
        let pivots = self.eliminate(true);
        self.truncate_rows(pivots.len());
        Echelon {
            reduced: self,
            pivots,
        }
    }

    pub fn truncate_rows(&mut self, n: usize) {
        if n < self.rows {
            self.rows = n;
            self.data.truncate(n * self.stride);
        }
    }

    /// Basis of the right null space, one basis vector per row.
    pub fn kernel_basis(&self) -> BitMatrix {
        self.rref().kernel()
    }

    /// Some `x` with `self·x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::Dimension(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = BitMatrix::from_rows(std::slice::from_ref(b), b.len()).transpose();
        Ok(self.solve_many(&rhs)?.pop().unwrap())
    }

    /// Solves `self·X = B` column by column. Entry `k` is the solution for column `k` of `B`.
    pub fn solve_many(&self, b: &BitMatrix) -> Result<Vec<Option<BitVec>>, Gf2Error> {
        if b.rows != self.rows {
            return Err(Gf2Error::Dimension("solve_many".into()));
        }
        let aug = self.hstack(b)?;
        let e = aug.into_rref();
        let n = self.cols;
        let mut out = Vec::with_capacity(b.cols);
        let split = e.pivots.partition_point(|&p| p < n);
        let t = e.reduced.transpose();
        for k in 0..b.cols {
            let col = n + k;
            // Rows whose pivot lies in the right-hand block are zero on the left block.
            if (split..e.pivots.len()).any(|r| e.reduced.get(r, col)) {
                out.push(None);
                continue;
            }
            let mut x = BitVec::zeros(n);
            for r in iter_ones(t.row(col)) {
                if r < split {
                    x.set(e.pivots[r], true);
                }
            }
            out.push(Some(x));
        }
        Ok(out)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&BitMatrix::identity(n)).ok()?;
        let e = aug.into_rref();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(e.reduced.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl BitMatrix {
    /// Parses one matrix in text format from a line iterator, advancing it.
    pub fn parse_lines<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<BitMatrix, Gf2Error> {
        let (ln, header) = lines
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or(Gf2Error::Parse {
                line: 0,
                msg: "missing header".into(),
            })?;
        let mut it = header.split_whitespace().map(str::parse::<usize>);
        let (rows, cols) = match (it.next(), it.next(), it.next()) {
            (Some(Ok(r)), Some(Ok(c)), None) => (r, c),
            _ => {
                return Err(Gf2Error::Parse {
                    line: ln + 1,
                    msg: format!("bad header {header:?}"),
                })
            }
        };
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            let (ln, line) = lines.next().ok_or(Gf2Error::Parse {
                line: ln + 1 + r,
                msg: "unexpected end of input".into(),
            })?;
            let line = line.trim();
            if line.len() != cols {
                return Err(Gf2Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {cols} columns, got {}", line.len()),
                });
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    _ => {
                        return Err(Gf2Error::Parse {
                            line: ln + 1,
                            msg: format!("bad character {ch:?}"),
                        })
                    }
                }
            }
        }
        Ok(m)
    }
}

impl FromStr for BitMatrix {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate();
        let m = BitMatrix::parse_lines(&mut lines)?;
        if let Some((ln, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Gf2Error::Parse {
                line: ln + 1,
                msg: format!("trailing content {l:?}"),
            });
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_transpose(m: &BitMatrix) -> BitMatrix {
        BitMatrix::from_fn(m.cols(), m.rows(), |i, j| m.get(j, i))
    }

    #[test]
    fn transpose_matches_naive() {
        let mut seed = 12345u64;
        for &(r, c) in &[(1, 1), (3, 70), (64, 64), (65, 129), (130, 7), (200, 300)] {
            let m = BitMatrix::from_fn(r, c, |_, _| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                seed & 1 == 1
            });
            let t = m.transpose();
            assert_eq!(t, naive_transpose(&m));
            assert!(t.padding_clean());
        }
    }

    #[test]
    fn small_rank_and_kernel() {
        let m = BitMatrix::from_strs(&["110", "011", "101"]).unwrap();
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k, BitMatrix::from_strs(&["111"]).unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = BitMatrix::from_strs(&["110", "011", "001"]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), BitMatrix::identity(3));
        assert!(BitMatrix::from_strs(&["11", "11"])
            .unwrap()
            .inverse()
            .is_none());
    }
}
