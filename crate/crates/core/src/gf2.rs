//! Dense linear algebra over GF(2).
//!
//! Vectors are bit-packed into `u64` words. Entry `i` of a [`BitVector`] is
//! the `i`-th component (`x(0)`, `x(1)`, ...). When a vector is read as a
//! binary number (state and input indices), component 0 is the most
//! significant bit, so the string `"10"` means `x(0) = 1, x(1) = 0`.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector from 0/1 integers. Any nonzero value counts as 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        Self::from_bits(bits.iter().map(|&b| b != 0))
    }

    /// Vector whose binary reading (component 0 most significant) is `index`.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64, "index vectors are limited to 64 bits");
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, (index >> (len - 1 - i)) & 1 == 1);
        }
        v
    }

    /// Binary reading of the vector with component 0 most significant.
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64, "index vectors are limited to 64 bits");
        self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over GF(2): parity of the bitwise AND.
    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        self.check_len("dot", other)?;
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones & 1 == 1)
    }

    /// Entrywise addition (XOR).
    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len("xor", other)?;
        let mut out = self.clone();
        out.xor_in_place(other);
        Ok(out)
    }

    fn xor_in_place(&mut self, other: &BitVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bits(self.iter().chain(other.iter()))
    }

    /// Splits into consecutive blocks of `size` bits. `len` must be a multiple of `size`.
    pub fn chunks(&self, size: usize) -> Result<Vec<BitVector>> {
        if size == 0 || !self.len.is_multiple_of(size) {
            return Err(Error::DimensionMismatch {
                op: "chunks",
                expected: size,
                found: self.len,
            });
        }
        let bits: Vec<bool> = self.iter().collect();
        Ok(bits
            .chunks(size)
            .map(|c| BitVector::from_bits(c.iter().copied()))
            .collect())
    }

    fn check_len(&self, op: &'static str, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                op,
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    /// Panics on length mismatch; use [`BitVector::xor`] for a checked variant.
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        self.xor(rhs)
            .expect("xor of vectors with different lengths")
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        self.xor_in_place(rhs);
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, component 0 first.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "invalid bit '{other}' in \"{s}\""
                ))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitVector::from_bits)
    }
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::check_shape(rows, cols)?;
        Ok(Self {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 integers.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::check_shape(rows.len(), cols)?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "from_rows",
                    expected: cols,
                    found: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|&&b| b > 1) {
                return Err(Error::InvalidParameter(format!("non-binary entry {bad}")));
            }
            out.push(BitVector::from_u8s(row));
        }
        Ok(Self { rows: out, cols })
    }

    pub fn from_bit_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        Self::check_shape(rows.len(), cols)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                op: "from_bit_rows",
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, cols })
    }

    /// Column vector (`len` × 1).
    pub fn column(v: &BitVector) -> Result<Self> {
        Self::from_bit_rows(v.iter().map(|b| BitVector::from_bits([b])).collect())
    }

    fn check_shape(rows: usize, cols: usize) -> Result<()> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimensions(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn col(&self, c: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn to_u8_rows(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(u8::from).collect())
            .collect()
    }

    /// Entrywise sum over GF(2).
    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows() != other.rows() || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "add",
                expected: self.rows() * self.cols,
                found: other.rows() * other.cols,
            });
        }
        Ok(BitMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a ^ b)
                .collect(),
            cols: self.cols,
        })
    }

    pub fn matmul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                expected: self.cols,
                found: other.rows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for t in 0..self.cols {
                    if row.get(t) {
                        acc ^= &other.rows[t];
                    }
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            rows,
            cols: other.cols,
        })
    }

    pub fn matvec(&self, x: &BitVector) -> Result<BitVector> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch {
                op: "matvec",
                expected: self.cols,
                found: x.len(),
            });
        }
        self.rows
            .iter()
            .map(|r| r.dot(x))
            .collect::<Result<Vec<bool>>>()
            .map(BitVector::from_bits)
    }

    /// `self` raised to the power `t`; `t = 0` gives the identity.
    pub fn matpow(&self, t: u64) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "matpow",
                rows: self.rows(),
                cols: self.cols,
            });
        }
        let mut result = BitMatrix::identity(self.cols)?;
        let mut base = self.clone();
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            rows: (0..self.cols).map(|c| self.col(c)).collect(),
            cols: self.rows(),
        }
    }

    /// Side-by-side concatenation `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                expected: self.rows(),
                found: other.rows(),
            });
        }
        Ok(BitMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.concat(b))
                .collect(),
            cols: self.cols + other.cols,
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            rows,
            cols: self.cols,
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        reduce(&mut rows, self.cols).len()
    }

    /// Determinant over GF(2): 1 iff the matrix is nonsingular.
    pub fn determinant(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "determinant",
                rows: self.rows(),
                cols: self.cols,
            });
        }
        Ok(self.rank() == self.cols)
    }

    /// Solves `self · x = b`. Free variables are fixed to 0, so the result is
    /// deterministic. Returns `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if self.rows() != b.len() {
            return Err(Error::DimensionMismatch {
                op: "solve",
                expected: self.rows(),
                found: b.len(),
            });
        }
        let n = self.cols;
        // Augmented rows [a_i | b_i]; column n holds the right-hand side.
        let mut aug: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.push(b.get(i));
                row
            })
            .collect();
        let pivots = reduce(&mut aug, n);
        if aug[pivots.len()..].iter().any(|r| r.get(n)) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(n);
        for (r, &c) in pivots.iter().enumerate() {
            x.set(c, aug[r].get(n));
        }
        Ok(Some(x))
    }
}

/// Reduced row echelon form over the first `cols` columns, in place.
/// Returns the pivot column of each leading row; rows past the pivot count
/// are zero in those columns.
fn reduce(rows: &mut [BitVector], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                *row ^= &pivot;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<&str> = row.iter().map(|b| if b { "1" } else { "0" }).collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix{:?}", self.to_u8_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(rows).unwrap()
    }

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn example_a() -> BitMatrix {
        m(&[&[1, 1], &[1, 0]])
    }

    #[test]
    fn matmul_examples() {
        let a = example_a();
        assert_eq!(a.matmul(&a).unwrap(), m(&[&[0, 1], &[1, 1]]));
        let id = BitMatrix::identity(2).unwrap();
        assert_eq!(id.matmul(&a).unwrap(), a);
        let b = m(&[&[1], &[0]]);
        assert_eq!(a.matmul(&b).unwrap(), m(&[&[1], &[1]]));
    }

    #[test]
    fn matmul_dimension_error() {
        let a = m(&[&[1, 0, 1]]);
        assert!(matches!(
            a.matmul(&example_a()),
            Err(Error::DimensionMismatch { op: "matmul", .. })
        ));
    }

    #[test]
    fn matvec_follows_zero_input_orbit() {
        let a = example_a();
        assert_eq!(a.matvec(&v("11")).unwrap(), v("01"));
        assert_eq!(a.matvec(&v("00")).unwrap(), v("00"));
        assert_eq!(a.matvec(&v("01")).unwrap(), v("10"));
        assert!(a.matvec(&v("101")).is_err());
    }

    #[test]
    fn matpow_examples() {
        let a = example_a();
        assert_eq!(a.matpow(0).unwrap(), BitMatrix::identity(2).unwrap());
        assert_eq!(a.matpow(2).unwrap(), m(&[&[0, 1], &[1, 1]]));
        assert_eq!(a.matpow(3).unwrap(), BitMatrix::identity(2).unwrap());
        assert!(matches!(
            m(&[&[1, 0]]).matpow(2),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(&[&[1, 1], &[0, 1]]).rank(), 2);
        assert_eq!(BitMatrix::zeros(3, 4).unwrap().rank(), 0);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert!(m(&[&[1, 1], &[0, 1]]).determinant().unwrap());
        assert!(!m(&[&[1, 1], &[1, 1]]).determinant().unwrap());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            m(&[&[1, 1], &[0, 1]]).solve(&v("11")).unwrap(),
            Some(v("01"))
        );
        let id = BitMatrix::identity(3).unwrap();
        assert_eq!(id.solve(&v("101")).unwrap(), Some(v("101")));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).solve(&v("10")).unwrap(), None);
        assert!(id.solve(&v("10")).is_err());
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        // x0 + x2 = 1 has free variables x1, x2.
        assert_eq!(m(&[&[1, 0, 1]]).solve(&v("1")).unwrap(), Some(v("100")));
    }

    #[test]
    fn index_round_trip_is_msb_first() {
        assert_eq!(v("10").to_index(), 2);
        assert_eq!(BitVector::from_index(1, 2), v("01"));
        assert_eq!(BitVector::zeros(0).to_index(), 0);
    }

    #[test]
    fn vectors_wider_than_a_word() {
        let mut x = BitVector::zeros(130);
        x.set(0, true);
        x.set(129, true);
        let y = &x ^ &x;
        assert!(y.is_zero());
        assert_eq!(x.count_ones(), 2);
        assert!(!x.dot(&x).unwrap());
        assert_eq!(x.chunks(65).unwrap().len(), 2);
    }

    #[test]
    fn rejects_empty_and_non_binary() {
        assert!(BitMatrix::zeros(0, 2).is_err());
        assert!(BitMatrix::from_rows(&[[0u8, 2]]).is_err());
        assert!("012".parse::<BitVector>().is_err());
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
        prop::collection::vec(prop::collection::vec(0u8..=1, cols), rows)
            .prop_map(|r| BitMatrix::from_rows(&r).unwrap())
    }

    fn vector(len: usize) -> impl Strategy<Value = BitVector> {
        prop::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bits)
    }

    proptest! {
        #[test]
        fn matmul_is_associative(
            (a, b, c) in (1usize..6, 1usize..6, 1usize..6, 1usize..6)
                .prop_flat_map(|(p, q, r, s)| (matrix(p, q), matrix(q, r), matrix(r, s)))
        ) {
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn addition_is_self_inverse(a in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
            prop_assert!(a.add(&a).unwrap().is_zero());
        }

        #[test]
        fn matvec_distributes(
            (a, x, y) in (1usize..6, 1usize..6)
                .prop_flat_map(|(r, c)| (matrix(r, c), vector(c), vector(c)))
        ) {
            let lhs = a.matvec(&(&x ^ &y)).unwrap();
            let rhs = &a.matvec(&x).unwrap() ^ &a.matvec(&y).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_bounds_and_row_swap(
            (a, i, j) in (1usize..7, 1usize..7)
                .prop_flat_map(|(r, c)| (matrix(r, c), 0..r, 0..r))
        ) {
            let r = a.rank();
            prop_assert!(r <= a.rows().min(a.cols()));
            let mut swapped = a.clone();
            swapped.swap_rows(i, j);
            prop_assert_eq!(swapped.rank(), r);
            prop_assert_eq!(a.transpose().rank(), r);
        }

        #[test]
        fn solve_substitutes_back(
            (a, b) in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (matrix(r, c), vector(r)))
        ) {
            if let Some(x) = a.solve(&b).unwrap() {
                prop_assert_eq!(a.matvec(&x).unwrap(), b);
            }
        }

        #[test]
        fn solve_finds_planted_solution(
            (a, x) in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (matrix(r, c), vector(c)))
        ) {
            let b = a.matvec(&x).unwrap();
            let found = a.solve(&b).unwrap();
            prop_assert!(found.is_some());
            prop_assert_eq!(a.matvec(&found.unwrap()).unwrap(), b);
        }

        #[test]
        fn matpow_composes(a in (1usize..6).prop_flat_map(|n| matrix(n, n)), s in 0u64..9, t in 0u64..9) {
            let lhs = a.matpow(s + t).unwrap();
            let rhs = a.matpow(s).unwrap().matmul(&a.matpow(t).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
