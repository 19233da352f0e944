//! Dense bit-packed linear algebra over the two-element field.
//!
//! Matrices are stored row-major with 64 columns per word.  A matrix with
//! `rows` rows and `cols` columns represents a linear map from `F^cols` to
//! `F^rows` acting on column vectors.  All elimination routines use the same
//! deterministic pivot rule (leftmost nonzero column, topmost available row),
//! so bases and witnesses are reproducible bit for bit.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Errors raised by the linear algebra layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    /// Operand shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A vector over GF(2) packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// The zero vector of length `len`.
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    /// The standard basis vector `e_i` of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from booleans.
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector whose set positions are `ones`.
    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.flip(i);
        }
        v
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
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if b {
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

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place sum `self += other`.
    pub fn add_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// The sum `self + other`.
    pub fn add(&self, other: &BitVector) -> BitVector {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    /// Standard inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterator over the positions of set bits, in increasing order.
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

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut r = BitVector::zeros(self.len + other.len);
        for i in self.ones() {
            r.set(i, true);
        }
        for i in other.ones() {
            r.set(self.len + i, true);
        }
        r
    }

    /// The sub-vector of positions `start..start+len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        let mut r = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                r.set(i, true);
            }
        }
        r
    }

    /// Writes `src` into positions `start..start+src.len()`.
    pub fn write_slice(&mut self, start: usize, src: &BitVector) {
        for i in 0..src.len {
            self.set(start + i, src.get(i));
        }
    }

    fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

/// A dense matrix over GF(2), row-major and bit-packed.
///
/// Invariant: bits beyond column `cols` in the last word of each row are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from a closure giving each entry.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors (all of length `cols`).
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "row length mismatch");
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows, "column length mismatch");
            for r in v.ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    /// Parses rows of `0`/`1` characters (other characters are ignored).
    pub fn from_strs(rows: &[&str]) -> Self {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|s| s.chars().filter(|c| *c == '0' || *c == '1').map(|c| c == '1').collect())
            .collect();
        let cols = parsed.first().map_or(0, |r| r.len());
        Self::from_fn(parsed.len(), cols, |r, c| parsed[r][c])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.stride + c / WORD;
        let mask = 1u64 << (c % WORD);
        if b {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    /// Row `r` as a vector.
    pub fn row(&self, r: usize) -> BitVector {
        BitVector { len: self.cols, words: self.row_words(r).to_vec() }
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// All columns.
    pub fn columns(&self) -> Vec<BitVector> {
        let t = self.transpose();
        (0..t.rows).map(|r| t.row(r)).collect()
    }

    /// Adds row `src` into row `dst`.
    #[inline]
    pub fn add_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.row_words_mut(dst).iter_mut().for_each(|w| *w = 0);
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.bits.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.bits.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x ^= *y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.bits.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a ^= *b;
        }
        r
    }

    /// In-place entrywise sum.
    pub fn add_assign(&mut self, other: &BitMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= *b;
        }
    }

    /// Matrix product `self · other`, panicking on a shape mismatch.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        self.try_mul(other).expect("shape mismatch in mul")
    }

    /// Matrix product `self · other`.
    pub fn try_mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = other.stride;
        for r in 0..self.rows {
            let row = self.row_words(r);
            let dst = &mut out.bits[r * s..(r + 1) * s];
            for (k, &w) in row.iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    let src = &other.bits[(k * WORD + t) * s..(k * WORD + t + 1) * s];
                    for (d, x) in dst.iter_mut().zip(src) {
                        *d ^= *x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u32;
            for (a, b) in self.row_words(r).iter().zip(v.words()) {
                acc ^= (a & b).count_ones();
            }
            if acc & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Transpose.
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = k * WORD + w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Kronecker product `self ⊗ other`: entry ((i,k),(j,l)) = a_ij b_kl with
    /// pair indices flattened as `i * other.rows + k`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.get(i, j) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        if other.get(k, l) {
                            out.set(i * other.rows + k, j * other.cols + l, true);
                        }
                    }
                }
            }
        }
        out
    }

    /// Copies `block` into the sub-matrix whose top-left corner is `(r0, c0)`,
    /// adding it to the existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &BitMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for (k, &w) in block.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = k * WORD + w.trailing_zeros() as usize;
                    w &= w - 1;
                    self.flip(r0 + r, c0 + c);
                }
            }
        }
    }

    /// The sub-matrix of rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> BitMatrix {
        BitMatrix::from_fn(nr, nc, |r, c| self.get(r0 + r, c0 + c))
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitMatrix { rows: self.rows + other.rows, cols: self.cols, stride: self.stride, bits }
    }

    /// Places `self` to the left of `other`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        out.add_block(0, 0, self);
        out.add_block(0, self.cols, other);
        out
    }

    /// In-place reduction to reduced row echelon form, returning pivot columns.
    ///
    /// Pivot rule: scan columns left to right; the pivot row for a column is
    /// the topmost row at or below the current rank with a one in that column.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else { continue };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.add_row(r, rank);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    /// The rank over GF(2).
    pub fn rank(&self) -> usize {
        // Forward elimination only is enough for the rank.
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else { continue };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                if m.get(r, c) {
                    m.add_row(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    /// A basis of the null space `{v : self·v = 0}`.
    ///
    /// One vector per free column `f` of the RREF, with a one in position `f`,
    /// zeros in the other free positions; vectors are ordered by `f`.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = BitVector::zeros(self.cols);
            v.set(f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self·x = b`, or `None` when the system is inconsistent.
    ///
    /// The returned solution has zeros in all free coordinates.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "right-hand side of length {} for a {}x{} system",
                b.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(Solver::new(self).solve(b))
    }

    /// Whether the matrix is square and invertible.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(BitMatrix::zeros(0, 0));
        }
        let aug = self.hstack(&BitMatrix::identity(self.rows));
        let (r, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots[self.rows - 1] >= self.cols {
            return None;
        }
        Some(r.block(0, self.cols, self.rows, self.rows))
    }

    /// Basis of the column space, as the nonzero rows of the RREF of the transpose.
    pub fn column_space(&self) -> Subspace {
        Subspace::from_vectors(self.rows, &self.columns())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A precomputed elimination of a fixed matrix for repeated solves.
#[derive(Clone, Debug)]
pub struct Solver {
    rows: usize,
    cols: usize,
    /// RREF of the matrix.
    reduced: BitMatrix,
    /// Row operations: `transform · m = reduced`.
    transform: BitMatrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(m: &BitMatrix) -> Self {
        let aug = m.hstack(&BitMatrix::identity(m.rows));
        let mut red = aug.clone();
        // Eliminate only over the first `cols` columns so that the identity
        // block records the row operations.
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == red.rows {
                break;
            }
            let Some(p) = (rank..red.rows).find(|&r| red.get(r, c)) else { continue };
            red.swap_rows(rank, p);
            for r in 0..red.rows {
                if r != rank && red.get(r, c) {
                    red.add_row(r, rank);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Solver {
            rows: m.rows,
            cols: m.cols,
            reduced: red.block(0, 0, m.rows, m.cols),
            transform: red.block(0, m.cols, m.rows, m.rows),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Some `x` with `m·x = b`, or `None`.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let tb = self.transform.mul_vec(b);
        for r in self.pivots.len()..self.rows {
            if tb.get(r) {
                return None;
            }
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &p) in self.pivots.iter().enumerate() {
            if tb.get(i) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    /// The reduced matrix (useful for inspection in tests).
    pub fn reduced(&self) -> &BitMatrix {
        &self.reduced
    }
}

/// A linear subspace of `F^ambient`, stored as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// Basis rows in reduced row echelon form.
    basis: Vec<BitVector>,
    /// Pivot position of each basis row.
    pivots: Vec<usize>,
}

impl Subspace {
    /// The zero subspace.
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    /// The whole space.
    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| BitVector::unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// The span of the given vectors.
    pub fn from_vectors(ambient: usize, vectors: &[BitVector]) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Echelon basis vectors (sorted by pivot).
    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace (the result has zeros at all pivots).
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.add_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &BitVector) -> Option<BitVector> {
        let mut c = BitVector::zeros(self.basis.len());
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                c.set(i, true);
            }
        }
        let mut recon = BitVector::zeros(self.ambient);
        for i in c.ones() {
            recon.add_assign(&self.basis[i]);
        }
        if &recon == v {
            Some(c)
        } else {
            None
        }
    }

    /// The vector with the given echelon coordinates.
    pub fn from_coords(&self, c: &BitVector) -> BitVector {
        let mut v = BitVector::zeros(self.ambient);
        for i in c.ones() {
            v.add_assign(&self.basis[i]);
        }
        v
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient mismatch in insert");
        let r = self.reduce(v);
        let Some(p) = r.first_one() else { return false };
        // Clear the new pivot from existing rows to keep the basis reduced.
        for b in self.basis.iter_mut() {
            if b.get(p) {
                b.add_assign(&r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.basis.insert(pos, r);
        self.pivots.insert(pos, p);
        true
    }

    /// Positions that are not pivots; the corresponding unit vectors span a
    /// complement.
    pub fn complement_positions(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }

    /// Matrix whose columns are the echelon basis vectors.
    pub fn basis_matrix(&self) -> BitMatrix {
        BitMatrix::from_columns(self.ambient, &self.basis)
    }

    /// Sum of two subspaces.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(n: usize) -> impl Iterator<Item = BitVector> {
        (0u64..(1u64 << n)).map(move |mask| {
            let bits: Vec<bool> = (0..n).map(|i| (mask >> i) & 1 == 1).collect();
            BitVector::from_bools(&bits)
        })
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(BitMatrix::identity(4).rank(), 4);
        assert_eq!(BitMatrix::from_strs(&["11", "11"]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(BitMatrix::identity(3).kernel_basis().is_empty());
        assert_eq!(BitMatrix::zeros(2, 3).kernel_basis().len(), 3);
        let k = BitMatrix::from_strs(&["11"]).kernel_basis();
        assert_eq!(k, vec![BitVector::from_bools(&[true, true])]);
    }

    #[test]
    fn solve_examples() {
        let b = BitVector::from_bools(&[true, false, true]);
        assert_eq!(BitMatrix::identity(3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(BitMatrix::zeros(3, 3).solve(&b).unwrap(), None);
        let x = BitMatrix::from_strs(&["11"]).solve(&BitVector::from_bools(&[true])).unwrap();
        // Deterministic pivot rule: the pivot column is column 0.
        assert_eq!(x, Some(BitVector::from_bools(&[true, false])));
        assert!(BitMatrix::identity(2).solve(&b).is_err());
    }

    #[test]
    fn kernel_and_solve_agree_with_enumeration() {
        let m = BitMatrix::from_strs(&["1011", "0110", "1101"]);
        let kernel: Vec<BitVector> = enumerate(4).filter(|v| m.mul_vec(v).is_zero()).collect();
        let basis = m.kernel_basis();
        assert_eq!(1usize << basis.len(), kernel.len());
        let span = Subspace::from_vectors(4, &basis);
        for v in &kernel {
            assert!(span.contains(v));
        }
        for b in enumerate(3) {
            let brute = enumerate(4).any(|x| m.mul_vec(&x) == b);
            let x = m.solve(&b).unwrap();
            assert_eq!(brute, x.is_some());
            if let Some(x) = x {
                assert_eq!(m.mul_vec(&x), b);
            }
        }
    }

    #[test]
    fn inverse_and_mul() {
        let m = BitMatrix::from_strs(&["110", "011", "001"]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), BitMatrix::identity(3));
        assert!(BitMatrix::from_strs(&["11", "11"]).inverse().is_none());
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let m = BitMatrix::from_fn(70, 130, |r, c| (r * 7 + c * 3) % 5 == 0 || r == c);
        assert_eq!(m.rank(), m.transpose().rank());
        assert_eq!(m.rank() + m.kernel_basis().len(), 130);
        for v in m.kernel_basis() {
            assert!(m.mul_vec(&v).is_zero());
        }
        let t = m.transpose();
        assert_eq!(t.transpose(), m);
        assert_eq!(m.mul(&BitMatrix::identity(130)), m);
    }

    #[test]
    fn subspace_coordinates() {
        let vs = vec![BitVector::from_bools(&[true, true, false]), BitVector::from_bools(&[false, true, true])];
        let s = Subspace::from_vectors(3, &vs);
        assert_eq!(s.dim(), 2);
        let sum = vs[0].add(&vs[1]);
        let c = s.coords(&sum).unwrap();
        assert_eq!(s.from_coords(&c), sum);
        assert!(s.coords(&BitVector::unit(3, 0)).is_none());
        assert_eq!(s.complement_positions().len(), 1);
    }
}
