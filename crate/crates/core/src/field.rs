//! Prime fields and dense linear algebra over them.
//!
//! Elements are stored as canonical residues in `0..p`. Vectors and matrices
//! keep one copy of the field and raw `u32` storage; `FpElement` is the
//! checked scalar used at API boundaries.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn elem(&self, v: i64) -> FpElement {
        FpElement {
            value: self.reduce(v),
            field: *self,
        }
    }

    pub fn zero(&self) -> FpElement {
        self.elem(0)
    }

    pub fn one(&self) -> FpElement {
        self.elem(1)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::NotInvertible);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// `(-1)^k` as a residue.
    pub fn sign(&self, k: usize) -> u32 {
        if k % 2 == 0 {
            1 % self.p
        } else {
            self.neg(1)
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElement {
    value: u32,
    field: PrimeField,
}

impl FpElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FpElement> {
        Ok(FpElement {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    pub fn pow(&self, e: u64) -> FpElement {
        FpElement {
            value: self.field.pow(self.value, e),
            field: self.field,
        }
    }

    /// Frobenius `x -> x^p`, the identity on a prime field.
    pub fn frobenius(&self) -> FpElement {
        self.pow(self.field.p as u64)
    }

    /// Representative in `(-p/2, p/2]`, convenient for display.
    pub fn centered(&self) -> i64 {
        let v = self.value as i64;
        let p = self.field.p as i64;
        if v > p / 2 {
            v - p
        } else {
            v
        }
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $raw:ident) => {
        impl $tr for FpElement {
            type Output = FpElement;
            fn $m(self, rhs: FpElement) -> FpElement {
                assert_eq!(self.field, rhs.field, "mixed prime fields");
                FpElement {
                    value: self.field.$raw(self.value, rhs.value),
                    field: self.field,
                }
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Div for FpElement {
    type Output = FpElement;
    /// Panics on division by zero; use [`FpElement::inv`] for a checked path.
    fn div(self, rhs: FpElement) -> FpElement {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        FpElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpVector {
    field: PrimeField,
    data: Vec<u32>,
}

impl FpVector {
    pub fn zero(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            data: vec![0; len],
        }
    }

    pub fn basis(field: PrimeField, len: usize, i: usize) -> Self {
        let mut v = Self::zero(field, len);
        v.data[i] = 1 % field.p;
        v
    }

    pub fn from_i64(field: PrimeField, values: &[i64]) -> Self {
        Self {
            field,
            data: values.iter().map(|&v| field.reduce(v)).collect(),
        }
    }

    /// Takes residues that are already canonical.
    pub fn from_raw(field: PrimeField, data: Vec<u32>) -> Self {
        debug_assert!(data.iter().all(|&v| v < field.p));
        Self { field, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn raw(&self) -> &[u32] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [u32] {
        &mut self.data
    }

    pub fn into_raw(self) -> Vec<u32> {
        self.data
    }

    pub fn get(&self, i: usize) -> FpElement {
        FpElement {
            value: self.data[i],
            field: self.field,
        }
    }

    pub fn set(&mut self, i: usize, v: FpElement) {
        self.data[i] = v.value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Indices and values of the nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i, v))
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: u32, other: &FpVector) {
        debug_assert_eq!(self.data.len(), other.data.len());
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.add(*a, f.mul(c, b));
            }
        }
    }

    pub fn add_assign(&mut self, other: &FpVector) {
        self.axpy(1, other);
    }

    pub fn sub_assign(&mut self, other: &FpVector) {
        self.axpy(self.field.neg(1), other);
    }

    pub fn scaled(&self, c: u32) -> FpVector {
        let f = self.field;
        FpVector {
            field: f,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn plus(&self, other: &FpVector) -> FpVector {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn minus(&self, other: &FpVector) -> FpVector {
        let mut r = self.clone();
        r.sub_assign(other);
        r
    }

    pub fn dot(&self, other: &FpVector) -> u32 {
        let f = self.field;
        self.data
            .iter()
            .zip(&other.data)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// Concatenation of several vectors.
    pub fn concat(field: PrimeField, parts: &[&FpVector]) -> FpVector {
        let mut data = Vec::new();
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        FpVector { field, data }
    }

    pub fn slice(&self, start: usize, len: usize) -> FpVector {
        FpVector {
            field: self.field,
            data: self.data[start..start + len].to_vec(),
        }
    }

    /// Entries as centered integers, for display and serialization.
    pub fn to_i64(&self) -> Vec<i64> {
        self.data
            .iter()
            .map(|&v| self.get_raw_centered(v))
            .collect()
    }

    fn get_raw_centered(&self, v: u32) -> i64 {
        FpElement {
            value: v,
            field: self.field,
        }
        .centered()
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p;
        }
        m
    }

    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row",
                    expected: cols,
                    found: r.len(),
                });
            }
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = field.reduce(v);
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[FpVector]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for i in 0..rows {
                m.data[i * m.cols + j] = c.data[i];
            }
        }
        m
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: &[FpVector]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(&r.data);
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set_raw(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> FpElement {
        FpElement {
            value: self.at(i, j),
            field: self.field,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: FpElement) {
        self.set_raw(i, j, v.value);
    }

    pub fn column(&self, j: usize) -> FpVector {
        FpVector {
            field: self.field,
            data: (0..self.rows).map(|i| self.at(i, j)).collect(),
        }
    }

    pub fn row(&self, i: usize) -> FpVector {
        FpVector {
            field: self.field,
            data: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.at(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field;
        let mut r = FpMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b != 0 {
                        let idx = i * r.cols + j;
                        r.data[idx] = f.add(r.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn mul_vec(&self, v: &FpVector) -> FpVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension");
        let f = self.field;
        let mut out = FpVector::zero(f, self.rows);
        for (j, c) in v.support() {
            for i in 0..self.rows {
                let a = self.at(i, j);
                if a != 0 {
                    out.data[i] = f.add(out.data[i], f.mul(a, c));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scaled(&self, c: u32) -> FpMatrix {
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> FpMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = FpMatrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self).expect("square");
        }
        acc
    }

    /// Matrices flattened row-major, for comparing linear maps as vectors.
    pub fn to_vector(&self) -> FpVector {
        FpVector {
            field: self.field,
            data: self.data.clone(),
        }
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.at(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.at(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.at(i, c);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..m.cols {
                    let b = m.data[r * m.cols + j];
                    if b != 0 {
                        let idx = i * m.cols + j;
                        m.data[idx] = f.add(m.data[idx], f.mul(nf, b));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn kernel_basis(&self) -> Vec<FpVector> {
        let Rref { matrix, pivots } = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = FpVector::zero(f, self.cols);
            v.data[free] = 1 % f.p;
            for (r, &pc) in pivots.iter().enumerate() {
                v.data[pc] = f.neg(matrix.at(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b` with free variables set to zero.
    pub fn solve(&self, b: &FpVector) -> Result<Option<FpVector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side",
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = FpMatrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set_raw(i, j, self.at(i, j));
            }
            aug.set_raw(i, self.cols, b.data[i]);
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = FpVector::zero(self.field, self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            x.data[pc] = matrix.at(r, self.cols);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                context: "inverse of non-square matrix",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set_raw(i, j, self.at(i, j));
            }
            aug.set_raw(i, n + i, 1 % self.field.p);
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NotInvertible);
        }
        let mut inv = FpMatrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set_raw(i, j, matrix.at(i, n + j));
            }
        }
        Ok(inv)
    }
}

/// Rank of the span of a list of vectors of equal length.
pub fn span_rank(field: PrimeField, len: usize, vectors: &[FpVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    FpMatrix::from_rows(field, len, vectors).rank()
}

/// `dim span(z) - dim span(b)`, after checking `span(b) ⊆ span(z)`.
pub fn quotient_dim(field: PrimeField, len: usize, z: &[FpVector], b: &[FpVector]) -> Result<usize> {
    Ok(quotient_basis(field, len, z, b)?.len())
}

/// Vectors from `z` whose classes form a basis of `span(z) / span(b)`.
pub fn quotient_basis(
    field: PrimeField,
    len: usize,
    z: &[FpVector],
    b: &[FpVector],
) -> Result<Vec<FpVector>> {
    let rz = span_rank(field, len, z);
    let mut both: Vec<FpVector> = z.to_vec();
    both.extend_from_slice(b);
    if span_rank(field, len, &both) != rz {
        return Err(Error::InclusionViolated);
    }
    let mut acc: Vec<FpVector> = b.to_vec();
    let mut rank = span_rank(field, len, &acc);
    let mut reps = Vec::new();
    for v in z {
        acc.push(v.clone());
        let r = span_rank(field, len, &acc);
        if r > rank {
            rank = r;
            reps.push(v.clone());
        } else {
            acc.pop();
        }
    }
    Ok(reps)
}
