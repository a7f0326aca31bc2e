//! Arithmetic in Z/p^k and matrix normal forms over it.
//!
//! Z/p^k is a local principal ideal ring: every element is a unit times a
//! power of p, so every matrix is equivalent to a diagonal matrix whose
//! entries are pure p-powers. All length computations downstream reduce to
//! reading off those exponents.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest modulus accepted; products of two residues fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// The coefficient ring Z/p^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CoeffRing {
    p: u64,
    k: u32,
    #[serde(skip)]
    modulus: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffRing {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidRing {
            p,
            k,
            reason: reason.to_string(),
        };
        if !is_prime(p) {
            return Err(invalid("p is not prime"));
        }
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        let mut modulus: u64 = 1;
        for _ in 0..k {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m <= MAX_MODULUS)
                .ok_or_else(|| invalid("p^k exceeds 2^31"))?;
        }
        Ok(CoeffRing { p, k, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// p^k.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce(&self, value: i64) -> u64 {
        value.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut result = 1 % self.modulus;
        let mut b = base % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }

    /// p^a as an element of the ring; zero once a >= k.
    pub fn p_power(&self, a: u32) -> u64 {
        if a >= self.k {
            0
        } else {
            self.p.pow(a)
        }
    }

    /// Largest a <= k with p^a dividing the canonical representative.
    #[inline]
    pub fn valuation(&self, value: u64) -> u32 {
        if value == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut x = value;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn is_unit(&self, value: u64) -> bool {
        !value.is_multiple_of(self.p)
    }

    pub fn invert_unit(&self, value: u64) -> Result<u64> {
        let value = value % self.modulus;
        if !self.is_unit(value) {
            return Err(Error::NotAUnit {
                value,
                modulus: self.modulus,
            });
        }
        let (mut r0, mut r1) = (self.modulus as i64, value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.reduce(t0))
    }

    /// Splits a nonzero element as p^a * u with u a unit.
    pub fn split(&self, value: u64) -> (u32, u64) {
        let a = self.valuation(value);
        if a >= self.k {
            return (self.k, 0);
        }
        (a, value / self.p.pow(a))
    }

    pub fn scalar(&self, value: i64) -> Scalar {
        Scalar {
            value: self.reduce(value),
            ring: *self,
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "Z/{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.k)
        }
    }
}

/// An element of Z/p^k together with its ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u64,
    ring: CoeffRing,
}

impl Scalar {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    pub fn invert_unit(&self) -> Result<Scalar> {
        Ok(Scalar {
            value: self.ring.invert_unit(self.value)?,
            ring: self.ring,
        })
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar {
            value: self.ring.mul(self.value, rhs.value),
            ring: self.ring,
        }
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            value: self.ring.add(self.value, rhs.value),
            ring: self.ring,
        }
    }
}

/// Dense row-major matrix over Z/p^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: CoeffRing, size: usize) -> Self {
        let mut m = Matrix::zero(ring, size, size);
        for i in 0..size {
            m.set(i, i, 1 % ring.modulus());
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry.
    pub fn from_rows(ring: CoeffRing, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(ring, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ring.reduce(v));
            }
        }
        Ok(m)
    }

    pub fn diagonal(ring: CoeffRing, entries: &[u64]) -> Self {
        let mut m = Matrix::zero(ring, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e % ring.modulus());
        }
        m
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_ring(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let m = ring.modulus();
        let mut out = Matrix::zero(ring, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.get(l, j)) % m;
                }
            }
            out.data[i * other.cols..(i + 1) * other.cols].copy_from_slice(&acc);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| ring.add(a, b))
            .collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let ring = self.ring;
        let data = self.data.iter().map(|&a| ring.mul(a, c)).collect();
        Matrix { data, ..*self }
    }

    pub fn neg(&self) -> Matrix {
        let ring = self.ring;
        let data = self.data.iter().map(|&a| ring.neg(a)).collect();
        Matrix { data, ..*self }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut out = Matrix::zero(self.ring, self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block-diagonal sum of a list of matrices.
    pub fn block_diagonal(ring: CoeffRing, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zero(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, i: usize, c: u64) {
        let ring = self.ring;
        for v in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *v = ring.mul(*v, c);
        }
    }

    /// row_target -= c * row_source
    fn sub_row_multiple(&mut self, target: usize, source: usize, c: u64) {
        let ring = self.ring;
        let m = ring.modulus();
        let cols = self.cols;
        for j in 0..cols {
            let s = self.data[source * cols + j];
            if s != 0 {
                let t = &mut self.data[target * cols + j];
                *t = ring.sub(*t, (c * s) % m);
            }
        }
    }

    /// col_target -= c * col_source
    fn sub_col_multiple(&mut self, target: usize, source: usize, c: u64) {
        let ring = self.ring;
        let m = ring.modulus();
        for i in 0..self.rows {
            let s = self.data[i * self.cols + source];
            if s != 0 {
                let t = &mut self.data[i * self.cols + target];
                *t = ring.sub(*t, (c * s) % m);
            }
        }
    }

    /// Inverse of a square matrix, via its Smith form.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let snf = smith_normal_form(self);
        if snf.exponents.iter().any(|&a| a != 0) {
            return Err(Error::NotInvertible {
                modulus: self.ring.modulus(),
            });
        }
        // U A V = I, so A^{-1} = V U.
        snf.right.mul(&snf.left)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && smith_exponents(self).iter().all(|&a| a == 0)
    }
}

// Serialized as a list of rows.
impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// Smith normal form `U * A * V = diag(p^a_1, ..., p^a_r)` padded with zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Non-decreasing exponents, one per diagonal slot (`min(rows, cols)` of them).
    /// An exponent of `k` stands for a zero diagonal entry.
    pub exponents: Vec<u32>,
    pub left: Matrix,
    pub right: Matrix,
}

impl SnfResult {
    /// The diagonal matrix `U * A * V` this result claims.
    pub fn diagonal_matrix(&self) -> Matrix {
        let ring = self.left.ring();
        let mut d = Matrix::zero(ring, self.left.rows(), self.right.cols());
        for (i, &a) in self.exponents.iter().enumerate() {
            d.set(i, i, ring.p_power(a));
        }
        d
    }
}

/// Position of the first entry of minimal valuation in the trailing
/// submatrix `[t.., t..]`, scanned in row-major order.
fn find_pivot(work: &Matrix, t: usize) -> Option<(usize, usize, u32)> {
    let ring = work.ring();
    let mut best: Option<(usize, usize, u32)> = None;
    for i in t..work.rows() {
        for j in t..work.cols() {
            let v = work.get(i, j);
            if v == 0 {
                continue;
            }
            let a = ring.valuation(v);
            if best.is_none_or(|(_, _, b)| a < b) {
                best = Some((i, j, a));
                if a == 0 {
                    return best;
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &Matrix) -> SnfResult {
    let ring = a.ring();
    let mut work = a.clone();
    let mut left = Matrix::identity(ring, a.rows());
    let mut right = Matrix::identity(ring, a.cols());
    let r = a.rows().min(a.cols());
    let mut exponents = Vec::with_capacity(r);

    for t in 0..r {
        let Some((pi, pj, val)) = find_pivot(&work, t) else {
            exponents.resize(r, ring.k());
            break;
        };
        work.swap_rows(t, pi);
        left.swap_rows(t, pi);
        work.swap_cols(t, pj);
        right.swap_cols(t, pj);

        let (_, unit) = ring.split(work.get(t, t));
        let inv = ring.invert_unit(unit).expect("unit part is invertible");
        work.scale_row(t, inv);
        left.scale_row(t, inv);

        let pivot = work.get(t, t);
        for i in t + 1..work.rows() {
            let w = work.get(i, t);
            if w != 0 {
                let q = w / pivot;
                work.sub_row_multiple(i, t, q);
                left.sub_row_multiple(i, t, q);
            }
        }
        for j in t + 1..work.cols() {
            let w = work.get(t, j);
            if w != 0 {
                let q = w / pivot;
                work.sub_col_multiple(j, t, q);
                right.sub_col_multiple(j, t, q);
            }
        }
        exponents.push(val);
    }

    SnfResult {
        exponents,
        left,
        right,
    }
}

/// SNF exponents without tracking the transforms.
///
/// Column operations never touch the trailing submatrix once the pivot
/// column is cleared, so row elimination alone determines the exponents.
pub fn smith_exponents(a: &Matrix) -> Vec<u32> {
    let ring = a.ring();
    let mut work = a.clone();
    let r = a.rows().min(a.cols());
    let mut exponents = Vec::with_capacity(r);
    for t in 0..r {
        let Some((pi, pj, val)) = find_pivot(&work, t) else {
            exponents.resize(r, ring.k());
            break;
        };
        work.swap_rows(t, pi);
        work.swap_cols(t, pj);
        let (_, unit) = ring.split(work.get(t, t));
        let inv = ring.invert_unit(unit).expect("unit part is invertible");
        work.scale_row(t, inv);
        let pivot = work.get(t, t);
        for i in t + 1..work.rows() {
            let w = work.get(i, t);
            if w != 0 {
                work.sub_row_multiple(i, t, w / pivot);
            }
        }
        exponents.push(val);
    }
    exponents
}

/// Length of the image of `A : (Z/p^k)^cols -> (Z/p^k)^rows`.
pub fn image_length(a: &Matrix) -> usize {
    let k = a.ring().k();
    smith_exponents(a).iter().map(|&e| (k - e) as usize).sum()
}

/// Generators (as columns) of the kernel of `A` acting on `(Z/p^k)^cols`.
pub fn kernel_generators(a: &Matrix) -> Matrix {
    let ring = a.ring();
    let snf = smith_normal_form(a);
    let cols = a.cols();
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for j in 0..cols {
        let scale = match snf.exponents.get(j) {
            Some(&0) => continue,
            Some(&e) => ring.p_power(ring.k() - e),
            None => 1 % ring.modulus(),
        };
        gens.push(
            (0..cols)
                .map(|i| ring.mul(snf.right.get(i, j), scale))
                .collect(),
        );
    }
    let mut out = Matrix::zero(ring, cols, gens.len());
    for (c, g) in gens.iter().enumerate() {
        for (i, &v) in g.iter().enumerate() {
            out.set(i, c, v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, k: u32) -> CoeffRing {
        CoeffRing::new(p, k).unwrap()
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(CoeffRing::new(4, 2).is_err());
        assert!(CoeffRing::new(2, 0).is_err());
        assert!(CoeffRing::new(2, 31).is_ok());
        assert!(CoeffRing::new(2, 32).is_err());
        assert!(CoeffRing::new(3, 20).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(ring(2, 2).scalar(2).valuation(), 1);
        assert_eq!(ring(2, 2).scalar(0).valuation(), 2);
        assert_eq!(ring(3, 3).scalar(18).valuation(), 2);
        assert_eq!(ring(3, 3).scalar(5).valuation(), 0);
    }

    #[test]
    fn invert_unit_examples() {
        assert_eq!(ring(2, 2).scalar(3).invert_unit().unwrap().value(), 3);
        assert_eq!(ring(5, 1).scalar(2).invert_unit().unwrap().value(), 3);
        assert!(matches!(
            ring(2, 2).scalar(2).invert_unit(),
            Err(Error::NotAUnit { .. })
        ));
    }

    #[test]
    fn invert_unit_exhaustive() {
        for (p, k) in [(2, 1), (2, 9), (3, 5), (5, 4), (7, 3), (23, 2), (5, 1)] {
            let r = ring(p, k);
            assert!(r.modulus() <= 625);
            for v in 0..r.modulus() {
                match r.invert_unit(v) {
                    Ok(inv) => assert_eq!(r.mul(v, inv), 1, "p={p} k={k} v={v}"),
                    Err(_) => assert!(!r.is_unit(v)),
                }
            }
        }
    }

    #[test]
    fn snf_examples() {
        let r = ring(2, 2);
        let a = Matrix::from_rows(r, &[vec![2, 1], vec![0, 2]]).unwrap();
        assert_eq!(smith_normal_form(&a).exponents, vec![0, 2]);
        assert_eq!(
            smith_normal_form(&Matrix::identity(r, 3)).exponents,
            vec![0, 0, 0]
        );
        assert_eq!(
            smith_normal_form(&Matrix::zero(r, 2, 3)).exponents,
            vec![2, 2]
        );
        assert!(smith_normal_form(&Matrix::zero(r, 0, 3))
            .exponents
            .is_empty());
        assert!(smith_normal_form(&Matrix::zero(r, 3, 0))
            .exponents
            .is_empty());
    }

    #[test]
    fn snf_reconstructs_diagonal() {
        let r = ring(3, 2);
        let a = Matrix::from_rows(r, &[vec![3, 6, 1], vec![0, 3, 3], vec![9, 0, 6]]).unwrap();
        let snf = smith_normal_form(&a);
        let uav = snf.left.mul(&a).unwrap().mul(&snf.right).unwrap();
        assert_eq!(uav, snf.diagonal_matrix());
        assert_eq!(smith_exponents(&a), snf.exponents);
    }

    #[test]
    fn image_length_examples() {
        let r = ring(2, 2);
        assert_eq!(image_length(&Matrix::from_rows(r, &[vec![2]]).unwrap()), 1);
        assert_eq!(image_length(&Matrix::from_rows(r, &[vec![1]]).unwrap()), 2);
        let a = Matrix::from_rows(r, &[vec![2, 1], vec![0, 2]]).unwrap();
        assert_eq!(image_length(&a), 2);
        assert_eq!(image_length(&Matrix::zero(r, 0, 4)), 0);
        assert_eq!(image_length(&Matrix::zero(r, 4, 0)), 0);
    }

    #[test]
    fn kernel_generators_span_kernel() {
        let r = ring(2, 3);
        let a = Matrix::from_rows(r, &[vec![2, 4, 0], vec![0, 2, 6]]).unwrap();
        let g = kernel_generators(&a);
        assert!(a.mul(&g).unwrap().is_zero());
        // |ker| * |im| = |source|
        assert_eq!(image_length(&g) + image_length(&a), 3 * 3);
    }

    #[test]
    fn inverse_of_unimodular() {
        let r = ring(5, 2);
        let a = Matrix::from_rows(r, &[vec![1, 5], vec![3, 2]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(r, 2));
        let singular = Matrix::from_rows(r, &[vec![5, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            singular.inverse(),
            Err(Error::NotInvertible { .. })
        ));
    }
}
