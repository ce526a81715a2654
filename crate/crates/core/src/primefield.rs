//! Exact arithmetic in the prime field F_p and dense linear algebra over it.
//!
//! Residues are stored as `u32` in `[0, p)`; products are formed in `u64`,
//! so any prime below 2^31 is safe. The algebraic code only uses small primes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::Error;

/// Trial-division primality test; the moduli in play are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The field F_p for a runtime prime `p >= 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    /// Validates `p` (prime, at least 5). Characteristics 2 and 3 are rejected.
    pub fn new(p: u32) -> Result<Self, Error> {
        if !(5..1 << 31).contains(&p) || !is_prime(p as u64) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Fp { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b*c`, the inner step of every elimination loop.
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
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

    /// Inverse via Fermat; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// Reduces any signed integer into `[0, p)`.
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Signed representative in `(-p/2, p/2]`, handy for printing weights.
    pub fn signed(self, a: u32) -> i64 {
        let a = a as i64;
        if a > self.p as i64 / 2 {
            a - self.p as i64
        } else {
            a
        }
    }

    pub fn scalar(self, v: i64) -> FpScalar {
        FpScalar {
            value: self.from_i64(v),
            p: self.p,
        }
    }
}

/// A single field element carrying its modulus. Mixing moduli panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: u32,
}

impl FpScalar {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    fn field(self) -> Fp {
        Fp { p: self.p }
    }

    pub fn inv(self) -> Option<FpScalar> {
        self.field().inv(self.value).map(|value| FpScalar { value, p: self.p })
    }

    pub fn pow(self, e: u64) -> FpScalar {
        FpScalar {
            value: self.field().pow(self.value, e),
            p: self.p,
        }
    }

    fn same(self, other: FpScalar) -> Fp {
        assert_eq!(self.p, other.p, "mixed moduli");
        self.field()
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        let f = self.same(rhs);
        FpScalar {
            value: f.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        let f = self.same(rhs);
        FpScalar {
            value: f.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        let f = self.same(rhs);
        FpScalar {
            value: f.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar {
            value: self.field().neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing mod p.
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = field.from_i64(v);
            }
        }
        m
    }

    /// Builds a matrix from already-reduced rows.
    pub fn from_reduced_rows(field: Fp, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        let p = f.p() as u64;
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.data[k * other.cols + j] as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = v as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for (a, b) in self.row(i).iter().zip(v) {
                    s = (s + *a as u64 * *b as u64) % p;
                }
                s as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(*a, *b)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(*a, *b)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let f = self.field;
        let data = self.data.iter().map(|a| f.mul(*a, c)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (FpMatrix, usize, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..m.cols {
                    let v = f.mul_add(m.get(i, j), neg, m.get(r, j));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let (r, rank, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (i, &c) in pivots.iter().enumerate().take(rank) {
                v[c] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `ker(M - c I)`.
    pub fn eigenspace(&self, c: u32) -> Vec<Vec<u32>> {
        assert_eq!(self.rows, self.cols, "eigenspace of a non-square matrix");
        let shifted = self.sub(&Self::identity(self.field, self.rows).scale(c));
        shifted.nullspace()
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace of F_p^n.
///
/// Every stored row has a leading 1 in its pivot column and zeros in the
/// pivot columns of all other rows, so reduction is a single pass.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Fp,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: Fp, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Subtracts the span from `v` in place, leaving zeros in pivot columns.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let factor = v[c];
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = f.mul_add(*x, neg, r);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coefficients of `v` against the stored rows, if `v` lies in the span.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        let c: Vec<u32> = self.pivots.iter().map(|&col| v[col]).collect();
        if self.contains(v) {
            Some(c)
        } else {
            None
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(lead) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[lead]).expect("nonzero lead");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let factor = row[lead];
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for (x, &r) in row.iter_mut().zip(&w) {
                if r != 0 {
                    *x = f.mul_add(*x, neg, r);
                }
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(w);
        self.pivots.push(lead);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn rejects_small_and_composite_moduli() {
        for p in [0, 1, 2, 3, 4, 9, 25, 91] {
            assert!(Fp::new(p).is_err(), "{p}");
        }
        for p in [5, 7, 11, 13, 101] {
            assert!(Fp::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn inverses_exist_for_nonzero_residues() {
        let k = f(11);
        for a in 1..11 {
            assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
        }
        assert_eq!(k.inv(0), None);
    }

    #[test]
    fn scalar_ops() {
        let k = f(7);
        let a = k.scalar(3);
        let b = k.scalar(-2);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a * b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((-a).value(), 4);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
    }

    #[test]
    fn rref_identity_and_zero() {
        let k = f(5);
        let (_, rank, piv) = FpMatrix::identity(k, 3).rref();
        assert_eq!((rank, piv), (3, vec![0, 1, 2]));
        let (_, rank, piv) = FpMatrix::zeros(k, 2, 4).rref();
        assert_eq!((rank, piv), (0, vec![]));
    }

    #[test]
    fn rref_dependent_rows() {
        let k = f(5);
        // 3 * (2, 4) = (6, 12) = (1, 2) mod 5.
        assert_eq!((3 * 2 % 5, 3 * 4 % 5), (1, 2));
        let m = FpMatrix::from_rows(k, &[vec![2, 4], vec![1, 2]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn nullspace_matches_brute_force() {
        let k = f(7);
        let m = FpMatrix::from_rows(k, &[vec![1, 1, 0]]);
        let basis = m.nullspace();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
        // Every kernel vector found by enumeration lies in the span.
        let mut span = Echelon::new(k, 3);
        for v in &basis {
            span.insert(v);
        }
        let mut kernel_size = 0;
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    let v = [a, b, c];
                    if m.mul_vec(&v).iter().all(|&x| x == 0) {
                        kernel_size += 1;
                        assert!(span.contains(&v));
                    }
                }
            }
        }
        assert_eq!(kernel_size, 49);
    }

    #[test]
    fn eigenspaces_small_cases() {
        let k = f(5);
        let d = FpMatrix::from_rows(k, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(d.eigenspace(2).len(), 2);
        let j = FpMatrix::from_rows(k, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(j.eigenspace(0).len(), 1);
        assert_eq!(FpMatrix::identity(k, 4).nullspace().len(), 0);
        assert_eq!(FpMatrix::zeros(k, 1, 3).nullspace().len(), 3);
    }

    #[test]
    fn echelon_coordinates() {
        let k = f(7);
        let mut e = Echelon::new(k, 3);
        assert!(e.insert(&[1, 2, 3]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 3, 4]));
        let v = [2, 5, 1];
        assert!(!e.contains(&v));
        let w = [3, 6, 9 % 7];
        let c = e.coords(&w).unwrap();
        let mut back = vec![0; 3];
        for (coef, row) in c.iter().zip(e.rows()) {
            for (x, r) in back.iter_mut().zip(row) {
                *x = k.mul_add(*x, *coef, *r);
            }
        }
        assert_eq!(back, w.to_vec());
    }
}
