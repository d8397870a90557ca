//! Arithmetic in the prime fields 𝔽_p and small dense matrices over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::LinAlgError;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinAlgError> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> PrimeFieldElem {
        PrimeFieldElem {
            p: self.p,
            value: v % self.p,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = PrimeFieldElem> + '_ {
        (0..self.p).map(|v| self.elem(v))
    }

    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub(crate) fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        Some(pow_mod(a, self.p - 2, self.p))
    }
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Residue modulo a prime. Binary operators panic when the moduli differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldElem {
    p: u64,
    value: u64,
}

impl PrimeFieldElem {
    pub fn new(p: u64, value: u64) -> Result<Self, LinAlgError> {
        Ok(PrimeField::new(p)?.elem(value))
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<Self> {
        let field = PrimeField { p: self.p };
        field.inv(self.value).map(|v| field.elem(v))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed moduli {} and {}", self.p, other.p);
    }
}

impl Add for PrimeFieldElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self {
            p: self.p,
            value: (self.value + rhs.value) % self.p,
        }
    }
}

impl Sub for PrimeFieldElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self {
            p: self.p,
            value: (self.value + self.p - rhs.value) % self.p,
        }
    }
}

impl Mul for PrimeFieldElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self {
            p: self.p,
            value: (self.value * rhs.value) % self.p,
        }
    }
}

impl Neg for PrimeFieldElem {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            p: self.p,
            value: (self.p - self.value) % self.p,
        }
    }
}

impl fmt::Display for PrimeFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

/// Dense row-major matrix of residues over a fixed prime field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
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
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Entries are reduced modulo p.
    pub fn from_row_major(
        field: PrimeField,
        rows: usize,
        cols: usize,
        data: Vec<u64>,
    ) -> Result<Self, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::RaggedRows);
        }
        let p = field.modulus();
        Ok(Self {
            field,
            rows,
            cols,
            data: data.into_iter().map(|x| x % p).collect(),
        })
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

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.modulus();
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

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows || self.field != other.field {
            return Err(LinAlgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0;
                for k in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| m[i * cols + col] != 0) else {
                continue;
            };
            for j in 0..cols {
                m.swap(p * cols + j, rank * cols + j);
            }
            let inv = f.inv(m[rank * cols + col]).expect("pivot is nonzero");
            for i in rank + 1..rows {
                let factor = f.mul(m[i * cols + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..cols {
                    let v = f.mul(factor, m[rank * cols + j]);
                    m[i * cols + j] = f.sub(m[i * cols + j], v);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Stacks `self` to the left of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.rows != other.rows || self.field != other.field {
            return Err(LinAlgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.field, self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j);
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = other.get(i, j);
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, LinAlgError> {
        Ok(self.transpose().hstack(&other.transpose())?.transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(PrimeField::new(4), Err(LinAlgError::NotPrime(4)));
        assert_eq!(PrimeFieldElem::new(1, 0), Err(LinAlgError::NotPrime(1)));
    }

    #[test]
    fn reduction_on_construction() {
        let x = PrimeFieldElem::new(5, 17).unwrap();
        assert_eq!(x.value(), 2);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [2u64, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            let zero = f.elem(0);
            let one = f.elem(1);
            let all: Vec<_> = f.elements().collect();
            for &a in &all {
                assert_eq!(a + zero, a);
                assert_eq!(a * one, a);
                assert_eq!(a + (-a), zero);
                assert_eq!(a - a, zero);
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), one);
                } else {
                    assert!(a.inv().is_none());
                }
                for &b in &all {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &all {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn mixed_moduli_panic() {
        let _ = PrimeFieldElem::new(2, 1).unwrap() + PrimeFieldElem::new(3, 1).unwrap();
    }

    #[test]
    fn matrix_rank_mod_p() {
        let f2 = PrimeField::new(2).unwrap();
        // [[1,1],[1,1]] singular everywhere; [[1,1],[1,3]] singular only mod 2.
        let m = FpMatrix::from_row_major(f2, 2, 2, vec![1, 1, 1, 3]).unwrap();
        assert_eq!(m.rank(), 1);
        let f3 = PrimeField::new(3).unwrap();
        let m = FpMatrix::from_row_major(f3, 2, 2, vec![1, 1, 1, 3]).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(FpMatrix::identity(f3, 3).is_invertible());
        assert_eq!(FpMatrix::zeros(f3, 2, 3).rank(), 0);
    }

    #[test]
    fn matrix_mul_and_stack() {
        let f = PrimeField::new(3).unwrap();
        let a = FpMatrix::from_row_major(f, 2, 2, vec![1, 2, 0, 1]).unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.data(), &[1, 1, 0, 1]);
        let b = FpMatrix::from_row_major(f, 2, 1, vec![1, 2]).unwrap();
        let h = a.hstack(&b).unwrap();
        assert_eq!(h.data(), &[1, 2, 1, 0, 1, 2]);
        let c = FpMatrix::from_row_major(f, 1, 2, vec![2, 2]).unwrap();
        let v = a.vstack(&c).unwrap();
        assert_eq!(v.data(), &[1, 2, 0, 1, 2, 2]);
    }
}
