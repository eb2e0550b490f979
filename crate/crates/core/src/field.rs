//! Scalars for representations: the rationals or a small prime field, with
//! dense matrices over either.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn check(&self) -> Result<()> {
        if let FieldSpec::Prime(p) = *self {
            if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
                return Err(Error::Precondition(format!("{p} is not prime")));
            }
        }
        Ok(())
    }

    /// Canonical representative of `x` in this field.
    pub fn normalize(&self, x: &Rational) -> Result<Rational> {
        match *self {
            FieldSpec::Rationals => Ok(x.clone()),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let inv = mod_inverse(&den, &p);
                Ok(Rational::from_integer((x.numer().mod_floor(&p) * inv).mod_floor(&p)))
            }
        }
    }

    pub fn add(&self, a: &Rational, b: &Rational) -> Rational {
        self.normalize(&(a + b)).expect("integral")
    }

    pub fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        self.normalize(&(a * b)).expect("integral")
    }

    pub fn neg(&self, a: &Rational) -> Rational {
        self.normalize(&-a).expect("integral")
    }

    pub fn inv(&self, a: &Rational) -> Result<Rational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.normalize(&(Rational::one() / a))
    }

    /// All field elements, for prime fields.
    pub fn elements(&self) -> Option<Vec<Rational>> {
        match *self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some((0..p).map(|k| Rational::from_integer(BigInt::from(k))).collect()),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    // p is prime, so a^(p-2) is the inverse.
    a.modpow(&(p - BigInt::from(2)), p)
}

/// Dense matrix with `rows x cols` entries stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Precondition("ragged matrix".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: usize, cols: usize, xs: &[i64]) -> Self {
        assert_eq!(xs.len(), rows * cols);
        Matrix { rows, cols, data: xs.iter().map(|x| crate::rational::int(*x)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn normalized(&self, f: FieldSpec) -> Result<Matrix> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f.normalize(x)).collect::<Result<_>>()?,
        })
    }

    pub fn mul(&self, other: &Matrix, f: FieldSpec) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, f.normalize(&acc)?);
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan inverse; `None` when singular or non-square.
    pub fn inverse(&self, f: FieldSpec) -> Result<Option<Matrix>> {
        if self.rows != self.cols {
            return Ok(None);
        }
        let n = self.rows;
        let mut a = self.normalized(f)?;
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(None);
            };
            for m in [&mut a, &mut inv] {
                for j in 0..n {
                    m.data.swap(piv * n + j, col * n + j);
                }
            }
            let s = f.inv(a.get(col, col))?;
            for m in [&mut a, &mut inv] {
                for j in 0..n {
                    let v = f.mul(m.get(col, j), &s);
                    m.set(col, j, v);
                }
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for m in [&mut a, &mut inv] {
                    for j in 0..n {
                        let v = f.add(m.get(r, j), &f.neg(&f.mul(&factor, m.get(col, j))));
                        m.set(r, j, v);
                    }
                }
            }
        }
        Ok(Some(inv))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(&crate::rational::format(self.get(i, j)))?;
            }
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn prime_normalization() {
        let f = FieldSpec::Prime(5);
        assert_eq!(f.normalize(&int(-1)).unwrap(), int(4));
        assert_eq!(f.normalize(&frac(1, 2)).unwrap(), int(3));
        assert!(f.normalize(&frac(1, 5)).is_err());
        assert!(FieldSpec::Prime(4).check().is_err());
    }

    #[test]
    fn inverses() {
        let m = Matrix::from_ints(2, 2, &[1, 2, 3, 4]);
        let q = FieldSpec::Rationals;
        let inv = m.inverse(q).unwrap().unwrap();
        assert_eq!(m.mul(&inv, q).unwrap(), Matrix::identity(2));
        let f5 = FieldSpec::Prime(5);
        let inv5 = m.inverse(f5).unwrap().unwrap();
        assert_eq!(m.mul(&inv5, f5).unwrap(), Matrix::identity(2));
        assert_eq!(Matrix::from_ints(1, 1, &[0]).inverse(q).unwrap(), None);
        assert_eq!(Matrix::from_ints(1, 2, &[1, 0]).inverse(q).unwrap(), None);
    }
}
