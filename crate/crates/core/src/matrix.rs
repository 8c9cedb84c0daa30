//! Square matrices over arbitrary-precision integers.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// A `d × d` integer matrix stored row-major.
/// Serialised as rows of decimal strings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<String>>", try_from = "Vec<Vec<String>>")]
pub struct IntMatrix {
    d: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(d: usize) -> Self {
        IntMatrix { d, entries: vec![BigInt::zero(); d * d] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            m.entries[i * d + i] = BigInt::one();
        }
        m
    }

    /// Build from rows of small integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), d, "matrix must be square");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { d, entries }
    }

    pub fn from_entries(d: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch(d * d, entries.len()));
        }
        Ok(IntMatrix { d, entries })
    }

    /// The elementary matrix `E_ij` (1-based indices).
    pub fn elementary(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(d);
        m.set(i - 1, j - 1, BigInt::one());
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.d + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.d).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let mut t = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                t.entries[j * d + i] = self.entries[i * d + j].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.d != rhs.d {
            return Err(Error::DimensionMismatch(self.d, rhs.d));
        }
        let d = self.d;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &rhs.entries[k * d + j];
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.d);
        (0..self.d)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { d: self.d, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.d != rhs.d {
            return Err(Error::DimensionMismatch(self.d, rhs.d));
        }
        Ok(IntMatrix {
            d: self.d,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.d != rhs.d {
            return Err(Error::DimensionMismatch(self.d, rhs.d));
        }
        Ok(IntMatrix {
            d: self.d,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|x| x.is_positive())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.d).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn max_entry(&self) -> BigInt {
        self.entries.iter().max().cloned().unwrap_or_default()
    }

    pub fn min_entry(&self) -> BigInt {
        self.entries.iter().min().cloned().unwrap_or_default()
    }

    /// L1 norm of column `j`.
    pub fn column_l1(&self, j: usize) -> BigInt {
        (0..self.d).map(|i| self.get(i, j).abs()).sum()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let d = self.d;
        if d == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d - 1 {
            if a[k * d + k].is_zero() {
                let Some(p) = (k + 1..d).find(|&r| !a[r * d + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..d {
                    a.swap(k * d + j, p * d + j);
                }
                sign = -sign;
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = &a[i * d + j] * &a[k * d + k] - &a[i * d + k] * &a[k * d + j];
                    a[i * d + j] = v / &prev;
                }
            }
            prev = a[k * d + k].clone();
        }
        sign * &a[d * d - 1]
    }

    /// Inverse over the rationals, row-major; `None` if singular.
    pub fn rational_inverse(&self) -> Option<Vec<Rat>> {
        let d = self.d;
        let mut a: Vec<Rat> = self.entries.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let mut inv: Vec<Rat> = Self::identity(d)
            .entries
            .into_iter()
            .map(Rat::from_integer)
            .collect();
        for c in 0..d {
            let p = (c..d).find(|&r| !a[r * d + c].is_zero())?;
            if p != c {
                for j in 0..d {
                    a.swap(c * d + j, p * d + j);
                    inv.swap(c * d + j, p * d + j);
                }
            }
            let piv = a[c * d + c].clone();
            for j in 0..d {
                a[c * d + j] = &a[c * d + j] / &piv;
                inv[c * d + j] = &inv[c * d + j] / &piv;
            }
            for r in 0..d {
                if r == c || a[r * d + c].is_zero() {
                    continue;
                }
                let f = a[r * d + c].clone();
                for j in 0..d {
                    let t = &f * &a[c * d + j];
                    a[r * d + j] -= t;
                    let t = &f * &inv[c * d + j];
                    inv[r * d + j] -= t;
                }
            }
        }
        Some(inv)
    }

    /// Exact integer inverse; fails unless the inverse is integral.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let inv = self.rational_inverse().ok_or(Error::NotUnimodular)?;
        let mut entries = Vec::with_capacity(inv.len());
        for x in inv {
            if !x.is_integer() {
                return Err(Error::NotUnimodular);
            }
            entries.push(x.to_integer());
        }
        Ok(IntMatrix { d: self.d, entries })
    }

    /// `self · v` for a rational vector.
    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.d);
        (0..self.d)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(a.clone()) * b)
            })
            .collect()
    }

    /// Lossy conversion for floating-point work; `None` if an entry overflows.
    pub fn to_f64_rows(&self) -> Option<Vec<Vec<f64>>> {
        (0..self.d)
            .map(|i| self.row(i).iter().map(|x| x.to_f64().filter(|v| v.is_finite())).collect())
            .collect()
    }

    /// Entries as decimal strings, row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.d).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }

    /// Lower-right `size × size` block.
    pub fn lower_right_block(&self, size: usize) -> IntMatrix {
        let off = self.d - size;
        let mut m = IntMatrix::zeros(size);
        for i in 0..size {
            for j in 0..size {
                m.set(i, j, self.get(off + i, off + j).clone());
            }
        }
        m
    }
}

impl From<IntMatrix> for Vec<Vec<String>> {
    fn from(m: IntMatrix) -> Self {
        m.to_string_rows()
    }
}

impl TryFrom<Vec<Vec<String>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<String>>) -> Result<Self> {
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch(d, row.len()));
            }
            for x in row {
                entries.push(x.trim().parse::<BigInt>().map_err(|_| Error::InvalidParameters(format!("bad integer {x:?}")))?);
            }
        }
        IntMatrix::from_entries(d, entries)
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("dimension mismatch in matrix product")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.d {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        // cofactor expansion along the first row: -2 + 1
        let m = IntMatrix::from_rows(&[[0, 2, 1], [1, 0, 0], [0, 1, 1]]);
        assert_eq!(m.det(), BigInt::from(-1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, IntMatrix::identity(3));
        let s = IntMatrix::from_rows(&[[2, 0], [0, 1]]);
        assert_eq!(s.det(), BigInt::from(2));
        assert_eq!(s.inverse(), Err(Error::NotUnimodular));
        let z = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert!(z.det().is_zero());
        assert!(z.rational_inverse().is_none());
    }

    #[test]
    fn det_with_pivoting() {
        let m = IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, -1]]);
        assert_eq!(m.det(), BigInt::from(1));
        let p = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(p.det(), BigInt::from(-1));
    }

    #[test]
    fn power_matches_repeated_product() {
        let m = IntMatrix::from_rows(&[[1, 1], [1, 0]]);
        let mut acc = IntMatrix::identity(2);
        for _ in 0..30 {
            acc = &acc * &m;
        }
        assert_eq!(m.pow(30), acc);
        assert_eq!(m.pow(30).get(0, 1), &BigInt::from(832040));
    }

    #[test]
    fn mismatched_product_is_an_error() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::identity(3);
        assert_eq!(a.try_mul(&b), Err(Error::DimensionMismatch(2, 3)));
    }
}
