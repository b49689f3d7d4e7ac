use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A commutative ring with exact arithmetic.
pub trait Coefficient:
    Clone + Debug + PartialEq + Send + Sync + From<i64> + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl Coefficient for i64 {}
impl Coefficient for i128 {}
impl Coefficient for Ratio<i64> {}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<R>>", into = "Vec<Vec<R>>")]
#[serde(bound(serialize = "R: Serialize + Clone", deserialize = "R: Deserialize<'de>"))]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Coefficient> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = R::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect();
        Matrix { rows, cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect() })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(R::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone())
        }))
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().cloned().map(Neg::neg).collect() }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        Ok(())
    }
}

impl<R> Matrix<R> {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> TryFrom<Vec<Vec<R>>> for Matrix<R> {
    type Error = String;

    fn try_from(rows: Vec<Vec<R>>) -> std::result::Result<Self, String> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err("ragged matrix rows".into());
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }
}

impl<R: Clone> From<Matrix<R>> for Vec<Vec<R>> {
    fn from(m: Matrix<R>) -> Self {
        if m.cols == 0 {
            return vec![Vec::new(); m.rows];
        }
        m.data.chunks(m.cols).map(<[R]>::to_vec).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let a: Matrix<i64> = vec![vec![1, 2], vec![3, 4]].try_into().unwrap();
        let b: Matrix<i64> = vec![vec![0, 1], vec![1, 0]].try_into().unwrap();
        let ab: Vec<Vec<i64>> = a.checked_mul(&b).unwrap().into();
        assert_eq!(ab, vec![vec![2, 1], vec![4, 3]]);
        assert_eq!(a.checked_mul(&Matrix::identity(2)).unwrap(), a);
        assert!(a.checked_mul(&Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a: Matrix<i64> = serde_json::from_str("[[1,2,3]]").unwrap();
        assert_eq!(a.shape(), (1, 3));
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[1,2,3]]");
        assert!(serde_json::from_str::<Matrix<i64>>("[[1],[2,3]]").is_err());
    }
}
