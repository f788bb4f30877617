use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::scalar::{Gaussian, Mode, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix. Zero rows or zero columns are allowed.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_vec",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds from nested rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                left: (r, c),
                right: (1, bad.len()),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer matrix, convenient for fixtures. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn matmul(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out: Matrix<S> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    let prod = a.clone() * rhs.get(k, j).clone();
                    out.data[idx] = out.data[idx].clone() + prod;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &Matrix<S>,
        op: &'static str,
        f: impl Fn(S, S) -> S,
    ) -> Result<Matrix<S>> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn try_add(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        self.map(|v| v.clone() * s.clone())
    }

    /// `self + c·I` for square `self`.
    pub fn shift_diagonal(&self, c: &S) -> Matrix<S> {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = out.get(i, i).clone() + c.clone();
            out.set(i, i, v);
        }
        out
    }

    pub fn conj_transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Plain transpose without conjugation.
    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `A^p` with `A^0 = I`.
    pub fn power(&self, p: usize) -> Result<Matrix<S>> {
        self.require_square()?;
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix<S> {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn top_rows(&self, n: usize) -> Matrix<S> {
        Matrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    /// Column-wise concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "hcat",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Matrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn column_range(&self, start: usize, end: usize) -> Matrix<S> {
        Matrix::from_fn(self.rows, end - start, |i, j| {
            self.get(i, start + j).clone()
        })
    }

    /// Largest entry modulus, `0.0` for empty matrices.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(S::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// Exact equality in exact mode, max-entry difference `<= tol` otherwise.
    pub fn approx_eq(&self, other: &Matrix<S>, tol: f64) -> bool {
        if self.shape() != other.shape() {
            return false;
        }
        if S::is_exact() {
            return self == other;
        }
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| (a.clone() - b.clone()).magnitude() <= tol)
    }

    /// `max |self - other|` entrywise.
    pub fn max_diff(&self, other: &Matrix<S>) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    pub fn to_float(&self) -> Matrix<Complex64> {
        self.map(S::to_complex64)
    }
}

impl Matrix<Complex64> {
    /// Exact rational image of every double entry.
    pub fn to_exact(&self) -> Result<Matrix<Gaussian>> {
        let data = self
            .data
            .iter()
            .map(|z| Gaussian::from_f64(z.re, z.im).ok_or(Error::NonFinite))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(self.rows, self.cols, data)
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} ({})", self.rows, self.cols, S::MODE)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(S::render).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Panics on a shape mismatch; use [`Matrix::matmul`] for a checked product.
impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

/// A matrix tagged with its arithmetic mode at runtime.
#[derive(Clone, PartialEq, Debug)]
pub enum DynMatrix {
    Exact(Matrix<Gaussian>),
    Float(Matrix<Complex64>),
}

impl DynMatrix {
    pub fn mode(&self) -> Mode {
        match self {
            DynMatrix::Exact(_) => Mode::Exact,
            DynMatrix::Float(_) => Mode::Float,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            DynMatrix::Exact(m) => m.shape(),
            DynMatrix::Float(m) => m.shape(),
        }
    }

    pub fn matmul(&self, rhs: &DynMatrix) -> Result<DynMatrix> {
        match (self, rhs) {
            (DynMatrix::Exact(a), DynMatrix::Exact(b)) => a.matmul(b).map(DynMatrix::Exact),
            (DynMatrix::Float(a), DynMatrix::Float(b)) => a.matmul(b).map(DynMatrix::Float),
            _ => Err(Error::ModeMismatch { op: "matmul" }),
        }
    }

    pub fn conj_transpose(&self) -> DynMatrix {
        match self {
            DynMatrix::Exact(m) => DynMatrix::Exact(m.conj_transpose()),
            DynMatrix::Float(m) => DynMatrix::Float(m.conj_transpose()),
        }
    }

    pub fn to_float(&self) -> Matrix<Complex64> {
        match self {
            DynMatrix::Exact(m) => m.to_float(),
            DynMatrix::Float(m) => m.clone(),
        }
    }

    pub fn to_exact(&self) -> Result<Matrix<Gaussian>> {
        match self {
            DynMatrix::Exact(m) => Ok(m.clone()),
            DynMatrix::Float(m) => m.to_exact(),
        }
    }
}

impl From<Matrix<Gaussian>> for DynMatrix {
    fn from(m: Matrix<Gaussian>) -> Self {
        DynMatrix::Exact(m)
    }
}

impl From<Matrix<Complex64>> for DynMatrix {
    fn from(m: Matrix<Complex64>) -> Self {
        DynMatrix::Float(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<Gaussian>;

    fn index_two() -> M {
        M::from_ints(&[[1, 1, 2, 5], [0, 1, 1, 1], [0, 3, 3, 1], [1, 0, 1, 4]])
    }

    #[test]
    fn identity_and_annihilator() {
        let a = M::from_ints(&[[1, 2, 3], [4, 5, 6], [7, 8, 10]]);
        assert_eq!(&M::identity(3) * &a, a);
        assert!((&a * &M::zeros(3, 3)).is_zero());
    }

    #[test]
    fn product_of_printed_factors() {
        let g1 = M::from_ints(&[[1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]]);
        let b1 = M::from_ints(&[[1, 1, 5], [0, 1, 1], [0, 3, 1], [1, 0, 4]]);
        assert_eq!(&g1 * &b1, M::from_ints(&[[1, 4, 6], [0, 4, 2], [1, 0, 4]]));
        assert_eq!(&b1 * &g1, index_two());
    }

    #[test]
    fn matmul_rejects_bad_shapes() {
        let a = M::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dyn_matmul_rejects_mixed_modes() {
        let e = DynMatrix::Exact(M::identity(2));
        let f = DynMatrix::Float(Matrix::<Complex64>::identity(2));
        assert_eq!(e.matmul(&f), Err(Error::ModeMismatch { op: "matmul" }));
        assert!(e.matmul(&e).is_ok());
    }

    #[test]
    fn conj_transpose_cases() {
        let a = M::from_ints(&[[1, 2, 3], [4, 5, 6]]);
        assert_eq!(a.conj_transpose(), M::from_ints(&[[1, 4], [2, 5], [3, 6]]));
        let i: Gaussian = "i".parse().unwrap();
        let z = M::from_vec(1, 1, vec![i.clone()]).unwrap();
        assert_eq!(z.conj_transpose(), M::from_vec(1, 1, vec![-i]).unwrap());
        let c = M::from_vec(
            1,
            2,
            vec!["1+2i".parse().unwrap(), "-1/3i".parse().unwrap()],
        )
        .unwrap();
        assert_eq!(c.conj_transpose().conj_transpose(), c);
    }

    #[test]
    fn powers() {
        let a = index_two();
        assert_eq!(a.power(0).unwrap(), M::identity(4));
        // Row-by-column expansion, written out independently of matmul.
        let mut sq = M::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Gaussian::from(0);
                for k in 0..4 {
                    acc = acc + a.get(i, k).clone() * a.get(k, j).clone();
                }
                sq.set(i, j, acc);
            }
        }
        assert_eq!(a.power(2).unwrap(), sq);
        assert_eq!(a.power(5).unwrap(), &sq * &(&sq * &a));
        let j3 = M::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        assert!(!j3.power(2).unwrap().is_zero());
        assert!(j3.power(3).unwrap().is_zero());
    }

    #[test]
    fn empty_shapes_multiply() {
        let b = M::zeros(3, 0);
        let g = M::zeros(0, 3);
        assert_eq!(&b * &g, M::zeros(3, 3));
        assert_eq!((&g * &b).shape(), (0, 0));
    }

    #[test]
    fn float_roundtrip_through_exact() {
        let f = Matrix::<Complex64>::from_vec(
            1,
            2,
            vec![Complex64::new(0.1, 0.0), Complex64::new(-3.0, 0.25)],
        )
        .unwrap();
        assert_eq!(f.to_exact().unwrap().to_float(), f);
    }
}
