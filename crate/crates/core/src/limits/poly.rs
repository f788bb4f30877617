//! Univariate polynomials in `λ` and polynomial matrices over exact scalars.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::matcore::{Matrix, Scalar};

/// Coefficients from the constant term up, with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The polynomial `λ`.
    pub fn lambda() -> Self {
        Poly::from_coeffs(vec![S::zero(), S::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplicity of the root at `λ = 0`; `None` for the zero polynomial.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Quotient of an exact division; `InexactDivision` if a remainder is left.
    pub fn div_exact(&self, d: &Poly<S>) -> Result<Poly<S>> {
        let Some(dd) = d.degree() else {
            return Err(Error::SingularMatrix);
        };
        let Some(nd) = self.degree() else {
            return Ok(Poly::zero());
        };
        if nd < dd {
            return Err(Error::InexactDivision);
        }
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let q = rem[i + dd].clone() / lead.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - q.clone() * dc.clone();
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(Poly::from_coeffs(quot))
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

/// Dense row-major matrix of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<S>>,
}

impl<S: Scalar> PolyMatrix<S> {
    pub fn from_constant(m: &Matrix<S>) -> Self {
        PolyMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.data().iter().map(|c| Poly::constant(c.clone())).collect(),
        }
    }

    /// `Z + λI`.
    pub fn shifted(z: &Matrix<S>) -> Result<Self> {
        z.require_square()?;
        let mut p = PolyMatrix::from_constant(z);
        for i in 0..z.rows() {
            let e = &p.entries[i * p.cols + i] + &Poly::lambda();
            p.entries[i * p.cols + i] = e;
        }
        Ok(p)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn eval(&self, x: &S) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(x))
    }

    /// `C · self` for a constant `C`.
    pub fn left_mul(&self, c: &Matrix<S>) -> Result<Self> {
        if c.cols() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "left_mul",
                left: c.shape(),
                right: self.shape(),
            });
        }
        let entries = (0..c.rows())
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| {
                (0..self.rows).fold(Poly::zero(), |acc, k| {
                    &acc + &self.get(k, j).scale(c.get(i, k))
                })
            })
            .collect();
        Ok(PolyMatrix {
            rows: c.rows(),
            cols: self.cols,
            entries,
        })
    }

    /// `self · D` for a constant `D`.
    pub fn right_mul(&self, d: &Matrix<S>) -> Result<Self> {
        if self.cols != d.rows() {
            return Err(Error::DimensionMismatch {
                op: "right_mul",
                left: self.shape(),
                right: d.shape(),
            });
        }
        let entries = (0..self.rows)
            .flat_map(|i| (0..d.cols()).map(move |j| (i, j)))
            .map(|(i, j)| {
                (0..self.cols).fold(Poly::zero(), |acc, k| {
                    &acc + &self.get(i, k).scale(d.get(k, j))
                })
            })
            .collect();
        Ok(PolyMatrix {
            rows: self.rows,
            cols: d.cols(),
            entries,
        })
    }

    /// Fraction-free Gauss-Jordan elimination on `[P | I]`.
    ///
    /// Returns `(R, q)` with `P·R = q·I`, so `P^{-1} = R / q`; `q` is the
    /// determinant up to sign. `SingularMatrix` if `P` is singular as a matrix
    /// of rational functions.
    pub fn inverse_parts(&self) -> Result<(PolyMatrix<S>, Poly<S>)> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let w = 2 * n;
        let mut m: Vec<Poly<S>> = Vec::with_capacity(n * w);
        for i in 0..n {
            m.extend((0..n).map(|j| self.get(i, j).clone()));
            m.extend((0..n).map(|j| {
                if i == j {
                    Poly::constant(S::one())
                } else {
                    Poly::zero()
                }
            }));
        }
        let mut prev = Poly::constant(S::one());
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !m[i * w + c].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if p != c {
                for j in 0..w {
                    m.swap(p * w + j, c * w + j);
                }
            }
            let piv = m[c * w + c].clone();
            for i in (0..n).filter(|&i| i != c) {
                let f = m[i * w + c].clone();
                for j in 0..w {
                    let v = &(&piv * &m[i * w + j]) - &(&f * &m[c * w + j]);
                    m[i * w + j] = v.div_exact(&prev)?;
                }
            }
            prev = piv;
        }
        let entries = (0..n)
            .flat_map(|i| (n..w).map(move |j| (i, j)))
            .map(|(i, j)| m[i * w + j].clone())
            .collect();
        Ok((
            PolyMatrix {
                rows: n,
                cols: n,
                entries,
            },
            prev,
        ))
    }

    /// `lim_{λ→0+} self / q`, entrywise after cancelling the common `λ^s`.
    pub fn limit_over(&self, q: &Poly<S>) -> Result<Matrix<S>> {
        let s = q.order().ok_or(Error::SingularMatrix)?;
        let qs = q.coeff(s);
        let mut out = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                match p.order() {
                    None => {}
                    Some(o) if o < s => return Err(Error::LimitUndefined { row: i, col: j }),
                    Some(_) => out.set(i, j, p.coeff(s) / qs.clone()),
                }
            }
        }
        Ok(out)
    }
}
