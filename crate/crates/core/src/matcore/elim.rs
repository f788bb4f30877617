//! Gauss-Jordan elimination: reduced row-echelon form, rank, linear solves.
//!
//! Exact scalars use fraction-free (Bareiss-style) Gauss-Jordan elimination:
//! every intermediate entry is a minor of the input, and the common pivot is
//! divided out once at the end. Float scalars use partial pivoting, and a
//! column counts as zero when its largest remaining entry is at most
//! `τ = max(rows, cols) · ε · max|A|`.

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Rref<S: Scalar> {
    pub reduced: Matrix<S>,
    /// Pivot column indices in increasing order.
    pub pivot_cols: Vec<usize>,
}

impl<S: Scalar> Rref<S> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Rank-decision threshold `τ`; zero for exact scalars.
pub fn rank_threshold<S: Scalar>(a: &Matrix<S>) -> f64 {
    if S::is_exact() {
        0.0
    } else {
        a.rows().max(a.cols()) as f64 * S::epsilon() * a.max_abs()
    }
}

/// Reduces `m` in place, searching for pivots only among the first
/// `search_cols` columns (row operations still apply to the full width).
/// Pivot rows end up normalized to a leading 1.
fn eliminate<S: Scalar>(m: &mut Matrix<S>, search_cols: usize, tau: f64) -> Vec<usize> {
    if S::is_exact() {
        eliminate_fraction_free(m, search_cols)
    } else {
        eliminate_partial_pivot(m, search_cols, tau)
    }
}

fn eliminate_fraction_free<S: Scalar>(m: &mut Matrix<S>, search_cols: usize) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..search_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        let piv = m.get(r, c).clone();
        let scale = (piv != prev).then(|| piv.clone() / prev.clone());
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in 0..cols {
                let (mij, mrj) = (m.get(i, j), m.get(r, j));
                let v = if f.is_zero() {
                    match &scale {
                        Some(s) if !mij.is_zero() => s.clone() * mij.clone(),
                        _ => continue,
                    }
                } else if mrj.is_zero() {
                    if mij.is_zero() {
                        continue;
                    }
                    piv.clone() * mij.clone() / prev.clone()
                } else {
                    (piv.clone() * mij.clone() - f.clone() * mrj.clone()) / prev.clone()
                };
                m.set(i, j, v);
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    // Every pivot row now carries the same pivot value `prev`.
    for i in 0..r {
        for j in 0..cols {
            let v = m.get(i, j).clone() / prev.clone();
            m.set(i, j, v);
        }
    }
    pivots
}

fn eliminate_partial_pivot<S: Scalar>(
    m: &mut Matrix<S>,
    search_cols: usize,
    tau: f64,
) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..search_cols {
        if r == rows {
            break;
        }
        let (p, mag) =
            (r..rows)
                .map(|i| (i, m.get(i, c).magnitude()))
                .fold(
                    (r, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if mag <= tau {
            continue;
        }
        m.swap_rows(p, r);
        let piv = m.get(r, c).clone();
        for j in 0..cols {
            let v = m.get(r, j).clone() / piv.clone();
            m.set(r, j, v);
        }
        m.set(r, c, S::one());
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                m.set(i, j, v);
            }
            m.set(i, c, S::zero());
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row-echelon form of `a` together with its pivot columns.
pub fn rref<S: Scalar>(a: &Matrix<S>) -> Rref<S> {
    rref_with_threshold(a, rank_threshold(a))
}

/// [`rref`] with a caller-chosen pivot threshold (ignored for exact scalars).
pub fn rref_with_threshold<S: Scalar>(a: &Matrix<S>, tau: f64) -> Rref<S> {
    let tau = if S::is_exact() { 0.0 } else { tau };
    let mut m = a.clone();
    let pivot_cols = eliminate(&mut m, a.cols(), tau);
    // Rows past the rank are zero by construction (exact) or by declaration (float).
    for i in pivot_cols.len()..m.rows() {
        for j in 0..m.cols() {
            m.set(i, j, S::zero());
        }
    }
    Rref {
        reduced: m,
        pivot_cols,
    }
}

pub fn rank<S: Scalar>(a: &Matrix<S>) -> usize {
    rref(a).rank()
}

/// Rank with a caller-chosen pivot threshold (ignored for exact scalars).
pub fn rank_with_threshold<S: Scalar>(a: &Matrix<S>, tau: f64) -> usize {
    let mut m = a.clone();
    let tau = if S::is_exact() { 0.0 } else { tau };
    eliminate(&mut m, a.cols(), tau).len()
}

/// [`rref`] of a matrix whose rank is known from elsewhere.
///
/// In float mode the threshold starts at `τ` and grows tenfold, up to
/// `10⁻⁶·max|A|`, until no more than `rank` pivots survive.
pub fn rref_with_rank<S: Scalar>(a: &Matrix<S>, rank: usize) -> Rref<S> {
    let mut tau = rank_threshold(a);
    let cap = 1e-6 * a.max_abs();
    loop {
        let r = rref_with_threshold(a, tau);
        if S::is_exact() || r.rank() <= rank || tau >= cap {
            return r;
        }
        tau *= 10.0;
    }
}

/// Solves `a · X = b` for square nonsingular `a`.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    a.require_square()?;
    let n = a.rows();
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            op: "solve",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let tau = rank_threshold(a);
    let mut aug = a.hcat(b)?;
    let pivots = eliminate(&mut aug, n, tau);
    if pivots.len() < n {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.column_range(n, n + b.cols()))
}

pub fn inverse<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    a.require_square()?;
    solve(a, &Matrix::identity(a.rows()))
}
