//! Reference matrices and seeded random generators for tests and benchmarks.
//!
//! The two sample matrices have hand-checked inverses; the generators build
//! exact integer matrices with a prescribed index or rank structure.

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::FullRankPair;
use crate::matcore::{inverse, rank, Gaussian, Matrix};

type M = Matrix<Gaussian>;

/// 4×4 integer matrix with index 2 and rank 3.
pub fn core_ep_sample() -> M {
    M::from_ints(&[[1, 1, 2, 5], [0, 1, 1, 1], [0, 3, 3, 1], [1, 0, 1, 4]])
}

/// Core-EP inverse of [`core_ep_sample`].
pub fn core_ep_sample_inverse() -> M {
    M::from_ints(&[
        [80, 4, -24, 76],
        [8, 13, 48, -5],
        [-8, 50, 204, -58],
        [72, -9, -72, 81],
    ])
    .scale(&Gaussian::ratio(1, 756))
}

/// Canonical first factor pair of [`core_ep_sample`].
pub fn core_ep_sample_pair() -> FullRankPair<Gaussian> {
    FullRankPair {
        b: M::from_ints(&[[1, 1, 5], [0, 1, 1], [0, 3, 1], [1, 0, 4]]),
        g: M::from_ints(&[[1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]]),
    }
}

/// A non-canonical second link for the chain of [`core_ep_sample`]: its
/// product equals `G1·B1` but the factors differ from the rref choice.
pub fn core_ep_sample_alt_link() -> FullRankPair<Gaussian> {
    FullRankPair {
        b: M::from_ints(&[[1, 1], [1, 0], [0, 1]]),
        g: M::from_ints(&[[0, 4, 2], [1, 0, 4]]),
    }
}

/// 3×3 integer matrix with index 1 and rank 2.
pub fn core_sample() -> M {
    M::from_ints(&[[1, 0, 3], [4, 0, 2], [2, 0, 1]])
}

/// Core inverse of [`core_sample`].
pub fn core_sample_inverse() -> M {
    M::from_ints(&[[-5, 6, 3], [20, -4, -2], [10, -2, -1]]).scale(&Gaussian::ratio(1, 25))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry<R: Rng>(rng: &mut R, lo: i64, hi: i64, complex: bool) -> Gaussian {
    let re = rng.gen_range(lo..=hi);
    if complex {
        let im = rng.gen_range(lo..=hi);
        Gaussian::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    } else {
        Gaussian::from(re)
    }
}

/// Integer (or Gaussian-integer) entries drawn uniformly from `[lo, hi]`.
pub fn random_int_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    complex: bool,
) -> M {
    M::from_fn(rows, cols, |_, _| entry(rng, lo, hi, complex))
}

/// Random matrix of full rank `min(rows, cols)`, by rejection.
pub fn random_full_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, lo: i64, hi: i64) -> M {
    loop {
        let m = random_int_matrix(rng, rows, cols, lo, hi, false);
        if rank(&m) == rows.min(cols) {
            return m;
        }
    }
}

/// Unimodular `U = L·R` (unit lower times unit upper triangular) and `U^{-1}`.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, complex: bool) -> (M, M) {
    let l = M::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Gaussian::from(1),
        std::cmp::Ordering::Greater => entry(rng, -2, 2, complex),
        std::cmp::Ordering::Less => Gaussian::from(0),
    });
    let r = M::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Gaussian::from(1),
        std::cmp::Ordering::Less => entry(rng, -2, 2, complex),
        std::cmp::Ordering::Greater => Gaussian::from(0),
    });
    let u = &l * &r;
    let inv = inverse(&u).expect("unimodular matrices are invertible");
    (u, inv)
}

/// Jordan-type nilpotent block sizes summing to `size`, the largest equal to
/// `index`.
fn nilpotent_blocks<R: Rng>(rng: &mut R, size: usize, index: usize) -> Vec<usize> {
    let mut blocks = vec![index];
    let mut left = size - index;
    while left > 0 {
        let b = rng.gen_range(1..=left.min(index));
        blocks.push(b);
        left -= b;
    }
    blocks
}

/// `U·diag(T, N)·U^{-1}` with `T` invertible upper triangular and `N`
/// nilpotent of index exactly `index`. Needs `n > index >= 1`.
pub fn random_with_index<R: Rng>(rng: &mut R, n: usize, index: usize, complex: bool) -> M {
    assert!(index >= 1 && n > index, "need n > index >= 1");
    let nil = rng.gen_range(index..n);
    let inv_size = n - nil;
    let mut core = M::zeros(n, n);
    for i in 0..inv_size {
        let mut d = entry(rng, -3, 3, complex);
        while d == Gaussian::from(0) {
            d = entry(rng, -3, 3, complex);
        }
        core.set(i, i, d);
        for j in i + 1..inv_size {
            core.set(i, j, entry(rng, -2, 2, complex));
        }
    }
    let mut at = inv_size;
    for size in nilpotent_blocks(rng, nil, index) {
        for i in at..at + size - 1 {
            core.set(i, i + 1, Gaussian::from(1));
        }
        at += size;
    }
    let (u, u_inv) = random_unimodular(rng, n, complex);
    &(&u * &core) * &u_inv
}

/// `B·G` with `B` `n×r`, `G` `r×n` (entries in `[-5, 5]`, `1 <= r < n`) and
/// `G·B` invertible, so the product has index exactly one.
pub fn random_index_one<R: Rng>(rng: &mut R, n: usize) -> M {
    assert!(n >= 2, "index one needs a singular matrix of size >= 2");
    let r = rng.gen_range(1..n);
    loop {
        let b = random_full_rank(rng, n, r, -5, 5);
        let g = random_full_rank(rng, r, n, -5, 5);
        if rank(&(&g * &b)) == r {
            return &b * &g;
        }
    }
}

/// Square `n×n` pair `(M, N)` of equal rank whose limits
/// `lim (M*N + λI)^{-1} M*` and `lim M*(NM* + λI)^{-1}` exist: both have the
/// form `B_i G_i` with `B1*·B2` and `G2·G1*` invertible.
pub fn random_limit_pair<R: Rng>(rng: &mut R, n: usize) -> (M, M) {
    let r = rng.gen_range(1..=n);
    loop {
        let b1 = random_full_rank(rng, n, r, -3, 3);
        let g1 = random_full_rank(rng, r, n, -3, 3);
        let b2 = random_full_rank(rng, n, r, -3, 3);
        let g2 = random_full_rank(rng, r, n, -3, 3);
        let left = &b1.conj_transpose() * &b2;
        let right = &g2 * &g1.conj_transpose();
        if rank(&left) == r && rank(&right) == r {
            return (&b1 * &g1, &b2 * &g2);
        }
    }
}
