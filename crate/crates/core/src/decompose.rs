//! Matrix index, full-rank decompositions and their chains, and the core-EP
//! additive decomposition `A = A1 + A2`.

use crate::error::{Error, Result};
use crate::inverses::moore_penrose;
use crate::matcore::{rank, rref, rref_with_rank, Matrix, Scalar};

/// `A = B·G` with `B` of full column rank and `G` of full row rank.
#[derive(Clone, Debug, PartialEq)]
pub struct FullRankPair<S: Scalar> {
    pub b: Matrix<S>,
    pub g: Matrix<S>,
}

impl<S: Scalar> FullRankPair<S> {
    pub fn rank(&self) -> usize {
        self.b.cols()
    }

    pub fn product(&self) -> Matrix<S> {
        &self.b * &self.g
    }

    /// `G·B`, the matrix decomposed by the next link of a chain.
    pub fn swapped_product(&self) -> Matrix<S> {
        &self.g * &self.b
    }
}

/// Ranks of `A^0, A^1, ...` up to and including the first repeat.
fn power_ranks<S: Scalar>(a: &Matrix<S>) -> Result<Vec<usize>> {
    a.require_square()?;
    let n = a.rows();
    let mut ranks = vec![n];
    let mut pow = Matrix::identity(n);
    for _ in 0..=n {
        pow = &pow * a;
        let r = rank(&pow);
        ranks.push(r);
        if r == ranks[ranks.len() - 2] {
            return Ok(ranks);
        }
    }
    unreachable!("rank of successive powers stabilizes within n steps")
}

/// Smallest `k >= 0` with `rank(A^k) = rank(A^{k+1})`.
pub fn index<S: Scalar>(a: &Matrix<S>) -> Result<usize> {
    Ok(power_ranks(a)?.len() - 2)
}

/// Canonical full-rank decomposition: `B` holds the pivot columns of `A`,
/// `G` the nonzero rows of `rref(A)`. Rank zero gives an `m×0` and `0×n` pair.
pub fn full_rank_decompose<S: Scalar>(a: &Matrix<S>) -> FullRankPair<S> {
    let r = rref(a);
    FullRankPair {
        b: a.select_columns(&r.pivot_cols),
        g: r.reduced.top_rows(r.rank()),
    }
}

/// Chain of full-rank decompositions `A = B1·G1`, `G_i·B_i = B_{i+1}·G_{i+1}`
/// ending at the first invertible core block `G_k·B_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FullRankChain<S: Scalar> {
    pairs: Vec<FullRankPair<S>>,
    index: usize,
}

impl<S: Scalar> FullRankChain<S> {
    pub fn pairs(&self) -> &[FullRankPair<S>] {
        &self.pairs
    }

    /// `ind(A)`. An invertible `A` has index 0 and a chain of length 1.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Number of links, `max(ind(A), 1)`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `B = B1·B2···Bk`.
    pub fn head_product(&self) -> Matrix<S> {
        let mut it = self.pairs.iter();
        let first = it.next().expect("chain is never empty").b.clone();
        it.fold(first, |acc, p| &acc * &p.b)
    }

    /// `G = Gk···G2·G1`.
    pub fn tail_product(&self) -> Matrix<S> {
        let mut it = self.pairs.iter().rev();
        let first = it.next().expect("chain is never empty").g.clone();
        it.fold(first, |acc, p| &acc * &p.g)
    }

    /// The invertible block `Gk·Bk`.
    pub fn core_block(&self) -> Matrix<S> {
        self.pairs
            .last()
            .expect("chain is never empty")
            .swapped_product()
    }

    /// Converts every factor, keeping the structure unchecked.
    pub(crate) fn map<T: Scalar>(&self, f: impl Fn(&Matrix<S>) -> Matrix<T>) -> FullRankChain<T> {
        FullRankChain {
            pairs: self
                .pairs
                .iter()
                .map(|p| FullRankPair {
                    b: f(&p.b),
                    g: f(&p.g),
                })
                .collect(),
            index: self.index,
        }
    }

    /// Validates caller-supplied factors, e.g. a non-canonical factorization.
    pub fn from_pairs(a: &Matrix<S>, pairs: Vec<FullRankPair<S>>) -> Result<Self> {
        a.require_square()?;
        let bad = |msg: String| Err(Error::InvalidChain(msg));
        if pairs.is_empty() {
            return bad("no factors supplied".into());
        }
        let tol = chain_tolerance(a);
        for (i, p) in pairs.iter().enumerate() {
            let r = p.rank();
            if p.b.cols() != p.g.rows() || rank(&p.b) != r || rank(&p.g) != r {
                return bad(format!("pair {} is not a full-rank decomposition", i + 1));
            }
            if r == 0 {
                return bad("zero-rank factor (nilpotent input)".into());
            }
        }
        if pairs[0].b.matmul(&pairs[0].g).map(|p| p.approx_eq(a, tol)) != Ok(true) {
            return bad("B1·G1 differs from A".into());
        }
        for (i, w) in pairs.windows(2).enumerate() {
            let lhs = w[0].swapped_product();
            if rank(&lhs) == lhs.rows() {
                return bad(format!("G{0}·B{0} is already invertible", i + 1));
            }
            let rhs = w[1].b.matmul(&w[1].g)?;
            if !lhs.approx_eq(&rhs, tol) {
                return bad(format!("G{0}·B{0} differs from B{1}·G{1}", i + 1, i + 2));
            }
        }
        let core = pairs.last().unwrap().swapped_product();
        if rank(&core) != core.rows() {
            return bad("final core block is singular".into());
        }
        let index = if pairs.len() == 1 && pairs[0].rank() == a.rows() {
            0
        } else {
            pairs.len()
        };
        Ok(FullRankChain { pairs, index })
    }
}

fn chain_tolerance<S: Scalar>(a: &Matrix<S>) -> f64 {
    1e-8 * (1.0 + a.max_abs())
}

/// Canonical chain built by repeatedly decomposing `G_i·B_i` until the core
/// block is invertible. Nilpotent input has no such chain.
///
/// Link `i` has the rank of `A^i`; in float mode that rank steers the pivot
/// threshold of each decomposition.
pub fn full_rank_chain<S: Scalar>(a: &Matrix<S>) -> Result<FullRankChain<S>> {
    let ranks = power_ranks(a)?;
    let index = ranks.len() - 2;
    if ranks[ranks.len() - 1] == 0 {
        return Err(Error::NilpotentInput);
    }
    let mut pairs = vec![decompose_with_rank(a, ranks[1])];
    for &r in &ranks[2..=index.max(1)] {
        let core = pairs.last().unwrap().swapped_product();
        pairs.push(decompose_with_rank(&core, r));
    }
    if pairs.iter().zip(&ranks[1..]).any(|(p, &r)| p.rank() != r) {
        return Err(Error::InvalidChain(
            "chain ranks disagree with power ranks".into(),
        ));
    }
    Ok(FullRankChain { pairs, index })
}

fn decompose_with_rank<S: Scalar>(a: &Matrix<S>, r: usize) -> FullRankPair<S> {
    let red = rref_with_rank(a, r);
    FullRankPair {
        b: a.select_columns(&red.pivot_cols),
        g: red.reduced.top_rows(red.rank()),
    }
}

/// `A = A1 + A2` with `rk(A1²) = rk(A1)`, `A2` nilpotent, `A1*·A2 = A2·A1 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoreEPDecomposition<S: Scalar> {
    pub a1: Matrix<S>,
    pub a2: Matrix<S>,
    pub index: usize,
}

/// `A1 = A^k (A^k)^† A` with `k = max(ind(A), 1)`, `A2 = A - A1`.
pub fn core_ep_decompose<S: Scalar>(a: &Matrix<S>) -> Result<CoreEPDecomposition<S>> {
    let k = index(a)?;
    let ak = a.power(k.max(1))?;
    let a1 = &(&ak * &moore_penrose(&ak)?) * a;
    let a2 = a - &a1;
    Ok(CoreEPDecomposition { a1, a2, index: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::Gaussian;
    use num_complex::Complex64;

    type M = Matrix<Gaussian>;

    fn sample() -> M {
        M::from_ints(&[[1, 1, 2, 5], [0, 1, 1, 1], [0, 3, 3, 1], [1, 0, 1, 4]])
    }

    fn jordan(n: usize) -> M {
        M::from_fn(n, n, |i, j| Gaussian::from((j == i + 1) as i64))
    }

    #[test]
    fn index_cases() {
        assert_eq!(index(&sample()).unwrap(), 2);
        assert_eq!(
            index(&M::from_ints(&[[1, 0, 3], [4, 0, 2], [2, 0, 1]])).unwrap(),
            1
        );
        assert_eq!(index(&M::from_ints(&[[2, 1], [1, 1]])).unwrap(), 0);
        for n in 1..=5 {
            assert_eq!(index(&jordan(n)).unwrap(), n);
        }
        assert_eq!(index(&M::zeros(3, 3)).unwrap(), 1);
        assert!(matches!(
            index(&M::zeros(2, 3)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn canonical_pair_matches_printed_factors() {
        let p = full_rank_decompose(&sample());
        assert_eq!(
            p.b,
            M::from_ints(&[[1, 1, 5], [0, 1, 1], [0, 3, 1], [1, 0, 4]])
        );
        assert_eq!(
            p.g,
            M::from_ints(&[[1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]])
        );
        assert_eq!(p.product(), sample());
    }

    #[test]
    fn trivial_pairs() {
        let p = full_rank_decompose(&M::identity(3));
        assert_eq!((p.b, p.g), (M::identity(3), M::identity(3)));
        let z = full_rank_decompose(&M::zeros(3, 3));
        assert_eq!(z.b.shape(), (3, 0));
        assert_eq!(z.g.shape(), (0, 3));
        assert_eq!(z.product(), M::zeros(3, 3));
    }

    #[test]
    fn chain_of_first_fixture() {
        let a = sample();
        let c = full_rank_chain(&a).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.index(), 2);
        let p = c.pairs();
        assert_eq!(p[0].swapped_product(), p[1].product());
        assert_eq!(rank(&c.core_block()), c.core_block().rows());
        assert_eq!(&c.head_product() * &c.tail_product(), a.power(2).unwrap());
    }

    #[test]
    fn chain_of_rank_one_diagonal() {
        let c = full_rank_chain(&M::from_ints(&[[2, 0], [0, 0]])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.pairs()[0].b, M::from_ints(&[[2], [0]]));
        assert_eq!(c.pairs()[0].g, M::from_ints(&[[1, 0]]));
    }

    #[test]
    fn chain_rejects_nilpotent() {
        assert_eq!(full_rank_chain(&jordan(2)), Err(Error::NilpotentInput));
        assert_eq!(full_rank_chain(&jordan(4)), Err(Error::NilpotentInput));
        assert_eq!(full_rank_chain(&M::zeros(2, 2)), Err(Error::NilpotentInput));
    }

    #[test]
    fn chain_of_invertible_has_index_zero() {
        let a = M::from_ints(&[[2, 1], [1, 1]]);
        let c = full_rank_chain(&a).unwrap();
        assert_eq!((c.len(), c.index()), (1, 0));
        assert_eq!(c.pairs()[0].b, a);
    }

    #[test]
    fn supplied_factors_are_validated() {
        let a = sample();
        let b1 = M::from_ints(&[[1, 1, 5], [0, 1, 1], [0, 3, 1], [1, 0, 4]]);
        let g1 = M::from_ints(&[[1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]]);
        let b2 = M::from_ints(&[[1, 1], [1, 0], [0, 1]]);
        let g2 = M::from_ints(&[[0, 4, 2], [1, 0, 4]]);
        let good = vec![
            FullRankPair {
                b: b1.clone(),
                g: g1.clone(),
            },
            FullRankPair {
                b: b2.clone(),
                g: g2.clone(),
            },
        ];
        let c = FullRankChain::from_pairs(&a, good).unwrap();
        assert_eq!(c.index(), 2);

        let short = vec![FullRankPair {
            b: b1.clone(),
            g: g1.clone(),
        }];
        assert!(matches!(
            FullRankChain::from_pairs(&a, short),
            Err(Error::InvalidChain(_))
        ));
        let wrong = vec![
            FullRankPair { b: b1, g: g1 },
            FullRankPair {
                b: b2,
                g: M::from_ints(&[[0, 4, 2], [1, 0, 5]]),
            },
        ];
        assert!(matches!(
            FullRankChain::from_pairs(&a, wrong),
            Err(Error::InvalidChain(_))
        ));
    }

    fn assert_core_ep_invariants(a: &M) {
        let d = core_ep_decompose(a).unwrap();
        assert_eq!(&d.a1 + &d.a2, *a);
        assert_eq!(rank(&d.a1.power(2).unwrap()), rank(&d.a1));
        assert!(d.a2.power(d.index.max(1)).unwrap().is_zero());
        assert!((&d.a1.conj_transpose() * &d.a2).is_zero());
        assert!((&d.a2 * &d.a1).is_zero());
    }

    #[test]
    fn core_ep_decomposition_cases() {
        let d = core_ep_decompose(&M::identity(3)).unwrap();
        assert_eq!((d.a1, d.a2), (M::identity(3), M::zeros(3, 3)));
        let n = jordan(3);
        let d = core_ep_decompose(&n).unwrap();
        assert_eq!((d.a1, d.a2), (M::zeros(3, 3), n));

        let a = sample();
        let d = core_ep_decompose(&a).unwrap();
        assert_eq!(rank(&d.a1), rank(&a.power(2).unwrap()));
        assert_eq!(rank(&d.a1), 2);
        assert_core_ep_invariants(&a);
        assert_core_ep_invariants(&M::from_ints(&[[1, 0, 3], [4, 0, 2], [2, 0, 1]]));
    }

    #[test]
    fn float_chain_reproduces_power() {
        let a = sample().to_float();
        let c = full_rank_chain(&a).unwrap();
        assert_eq!(c.index(), 2);
        let diff = (&(&c.head_product() * &c.tail_product()) - &a.power(2).unwrap()).max_abs();
        assert!(diff < 1e-12, "{diff}");
        assert_eq!(index(&Matrix::<Complex64>::identity(3)).unwrap(), 0);
    }
}
