//! Limit representations `lim_{λ→0+} C (Z + λI)^{-1} D` of generalized
//! inverses, evaluated exactly (rational functions in `λ`) or numerically
//! (a geometric `λ` sweep with Richardson extrapolation).

mod exact;
mod numeric;
mod poly;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decompose::{full_rank_chain, index, FullRankChain};
use crate::error::{Error, Result};
use crate::matcore::{solve, Matrix, Scalar};

pub use exact::{limit_exact, limit_exact_assembled, pair_identity_holds};
pub use numeric::{convergence_slope, limit_numeric, sweep, NumericLimit, Sweep, MIN_ITERATES};
pub use poly::{Poly, PolyMatrix};

/// Family of limit representations. The CLI names are `t31`, `t41`, `t43`,
/// `pair` and `mp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// Built from a full-rank chain: `B` and `G_kB_k`.
    #[serde(rename = "t31")]
    Chain,
    /// Built from `A^k`, `A^{k+1}` and one conjugate factor `(A^k)*`.
    #[serde(rename = "t41")]
    PowerMixed,
    /// Built from the Gram matrices of `A^{k+1}`.
    #[serde(rename = "t43")]
    PowerGram,
    /// `lim (M*N + λI)^{-1} M*` for a pair `(M, N)`.
    #[serde(rename = "pair")]
    Pair,
    /// `lim A*(AA* + λI)^{-1}`.
    #[serde(rename = "mp")]
    MoorePenrose,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::Chain,
        Theorem::PowerMixed,
        Theorem::PowerGram,
        Theorem::Pair,
        Theorem::MoorePenrose,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Chain => "t31",
            Theorem::PowerMixed => "t41",
            Theorem::PowerGram => "t43",
            Theorem::Pair => "pair",
            Theorem::MoorePenrose => "mp",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnsupportedCombination(format!("unknown formula {s:?}")))
    }
}

/// Where the shifted inverse sits: `(Z+λI)^{-1} D` or `C (Z+λI)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "left")]
    LeftShift,
    #[serde(rename = "right")]
    RightShift,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::LeftShift => "left",
            Side::RightShift => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::LeftShift),
            "right" => Ok(Side::RightShift),
            _ => Err(Error::UnsupportedCombination(format!("unknown side {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    CoreEP,
    DualCoreEP,
    Core,
    DualCore,
    MoorePenrose,
    /// `lim (M*N + λI)^{-1} M*` for a pair `(M, N)`.
    GeneralIdentity,
}

impl Target {
    fn is_dual(self) -> bool {
        matches!(self, Target::DualCoreEP | Target::DualCore)
    }

    fn is_core_type(self) -> bool {
        matches!(
            self,
            Target::CoreEP | Target::DualCoreEP | Target::Core | Target::DualCore
        )
    }

    fn requires_index_one(self) -> bool {
        matches!(self, Target::Core | Target::DualCore)
    }
}

/// A validated `(theorem, side, target)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LimitFormula {
    pub theorem: Theorem,
    pub side: Side,
    pub target: Target,
}

impl LimitFormula {
    pub fn new(theorem: Theorem, side: Side, target: Target) -> Result<Self> {
        let ok = match theorem {
            Theorem::Chain | Theorem::PowerGram => target.is_core_type(),
            // Only one ordering per target has a limit in this family.
            Theorem::PowerMixed => {
                target.is_core_type()
                    && side
                        == if target.is_dual() {
                            Side::LeftShift
                        } else {
                            Side::RightShift
                        }
            }
            Theorem::MoorePenrose => target == Target::MoorePenrose,
            Theorem::Pair => target == Target::GeneralIdentity,
        };
        if !ok {
            return Err(Error::UnsupportedCombination(format!(
                "formula {theorem} with {side} shift for {target:?}"
            )));
        }
        Ok(LimitFormula {
            theorem,
            side,
            target,
        })
    }

    /// Right shift for core-type and Moore-Penrose targets, left for dual ones.
    pub fn with_default_side(theorem: Theorem, target: Target) -> Result<Self> {
        let side = if target.is_dual() || target == Target::GeneralIdentity {
            Side::LeftShift
        } else {
            Side::RightShift
        };
        LimitFormula::new(theorem, side, target)
    }

    /// Every valid combination.
    pub fn all() -> Vec<LimitFormula> {
        let targets = [
            Target::CoreEP,
            Target::DualCoreEP,
            Target::Core,
            Target::DualCore,
            Target::MoorePenrose,
            Target::GeneralIdentity,
        ];
        let mut out = Vec::new();
        for theorem in Theorem::ALL {
            for target in targets {
                for side in [Side::LeftShift, Side::RightShift] {
                    if let Ok(f) = LimitFormula::new(theorem, side, target) {
                        out.push(f);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for LimitFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{:?}", self.theorem, self.side, self.target)
    }
}

/// Input of a limit formula: one matrix, or the pair `(M, N)` of the general
/// identity.
#[derive(Debug)]
pub enum Operand<'a, S: Scalar> {
    Single(&'a Matrix<S>),
    Pair { m: &'a Matrix<S>, n: &'a Matrix<S> },
}

impl<S: Scalar> Clone for Operand<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S: Scalar> Copy for Operand<'_, S> {}

impl<'a, S: Scalar> Operand<'a, S> {
    /// The matrix `X` is an inverse of: `A`, or `N` for a pair.
    pub fn base(&self) -> &'a Matrix<S> {
        match *self {
            Operand::Single(a) => a,
            Operand::Pair { n, .. } => n,
        }
    }

    /// Shape of the limit, the transpose of the base shape.
    pub fn result_shape(&self) -> (usize, usize) {
        let (r, c) = self.base().shape();
        (c, r)
    }
}

/// `C (Z + λI)^{-1} D`, with the inverse taken to the right or the left.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembled<S: Scalar> {
    pub left: Matrix<S>,
    pub shifted: Matrix<S>,
    pub right: Matrix<S>,
    pub side: Side,
}

impl<S: Scalar> Assembled<S> {
    /// Value at a fixed `λ`; `SingularMatrix` if `Z + λI` is singular.
    pub fn evaluate(&self, lambda: &S) -> Result<Matrix<S>> {
        let p = self.shifted.shift_diagonal(lambda);
        match self.side {
            Side::RightShift => {
                // W·P = C  ⇔  Pᵀ·Wᵀ = Cᵀ
                let w = solve(&p.transpose(), &self.left.transpose())?.transpose();
                Ok(&w * &self.right)
            }
            Side::LeftShift => {
                let w = solve(&p, &self.right)?;
                Ok(&self.left * &w)
            }
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&Matrix<S>) -> Matrix<T>) -> Assembled<T> {
        Assembled {
            left: f(&self.left),
            shifted: f(&self.shifted),
            right: f(&self.right),
            side: self.side,
        }
    }
}

/// What a formula needs besides its operand: the power `k`, and for chain
/// formulas the chain itself (absent when the input is nilpotent).
pub(crate) struct Plan<S: Scalar> {
    pub k: usize,
    pub chain: Option<FullRankChain<S>>,
}

/// Checks operand/formula compatibility and derives `k` and the chain.
pub(crate) fn plan<S: Scalar>(formula: &LimitFormula, operand: Operand<'_, S>) -> Result<Plan<S>> {
    match (formula.theorem, operand) {
        (Theorem::Pair, Operand::Pair { m, n }) => {
            if m.shape() != n.shape() {
                return Err(Error::DimensionMismatch {
                    op: "pair",
                    left: m.shape(),
                    right: n.shape(),
                });
            }
            Ok(Plan { k: 1, chain: None })
        }
        (Theorem::Pair, Operand::Single(_)) | (_, Operand::Pair { .. }) => {
            Err(Error::UnsupportedCombination(format!(
                "formula {} takes {}",
                formula.theorem,
                if formula.theorem == Theorem::Pair {
                    "a pair (M, N)"
                } else {
                    "a single matrix"
                }
            )))
        }
        (Theorem::MoorePenrose, Operand::Single(_)) => Ok(Plan { k: 1, chain: None }),
        (theorem, Operand::Single(a)) => {
            let ind = index(a)?;
            if formula.target.requires_index_one() && ind > 1 {
                return Err(Error::IndexTooLarge { index: ind, max: 1 });
            }
            let chain = if theorem == Theorem::Chain {
                match full_rank_chain(a) {
                    Ok(c) => Some(c),
                    Err(Error::NilpotentInput) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            Ok(Plan {
                k: ind.max(1),
                chain,
            })
        }
    }
}

/// Assembles `C`, `Z`, `D` once `k` (and the chain for chain formulas) is known.
pub(crate) fn build<S: Scalar>(
    formula: &LimitFormula,
    operand: Operand<'_, S>,
    chain: Option<&FullRankChain<S>>,
    k: usize,
) -> Result<Assembled<S>> {
    let side = formula.side;
    let dual = formula.target.is_dual();
    let done = |left: Matrix<S>, shifted: Matrix<S>, right: Matrix<S>| {
        Ok(Assembled {
            left,
            shifted,
            right,
            side,
        })
    };
    match (formula.theorem, operand) {
        (Theorem::Pair, Operand::Pair { m, n }) => {
            let mh = m.conj_transpose();
            match side {
                Side::LeftShift => done(Matrix::identity(m.cols()), &mh * n, mh),
                Side::RightShift => done(mh.clone(), n * &mh, Matrix::identity(m.rows())),
            }
        }
        (Theorem::MoorePenrose, Operand::Single(a)) => {
            let ah = a.conj_transpose();
            match side {
                Side::RightShift => done(ah.clone(), a * &ah, Matrix::identity(a.rows())),
                Side::LeftShift => done(Matrix::identity(a.cols()), &ah * a, ah),
            }
        }
        (Theorem::Chain, Operand::Single(_)) => {
            let chain = chain.ok_or(Error::ChainRequired)?;
            let n = chain.pairs()[0].b.rows();
            let e = chain.core_block();
            if !dual {
                let y = &chain.head_product() * &e;
                let yh = y.conj_transpose();
                match side {
                    Side::RightShift => {
                        done(&chain.head_product() * &yh, &y * &yh, Matrix::identity(n))
                    }
                    Side::LeftShift => done(chain.head_product(), &yh * &y, yh),
                }
            } else {
                let g = chain.tail_product();
                let f = &e * &g;
                let fh = f.conj_transpose();
                match side {
                    Side::LeftShift => done(Matrix::identity(n), &fh * &f, &fh * &g),
                    Side::RightShift => done(fh.clone(), &f * &fh, g),
                }
            }
        }
        (Theorem::PowerMixed, Operand::Single(a)) => {
            let ak = a.power(k)?;
            let ak1 = &ak * a;
            let akh = ak.conj_transpose();
            if !dual {
                done(&ak * &akh, &ak1 * &akh, Matrix::identity(a.rows()))
            } else {
                done(Matrix::identity(a.rows()), &akh * &ak1, &akh * &ak)
            }
        }
        (Theorem::PowerGram, Operand::Single(a)) => {
            let ak = a.power(k)?;
            let y = &ak * a;
            let yh = y.conj_transpose();
            match (dual, side) {
                (false, Side::RightShift) => done(&ak * &yh, &y * &yh, Matrix::identity(a.rows())),
                (false, Side::LeftShift) => done(ak, &yh * &y, yh),
                (true, Side::LeftShift) => done(Matrix::identity(a.rows()), &yh * &y, &yh * &ak),
                (true, Side::RightShift) => done(yh.clone(), &y * &yh, ak),
            }
        }
        _ => Err(Error::UnsupportedCombination(format!(
            "formula {formula} with this operand"
        ))),
    }
}

/// Assembles a formula using the canonical chain and `k = max(ind A, 1)`.
///
/// Returns `Ok(None)` for a chain formula on nilpotent input, whose limit is
/// the zero matrix.
pub fn assemble<S: Scalar>(
    formula: &LimitFormula,
    operand: Operand<'_, S>,
) -> Result<Option<Assembled<S>>> {
    let plan = plan(formula, operand)?;
    if formula.theorem == Theorem::Chain && plan.chain.is_none() {
        return Ok(None);
    }
    build(formula, operand, plan.chain.as_ref(), plan.k).map(Some)
}

/// Assembles a chain formula from a caller-supplied chain.
pub fn assemble_with_chain<S: Scalar>(
    formula: &LimitFormula,
    a: &Matrix<S>,
    chain: &FullRankChain<S>,
) -> Result<Assembled<S>> {
    if formula.theorem != Theorem::Chain {
        return Err(Error::UnsupportedCombination(format!(
            "formula {} takes no chain",
            formula.theorem
        )));
    }
    plan(formula, Operand::Single(a))?;
    build(formula, Operand::Single(a), Some(chain), chain.len())
}

/// Assembles a power formula with an explicit exponent `k >= max(ind A, 1)`.
pub fn assemble_with_power<S: Scalar>(
    formula: &LimitFormula,
    a: &Matrix<S>,
    k: usize,
) -> Result<Assembled<S>> {
    if !matches!(formula.theorem, Theorem::PowerMixed | Theorem::PowerGram) {
        return Err(Error::UnsupportedCombination(format!(
            "formula {} takes no power",
            formula.theorem
        )));
    }
    let plan = plan(formula, Operand::Single(a))?;
    if k < plan.k {
        return Err(Error::InvalidPower { m: k, min: plan.k });
    }
    build(formula, Operand::Single(a), None, k)
}

/// Geometric schedule `λ_j = λ0 · ratio^j`, `j < max_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSchedule {
    pub lambda0: f64,
    pub ratio: f64,
    pub max_steps: usize,
    pub tol: f64,
}

impl Default for LambdaSchedule {
    fn default() -> Self {
        LambdaSchedule {
            lambda0: 1e-2,
            ratio: 0.1,
            max_steps: 8,
            tol: 1e-10,
        }
    }
}

impl LambdaSchedule {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSchedule(m.into()));
        if !(self.lambda0.is_finite() && self.lambda0 > 0.0) {
            return bad("lambda0 must be positive and finite");
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return bad("ratio must lie in (0, 1)");
        }
        if self.max_steps < 2 {
            return bad("max_steps must be at least 2");
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad("tol must be positive and finite");
        }
        Ok(())
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.lambda0 * self.ratio.powi(j as i32)
    }
}

/// One row of a numeric sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub lambda: f64,
    /// Max-entry change from the previous iterate.
    pub delta: Option<f64>,
    /// `max|X N X - X|`, with `N` the base matrix.
    pub residual: f64,
    /// Max-entry change between successive extrapolated values.
    pub extrapolated_delta: Option<f64>,
}

/// Least-squares slope of `log10 y` against `log10 x` over the last four
/// points with positive coordinates. `None` with fewer than two such points.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let tail = &usable[usable.len().saturating_sub(4)..];
    if tail.len() < 2 {
        return None;
    }
    let n = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// One Richardson step for an error linear in `λ`:
/// `X_b + (X_b - X_a)·λ_b / (λ_a - λ_b)`.
pub fn richardson<S: Scalar>(xa: &Matrix<S>, la: &S, xb: &Matrix<S>, lb: &S) -> Matrix<S> {
    let w = lb.clone() / (la.clone() - lb.clone());
    xb + &(xb - xa).scale(&w)
}
