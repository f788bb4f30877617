//! Closed-form generalized inverses built on full-rank decompositions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decompose::{full_rank_chain, full_rank_decompose, index, FullRankChain};
use crate::error::{Error, Result};
use crate::limits::{
    self, LambdaSchedule, LimitFormula, Operand, Side, Target, Theorem, TraceStep,
};
use crate::matcore::{inverse, DynMatrix, Gaussian, Matrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InverseKind {
    #[serde(rename = "mp")]
    MoorePenrose,
    #[serde(rename = "group")]
    Group,
    #[serde(rename = "drazin")]
    Drazin,
    #[serde(rename = "core")]
    Core,
    #[serde(rename = "dual-core")]
    DualCore,
    #[serde(rename = "core-ep")]
    CoreEP,
    #[serde(rename = "dual-core-ep")]
    DualCoreEP,
}

impl InverseKind {
    pub const ALL: [InverseKind; 7] = [
        InverseKind::MoorePenrose,
        InverseKind::Group,
        InverseKind::Drazin,
        InverseKind::Core,
        InverseKind::DualCore,
        InverseKind::CoreEP,
        InverseKind::DualCoreEP,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InverseKind::MoorePenrose => "mp",
            InverseKind::Group => "group",
            InverseKind::Drazin => "drazin",
            InverseKind::Core => "core",
            InverseKind::DualCore => "dual-core",
            InverseKind::CoreEP => "core-ep",
            InverseKind::DualCoreEP => "dual-core-ep",
        }
    }

    /// Largest index for which the inverse is defined, if restricted.
    pub fn max_index(self) -> Option<usize> {
        match self {
            InverseKind::Group | InverseKind::Core | InverseKind::DualCore => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InverseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InverseKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnsupportedCombination(format!("unknown inverse kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MethodKind {
    #[serde(rename = "chain")]
    ChainClosedForm,
    #[serde(rename = "power")]
    PowerFormula,
    #[serde(rename = "drazin-projector")]
    DrazinProjector,
    #[serde(rename = "limit-numeric")]
    LimitNumeric,
    #[serde(rename = "limit-exact")]
    LimitExact,
}

impl MethodKind {
    pub const ALL: [MethodKind; 5] = [
        MethodKind::ChainClosedForm,
        MethodKind::PowerFormula,
        MethodKind::DrazinProjector,
        MethodKind::LimitNumeric,
        MethodKind::LimitExact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::ChainClosedForm => "chain",
            MethodKind::PowerFormula => "power",
            MethodKind::DrazinProjector => "drazin-projector",
            MethodKind::LimitNumeric => "limit-numeric",
            MethodKind::LimitExact => "limit-exact",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MethodKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnsupportedCombination(format!("unknown method {s:?}")))
    }
}

use MethodKind::{ChainClosedForm, DrazinProjector, LimitExact, LimitNumeric, PowerFormula};

const LIMITS_AND_CHAIN: &[MethodKind] = &[ChainClosedForm, LimitNumeric, LimitExact];
const ALL_METHODS: &[MethodKind] = &MethodKind::ALL;

/// Supported `(InverseKind, MethodKind)` pairs.
pub const SUPPORTED: &[(InverseKind, &[MethodKind])] = &[
    (InverseKind::MoorePenrose, LIMITS_AND_CHAIN),
    (InverseKind::Drazin, &[ChainClosedForm]),
    (InverseKind::Group, LIMITS_AND_CHAIN),
    (InverseKind::Core, LIMITS_AND_CHAIN),
    (InverseKind::DualCore, LIMITS_AND_CHAIN),
    (InverseKind::CoreEP, ALL_METHODS),
    (InverseKind::DualCoreEP, ALL_METHODS),
];

pub fn is_supported(kind: InverseKind, method: MethodKind) -> bool {
    SUPPORTED
        .iter()
        .any(|(k, methods)| *k == kind && methods.contains(&method))
}

fn require_index_at_most_one<S: Scalar>(a: &Matrix<S>) -> Result<usize> {
    let k = index(a)?;
    if k > 1 {
        return Err(Error::IndexTooLarge { index: k, max: 1 });
    }
    Ok(k)
}

/// `A^† = G*(GG*)^{-1}(B*B)^{-1}B*` from the canonical full-rank pair.
///
/// Fails only in float mode, when a Gram matrix is numerically singular.
pub fn moore_penrose<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let p = full_rank_decompose(a);
    if p.rank() == 0 {
        return Ok(Matrix::zeros(a.cols(), a.rows()));
    }
    let (b, g) = (&p.b, &p.g);
    let bh = b.conj_transpose();
    let gh = g.conj_transpose();
    let gram_g = inverse(&(g * &gh))?;
    let gram_b = inverse(&(&bh * b))?;
    Ok(&(&(&gh * &gram_g) * &gram_b) * &bh)
}

/// Orthogonal projector `M^†M` onto the row space of `M`, built from the
/// nonzero rows `G` of `rref(M)` as `G*(GG*)^{-1}G`.
fn row_space_projector<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let g = full_rank_decompose(m).g;
    if g.rows() == 0 {
        return Ok(Matrix::zeros(m.cols(), m.cols()));
    }
    let gh = g.conj_transpose();
    Ok(&(&gh * &inverse(&(&g * &gh))?) * &g)
}

/// `A^D = B (G_k B_k)^{-(k+1)} G`; zero for nilpotent `A`.
pub fn drazin<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    match full_rank_chain(a) {
        Ok(chain) => drazin_from_chain(&chain),
        Err(Error::NilpotentInput) => Ok(Matrix::zeros(a.rows(), a.cols())),
        Err(e) => Err(e),
    }
}

pub fn drazin_from_chain<S: Scalar>(chain: &FullRankChain<S>) -> Result<Matrix<S>> {
    let core_inv = inverse(&chain.core_block())?;
    let middle = core_inv.power(chain.len() + 1)?;
    Ok(&(&chain.head_product() * &middle) * &chain.tail_product())
}

/// `A^# = B1 (G1 B1)^{-2} G1`, defined for index at most one.
pub fn group<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    require_index_at_most_one(a)?;
    let p = full_rank_decompose(a);
    if p.rank() == 0 {
        return Ok(Matrix::zeros(a.rows(), a.cols()));
    }
    let core_inv = inverse(&p.swapped_product())?;
    Ok(&(&p.b * &(&core_inv * &core_inv)) * &p.g)
}

/// Core inverse `M (NM)^{-1} (M*M)^{-1} M*` for `A = MN`, index at most one.
pub fn core<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    require_index_at_most_one(a)?;
    let p = full_rank_decompose(a);
    if p.rank() == 0 {
        return Ok(Matrix::zeros(a.rows(), a.cols()));
    }
    let (m, n) = (&p.b, &p.g);
    let mh = m.conj_transpose();
    let nm_inv = inverse(&(n * m))?;
    let gram_inv = inverse(&(&mh * m))?;
    Ok(&(&(m * &nm_inv) * &gram_inv) * &mh)
}

/// Dual core inverse `N* (NN*)^{-1} (NM)^{-1} N`, the conjugate-transpose
/// mirror of [`core`].
pub fn dual_core<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    require_index_at_most_one(a)?;
    let p = full_rank_decompose(a);
    if p.rank() == 0 {
        return Ok(Matrix::zeros(a.rows(), a.cols()));
    }
    let (m, n) = (&p.b, &p.g);
    let nh = n.conj_transpose();
    let gram_inv = inverse(&(n * &nh))?;
    let nm_inv = inverse(&(n * m))?;
    Ok(&(&(&nh * &gram_inv) * &nm_inv) * n)
}

/// `B (B·G_kB_k)^†` from any valid chain.
pub fn core_ep_from_chain<S: Scalar>(chain: &FullRankChain<S>) -> Result<Matrix<S>> {
    let b = chain.head_product();
    let be = &b * &chain.core_block();
    Ok(&b * &moore_penrose(&be)?)
}

/// `(G_kB_k·G)^† G` from any valid chain.
pub fn dual_core_ep_from_chain<S: Scalar>(chain: &FullRankChain<S>) -> Result<Matrix<S>> {
    let g = chain.tail_product();
    let eg = &chain.core_block() * &g;
    Ok(&moore_penrose(&eg)? * &g)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Handedness {
    Core,
    Dual,
}

fn core_ep_impl<S: Scalar>(
    a: &Matrix<S>,
    method: MethodKind,
    power: Option<usize>,
    hand: Handedness,
) -> Result<Matrix<S>> {
    let k = index(a)?.max(1);
    match method {
        ChainClosedForm => match full_rank_chain(a) {
            Ok(chain) => match hand {
                Handedness::Core => core_ep_from_chain(&chain),
                Handedness::Dual => dual_core_ep_from_chain(&chain),
            },
            Err(Error::NilpotentInput) => Ok(Matrix::zeros(a.rows(), a.cols())),
            Err(e) => Err(e),
        },
        PowerFormula => {
            let ak = a.power(k)?;
            let ak1_pinv = moore_penrose(&(&ak * a))?;
            Ok(match hand {
                Handedness::Core => &ak * &ak1_pinv,
                Handedness::Dual => &ak1_pinv * &ak,
            })
        }
        DrazinProjector => {
            let m = power.unwrap_or(k);
            if m < k {
                return Err(Error::InvalidPower { m, min: k });
            }
            let am = a.power(m)?;
            let projector_factor = match hand {
                Handedness::Core => row_space_projector(&am.conj_transpose())?,
                Handedness::Dual => row_space_projector(&am)?,
            };
            let ad = drazin(a)?;
            Ok(match hand {
                Handedness::Core => &ad * &projector_factor,
                Handedness::Dual => &projector_factor * &ad,
            })
        }
        LimitNumeric | LimitExact => Err(Error::UnsupportedCombination(format!(
            "{method} is evaluated through limits::, not a closed form"
        ))),
    }
}

/// Core-EP inverse by one of the closed-form routes; zero for nilpotent `A`.
pub fn core_ep<S: Scalar>(a: &Matrix<S>, method: MethodKind) -> Result<Matrix<S>> {
    core_ep_impl(a, method, None, Handedness::Core)
}

pub fn dual_core_ep<S: Scalar>(a: &Matrix<S>, method: MethodKind) -> Result<Matrix<S>> {
    core_ep_impl(a, method, None, Handedness::Dual)
}

/// `A^D A^m (A^m)^†` for a chosen `m >= max(ind A, 1)`.
pub fn core_ep_projector<S: Scalar>(a: &Matrix<S>, m: usize) -> Result<Matrix<S>> {
    core_ep_impl(a, DrazinProjector, Some(m), Handedness::Core)
}

/// `(A^m)^† A^m A^D` for a chosen `m >= max(ind A, 1)`.
pub fn dual_core_ep_projector<S: Scalar>(a: &Matrix<S>, m: usize) -> Result<Matrix<S>> {
    core_ep_impl(a, DrazinProjector, Some(m), Handedness::Dual)
}

/// Compares `(A²A^†)^†` with `A(A²)^†` for index-one `A`: exact equality in
/// exact mode, max-entry difference within `1e-8·(1 + max|A|)` in float mode.
pub fn squared_mp_identity_holds<S: Scalar>(a: &Matrix<S>) -> Result<bool> {
    require_index_at_most_one(a)?;
    let a2 = a.power(2)?;
    let lhs = moore_penrose(&(&a2 * &moore_penrose(a)?))?;
    let rhs = a * &moore_penrose(&a2)?;
    Ok(lhs.approx_eq(&rhs, 1e-8 * (1.0 + a.max_abs())))
}

/// Closed-form dispatch for a fixed scalar type.
pub fn closed_form<S: Scalar>(
    kind: InverseKind,
    method: MethodKind,
    a: &Matrix<S>,
    power: Option<usize>,
) -> Result<Matrix<S>> {
    if !is_supported(kind, method) || matches!(method, LimitNumeric | LimitExact) {
        return Err(unsupported(kind, method));
    }
    if !matches!(kind, InverseKind::MoorePenrose) {
        a.require_square()?;
    }
    match kind {
        InverseKind::MoorePenrose => moore_penrose(a),
        InverseKind::Drazin => drazin(a),
        InverseKind::Group => group(a),
        InverseKind::Core => core(a),
        InverseKind::DualCore => dual_core(a),
        InverseKind::CoreEP => core_ep_impl(a, method, power, Handedness::Core),
        InverseKind::DualCoreEP => core_ep_impl(a, method, power, Handedness::Dual),
    }
}

fn unsupported(kind: InverseKind, method: MethodKind) -> Error {
    Error::UnsupportedCombination(format!("inverse {kind} with method {method}"))
}

/// Knobs for [`compute`]. Unset fields take their documented defaults.
#[derive(Debug, Clone, Default)]
pub struct ComputeOptions {
    /// Limit theorem for core-type targets (default [`Theorem::PowerMixed`]).
    pub formula: Option<Theorem>,
    /// Resolvent placement (default: the first displayed ordering).
    pub side: Option<Side>,
    pub schedule: LambdaSchedule,
    /// `m` for the Drazin-projector route (default `max(ind A, 1)`).
    pub power: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Computed {
    pub matrix: DynMatrix,
    pub formula: Option<LimitFormula>,
    /// Convergence history of a numeric limit; empty otherwise.
    pub trace: Vec<TraceStep>,
}

/// The limit formula used for `kind`, with the operand it applies to.
pub fn limit_formula_for(kind: InverseKind, opts: &ComputeOptions) -> Result<LimitFormula> {
    let (theorem, target) = match kind {
        InverseKind::MoorePenrose => (Theorem::MoorePenrose, Target::MoorePenrose),
        InverseKind::Group => (Theorem::Pair, Target::GeneralIdentity),
        InverseKind::Drazin => return Err(unsupported(kind, LimitExact)),
        InverseKind::Core => (opts.formula.unwrap_or(Theorem::PowerMixed), Target::Core),
        InverseKind::DualCore => (
            opts.formula.unwrap_or(Theorem::PowerMixed),
            Target::DualCore,
        ),
        InverseKind::CoreEP => (opts.formula.unwrap_or(Theorem::PowerMixed), Target::CoreEP),
        InverseKind::DualCoreEP => (
            opts.formula.unwrap_or(Theorem::PowerMixed),
            Target::DualCoreEP,
        ),
    };
    if matches!(kind, InverseKind::MoorePenrose | InverseKind::Group)
        && opts.formula.is_some_and(|t| t != theorem)
    {
        return Err(Error::UnsupportedCombination(format!(
            "inverse {kind} has no {} limit form",
            opts.formula.unwrap()
        )));
    }
    match opts.side {
        Some(side) => LimitFormula::new(theorem, side, target),
        None => LimitFormula::with_default_side(theorem, target),
    }
}

/// Group inverse as `lim (A·A + λI)^{-1} A`: the general identity with
/// `M = A*`, `N = A`.
fn group_operand<S: Scalar>(a: &Matrix<S>) -> Result<(Matrix<S>, Matrix<S>)> {
    a.require_square()?;
    require_index_at_most_one(a)?;
    Ok((a.conj_transpose(), a.clone()))
}

/// Computes any supported inverse of a mode-tagged matrix.
///
/// `LimitExact` needs an exact matrix and `LimitNumeric` a float one; other
/// methods run in the matrix's own mode.
pub fn compute(
    kind: InverseKind,
    method: MethodKind,
    a: &DynMatrix,
    opts: &ComputeOptions,
) -> Result<Computed> {
    if !is_supported(kind, method) {
        return Err(unsupported(kind, method));
    }
    match method {
        LimitExact => {
            let DynMatrix::Exact(a) = a else {
                return Err(Error::ModeMismatch { op: "limit-exact" });
            };
            let formula = limit_formula_for(kind, opts)?;
            let x = if kind == InverseKind::Group {
                let (m, n) = group_operand(a)?;
                limits::limit_exact(&formula, Operand::Pair { m: &m, n: &n })?
            } else {
                limits::limit_exact(&formula, Operand::Single(a))?
            };
            Ok(Computed {
                matrix: DynMatrix::Exact(x),
                formula: Some(formula),
                trace: Vec::new(),
            })
        }
        LimitNumeric => {
            let DynMatrix::Float(a) = a else {
                return Err(Error::ModeMismatch {
                    op: "limit-numeric",
                });
            };
            let formula = limit_formula_for(kind, opts)?;
            let lim = if kind == InverseKind::Group {
                let (m, n) = group_operand::<Complex64>(a)?;
                limits::limit_numeric(&formula, Operand::Pair { m: &m, n: &n }, &opts.schedule)?
            } else {
                limits::limit_numeric(&formula, Operand::Single(a), &opts.schedule)?
            };
            Ok(Computed {
                matrix: DynMatrix::Float(lim.value),
                formula: Some(formula),
                trace: lim.trace,
            })
        }
        _ => {
            let matrix = match a {
                DynMatrix::Exact(m) => {
                    DynMatrix::Exact(closed_form::<Gaussian>(kind, method, m, opts.power)?)
                }
                DynMatrix::Float(m) => {
                    DynMatrix::Float(closed_form::<Complex64>(kind, method, m, opts.power)?)
                }
            };
            Ok(Computed {
                matrix,
                formula: None,
                trace: Vec::new(),
            })
        }
    }
}
