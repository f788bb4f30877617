//! Checks a candidate inverse against the defining equations and range
//! conditions of its kind.
//!
//! Exact matrices must satisfy every equation exactly. Float residuals pass
//! when their max-entry norm is at most `base_tol · (1 + max|A|)`, and ranges
//! are compared through ranks computed with that same threshold.

use serde::Serialize;

use crate::decompose::index;
use crate::error::{Error, Result};
use crate::inverses::InverseKind;
use crate::matcore::{rank_with_threshold, DynMatrix, Matrix, Mode, Scalar};

pub const DEFAULT_BASE_TOL: f64 = 1e-8;

/// One defining equation `lhs = rhs` and its max-entry residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationResidual {
    pub id: String,
    pub residual: f64,
    pub passed: bool,
}

/// A range inclusion or equality, or the index bound of index-one inverses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeCheck {
    pub id: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub kind: InverseKind,
    pub mode: Mode,
    pub passed: bool,
    /// Residual tolerance; absent in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub equation_residuals: Vec<EquationResidual>,
    pub range_checks: Vec<RangeCheck>,
}

impl VerificationReport {
    /// Ids of every failed equation or check.
    pub fn failures(&self) -> Vec<&str> {
        let eqs = self
            .equation_residuals
            .iter()
            .filter(|e| !e.passed)
            .map(|e| e.id.as_str());
        let ranges = self
            .range_checks
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.id.as_str());
        eqs.chain(ranges).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verifier {
    pub base_tol: f64,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            base_tol: DEFAULT_BASE_TOL,
        }
    }
}

struct Checks<'a, S: Scalar> {
    tol: f64,
    rank_base: f64,
    a: &'a Matrix<S>,
    equations: Vec<EquationResidual>,
    ranges: Vec<RangeCheck>,
}

impl<S: Scalar> Checks<'_, S> {
    fn equal(&mut self, name: &str, lhs: &Matrix<S>, rhs: &Matrix<S>) {
        let residual = lhs.max_diff(rhs).unwrap_or(f64::INFINITY);
        let passed = if S::is_exact() {
            lhs == rhs
        } else {
            residual <= self.tol
        };
        self.equations.push(EquationResidual {
            id: name.into(),
            residual,
            passed,
        });
    }

    fn flag(&mut self, name: &str, passed: bool) {
        self.ranges.push(RangeCheck {
            id: name.into(),
            passed,
        });
    }

    fn rank(&self, m: &Matrix<S>) -> usize {
        rank_with_threshold(m, self.rank_base * (1.0 + m.max_abs()))
    }

    /// `R(x) ⊆ R(y)` via `rank [y | x] = rank y`.
    fn subset(&self, x: &Matrix<S>, y: &Matrix<S>) -> bool {
        match y.hcat(x) {
            Ok(yx) => self.rank(&yx) == self.rank(y),
            Err(_) => false,
        }
    }

    fn same_range(&self, x: &Matrix<S>, y: &Matrix<S>) -> bool {
        self.subset(x, y) && self.subset(y, x)
    }

    fn range_subset(&mut self, name: &str, x: &Matrix<S>, y: &Matrix<S>) {
        let ok = self.subset(x, y);
        self.flag(name, ok);
    }

    fn range_equal(&mut self, name: &str, x: &Matrix<S>, y: &Matrix<S>) {
        let ok = self.same_range(x, y);
        self.flag(name, ok);
    }

    fn power(&self, k: usize) -> Matrix<S> {
        self.a.power(k).expect("square input")
    }
}

/// `R(x) ⊆ R(y)` with the default float threshold.
pub fn range_subset<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> bool {
    Verifier::default().checks(y).subset(x, y)
}

/// `R(x) = R(y)` with the default float threshold.
pub fn range_equal<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> bool {
    Verifier::default().checks(y).same_range(x, y)
}

impl Verifier {
    pub fn new(base_tol: f64) -> Self {
        Verifier { base_tol }
    }

    /// Residual tolerance for input `a`: zero in exact mode.
    pub fn tolerance<S: Scalar>(&self, a: &Matrix<S>) -> f64 {
        if S::is_exact() {
            0.0
        } else {
            self.base_tol * (1.0 + a.max_abs())
        }
    }

    fn checks<'a, S: Scalar>(&self, a: &'a Matrix<S>) -> Checks<'a, S> {
        Checks {
            tol: self.tolerance(a),
            rank_base: if S::is_exact() { 0.0 } else { self.base_tol },
            a,
            equations: Vec::new(),
            ranges: Vec::new(),
        }
    }

    /// Verifies `x` as the `kind` inverse of `a`.
    pub fn check<S: Scalar>(
        &self,
        kind: InverseKind,
        a: &Matrix<S>,
        x: &Matrix<S>,
    ) -> Result<VerificationReport> {
        if x.shape() != (a.cols(), a.rows()) {
            return Err(Error::DimensionMismatch {
                op: "verify",
                left: a.shape(),
                right: x.shape(),
            });
        }
        let mut c = self.checks(a);
        let ax = a * x;
        let xa = x * a;
        let xax = &xa * x;
        match kind {
            InverseKind::MoorePenrose => {
                c.equal("AXA = A", &(&ax * a), a);
                c.equal("XAX = X", &xax, x);
                c.equal("(AX)* = AX", &ax.conj_transpose(), &ax);
                c.equal("(XA)* = XA", &xa.conj_transpose(), &xa);
            }
            InverseKind::Drazin => {
                let k = index(a)?;
                c.equal("XAX = X", &xax, x);
                c.equal("AX = XA", &ax, &xa);
                let ak = c.power(k);
                c.equal("A^(k+1)X = A^k", &(&(&ak * a) * x), &ak);
            }
            InverseKind::Group => {
                let k = index(a)?;
                c.flag("ind(A) <= 1", k <= 1);
                c.equal("AXA = A", &(&ax * a), a);
                c.equal("XAX = X", &xax, x);
                c.equal("AX = XA", &ax, &xa);
            }
            InverseKind::Core => {
                let k = index(a)?;
                c.flag("ind(A) <= 1", k <= 1);
                c.equal("(AX)* = AX", &ax.conj_transpose(), &ax);
                c.equal("(AX)^2 = AX", &(&ax * &ax), &ax);
                c.range_equal("R(AX) = R(A)", &ax, a);
                c.range_subset("R(X) ⊆ R(A)", x, a);
            }
            InverseKind::DualCore => {
                let k = index(a)?;
                c.flag("ind(A) <= 1", k <= 1);
                let ah = a.conj_transpose();
                c.equal("(XA)* = XA", &xa.conj_transpose(), &xa);
                c.equal("(XA)^2 = XA", &(&xa * &xa), &xa);
                c.range_equal("R((XA)*) = R(A*)", &xa.conj_transpose(), &ah);
                c.range_subset("R(X*) ⊆ R(A*)", &x.conj_transpose(), &ah);
            }
            InverseKind::CoreEP => {
                let k = index(a)?.max(1);
                let ak = c.power(k);
                c.equal("XAX = X", &xax, x);
                c.equal("XA^(k+1) = A^k", &(x * &(&ak * a)), &ak);
                c.range_equal("R(X) = R(X*)", x, &x.conj_transpose());
                c.range_equal("R(X) = R(A^k)", x, &ak);
            }
            InverseKind::DualCoreEP => {
                let k = index(a)?.max(1);
                let ak = c.power(k);
                c.equal("XAX = X", &xax, x);
                c.equal("A^(k+1)X = A^k", &(&(&ak * a) * x), &ak);
                c.range_equal("R(X) = R(X*)", x, &x.conj_transpose());
                c.range_equal("R(X) = R((A*)^k)", x, &ak.conj_transpose());
            }
        }
        let passed = c.equations.iter().all(|e| e.passed) && c.ranges.iter().all(|r| r.passed);
        Ok(VerificationReport {
            kind,
            mode: S::MODE,
            passed,
            tolerance: (!S::is_exact()).then(|| self.tolerance(a)),
            equation_residuals: c.equations,
            range_checks: c.ranges,
        })
    }

    /// Mode-tagged dispatch; `ModeMismatch` if `a` and `x` differ in mode.
    pub fn check_dyn(
        &self,
        kind: InverseKind,
        a: &DynMatrix,
        x: &DynMatrix,
    ) -> Result<VerificationReport> {
        match (a, x) {
            (DynMatrix::Exact(a), DynMatrix::Exact(x)) => self.check(kind, a, x),
            (DynMatrix::Float(a), DynMatrix::Float(x)) => self.check(kind, a, x),
            _ => Err(Error::ModeMismatch { op: "verify" }),
        }
    }
}

macro_rules! shorthand {
    ($($name:ident => $kind:ident),* $(,)?) => {$(
        /// Default-tolerance check for one inverse kind.
        pub fn $name<S: Scalar>(a: &Matrix<S>, x: &Matrix<S>) -> Result<VerificationReport> {
            Verifier::default().check(InverseKind::$kind, a, x)
        }
    )*};
}

shorthand! {
    check_moore_penrose => MoorePenrose,
    check_drazin => Drazin,
    check_group => Group,
    check_core => Core,
    check_dual_core => DualCore,
    check_core_ep => CoreEP,
    check_dual_core_ep => DualCoreEP,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverses;
    use crate::matcore::Gaussian;
    use num_complex::Complex64;

    type M = Matrix<Gaussian>;

    fn index_two() -> M {
        M::from_ints(&[[1, 1, 2, 5], [0, 1, 1, 1], [0, 3, 3, 1], [1, 0, 1, 4]])
    }

    fn index_one() -> M {
        M::from_ints(&[[1, 0, 3], [4, 0, 2], [2, 0, 1]])
    }

    #[test]
    fn exact_results_pass() {
        let a = index_two();
        let x = inverses::core_ep(&a, inverses::MethodKind::PowerFormula).unwrap();
        assert!(check_core_ep(&a, &x).unwrap().passed);
        assert!(
            check_drazin(&a, &inverses::drazin(&a).unwrap())
                .unwrap()
                .passed
        );
        assert!(
            check_moore_penrose(&a, &inverses::moore_penrose(&a).unwrap())
                .unwrap()
                .passed
        );
        let b = index_one();
        assert!(check_core(&b, &inverses::core(&b).unwrap()).unwrap().passed);
        assert!(
            check_dual_core(&b, &inverses::dual_core(&b).unwrap())
                .unwrap()
                .passed
        );
        assert!(
            check_group(&b, &inverses::group(&b).unwrap())
                .unwrap()
                .passed
        );
        let d = inverses::dual_core_ep(&a, inverses::MethodKind::PowerFormula).unwrap();
        assert!(check_dual_core_ep(&a, &d).unwrap().passed);
    }

    #[test]
    fn wrong_candidates_fail() {
        let a = index_two();
        let drazin = inverses::drazin(&a).unwrap();
        let r = check_core_ep(&a, &drazin).unwrap();
        assert!(!r.passed);
        assert!(r.failures().contains(&"R(X) = R(X*)"));
        let b = index_one();
        let mp = inverses::moore_penrose(&b).unwrap();
        assert!(!check_core(&b, &mp).unwrap().passed);
        assert!(!check_moore_penrose(&b, &M::zeros(3, 3)).unwrap().passed);
        let r = check_group(&a, &drazin).unwrap();
        assert!(r.failures().contains(&"ind(A) <= 1"));
    }

    #[test]
    fn float_tolerance_scales_with_input() {
        let a = index_one().to_float();
        let x = inverses::core(&a).unwrap();
        let v = Verifier::default();
        assert_eq!(v.tolerance(&a), 1e-8 * 5.0);
        assert!(v.check(InverseKind::Core, &a, &x).unwrap().passed);
        let nudged = x.shift_diagonal(&Complex64::new(1e-3, 0.0));
        assert!(!v.check(InverseKind::Core, &a, &nudged).unwrap().passed);
        assert!(
            Verifier::new(1.0)
                .check(InverseKind::Core, &a, &nudged)
                .unwrap()
                .equation_residuals[1]
                .passed
        );
    }

    #[test]
    fn shape_and_mode_errors() {
        let a = index_one();
        assert!(matches!(
            check_core(&a, &M::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let v = Verifier::default();
        let r = v.check_dyn(
            InverseKind::Core,
            &DynMatrix::Exact(a.clone()),
            &DynMatrix::Float(a.to_float()),
        );
        assert_eq!(r, Err(Error::ModeMismatch { op: "verify" }));
    }

    #[test]
    fn range_helpers() {
        let a = index_one();
        let col = M::from_ints(&[[1], [4], [2]]);
        assert!(range_subset(&col, &a));
        assert!(!range_subset(&M::from_ints(&[[0], [1], [0]]), &a));
        assert!(range_equal(&a, &(&a * &a)));
    }
}
