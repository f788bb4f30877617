//! Exact `λ → 0` limits over rational functions with Gaussian-rational
//! coefficients.

use super::poly::PolyMatrix;
use super::{assemble, Assembled, LimitFormula, Operand, Side, Target, Theorem};
use crate::error::Result;
use crate::matcore::{Gaussian, Matrix};

/// Exact value of a limit formula. Chain formulas on nilpotent input give 0.
pub fn limit_exact(
    formula: &LimitFormula,
    operand: Operand<'_, Gaussian>,
) -> Result<Matrix<Gaussian>> {
    match assemble(formula, operand)? {
        Some(asm) => limit_exact_assembled(&asm),
        None => {
            let (r, c) = operand.result_shape();
            Ok(Matrix::zeros(r, c))
        }
    }
}

/// `lim C (Z + λI)^{-1} D` as `C·adj·D / det` with the common `λ^s` cancelled.
pub fn limit_exact_assembled(asm: &Assembled<Gaussian>) -> Result<Matrix<Gaussian>> {
    let (r, q) = PolyMatrix::shifted(&asm.shifted)?.inverse_parts()?;
    let numer = r.left_mul(&asm.left)?.right_mul(&asm.right)?;
    numer.limit_over(&q)
}

/// Whether `lim (M*N + λI)^{-1} M*` and `lim M*(NM* + λI)^{-1}` agree.
pub fn pair_identity_holds(m: &Matrix<Gaussian>, n: &Matrix<Gaussian>) -> Result<bool> {
    let operand = Operand::Pair { m, n };
    let left = LimitFormula::new(Theorem::Pair, Side::LeftShift, Target::GeneralIdentity)?;
    let right = LimitFormula::new(Theorem::Pair, Side::RightShift, Target::GeneralIdentity)?;
    Ok(limit_exact(&left, operand)? == limit_exact(&right, operand)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    type M = Matrix<Gaussian>;

    fn index_two() -> M {
        M::from_ints(&[[1, 1, 2, 5], [0, 1, 1, 1], [0, 3, 3, 1], [1, 0, 1, 4]])
    }

    fn index_two_core_ep() -> M {
        M::from_ints(&[
            [80, 4, -24, 76],
            [8, 13, 48, -5],
            [-8, 50, 204, -58],
            [72, -9, -72, 81],
        ])
        .scale(&Gaussian::ratio(1, 756))
    }

    #[test]
    fn core_ep_limits_on_first_fixture() {
        for theorem in [Theorem::Chain, Theorem::PowerMixed, Theorem::PowerGram] {
            for side in [Side::LeftShift, Side::RightShift] {
                let Ok(f) = LimitFormula::new(theorem, side, Target::CoreEP) else {
                    continue;
                };
                assert_eq!(
                    limit_exact(&f, Operand::Single(&index_two())).unwrap(),
                    index_two_core_ep(),
                    "{f}"
                );
            }
        }
    }

    #[test]
    fn core_limit_on_second_fixture() {
        let a = M::from_ints(&[[1, 0, 3], [4, 0, 2], [2, 0, 1]]);
        let expected =
            M::from_ints(&[[-5, 6, 3], [20, -4, -2], [10, -2, -1]]).scale(&Gaussian::ratio(1, 25));
        let f = LimitFormula::with_default_side(Theorem::PowerMixed, Target::Core).unwrap();
        assert_eq!(limit_exact(&f, Operand::Single(&a)).unwrap(), expected);
    }

    #[test]
    fn moore_penrose_limit_small() {
        let a = M::from_ints(&[[1, 0], [0, 0]]);
        for side in [Side::LeftShift, Side::RightShift] {
            let f = LimitFormula::new(Theorem::MoorePenrose, side, Target::MoorePenrose).unwrap();
            assert_eq!(limit_exact(&f, Operand::Single(&a)).unwrap(), a);
        }
    }

    #[test]
    fn pair_identity_small_cases() {
        assert!(pair_identity_holds(&M::identity(3), &M::identity(3)).unwrap());
        let m = M::from_ints(&[[1], [0]]);
        let n = M::from_ints(&[[1], [1]]);
        assert!(pair_identity_holds(&m, &n).unwrap());
        let f = LimitFormula::new(Theorem::Pair, Side::LeftShift, Target::GeneralIdentity).unwrap();
        assert_eq!(
            limit_exact(&f, Operand::Pair { m: &m, n: &n }).unwrap(),
            M::from_ints(&[[1, 0]])
        );
    }

    #[test]
    fn wrong_power_makes_limit_undefined() {
        // Power-formula expression with k = 1 on an index-2 matrix.
        let a = M::from_ints(&[[0, 1], [0, 0]]);
        let asm = Assembled {
            left: &a * &a.conj_transpose(),
            shifted: &(&a * &a) * &a.conj_transpose(),
            right: M::identity(2),
            side: Side::RightShift,
        };
        assert!(matches!(
            limit_exact_assembled(&asm),
            Err(Error::LimitUndefined { .. })
        ));
    }

    #[test]
    fn nilpotent_chain_limit_is_zero() {
        let a = M::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let f = LimitFormula::with_default_side(Theorem::Chain, Target::CoreEP).unwrap();
        assert_eq!(
            limit_exact(&f, Operand::Single(&a)).unwrap(),
            M::zeros(3, 3)
        );
    }
}
