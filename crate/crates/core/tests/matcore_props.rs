use geninv::fixtures::{random_int_matrix, rng};
use geninv::matcore::{inverse, rank, rref, solve};
use geninv::{Complex64, Gaussian, Matrix};
use proptest::prelude::*;

fn small_matrix(seed: u64, rows: usize, cols: usize, complex: bool) -> Matrix<Gaussian> {
    random_int_matrix(&mut rng(seed), rows, cols, -3, 3, complex)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_is_conjugation_invariant(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, complex in any::<bool>()) {
        let a = small_matrix(seed, rows, cols, complex);
        let ah = a.conj_transpose();
        let r = rank(&a);
        prop_assert_eq!(r, rank(&ah));
        prop_assert_eq!(r, rank(&(&ah * &a)));
        prop_assert_eq!(r, rank(&(&a * &ah)));
    }

    #[test]
    fn rref_is_idempotent(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, complex in any::<bool>()) {
        let a = small_matrix(seed, rows, cols, complex);
        let once = rref(&a);
        let twice = rref(&once.reduced);
        prop_assert_eq!(&once, &twice);
        for (i, &c) in once.pivot_cols.iter().enumerate() {
            prop_assert_eq!(once.reduced.get(i, c), &Gaussian::from(1));
        }
    }

    #[test]
    fn inverse_round_trips(seed in any::<u64>(), n in 1usize..6, complex in any::<bool>()) {
        let a = small_matrix(seed, n, n, complex);
        match inverse(&a) {
            Ok(inv) => {
                prop_assert_eq!(&(&a * &inv), &Matrix::identity(n));
                prop_assert_eq!(inverse(&inv).unwrap(), a);
            }
            Err(_) => prop_assert!(rank(&a) < n),
        }
    }

    #[test]
    fn products_reassociate(seed in any::<u64>(), p in 1usize..5, q in 1usize..5, r in 1usize..5, s in 1usize..5) {
        let mut g = rng(seed);
        let a = random_int_matrix(&mut g, p, q, -4, 4, true);
        let b = random_int_matrix(&mut g, q, r, -4, 4, true);
        let c = random_int_matrix(&mut g, r, s, -4, 4, true);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).conj_transpose(), &b.conj_transpose() * &a.conj_transpose());
    }

    #[test]
    fn float_solve_matches_exact(seed in any::<u64>(), n in 1usize..6) {
        let mut g = rng(seed);
        let a = random_int_matrix(&mut g, n, n, -5, 5, false).shift_diagonal(&Gaussian::from(20));
        let b = random_int_matrix(&mut g, n, 2, -5, 5, false);
        let exact = solve(&a, &b).unwrap().to_float();
        let float = solve(&a.to_float(), &b.to_float()).unwrap();
        prop_assert!(exact.max_diff(&float).unwrap() < 1e-12);
    }

    #[test]
    fn float_rank_agrees_on_integer_matrices(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let a = small_matrix(seed, rows, cols, false);
        prop_assert_eq!(rank(&a), rank::<Complex64>(&a.to_float()));
    }
}

#[test]
fn empty_shapes_are_allowed() {
    let a: Matrix<Gaussian> = Matrix::zeros(0, 3);
    assert_eq!(rank(&a), 0);
    let b: Matrix<Gaussian> = Matrix::zeros(3, 0);
    assert_eq!((&b * &a).shape(), (3, 3));
    assert_eq!((&a * &b).shape(), (0, 0));
}
