use linham_core::catalog::integrability_certificate;
use linham_core::extended::{normal_variational, variational_matrix};
use linham_core::frames::{random_symplectic_frame, transform_hamiltonian, transform_hamiltonian_scalar, transform_system};
use linham_core::liealg::{
    canonical_algebra, classify_abelian, classify_nilpotent_span, nilpotent_normal_form, AbelianClassId, LieBasis,
    NilpotentCase,
};
use linham_core::numint::{integrate_fundamental, symplectic_drift};
use linham_core::random;
use linham_core::symplectic::{
    ham_to_matrix, is_hamiltonian_matrix, is_symplectic, matrix_to_ham, motion_matrix, poisson_bracket,
    QuadraticHamiltonian,
};
use linham_core::{GaussianRational, Mat, RatFunc};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = GaussianRational;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lift(m: &Mat<Q>) -> Mat<RatFunc> {
    m.map(|c| RatFunc::constant(c.clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ratfunc_field_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random::ratfunc(&mut r), random::ratfunc(&mut r), random::ratfunc(&mut r));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, RatFunc::one());
        }
        prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
    }

    #[test]
    fn dictionary_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let h = random::ratfunc_quadratic(&mut rng(seed), n);
        let m = ham_to_matrix(&h);
        prop_assert!(is_hamiltonian_matrix(&m).unwrap());
        prop_assert_eq!(matrix_to_ham(&m).unwrap(), h);
    }

    #[test]
    fn bracket_is_a_lie_bracket(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        let f = random::ratfunc_quadratic(&mut r, n);
        let g = random::ratfunc_quadratic(&mut r, n);
        let k = random::ratfunc_quadratic(&mut r, n);
        let fg = poisson_bracket(&f, &g).unwrap();
        prop_assert_eq!(&fg, &-&poisson_bracket(&g, &f).unwrap());
        let jacobi = &(&poisson_bracket(&f, &poisson_bracket(&g, &k).unwrap()).unwrap()
            + &poisson_bracket(&g, &poisson_bracket(&k, &f).unwrap()).unwrap())
            + &poisson_bracket(&k, &fg).unwrap();
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn symplectic_pullback_preserves_brackets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random::constant_symplectic(&mut r, 2, 4);
        prop_assert!(is_symplectic(&t).unwrap());
        let f = random::constant_quadratic(&mut r, 2);
        let g = random::constant_quadratic(&mut r, 2);
        let lhs = poisson_bracket(&f.pullback(&t), &g.pullback(&t)).unwrap();
        prop_assert_eq!(lhs, poisson_bracket(&f, &g).unwrap().pullback(&t));
    }

    #[test]
    fn frames_compose_and_invert(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random::ratfunc_quadratic(&mut r, 2);
        let f1 = random_symplectic_frame(seed, 2, 2);
        let f2 = random_symplectic_frame(seed.wrapping_add(1), 2, 2);
        let m = motion_matrix(&h);
        let stepwise = transform_system(&transform_system(&m, &f1).unwrap(), &f2).unwrap();
        prop_assert_eq!(&stepwise, &transform_system(&m, &f1.then(&f2)).unwrap());
        let back = transform_system(&transform_system(&m, &f1).unwrap(), &f1.inverse()).unwrap();
        prop_assert_eq!(back, m);
        prop_assert_eq!(transform_hamiltonian(&h, &f1).unwrap(), transform_hamiltonian_scalar(&h, &f1).unwrap());
    }

    #[test]
    fn nilpotent_case_is_a_conjugation_invariant(seed in any::<u64>(), which in 0usize..3) {
        let mut r = rng(seed);
        let case = [NilpotentCase::Rank1, NilpotentCase::Rank2, NilpotentCase::Regular][which];
        let lambda = random::gaussian(&mut r);
        let scale = random::nonzero_gaussian(&mut r);
        let t = random::constant_symplectic(&mut r, 2, 3);
        let a = (&(&t * &nilpotent_normal_form(case, Some(&lambda))) * &t.inverse().unwrap()).scale(&scale);
        match classify_nilpotent_span(&a) {
            Ok(c) => {
                prop_assert_eq!(c.case, case);
                let inv = c.conjugator.inverse().unwrap();
                prop_assert_eq!(&(&inv * &a.scale(&c.scale)) * &c.conjugator, c.normal_form());
            }
            // rank 2 with a non-square Gram determinant after rescaling
            Err(linham_core::Error::NonSquareNormalization(_)) => prop_assert_eq!(case, NilpotentCase::Rank2),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn abelian_class_is_a_conjugation_invariant(seed in any::<u64>(), which in 0usize..10) {
        let mut r = rng(seed);
        let class = AbelianClassId::ALL[which];
        let lambda = random::gaussian(&mut r);
        let t = random::constant_symplectic(&mut r, 2, 3);
        let t_inv = t.inverse().unwrap();
        let gens: Vec<Mat<Q>> = canonical_algebra(class, Some((2, 3)), Some(&lambda))
            .iter()
            .map(|g| &(&t * g) * &t_inv)
            .collect();
        let b = LieBasis::span(2, &gens).unwrap();
        let c = classify_abelian(&b).unwrap();
        prop_assert_eq!(c.class, class);
        prop_assert!(is_symplectic(&c.conjugator).unwrap());
        let canon = LieBasis::span(2, &c.algebra()).unwrap();
        let back = b.conjugate(&c.conjugator, &c.conjugator.inverse().unwrap());
        prop_assert!(canon.contains_all(&back));
    }

    #[test]
    fn certificates_are_conjugation_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h0 = random::constant_quadratic(&mut r, 2).to_ratfunc();
        let f = RatFunc::from_poly(random::poly(&mut r, 2));
        let h = h0.map(|c| c * &f);
        let t = random::constant_symplectic(&mut r, 2, 3);
        let a = integrability_certificate(&h, seed).unwrap();
        let b = integrability_certificate(&h.pullback(&lift(&t)), seed).unwrap();
        prop_assert!(a.is_certified() && b.is_certified());
        prop_assert_eq!(a.row, b.row);
        prop_assert_eq!(a.algebra_dim, b.algebra_dim);
    }

    #[test]
    fn normal_variational_is_the_motion_matrix(seed in any::<u64>(), n in 1usize..=3) {
        let h = random::ratfunc_quadratic(&mut rng(seed), n);
        prop_assert_eq!(normal_variational(&variational_matrix(&h), &h).unwrap(), motion_matrix(&h));
    }

    #[test]
    fn rk4_nearly_preserves_symplecticity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h: QuadraticHamiltonian<Q> = random::constant_quadratic(&mut r, 2);
        let m = lift(&ham_to_matrix(&h));
        let tr = integrate_fundamental(&m, 0.0, 0.25, 400).unwrap();
        prop_assert!(symplectic_drift(&tr) < 1e-8, "drift {}", symplectic_drift(&tr));
        let again = integrate_fundamental(&m, 0.0, 0.25, 400).unwrap();
        prop_assert_eq!(tr.final_matrix(), again.final_matrix());
    }
}
