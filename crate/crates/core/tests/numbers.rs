use hankelfrac::exact::{Integer, Rational, Ring};
use hankelfrac::exponent::{certified_cf, evaluate_at, mu_bound_from_rho, tail_bound};
use hankelfrac::mahler::{degree_check, iterate_equation};
use hankelfrac::sequences::{
    declared_bound, double_sum_equation, double_sum_generate, feq_generate, gen_named,
    named_equation, product2, product2_companion, CoeffBound, SequenceSpec, NAMES,
};
use hankelfrac::verify::companion_identity;
use num_traits::One;
use proptest::prelude::*;

fn bounded_names() -> Vec<&'static str> {
    NAMES.iter().copied().filter(|n| declared_bound(n).is_some()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn registry_equations_generate_the_registry(i in 0usize..16) {
        let name = NAMES[i];
        let (eq, c0) = named_equation(name)?;
        let direct = gen_named(name, 150)?;
        let via = feq_generate(&eq, 150, Ring::Integer, Some(&Integer::from(c0)))?;
        prop_assert_eq!(&direct, &via);
        prop_assert!(eq.residual(&direct)?.is_zero_within_order());
    }

    #[test]
    fn iterates_keep_their_degree_bounds(i in 0usize..16, m in 1usize..4) {
        let (eq, _) = named_equation(NAMES[i])?;
        prop_assume!(eq.radix.pow(m as u32) <= 64);
        let it = iterate_equation(&eq, m)?;
        prop_assert!(degree_check(&eq, &it).holds());
        let f = gen_named(NAMES[i], 120)?;
        prop_assert!(it.residual(&f)?.is_zero_within_order());
    }

    #[test]
    fn iterating_an_iterate_composes(i in 0usize..16, m in 1usize..3) {
        let (eq, _) = named_equation(NAMES[i])?;
        prop_assume!(eq.radix.pow(2 * m as u32) <= 64);
        let whole = iterate_equation(&eq, 2 * m)?;
        let twice = iterate_equation(&iterate_equation(&eq, m)?.as_equation()?, 2)?;
        prop_assert_eq!(twice.radix, whole.radix);
        // same multiplier C/D in front of f(z^{d^{2m}})
        prop_assert_eq!(&twice.c * &whole.d, &whole.c * &twice.d);
        let f = gen_named(NAMES[i], 150)?;
        prop_assert!(whole.residual(&f)?.is_zero_within_order());
        prop_assert!(twice.residual(&f)?.is_zero_within_order());
    }

    #[test]
    fn double_sums_satisfy_their_equations(alpha in 0u32..4, beta in 0u32..4, plus in any::<bool>()) {
        let sign = if plus { 1 } else { -1 };
        let f = double_sum_generate(alpha, beta, sign, 200)?;
        prop_assert!(double_sum_equation(alpha, beta, sign)?.residual(&f)?.is_zero_within_order());
    }

    #[test]
    fn companion_identity_holds(u in -4i64..=4, c in prop::collection::vec(-2i64..=2, 0..3), d_tail in prop::collection::vec(-2i64..=2, 0..2)) {
        let mut d = vec![1];
        d.extend(d_tail);
        let check = companion_identity(u, &c, &d, 10)?;
        prop_assert!(check.passed, "{}", check.detail);
        let f = product2(&Integer::from(u), &hankelfrac::exact::Polynomial::from_i64s(Ring::Integer, &c),
            &hankelfrac::exact::Polynomial::from_i64s(Ring::Integer, &d), 30)?;
        prop_assert_eq!(product2_companion(&f, &Integer::from(u))?.order(), 28);
    }

    #[test]
    fn doubling_m_keeps_certified_quotients(i in 0usize..11, bi in 0usize..3, m in 64usize..400) {
        let names = bounded_names();
        let name = names[i % names.len()];
        let b = [2u64, 3, 5][bi];
        let bound = declared_bound(name).unwrap();
        if let CoeffBound::Geometric(r) = &bound {
            prop_assume!(*r < Integer::from(b));
        }
        let spec = SequenceSpec::named(name);
        let small = certified_cf(&evaluate_at(&spec, b, m, &bound)?, None);
        let large = certified_cf(&evaluate_at(&spec, b, 2 * m, &bound)?, None)?;
        if let Ok(small) = small {
            prop_assert!(large.certified() >= small.certified());
            prop_assert_eq!(&large.partial_quotients[..small.certified()], &small.partial_quotients[..]);
        }
    }

    #[test]
    fn exponent_bound_is_two_at_ratio_one(d in 2u64..50) {
        prop_assert_eq!(mu_bound_from_rho(&Rational::one(), d)?, Rational::from_integer(Integer::from(2)));
    }

    #[test]
    fn exponent_bound_grows_with_the_ratio(num in 1u64..40, den in 1u64..40, d in 2u64..6) {
        let lo = Rational::new(Integer::from(num.max(den)), Integer::from(den));
        let hi = &lo + Rational::new(Integer::one(), Integer::from(7));
        prop_assert!(mu_bound_from_rho(&lo, d)? <= mu_bound_from_rho(&hi, d)?);
        prop_assert!(mu_bound_from_rho(&lo, d)? >= Rational::from_integer(Integer::from(2)));
    }

    #[test]
    fn tail_bounds_shrink(m in 1usize..200, b in 2u64..7) {
        for bound in [CoeffBound::Constant(Integer::from(3)), CoeffBound::Linear] {
            prop_assert!(tail_bound(&bound, b, m + 1)? < tail_bound(&bound, b, m)?);
        }
    }
}
