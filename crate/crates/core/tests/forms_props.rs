use aj_core::fixtures::{random_form, random_series, rng};
use aj_core::forms::{omega_space, DifferentialForm};
use aj_core::oracle::omega_dimensions;
use proptest::prelude::*;

fn sign(p: usize) -> aj_core::Rational {
    aj_core::rational::rat(if p % 2 == 0 { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=5, p in 0usize..=3) {
        prop_assume!(p <= n);
        let w = random_form(&mut rng(seed), n, m, p);
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=4, p in 0usize..=2, q in 0usize..=2) {
        prop_assume!(p + q <= n);
        let mut r = rng(seed);
        let a = random_form(&mut r, n, m, p);
        let b = random_form(&mut r, n, m, q);
        let lhs = a.wedge(&b).unwrap().d();
        let rhs = a.d().wedge(&b).unwrap().checked_add(&a.wedge(&b.d()).unwrap().scale(&sign(p))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_forms_are_closed(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=4, p in 0usize..=2) {
        prop_assume!(p < n);
        let w = random_form(&mut rng(seed), n, m, p).d();
        prop_assert!(w.is_exact());
        prop_assert!(w.is_closed());
        let witness = w.exact_witness().unwrap();
        prop_assert_eq!(witness.d(), w);
    }

    #[test]
    fn truncation_commutes(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=4, p in 0usize..=1, q in 0usize..=1) {
        prop_assume!(p + q <= n);
        let big = m + 1;
        let mut r = rng(seed);
        let a = random_form(&mut r, n, big, p);
        let b = random_form(&mut r, n, big, q);
        let t = |w: &DifferentialForm| w.truncate(m).unwrap();
        prop_assert_eq!(t(&a.d()), t(&a).d());
        prop_assert_eq!(t(&a.wedge(&b).unwrap()), t(&a).wedge(&t(&b)).unwrap());
        let c = random_form(&mut r, n, big, p);
        prop_assert_eq!(t(&a.checked_add(&c).unwrap()), t(&a).checked_add(&t(&c)).unwrap());
    }

    #[test]
    fn functions_times_forms(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=4) {
        let mut r = rng(seed);
        let f = random_series(&mut r, n, m, 0, 0.5);
        let w = random_form(&mut r, n, m, 1);
        prop_assert_eq!(w.mul_function(&f).unwrap(), DifferentialForm::function(&f).wedge(&w).unwrap());
    }
}

#[test]
fn dimensions_match_enumeration() {
    for n in 1..=3 {
        for m in 1..=4 {
            for p in 0..=n {
                let fast = omega_space(n, m, p).unwrap().report();
                let slow = omega_dimensions(n, m, p);
                assert_eq!(fast, slow, "N={n} M={m} p={p}");
            }
        }
    }
}

#[test]
fn one_variable_forms_are_all_exact() {
    for m in 1..=6 {
        let space = omega_space(1, m, 1).unwrap();
        assert_eq!(space.dim(), m - 1);
        assert_eq!(space.dim_exact(), m - 1);
        for i in 0..space.dim() {
            assert!(space.basis_form(i).is_exact());
        }
    }
}

#[test]
fn spaces_above_top_degree_are_zero() {
    assert_eq!(omega_space(2, 3, 3).unwrap().dim(), 0);
    assert!(DifferentialForm::dt(2, 3, 0).wedge(&DifferentialForm::dt_wedge(2, 3, &[0, 1]).unwrap()).unwrap().is_zero());
}
