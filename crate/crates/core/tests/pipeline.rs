use std::collections::BTreeSet;

use aj_core::abeljacobi::{class_of_cycle, construct_cycle, target_class, verify_surjectivity, ConstructConfig, ZeroCycle};
use aj_core::curve::AffinePoint;
use aj_core::fixtures::{fixture_curve, random_arc, random_nonzero_rational, random_target, random_targets, rng};
use aj_core::oracle::differential_coefficient_by_recursion;
use aj_core::points::{choose_points, reverify, SelectionConfig};
use aj_core::rational::rat;
use aj_core::{Rational, TruncatedSeries};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn centers(g: usize) -> Vec<AffinePoint> {
    fixture_curve(g).unwrap().find_rational_points(3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn arcs_and_pullbacks(seed in any::<u64>(), g in 1usize..=3, n in 1usize..=2, m in 2usize..=4) {
        let c = fixture_curve(g).unwrap();
        let mut r = rng(seed);
        let arc = random_arc(&mut r, &c, &centers(g), n, m + 1).unwrap();
        prop_assert_eq!(arc.y() * arc.y(), c.s_of(&arc.x()));
        let small = arc.truncate(m).unwrap();
        for j in 0..g {
            let w = c.pullback(j, &arc).unwrap();
            prop_assert!(w.is_closed());
            if n == 1 {
                prop_assert!(w.is_exact());
            }
            prop_assert_eq!(w.truncate(m).unwrap(), c.pullback(j, &small).unwrap());
        }
    }

    #[test]
    fn class_is_additive(seed in any::<u64>(), g in 1usize..=3, n in 1usize..=2, m in 2usize..=4) {
        let c = fixture_curve(g).unwrap();
        let pts = centers(g);
        let mut r = rng(seed);
        let cycle = |r: &mut _| {
            let k = 1 + (seed % 3) as usize;
            let terms = (0..k).map(|i| (random_arc(r, &c, &pts, n, m).unwrap(), i as i64 - 1)).collect();
            ZeroCycle::from_terms(n, m, terms).unwrap()
        };
        let z1 = cycle(&mut r);
        let z2 = cycle(&mut r);
        let sum = class_of_cycle(&c, &z1.add(&z2).unwrap()).unwrap();
        let parts = class_of_cycle(&c, &z1).unwrap().checked_add(&class_of_cycle(&c, &z2).unwrap()).unwrap();
        prop_assert_eq!(sum, parts);
        prop_assert!(class_of_cycle(&c, &z1.add(&z1.neg()).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn round_trip(seed in any::<u64>(), g in 1usize..=3, n in 1usize..=2, m in 2usize..=4) {
        let c = fixture_curve(g).unwrap();
        let targets = random_targets(&mut rng(seed), g, n, m);
        let cfg = ConstructConfig { seed, ..Default::default() };
        let report = verify_surjectivity(&c, &targets, &cfg).unwrap();
        prop_assert!(report.all_pass());
        prop_assert!(report.velocities_nonzero());
        prop_assert!(report.class.components.iter().all(|w| w.is_exact()));
        let sel = report.construction.selection.as_ref().unwrap();
        let required: BTreeSet<usize> = (0..g).collect();
        prop_assert!(reverify(sel, |p| c.ratio_column(p), &required).unwrap());
    }

    #[test]
    fn construct_then_truncate(seed in any::<u64>(), g in 1usize..=2, n in 1usize..=2) {
        let big = 5;
        let c = fixture_curve(g).unwrap();
        let targets = random_targets(&mut rng(seed), g, n, big);
        let z = construct_cycle(&c, &targets, &ConstructConfig::default()).unwrap().cycle;
        for m in 2..big {
            let small: Vec<TruncatedSeries> = targets.iter().map(|h| h.truncate(m).unwrap()).collect();
            let cl = class_of_cycle(&c, &z.truncate(m).unwrap()).unwrap();
            prop_assert_eq!(&cl, &target_class(&small));
            prop_assert_eq!(cl, class_of_cycle(&c, &z).unwrap().truncate(m).unwrap());
        }
    }

    #[test]
    fn monomial_selection_is_quick(seed in any::<u64>(), g in 1usize..=4) {
        let mut r = rng(seed);
        let mut stream: Vec<Rational> = Vec::new();
        while stream.len() < g + 2 {
            let x = random_nonzero_rational(&mut r, 10);
            if !stream.contains(&x) {
                stream.push(x);
            }
        }
        let required: BTreeSet<usize> = (0..g).filter(|_| r.gen_bool(0.5)).collect();
        let eval = |x: &Rational| -> aj_core::Result<Vec<Rational>> {
            let mut v = vec![Rational::one()];
            for _ in 1..g { let next = v.last().unwrap() * x; v.push(next); }
            Ok(v)
        };
        let sel = choose_points(stream.clone(), g, eval, &required, SelectionConfig::default());
        // Row-deleted minors of a Vandermonde matrix can vanish (e.g. x_1 + x_2 = 0
        // kills a minor), so only the determinant is guaranteed.
        if required.is_empty() {
            let sel = sel.unwrap();
            prop_assert!(sel.candidates_consumed <= g + 2);
            prop_assert!(reverify(&sel, eval, &required).unwrap());
        } else if let Ok(sel) = sel {
            prop_assert!(reverify(&sel, eval, &required).unwrap());
            prop_assert!(sel.minors.iter().all(|(_, ms)| ms.iter().all(|x| !x.is_zero())));
        }
    }
}

#[test]
fn ratio_matrix_matches_recursion() {
    for g in 1..=3 {
        let c = fixture_curve(g).unwrap();
        let pts: Vec<AffinePoint> = centers(g).into_iter().take(g).collect();
        if pts.iter().map(|p| &p.x).collect::<BTreeSet<_>>().len() < g {
            continue;
        }
        let m = 6;
        let mat = c.ratio_matrix(&pts, m).unwrap();
        for (l, p) in pts.iter().enumerate() {
            for i in 0..g {
                let want = differential_coefficient_by_recursion(c.s_coefficients(), &p.x, &p.y, i, m).unwrap();
                let got: Vec<Rational> = (0..m as u32).map(|k| mat.get(i, l).coeff(&[k])).collect();
                assert_eq!(got, want, "g={g} i={i} l={l}");
            }
        }
    }
}

#[test]
fn nonconstant_arcs_when_linear_term_present() {
    let c = fixture_curve(2).unwrap();
    let (n, m) = (2, 4);
    let mut r = rng(7);
    for _ in 0..10 {
        let targets: Vec<TruncatedSeries> = (0..2)
            .map(|_| &random_target(&mut r, n, m) + &TruncatedSeries::var(n, m, 0).scale(&random_nonzero_rational(&mut r, 5)))
            .filter(|h| !h.coeff(&[1, 0]).is_zero())
            .collect();
        if targets.len() < 2 {
            continue;
        }
        let out = construct_cycle(&c, &targets, &ConstructConfig::default()).unwrap();
        for (arc, _) in out.cycle.terms() {
            assert!(!arc.displacement().coeff(&[1, 0]).is_zero());
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let c = fixture_curve(3).unwrap();
    let targets = random_targets(&mut rng(3), 3, 2, 3);
    let cfg = ConstructConfig { seed: 11, ..Default::default() };
    let a = serde_json::to_string(&verify_surjectivity(&c, &targets, &cfg).unwrap().to_json(&c)).unwrap();
    let b = serde_json::to_string(&verify_surjectivity(&c, &targets, &cfg).unwrap().to_json(&c)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn constant_arcs_contribute_nothing() {
    let c = fixture_curve(2).unwrap();
    let p = AffinePoint::new(rat(1), rat(2));
    let arc = aj_core::curve::FormalArc::new(&c, p, TruncatedSeries::zero(2, 3)).unwrap();
    let z = ZeroCycle::from_terms(2, 3, vec![(arc, 5)]).unwrap();
    assert!(class_of_cycle(&c, &z).unwrap().is_zero());
}
