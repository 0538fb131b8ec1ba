use aj_core::fixtures::{random_flow_problem, rng};
use aj_core::flow::{initial_velocities, solve_flow, verify_flow, FlowProblem};
use aj_core::oracle::flow_by_coefficients;
use aj_core::rational::rat;
use aj_core::{Matrix, TruncatedSeries};
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn solution_is_unique_and_verified(seed in any::<u64>(), g in 1usize..=3, extra in 0usize..=1, m in 2usize..=5) {
        let problem = random_flow_problem(&mut rng(seed), g, extra, m);
        let sol = solve_flow(&problem).unwrap();
        prop_assert!(verify_flow(&problem, &sol).unwrap().vanishes());
        prop_assert_eq!(&solve_flow(&problem).unwrap(), &sol);
        prop_assert_eq!(flow_by_coefficients(&problem).unwrap(), sol.phi);
    }

    #[test]
    fn solving_commutes_with_truncation(seed in any::<u64>(), g in 1usize..=2, extra in 0usize..=1, m in 2usize..=4) {
        let big = random_flow_problem(&mut rng(seed), g, extra, m + 1);
        let small = FlowProblem::new(
            big.matrix().map(|s| s.truncate(m).unwrap()),
            big.rhs().iter().map(|s| s.truncate(m).unwrap()).collect(),
        ).unwrap();
        let phi_big: Vec<_> = solve_flow(&big).unwrap().phi.iter().map(|s| s.truncate(m).unwrap()).collect();
        prop_assert_eq!(phi_big, solve_flow(&small).unwrap().phi);
    }
}

#[test]
fn velocities_nonzero_when_minors_nonzero() {
    // F(0) = [[1, 1, 1], [1, 2, 4], [1, 3, 9]] has every minor nonzero.
    let (n, m) = (1, 3);
    let u = TruncatedSeries::var(n, m, 0);
    let rows = [[1, 1, 1], [1, 2, 4], [1, 3, 9]];
    let f = Matrix::from_fn(3, 3, |i, j| &TruncatedSeries::constant(n, m, rat(rows[i][j])) + &u.scale(&rat((i + j) as i64)));
    for r in 0..3 {
        assert!(f.map(|s| s.constant_term()).row_deleted_minors(r).unwrap().iter().all(|x| !x.is_zero()));
        let p = FlowProblem::with_unit_rhs(f.clone(), r).unwrap();
        assert!(initial_velocities(&p).unwrap().iter().all(|v| !v.is_zero()));
    }
}
