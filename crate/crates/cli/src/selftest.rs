//! Desk-scale comparison of the fast paths with the reference oracles.

use aj_core::abeljacobi::{verify_surjectivity, ConstructConfig};
use aj_core::fixtures::{fixture_curve, random_flow_problem, random_rational, random_targets, rng};
use aj_core::flow::{solve_flow, verify_flow};
use aj_core::forms::omega_space;
use aj_core::oracle::{differential_coefficient_by_recursion, flow_by_coefficients, leibniz_determinant, omega_dimensions};
use aj_core::{Matrix, Rational};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

fn check(name: &'static str, run: impl FnOnce() -> aj_core::Result<(bool, String)>) -> Check {
    match run() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check {
            name,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run(seed: u64) -> SelftestReport {
    let checks = vec![
        check("forms dimensions", || {
            let mut n_ok = 0;
            let mut total = 0;
            for n in 1..=3 {
                for m in 1..=3 {
                    for p in 0..=n {
                        total += 1;
                        if omega_space(n, m, p)?.report() == omega_dimensions(n, m, p) {
                            n_ok += 1;
                        }
                    }
                }
            }
            Ok((n_ok == total, format!("{n_ok}/{total} (N, M, p) agree with enumeration")))
        }),
        check("flow solutions", || {
            let mut r = rng(seed);
            let mut n_ok = 0;
            for k in 0..12 {
                let p = random_flow_problem(&mut r, 1 + k % 3, k % 2, 2 + k % 4);
                let sol = solve_flow(&p)?;
                if verify_flow(&p, &sol)?.vanishes() && flow_by_coefficients(&p)? == sol.phi {
                    n_ok += 1;
                }
            }
            Ok((n_ok == 12, format!("{n_ok}/12 agree with undetermined coefficients")))
        }),
        check("determinants", || {
            let mut r = rng(seed ^ 0xd);
            let mut n_ok = 0;
            for k in 0..20 {
                let size = 1 + k % 5;
                let rows: Vec<Vec<Rational>> =
                    (0..size).map(|_| (0..size).map(|_| random_rational(&mut r, 10)).collect()).collect();
                if Matrix::from_rows(rows.clone())?.determinant()? == leibniz_determinant(&rows) {
                    n_ok += 1;
                }
            }
            Ok((n_ok == 20, format!("{n_ok}/20 agree with the permutation sum")))
        }),
        check("curve coefficient series", || {
            let mut n_ok = 0;
            let mut total = 0;
            for g in 1..=3 {
                let c = fixture_curve(g)?;
                for p in c.find_rational_points(2) {
                    for i in 0..g {
                        total += 1;
                        let fast = c.differential_coefficient(i, &p, 6)?;
                        let slow = differential_coefficient_by_recursion(c.s_coefficients(), &p.x, &p.y, i, 6);
                        let fast: Vec<Rational> = (0..6).map(|k| fast.coeff(&[k])).collect();
                        if Some(fast) == slow {
                            n_ok += 1;
                        }
                    }
                }
            }
            Ok((n_ok == total, format!("{n_ok}/{total} agree with coefficient recursion")))
        }),
        check("round trip", || {
            let mut r = rng(seed ^ 0xa);
            let mut n_ok = 0;
            for g in 1..=3 {
                let c = fixture_curve(g)?;
                let targets = random_targets(&mut r, g, 2, 3);
                let cfg = ConstructConfig { seed, ..Default::default() };
                if verify_surjectivity(&c, &targets, &cfg)?.all_pass() {
                    n_ok += 1;
                }
            }
            Ok((n_ok == 3, format!("{n_ok}/3 genera reproduce (dh_j)")))
        }),
    ];
    let all_pass = checks.iter().all(|c| c.pass);
    SelftestReport { seed, checks, all_pass }
}
