//! Acceptance suite: one line per criterion, exact equality throughout.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use aj_core::abeljacobi::{
    class_of_cycle, construct_cycle, target_class, verify_surjectivity, wedge_identity, ConstructConfig, ZeroCycle,
};
use aj_core::curve::AffinePoint;
use aj_core::fixtures::{
    fixture_curve, random_arc, random_flow_problem, random_form, random_nonzero_rational, random_targets, rng,
};
use aj_core::flow::{solve_flow, verify_flow, FlowProblem};
use aj_core::forms::omega_space;
use aj_core::oracle::{flow_by_coefficients, omega_dimensions};
use aj_core::points::{choose_points, reverify, PointSelection, SelectionConfig};
use aj_core::rational::rat;
use aj_core::{Rational, TruncatedSeries};
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: aj_core::Result<T>, ctx: impl FnOnce() -> String) -> Result<T, String> {
    r.map_err(|e| format!("{}: {e}", ctx()))
}

/// Selections collected from the pipeline runs, re-verified in AC8.
type Certificates = Vec<(usize, PointSelection<AffinePoint>)>;

fn ac1(certs: &mut Certificates) -> Outcome {
    let per_config = 20;
    let mut runs = 0;
    let mut slowest = 0.0f64;
    for g in 1..=3 {
        let curve = ok(fixture_curve(g), || format!("fixture g={g}"))?;
        for n in 1..=2 {
            for m in 2..=5 {
                let start = Instant::now();
                let mut r = rng(1000 * g as u64 + 100 * n as u64 + m as u64);
                for k in 0..per_config {
                    let targets = random_targets(&mut r, g, n, m);
                    let cfg = ConstructConfig { seed: k as u64, ..Default::default() };
                    let rep = ok(verify_surjectivity(&curve, &targets, &cfg), || format!("g={g} N={n} M={m} #{k}"))?;
                    ensure(rep.all_pass(), || format!("g={g} N={n} M={m} #{k}: class differs from (dh_j)"))?;
                    ensure(rep.velocities_nonzero(), || format!("g={g} N={n} M={m} #{k}: zero velocity"))?;
                    if let Some(sel) = rep.construction.selection {
                        certs.push((g, sel));
                    }
                    runs += 1;
                }
                slowest = slowest.max(start.elapsed().as_secs_f64());
            }
        }
    }
    Ok(format!("{runs} round trips over 24 configurations, slowest configuration {slowest:.1}s"))
}

fn ac2() -> Outcome {
    let mut count = 0;
    let mut r = rng(2);
    for g in 1..=3 {
        for extra in 0..=1 {
            for m in 2..=5 {
                for _ in 0..3 {
                    let p = random_flow_problem(&mut r, g, extra, m);
                    let sol = ok(solve_flow(&p), || format!("solve g={g} extra={extra} M={m}"))?;
                    let res = ok(verify_flow(&p, &sol), || "verify".into())?;
                    ensure(res.vanishes(), || format!("residual g={g} extra={extra} M={m}"))?;
                    let slow = ok(flow_by_coefficients(&p), || "oracle".into())?;
                    ensure(slow == sol.phi, || format!("oracle disagrees g={g} extra={extra} M={m}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} flow problems: residual vanishes mod t1^(M-1), equal to undetermined coefficients"))
}

fn ac3() -> Outcome {
    let mut count = 0;
    let mut r = rng(3);
    for g in 1..=3 {
        for m in 2..=4 {
            for _ in 0..4 {
                let random = random_flow_problem(&mut r, g, 1, m);
                let p = ok(FlowProblem::with_unit_rhs(random.matrix().clone(), 0), || "problem".into())?;
                let sol = ok(solve_flow(&p), || "solve".into())?;
                let rows = ok(wedge_identity(&p, &sol), || "wedge".into())?;
                ensure(rows.iter().all(|&b| b), || format!("wedge identity fails g={g} M={m}: {rows:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} flows over one extra variable, identity exact in Omega^2"))
}

fn ac4() -> Outcome {
    let mut r = rng(4);
    let mut forms = 0;
    for n in 1..=3 {
        for m in 1..=5 {
            for p in 0..=n {
                for _ in 0..3 {
                    let a = random_form(&mut r, n, m, p);
                    ensure(a.d().d().is_zero(), || format!("d^2 != 0 at N={n} M={m} p={p}"))?;
                    for q in 0..=(n - p) {
                        let b = random_form(&mut r, n, m, q);
                        let sign = rat(if p % 2 == 0 { 1 } else { -1 });
                        let lhs = ok(a.wedge(&b), || "wedge".into())?.d();
                        let rhs = ok(a.d().wedge(&b), || "wedge".into())?
                            .checked_add(&ok(a.wedge(&b.d()), || "wedge".into())?.scale(&sign));
                        ensure(rhs.as_ref() == Ok(&lhs), || format!("Leibniz fails N={n} M={m} p={p} q={q}"))?;
                    }
                    forms += 1;
                }
            }
        }
    }
    let mut grid = 0;
    for n in 1..=3 {
        for m in 1..=4 {
            for p in 0..=n {
                let fast = ok(omega_space(n, m, p), || "space".into())?.report();
                let slow = omega_dimensions(n, m, p);
                ensure(fast == slow, || format!("dimensions differ N={n} M={m} p={p}: {fast:?} vs {slow:?}"))?;
                grid += 1;
            }
        }
    }
    for m in 1..=6 {
        let s = ok(omega_space(1, m, 1), || "space".into())?;
        ensure(s.dim() == m - 1 && s.dim_exact() == m - 1, || format!("N=1 M={m}: dim {} exact {}", s.dim(), s.dim_exact()))?;
    }
    Ok(format!("{forms} forms (d^2, Leibniz), {grid} dimension grid points, N=1 facts for M<=6"))
}

fn ac5() -> Outcome {
    let mut r = rng(5);
    let mut count = 0;
    for k in 0..100 {
        let g = 1 + k % 3;
        let n = 1 + (k / 3) % 3;
        let m = 2 + k % 4;
        let curve = ok(fixture_curve(g), || "fixture".into())?;
        let centers = curve.find_rational_points(3);
        let arc = ok(random_arc(&mut r, &curve, &centers, n, m), || format!("arc #{k}"))?;
        for j in 0..g {
            let w = ok(curve.pullback(j, &arc), || format!("pullback #{k} j={j}"))?;
            ensure(w.is_closed() && w.is_exact(), || format!("arc #{k} j={j}: not closed and exact"))?;
        }
        count += 1;
    }
    Ok(format!("{count} arcs, all pullbacks closed and exact"))
}

fn ac6() -> Outcome {
    let mut r = rng(6);
    let mut count = 0;
    for k in 0..60 {
        let (g, n, m) = (1 + k % 3, 1 + k % 2, 2 + k % 4);
        let curve = ok(fixture_curve(g), || "fixture".into())?;
        let centers = curve.find_rational_points(3);
        let cycle = |r: &mut _| -> Result<ZeroCycle, String> {
            let terms = (0..3)
                .map(|i| Ok((ok(random_arc(r, &curve, &centers, n, m), || "arc".into())?, i as i64 * 2 - 3)))
                .collect::<Result<Vec<_>, String>>()?;
            ok(ZeroCycle::from_terms(n, m, terms), || "cycle".into())
        };
        let z1 = cycle(&mut r)?;
        let z2 = cycle(&mut r)?;
        let whole = ok(class_of_cycle(&curve, &ok(z1.add(&z2), || "add".into())?), || "class".into())?;
        let parts = ok(
            ok(class_of_cycle(&curve, &z1), || "class".into())?.checked_add(&ok(class_of_cycle(&curve, &z2), || "class".into())?),
            || "sum".into(),
        )?;
        ensure(whole == parts, || format!("pair #{k} not additive"))?;
        count += 1;
    }
    Ok(format!("{count} cycle pairs"))
}

fn ac7(certs: &mut Certificates) -> Outcome {
    let big = 6;
    let mut checks = 0;
    for g in 1..=3 {
        let curve = ok(fixture_curve(g), || "fixture".into())?;
        for n in 1..=2 {
            let mut r = rng(700 + 10 * g as u64 + n as u64);
            for k in 0..3 {
                let targets = random_targets(&mut r, g, n, big);
                let out = ok(construct_cycle(&curve, &targets, &ConstructConfig::default()), || format!("g={g} N={n} #{k}"))?;
                let full = ok(class_of_cycle(&curve, &out.cycle), || "class".into())?;
                ensure(full == target_class(&targets), || format!("g={g} N={n} #{k} fails at M'={big}"))?;
                for m in 1..big {
                    let small: Vec<TruncatedSeries> = targets.iter().map(|h| h.truncate(m).unwrap()).collect();
                    let z = ok(out.cycle.truncate(m), || "truncate".into())?;
                    let cl = ok(class_of_cycle(&curve, &z), || "class".into())?;
                    ensure(cl == target_class(&small), || format!("g={g} N={n} #{k}: M={m} differs from truncated target"))?;
                    ensure(Ok(&cl) == full.truncate(m).as_ref(), || format!("g={g} N={n} #{k}: M={m} differs from truncated class"))?;
                    checks += 1;
                }
                if let Some(sel) = out.selection {
                    certs.push((g, sel));
                }
            }
        }
    }
    Ok(format!("{checks} truncations from M'={big}"))
}

fn ac8(certs: &Certificates) -> Outcome {
    for (i, (g, sel)) in certs.iter().enumerate() {
        let curve = ok(fixture_curve(*g), || "fixture".into())?;
        let required: BTreeSet<usize> = sel.minors.iter().map(|(row, _)| *row).collect();
        let good = ok(reverify(sel, |p| curve.ratio_column(p), &required), || "reverify".into())?;
        ensure(good && !sel.determinant.is_zero(), || format!("certificate #{i} fails re-verification"))?;
        ensure(
            sel.minors.iter().all(|(_, ms)| ms.iter().all(|m| !m.is_zero())),
            || format!("certificate #{i} has a zero minor"),
        )?;
    }
    let mut r = rng(8);
    let mut families = 0;
    for g in 1..=4 {
        let eval = |x: &Rational| -> aj_core::Result<Vec<Rational>> {
            let mut v = vec![Rational::one()];
            for _ in 1..g {
                let next = v.last().unwrap() * x;
                v.push(next);
            }
            Ok(v)
        };
        let budget = SelectionConfig::default().budget_for(g);
        let mut streams: Vec<Vec<Rational>> = vec![(1..=budget as i64).map(rat).collect()];
        for _ in 0..10 {
            streams.push((0..budget).map(|_| random_nonzero_rational(&mut r, 10)).collect());
        }
        let all: BTreeSet<usize> = (0..g).collect();
        for stream in streams {
            for required in [BTreeSet::new(), all.clone()] {
                let sel = ok(choose_points(stream.clone(), g, eval, &required, SelectionConfig::default()), || {
                    format!("monomial family g={g}")
                })?;
                ensure(sel.candidates_consumed <= budget, || "budget exceeded".into())?;
                let good = ok(reverify(&sel, eval, &required), || "reverify".into())?;
                ensure(good, || format!("monomial certificate g={g} fails"))?;
                families += 1;
            }
        }
    }
    Ok(format!("{} pipeline certificates re-verified, {families} monomial selections within budget", certs.len()))
}

fn main() -> ExitCode {
    let mut certs = Certificates::new();
    let criteria: Vec<(&str, &str, Box<dyn FnOnce(&mut Certificates) -> Outcome>)> = vec![
        ("AC1", "round trip class(construct(h)) = (dh_1..dh_g)", Box::new(ac1)),
        ("AC2", "flow identity and uniqueness against oracle", Box::new(|_| ac2())),
        ("AC3", "multivariate wedge identity", Box::new(|_| ac3())),
        ("AC4", "de Rham complex properties and dimensions", Box::new(|_| ac4())),
        ("AC5", "pullback integrality, closed and exact", Box::new(|_| ac5())),
        ("AC6", "additivity of the class map", Box::new(|_| ac6())),
        ("AC7", "compatibility with truncation", Box::new(ac7)),
        ("AC8", "selection certificates", Box::new(|c: &mut Certificates| ac8(c))),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run(&mut certs);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{id} PASS  {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL  {name}: {why} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
