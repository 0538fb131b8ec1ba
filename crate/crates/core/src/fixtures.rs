//! Seeded random inputs and standard fixture curves.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{curve_through_points, AffinePoint, FormalArc, HyperellipticCurve};
use crate::error::Result;
use crate::flow::{FlowProblem, FLOW_VAR};
use crate::forms::{index_subsets, monomials_of_degree, DifferentialForm};
use crate::rational::{rat, Rational};
use crate::series::{Matrix, TruncatedSeries};

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a/b` with `|a| <= height`, `1 <= b <= height`.
pub fn random_rational(rng: &mut FixtureRng, height: i64) -> Rational {
    let a = rng.gen_range(-height..=height);
    let b = rng.gen_range(1..=height.max(1));
    Rational::new(BigInt::from(a), BigInt::from(b))
}

pub fn random_nonzero_rational(rng: &mut FixtureRng, height: i64) -> Rational {
    loop {
        let r = random_rational(rng, height);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Each monomial of degree in `min_degree..order` appears with probability
/// `density`, with a coefficient of height at most 10.
pub fn random_series(rng: &mut FixtureRng, nvars: usize, order: usize, min_degree: usize, density: f64) -> TruncatedSeries {
    let mut terms = Vec::new();
    for d in min_degree..order {
        for e in monomials_of_degree(nvars, d) {
            if rng.gen_bool(density) {
                terms.push((e, random_rational(rng, 10)));
            }
        }
    }
    TruncatedSeries::from_terms(nvars, order, terms).expect("exponent lengths match")
}

/// A random element of the maximal ideal, never zero.
pub fn random_target(rng: &mut FixtureRng, nvars: usize, order: usize) -> TruncatedSeries {
    loop {
        let h = random_series(rng, nvars, order, 1, 0.5);
        if !h.is_zero() {
            return h;
        }
    }
}

pub fn random_targets(rng: &mut FixtureRng, g: usize, nvars: usize, order: usize) -> Vec<TruncatedSeries> {
    (0..g).map(|_| random_target(rng, nvars, order)).collect()
}

/// A random flow problem over `1 + extra` variables whose leading matrix has
/// a unit determinant; the right-hand side is free of the flow variable.
pub fn random_flow_problem(rng: &mut FixtureRng, g: usize, extra: usize, order: usize) -> FlowProblem {
    let n = 1 + extra;
    loop {
        let matrix = Matrix::from_fn(g, g, |_, _| random_series(rng, n, order, 0, 0.4));
        let rhs: Vec<TruncatedSeries> = (0..g)
            .map(|_| {
                let s = random_series(rng, n, order, 0, 0.5);
                TruncatedSeries::from_terms(n, order, s.terms().filter(|(e, _)| e[FLOW_VAR] == 0).map(|(e, c)| (e.clone(), c.clone())))
                    .expect("same ring")
            })
            .collect();
        if let Ok(p) = FlowProblem::new(matrix, rhs) {
            return p;
        }
    }
}

/// A random `p`-form given by a sparse choice of `mu dt_J`, `deg mu < order`.
pub fn random_form(rng: &mut FixtureRng, nvars: usize, order: usize, degree: usize) -> DifferentialForm {
    let mut terms = Vec::new();
    for d in 0..order {
        for e in monomials_of_degree(nvars, d) {
            for j in index_subsets(nvars, degree) {
                if rng.gen_bool(0.3) {
                    terms.push((e.clone(), j, random_rational(rng, 10)));
                }
            }
        }
    }
    DifferentialForm::from_terms(nvars, order, degree, terms).expect("valid terms")
}

/// Prescribed points for the genus-`g` fixture: a prefix of
/// `(1, 2), (2, 3), (3, 5), (4, 7), ..`.
pub fn fixture_points(g: usize) -> Vec<(Rational, Rational)> {
    let ys = [2, 3, 5, 7, 11, 13, 17];
    (0..g).map(|i| (rat(i as i64 + 1), rat(ys[i % ys.len()]))).collect()
}

pub fn fixture_curve(g: usize) -> Result<HyperellipticCurve> {
    curve_through_points(&fixture_points(g), g, 32)
}

/// A random arc at one of `centers`, displacement of the given density.
pub fn random_arc(
    rng: &mut FixtureRng,
    curve: &HyperellipticCurve,
    centers: &[AffinePoint],
    nvars: usize,
    order: usize,
) -> Result<FormalArc> {
    let center = centers[rng.gen_range(0..centers.len())].clone();
    FormalArc::new(curve, center, random_series(rng, nvars, order, 1, 0.5))
}
