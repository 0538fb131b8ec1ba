//! Slow reference computations that share no code paths with the fast
//! implementations: their own polynomial arithmetic, their own elimination,
//! their own exterior-algebra signs.
//!
//! * `omega_dimensions`: `Omega^p_{A_M}` as an explicit quotient of the free
//!   module on `mu dt_J`, `deg mu <= M`, by every relation generator.
//! * `flow_by_coefficients`: undetermined coefficients, one total degree at a
//!   time, each stage a square linear system obtained by probing.
//! * `leibniz_determinant`: sum over permutations.
//! * `*_by_recursion`: univariate coefficient recursions for square roots,
//!   inverses and the curve coefficient series.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::flow::FlowProblem;
use crate::forms::DimensionReport;
use crate::rational::Rational;
use crate::series::TruncatedSeries;

type Poly = BTreeMap<Vec<u32>, Rational>;

fn all_monomials(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..=max_deg - used {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == p)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Rank by plain Gaussian elimination on dense rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].recip();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for k in c..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Unique solution of a square system, or `None` if singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().cloned().chain(std::iter::once(v.clone())).collect())
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, pivot);
        let inv = m[c][c].recip();
        for k in c..=n {
            m[c][k] *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=n {
                    let sub = &f * &m[c][k];
                    m[i][k] -= sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

// dt_i ^ dt_J: sign by counting inversions, None if i is in J.
fn insert_index(i: usize, set: &[usize]) -> Option<(i32, Vec<usize>)> {
    if set.contains(&i) {
        return None;
    }
    let before = set.iter().filter(|&&k| k < i).count();
    let mut out = set.to_vec();
    out.push(i);
    out.sort_unstable();
    Some((if before % 2 == 0 { 1 } else { -1 }, out))
}

struct FreeModule {
    index: BTreeMap<(Vec<u32>, Vec<usize>), usize>,
}

impl FreeModule {
    fn new(n: usize, m: u32, p: usize) -> Self {
        let mut index = BTreeMap::new();
        for mu in all_monomials(n, m) {
            for j in subsets(n, p) {
                let k = index.len();
                index.insert((mu.clone(), j), k);
            }
        }
        FreeModule { index }
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    // Dense vector; terms of coefficient degree above the ambient bound are
    // dropped (they lie in m^M Omega).
    fn vector(&self, terms: &[(Vec<u32>, Vec<usize>, Rational)]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        for (mu, j, c) in terms {
            if let Some(&k) = self.index.get(&(mu.clone(), j.clone())) {
                v[k] += c;
            }
        }
        v
    }
}

// d(mu dt_J) = sum_i d_i(mu) dt_i ^ dt_J.
fn d_term(mu: &[u32], j: &[usize]) -> Vec<(Vec<u32>, Vec<usize>, Rational)> {
    let mut out = Vec::new();
    for i in 0..mu.len() {
        if mu[i] == 0 {
            continue;
        }
        if let Some((sign, set)) = insert_index(i, j) {
            let mut e = mu.to_vec();
            e[i] -= 1;
            out.push((e, set, Rational::from_integer((sign * mu[i] as i32).into())));
        }
    }
    out
}

fn relations(n: usize, m: u32, p: usize, module: &FreeModule) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for mu in all_monomials(n, m).into_iter().filter(|e| deg(e) == m) {
        for j in subsets(n, p) {
            rows.push(module.vector(&[(mu.clone(), j, Rational::one())]));
        }
    }
    if p >= 1 {
        for mu in all_monomials(n, m).into_iter().filter(|e| deg(e) == m) {
            for k in subsets(n, p - 1) {
                let dmu = d_term(&mu, &k);
                for nu in all_monomials(n, 1) {
                    let shifted: Vec<_> = dmu
                        .iter()
                        .map(|(e, s, c)| (e.iter().zip(&nu).map(|(a, b)| a + b).collect(), s.clone(), c.clone()))
                        .collect();
                    rows.push(module.vector(&shifted));
                }
            }
        }
    }
    rows
}

fn d_images(n: usize, m: u32, p: usize, target: &FreeModule) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for mu in all_monomials(n, m) {
        for j in subsets(n, p) {
            rows.push(target.vector(&d_term(&mu, &j)));
        }
    }
    rows
}

/// `(dim, dim closed, dim exact)` of `Omega^p_{A_M}` by direct linear algebra
/// on the free module of coefficient degree `<= M`.
pub fn omega_dimensions(n: usize, m: usize, p: usize) -> DimensionReport {
    let mu = m as u32;
    let here = FreeModule::new(n, mu, p);
    let rel_here = relations(n, mu, p, &here);
    let rank_here = rank(&rel_here);
    let dim_total = here.len() - rank_here;

    let dim_closed = if p < n {
        let next = FreeModule::new(n, mu, p + 1);
        let rel_next = relations(n, mu, p + 1, &next);
        let rank_next = rank(&rel_next);
        let mut stacked = d_images(n, mu, p, &next);
        stacked.extend(rel_next);
        let image = rank(&stacked) - rank_next;
        dim_total - image
    } else {
        dim_total
    };

    let dim_exact = if p == 0 {
        0
    } else {
        let mut stacked = d_images(n, mu, p - 1, &here);
        stacked.extend(rel_here);
        rank(&stacked) - rank_here
    };

    DimensionReport {
        dim_total,
        dim_closed,
        dim_exact,
    }
}

fn to_poly(s: &TruncatedSeries) -> Poly {
    s.terms().map(|(e, c)| (e.clone(), c.clone())).collect()
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        let entry = out.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_mul(a: &Poly, b: &Poly, m: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if deg(&e) < m {
                let entry = out.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_var_pow(n: usize, var: usize, k: u32, m: u32) -> Poly {
    let mut e = vec![0; n];
    e[var] = k;
    let mut p = Poly::new();
    if k < m {
        p.insert(e, Rational::one());
    }
    p
}

fn poly_d0(a: &Poly) -> Poly {
    a.iter()
        .filter(|(e, _)| e[0] > 0)
        .map(|(e, c)| {
            let mut f = e.clone();
            f[0] -= 1;
            (f, c * Rational::from_integer(e[0].into()))
        })
        .collect()
}

// f(phi, t_2, .., t_N) by expanding every monomial.
fn poly_compose0(f: &Poly, phi: &Poly, n: usize, m: u32) -> Poly {
    let mut powers: Vec<Poly> = vec![poly_var_pow(n, 0, 0, m)];
    let mut out = Poly::new();
    for (e, c) in f {
        while powers.len() <= e[0] as usize {
            let next = poly_mul(powers.last().unwrap(), phi, m);
            powers.push(next);
        }
        let mut rest = vec![0; n];
        rest[1..].copy_from_slice(&e[1..]);
        let mono: Poly = if deg(&rest) < m {
            [(rest, c.clone())].into_iter().collect()
        } else {
            Poly::new()
        };
        out = poly_add(&out, &poly_mul(&powers[e[0] as usize], &mono, m));
    }
    out
}

fn residual(f: &[Vec<Poly>], b: &[Poly], phi: &[Poly], n: usize, m: u32) -> Vec<Poly> {
    f.iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut acc: Poly = bi.iter().map(|(e, c)| (e.clone(), -c)).collect();
            for (fil, pl) in row.iter().zip(phi) {
                acc = poly_add(&acc, &poly_mul(&poly_compose0(fil, pl, n, m), &poly_d0(pl), m));
            }
            acc
        })
        .collect()
}

/// Solves the flow problem by undetermined coefficients. Stage `d` fixes the
/// degree-`d` coefficients of `phi` (all divisible by `t_1`) from the
/// degree-`(d-1)` part of the residual, which is affine in them.
pub fn flow_by_coefficients(problem: &FlowProblem) -> Result<Vec<TruncatedSeries>> {
    let (n, m) = (problem.nvars(), problem.order() as u32);
    let g = problem.size();
    let f: Vec<Vec<Poly>> = problem
        .matrix()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(to_poly).collect())
        .collect();
    let b: Vec<Poly> = problem.rhs().iter().map(to_poly).collect();
    let mut phi: Vec<Poly> = vec![Poly::new(); g];
    for d in 1..m {
        let lower: Vec<Vec<u32>> = all_monomials(n, d - 1).into_iter().filter(|e| deg(e) == d - 1).collect();
        let unknowns: Vec<(usize, Vec<u32>)> = (0..g)
            .flat_map(|l| {
                lower.iter().map(move |e| {
                    let mut a = e.clone();
                    a[0] += 1;
                    (l, a)
                })
            })
            .collect();
        let equations: Vec<(usize, &Vec<u32>)> = (0..g).flat_map(|i| lower.iter().map(move |e| (i, e))).collect();
        let read = |r: &[Poly]| -> Vec<Rational> {
            equations
                .iter()
                .map(|(i, e)| r[*i].get(*e).cloned().unwrap_or_else(Rational::zero))
                .collect()
        };
        let base = read(&residual(&f, &b, &phi, n, m));
        let mut columns = Vec::with_capacity(unknowns.len());
        for (l, a) in &unknowns {
            let mut probe = phi.clone();
            probe[*l].insert(a.clone(), Rational::one());
            let r = read(&residual(&f, &b, &probe, n, m));
            columns.push(r.iter().zip(&base).map(|(x, y)| x - y).collect::<Vec<_>>());
        }
        let matrix: Vec<Vec<Rational>> = (0..equations.len())
            .map(|row| columns.iter().map(|col| col[row].clone()).collect())
            .collect();
        let rhs: Vec<Rational> = base.iter().map(|v| -v).collect();
        let sol = solve_square(&matrix, &rhs)
            .ok_or_else(|| Error::NonUnit(format!("degree-{d} stage is singular")))?;
        for ((l, a), c) in unknowns.into_iter().zip(sol) {
            if !c.is_zero() {
                phi[l].insert(a, c);
            }
        }
    }
    phi.into_iter()
        .map(|p| TruncatedSeries::from_terms(n, m as usize, p))
        .collect()
}

/// Determinant as a signed sum over all permutations.
pub fn leibniz_determinant(rows: &[Vec<Rational>]) -> Rational {
    fn go(rows: &[Vec<Rational>], r: usize, used: &mut Vec<bool>, sign: i32, acc: Rational, out: &mut Rational) {
        if r == rows.len() {
            *out += acc * Rational::from_integer(sign.into());
            return;
        }
        for c in 0..rows.len() {
            if used[c] || rows[r][c].is_zero() {
                continue;
            }
            let flips = used[c + 1..].iter().filter(|&&u| u).count();
            let s = if flips % 2 == 0 { sign } else { -sign };
            used[c] = true;
            go(rows, r + 1, used, s, &acc * &rows[r][c], out);
            used[c] = false;
        }
    }
    let mut out = Rational::zero();
    go(rows, 0, &mut vec![false; rows.len()], 1, Rational::one(), &mut out);
    out
}

/// `r` with `r^2 = a` mod `u^len`, `r_0 = root`, by `r_k = (a_k - sum_{0<i<k} r_i r_{k-i}) / (2 r_0)`.
pub fn sqrt_by_recursion(a: &[Rational], root: &Rational) -> Option<Vec<Rational>> {
    if a.is_empty() || root.is_zero() || root * root != a[0] {
        return None;
    }
    let mut r = vec![root.clone()];
    let two_r0 = root * Rational::from_integer(2.into());
    for k in 1..a.len() {
        let mut s = a[k].clone();
        for i in 1..k {
            s -= &r[i] * &r[k - i];
        }
        r.push(s / &two_r0);
    }
    Some(r)
}

/// `b` with `a b = 1` mod `u^len`.
pub fn inverse_by_recursion(a: &[Rational]) -> Option<Vec<Rational>> {
    if a.is_empty() || a[0].is_zero() {
        return None;
    }
    let mut b = vec![a[0].recip()];
    for k in 1..a.len() {
        let mut s = Rational::zero();
        for i in 1..=k.min(a.len() - 1) {
            s += &a[i] * &b[k - i];
        }
        b.push(-s / &a[0]);
    }
    Some(b)
}

/// Coefficients of `(x_0 + u)^j / (2 y(u))` mod `u^len`, where
/// `y(u)^2 = s(x_0 + u)` and `y(0) = y_0`; `s` lowest degree first.
pub fn differential_coefficient_by_recursion(
    s: &[Rational],
    x0: &Rational,
    y0: &Rational,
    j: usize,
    len: usize,
) -> Option<Vec<Rational>> {
    // Taylor shift via binomial expansion of each (x0 + u)^k.
    let binom_shift = |k: usize| -> Vec<Rational> {
        let mut row = vec![Rational::one()];
        for _ in 0..k {
            let mut next = vec![Rational::zero(); row.len() + 1];
            for (i, c) in row.iter().enumerate() {
                next[i] += c * x0;
                next[i + 1] += c;
            }
            row = next;
        }
        row
    };
    let mut shifted = vec![Rational::zero(); len];
    for (k, c) in s.iter().enumerate() {
        for (i, b) in binom_shift(k).into_iter().enumerate().take(len) {
            shifted[i] += c * b;
        }
    }
    let y = sqrt_by_recursion(&shifted, y0)?;
    let two_y: Vec<Rational> = y.iter().map(|c| c * Rational::from_integer(2.into())).collect();
    let inv = inverse_by_recursion(&two_y)?;
    let mut xj = binom_shift(j);
    xj.resize(len.max(xj.len()), Rational::zero());
    Some(
        (0..len)
            .map(|k| (0..=k).map(|i| &xj[i] * &inv[k - i]).fold(Rational::zero(), |a, b| a + b))
            .collect(),
    )
}
