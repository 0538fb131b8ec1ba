//! Truncated multivariate power series over the rationals.
//!
//! A [`TruncatedSeries`] is an element of `Q[t_1, .., t_N] / m^M` where `m` is
//! the ideal generated by the variables: every term of total degree `>= M` is
//! discarded. Terms live in a `BTreeMap` keyed by exponent vector and zero
//! coefficients are never stored, so structural equality is ring equality.
//!
//! Variables are indexed from 0. Rings with a distinguished variable (power
//! series in `t_1` over a ring `R` of the remaining variables) use the same
//! type with variable 0 singled out.

mod linalg;
mod serial;

pub use linalg::{rational_rank, solve_rational_columns, Matrix, RingElement, SeriesMatrix};
pub use serial::TermRecord;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    nvars: usize,
    order: usize,
    terms: BTreeMap<Exponents, Rational>,
}

fn total_degree(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl TruncatedSeries {
    /// The zero element of `Q[t_1..t_nvars]/m^order`.
    ///
    /// Panics if `nvars` or `order` is zero.
    pub fn zero(nvars: usize, order: usize) -> Self {
        assert!(nvars >= 1, "a series ring needs at least one variable");
        assert!(order >= 1, "truncation order must be positive");
        TruncatedSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: usize, c: Rational) -> Self {
        let mut s = Self::zero(nvars, order);
        s.insert_term(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        Self::constant(nvars, order, Rational::one())
    }

    /// The variable `t_index` (0-based).
    pub fn var(nvars: usize, order: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(nvars, order, e, Rational::one())
    }

    pub fn monomial(nvars: usize, order: usize, exponents: Exponents, c: Rational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut s = Self::zero(nvars, order);
        s.insert_term(exponents, c);
        s
    }

    /// Builds a series from arbitrary terms; repeated exponents are summed and
    /// terms of total degree `>= order` dropped.
    pub fn from_terms<I>(nvars: usize, order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut s = Self::zero(nvars, order);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} in a ring with {} variables",
                    e.len(),
                    nvars
                )));
            }
            s.insert_term(e, c);
        }
        Ok(s)
    }

    /// Univariate convenience constructor from coefficients of `t^0, t^1, ..`.
    pub fn univariate(order: usize, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(1, order);
        for (k, c) in coeffs.iter().enumerate() {
            s.insert_term(vec![k as u32], c.clone());
        }
        s
    }

    fn insert_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() || total_degree(&e) >= self.order {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.order == other.order
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.order)
    }

    pub fn one_like(&self) -> Self {
        Self::one(self.nvars, self.order)
    }

    pub fn constant_like(&self, c: Rational) -> Self {
        Self::constant(self.nvars, self.order, c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Lowest total degree carrying a nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch(
                self.nvars,
                self.order,
                other.nvars,
                other.order,
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.zero_like();
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            for (eb, cb) in &other.terms {
                if da + total_degree(eb) >= self.order {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        TruncatedSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under the canonical surjection onto `Q[t]/m^order`, `order <= self.order()`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order == 0 || order > self.order {
            return Err(Error::InvalidParameter(format!(
                "cannot truncate from order {} to {}",
                self.order, order
            )));
        }
        Ok(TruncatedSeries {
            nvars: self.nvars,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) < order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Same ring, with every term of total degree `>= degree` removed.
    pub fn drop_from_degree(&self, degree: usize) -> Self {
        TruncatedSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) < degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative in `t_var`.
    ///
    /// The result lives in the same ring but is only meaningful modulo
    /// `m^(order - 1)`: the input carries no information about degree-`order`
    /// terms, whose derivatives would land in degree `order - 1`.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        self.check_var(var)?;
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.insert_term(e2, c * Rational::from_integer(e[var].into()));
        }
        Ok(out)
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        Ok(())
    }

    /// Coefficient of `t_var^power`, returned as a series free of `t_var`.
    pub fn coeff_in_var(&self, var: usize, power: u32) -> Result<Self> {
        self.check_var(var)?;
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e[var] == power {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.insert_term(e2, c.clone());
            }
        }
        Ok(out)
    }

    /// Multiplies by `t_var^power`.
    pub fn shift_var(&self, var: usize, power: u32) -> Result<Self> {
        self.check_var(var)?;
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[var] += power;
            out.insert_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Largest exponent of `t_var` among the stored terms.
    pub fn degree_in_var(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Composition `f(g)` of a univariate `f` with a series `g` of zero
    /// constant term.
    ///
    /// The result lies in the ring of `g`, truncated to `min(f.order, g.order)`:
    /// `f` carries no coefficients at or beyond its own order and `g^k` lies in
    /// `m^k`, so nothing finer is determined.
    pub fn substitute(&self, g: &TruncatedSeries) -> Result<Self> {
        if self.nvars != 1 {
            return Err(Error::DimensionMismatch(format!(
                "substitute expects a univariate outer series, got {} variables",
                self.nvars
            )));
        }
        if !g.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order.min(g.order);
        let g = g.truncate(order)?;
        let mut acc = g.zero_like();
        for k in (0..order as u32).rev() {
            acc = &acc * &g;
            let c = self.coeff(&[k]);
            if !c.is_zero() {
                acc.insert_term(vec![0; g.nvars], c);
            }
        }
        Ok(acc)
    }

    /// Replaces `t_var` by `g` (zero constant term), keeping all other
    /// variables: `f(t_1, .., g, .., t_N)`.
    pub fn substitute_var(&self, var: usize, g: &TruncatedSeries) -> Result<Self> {
        self.check_ring(g)?;
        self.check_var(var)?;
        if !g.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let top = self.degree_in_var(var);
        let mut acc = self.zero_like();
        for k in (0..=top).rev() {
            acc = &(&acc * g) + &self.coeff_in_var(var, k)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a unit, by Newton iteration `v <- v (2 - f v)`.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnit(self.to_string()));
        }
        let two = self.constant_like(Rational::from_integer(2.into()));
        let mut v = self.constant_like(c0.recip());
        let mut precision = 1;
        while precision < self.order {
            v = &v * &(&two - &(self * &v));
            precision *= 2;
        }
        Ok(v)
    }

    /// Square root of a unit with prescribed constant term `root`, by Newton
    /// iteration `r <- (r + f / r) / 2`.
    pub fn sqrt_unit(&self, root: &Rational) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnit(self.to_string()));
        }
        if crate::rational::rational_sqrt(&c0).is_none() {
            return Err(Error::NotASquare(c0.to_string()));
        }
        if root * root != c0 {
            return Err(Error::RootMismatch {
                root: root.to_string(),
                constant: c0.to_string(),
            });
        }
        let half = Rational::new(1.into(), 2.into());
        let mut r = self.constant_like(root.clone());
        let mut precision = 1;
        while precision < self.order {
            r = (&r + &(self * &r.invert_unit()?)).scale(&half);
            precision *= 2;
        }
        Ok(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;

            /// Panics on a ring mismatch; use the `checked_*` form to recover.
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                self.$checked(rhs).expect("series ring mismatch")
            }
        }

        impl $trait<TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;

            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32], nvars: usize) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if nvars == 1 {
            write!(f, "t")?;
        } else {
            write!(f, "t{}", i + 1)?;
        }
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

pub(crate) fn write_coefficient_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    e: &[u32],
    nvars: usize,
    suffix: &str,
) -> fmt::Result {
    let negative = *c < Rational::zero();
    let mag = if negative { -c.clone() } else { c.clone() };
    if first {
        if negative {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if negative { "-" } else { "+" })?;
    }
    let is_const = e.iter().all(|&k| k == 0);
    if is_const {
        if suffix.is_empty() || !mag.is_one() {
            write!(f, "{mag}")?;
            if !suffix.is_empty() {
                write!(f, "*")?;
            }
        }
    } else {
        if !mag.is_one() {
            write!(f, "{mag}*")?;
        }
        write_monomial(f, e, nvars)?;
        if !suffix.is_empty() {
            write!(f, "*")?;
        }
    }
    write!(f, "{suffix}")
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by_key(|e| (total_degree(e), std::cmp::Reverse((*e).clone())));
        for (i, e) in keys.into_iter().enumerate() {
            write_coefficient_term(f, i == 0, &self.terms[e], e, self.nvars, "")?;
        }
        Ok(())
    }
}
