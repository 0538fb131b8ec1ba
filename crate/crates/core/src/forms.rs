//! The de Rham complex of the truncated algebra `A_M = Q[t_1..t_N]/m^M`.
//!
//! `Omega^p` is presented as the free `A_M`-module on the `dt_J` (`|J| = p`)
//! modulo the relations `d(mu) ^ dt_K` for monomials `mu` of total degree
//! exactly `M` and `|K| = p - 1`. As a `Q`-vector space the free module has
//! basis `mu * dt_J` with `deg mu < M`, and the relations span exactly the
//! vectors `d(mu) ^ dt_K` (multiplying a relation by a nonconstant monomial
//! pushes it past the truncation), all of which live in coefficient degree
//! `M - 1`.
//!
//! A [`DeRhamSpace`] row-reduces those relations once. Pivots are chosen as
//! the leading term in position-over-term order: index sets compare
//! lexicographically with `dt_1` dominant, then monomials compare graded
//! lexicographically with `t_1` dominant. Every [`DifferentialForm`] is kept
//! in normal form, so structural equality is equality in `Omega^p`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{from_parts, Rational};
use crate::series::{rational_rank, solve_rational_columns};
use crate::series::TruncatedSeries;

/// A basis element `t^exponents * dt_{indices}` of the free presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormKey {
    pub exponents: Vec<u32>,
    /// Strictly increasing, 0-based.
    pub indices: Vec<usize>,
}

fn degree_of(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

/// `Greater` means "more leading".
fn lead_cmp(a: &FormKey, b: &FormKey) -> Ordering {
    b.indices
        .cmp(&a.indices)
        .then_with(|| degree_of(&a.exponents).cmp(&degree_of(&b.exponents)))
        .then_with(|| a.exponents.cmp(&b.exponents))
}

/// Sign and sorted union of `dt_I ^ dt_J`, or `None` if they share an index.
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining elements of a.
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((inversions % 2 == 0, out))
}

/// Sorts an index list, returning the permutation sign; `None` on repeats.
fn sort_indices(idx: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut positive = true;
    // Bubble sort keeps the sign bookkeeping obvious; lists have length <= N.
    for i in 0..v.len() {
        for j in 0..v.len().saturating_sub(i + 1) {
            match v[j].cmp(&v[j + 1]) {
                Ordering::Greater => {
                    v.swap(j, j + 1);
                    positive = !positive;
                }
                Ordering::Equal => return None,
                Ordering::Less => {}
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((positive, v))
}

/// Increasing index sets of size `p` drawn from `0..n`.
pub fn index_subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// All exponent vectors in `n` variables of total degree exactly `d`.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n - 1 {
            cur.push(left as u32);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k as u32);
            rec(i + 1, n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

type Terms = BTreeMap<FormKey, Rational>;

fn add_term(terms: &mut Terms, key: FormKey, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
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

/// The space `Omega^p` of `A_M = Q[t_1..t_N]/m^M` with its normal-form data.
#[derive(Debug)]
pub struct DeRhamSpace {
    nvars: usize,
    order: usize,
    degree: usize,
    free_dim: usize,
    basis: Vec<FormKey>,
    basis_index: HashMap<FormKey, usize>,
    /// pivot -> expression in non-pivot keys it is congruent to
    reducers: HashMap<FormKey, Terms>,
    subspace_dims: OnceLock<(usize, usize)>,
}

/// `{dim_total, dim_closed, dim_exact}` for one space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dim_total: usize,
    pub dim_closed: usize,
    pub dim_exact: usize,
}

static SPACES: OnceLock<Mutex<HashMap<(usize, usize, usize), Arc<DeRhamSpace>>>> = OnceLock::new();

/// Shared handle to `Omega^p_{A_M}`; computed once per `(N, M, p)`.
pub fn omega_space(nvars: usize, order: usize, degree: usize) -> Result<Arc<DeRhamSpace>> {
    if nvars == 0 || order == 0 {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1 and M >= 1, got N = {nvars}, M = {order}"
        )));
    }
    let cache = SPACES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("space cache poisoned").get(&(nvars, order, degree)) {
        return Ok(Arc::clone(s));
    }
    let built = Arc::new(DeRhamSpace::build(nvars, order, degree));
    let mut guard = cache.lock().expect("space cache poisoned");
    Ok(Arc::clone(
        guard.entry((nvars, order, degree)).or_insert(built),
    ))
}

impl DeRhamSpace {
    fn build(nvars: usize, order: usize, degree: usize) -> Self {
        let index_sets = index_subsets(nvars, degree);
        let mut free: Vec<FormKey> = Vec::new();
        for d in 0..order {
            for e in monomials_of_degree(nvars, d) {
                for j in &index_sets {
                    free.push(FormKey {
                        exponents: e.clone(),
                        indices: j.clone(),
                    });
                }
            }
        }
        let free_dim = free.len();

        let mut reducers: HashMap<FormKey, Terms> = HashMap::new();
        if degree >= 1 && degree <= nvars {
            for mu in monomials_of_degree(nvars, order) {
                for k in index_subsets(nvars, degree - 1) {
                    let mut row = Terms::new();
                    for i in 0..nvars {
                        if mu[i] == 0 {
                            continue;
                        }
                        let Some((positive, idx)) = merge_indices(&[i], &k) else {
                            continue;
                        };
                        let mut e = mu.clone();
                        e[i] -= 1;
                        let c = Rational::from_integer(mu[i].into());
                        add_term(
                            &mut row,
                            FormKey {
                                exponents: e,
                                indices: idx,
                            },
                            if positive { c } else { -c },
                        );
                    }
                    Self::absorb_relation(&mut reducers, row);
                }
            }
        }

        let mut basis: Vec<FormKey> = free.into_iter().filter(|k| !reducers.contains_key(k)).collect();
        basis.sort_by(|a, b| lead_cmp(b, a));
        let basis_index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        DeRhamSpace {
            nvars,
            order,
            degree,
            free_dim,
            basis,
            basis_index,
            reducers,
            subspace_dims: OnceLock::new(),
        }
    }

    fn reduce_with(reducers: &HashMap<FormKey, Terms>, terms: Terms) -> Terms {
        let mut out = Terms::new();
        for (k, c) in terms {
            match reducers.get(&k) {
                Some(rep) => {
                    for (k2, c2) in rep {
                        add_term(&mut out, k2.clone(), &c * c2);
                    }
                }
                None => add_term(&mut out, k, c),
            }
        }
        out
    }

    // Keeps `reducers` fully reduced: no replacement mentions a pivot.
    fn absorb_relation(reducers: &mut HashMap<FormKey, Terms>, row: Terms) {
        let row = Self::reduce_with(reducers, row);
        let Some(lead) = row.keys().max_by(|a, b| lead_cmp(a, b)).cloned() else {
            return;
        };
        let inv = row[&lead].recip();
        let mut replacement = Terms::new();
        for (k, c) in row {
            if k != lead {
                add_term(&mut replacement, k, -(c * &inv));
            }
        }
        for rep in reducers.values_mut() {
            if let Some(c) = rep.remove(&lead) {
                for (k2, c2) in &replacement {
                    add_term(rep, k2.clone(), &c * c2);
                }
            }
        }
        reducers.insert(lead, replacement);
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dimension of the free presentation before quotienting.
    pub fn free_dim(&self) -> usize {
        self.free_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FormKey] {
        &self.basis
    }

    pub fn basis_form(&self, i: usize) -> DifferentialForm {
        let mut terms = Terms::new();
        terms.insert(self.basis[i].clone(), Rational::one());
        DifferentialForm {
            nvars: self.nvars,
            order: self.order,
            degree: self.degree,
            terms,
        }
    }

    fn normal_form(&self, terms: Terms) -> Terms {
        Self::reduce_with(&self.reducers, terms)
    }

    /// Coordinates of a normal-form term map in [`Self::basis`].
    fn coordinates_of(&self, terms: &Terms) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.basis.len()];
        for (k, c) in terms {
            v[self.basis_index[k]] = c.clone();
        }
        v
    }

    /// Images under `d` of the basis, as coordinate vectors in `Omega^{p+1}`.
    fn differential_columns(&self) -> Result<Vec<Vec<Rational>>> {
        let target = omega_space(self.nvars, self.order, self.degree + 1)?;
        Ok((0..self.dim())
            .map(|i| target.coordinates_of(&self.basis_form(i).d().terms))
            .collect())
    }

    fn compute_dims(&self) -> Result<(usize, usize)> {
        let closed = if self.degree >= self.nvars || self.dim() == 0 {
            self.dim()
        } else {
            self.dim() - rational_rank(&self.differential_columns()?)
        };
        let exact = if self.degree == 0 {
            0
        } else {
            let below = omega_space(self.nvars, self.order, self.degree - 1)?;
            rational_rank(&below.differential_columns()?)
        };
        Ok((closed, exact))
    }

    fn subspace_dims(&self) -> (usize, usize) {
        *self
            .subspace_dims
            .get_or_init(|| self.compute_dims().expect("parameters validated at construction"))
    }

    pub fn dim_closed(&self) -> usize {
        self.subspace_dims().0
    }

    pub fn dim_exact(&self) -> usize {
        self.subspace_dims().1
    }

    pub fn report(&self) -> DimensionReport {
        DimensionReport {
            dim_total: self.dim(),
            dim_closed: self.dim_closed(),
            dim_exact: self.dim_exact(),
        }
    }
}

/// An element of `Omega^p_{A_M}`, always in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    nvars: usize,
    order: usize,
    degree: usize,
    terms: Terms,
}

impl DifferentialForm {
    fn normalized(nvars: usize, order: usize, degree: usize, raw: Terms) -> Self {
        let terms = if degree > nvars {
            Terms::new()
        } else {
            omega_space(nvars, order, degree)
                .expect("ring parameters are positive")
                .normal_form(raw)
        };
        DifferentialForm {
            nvars,
            order,
            degree,
            terms,
        }
    }

    pub fn zero(nvars: usize, order: usize, degree: usize) -> Self {
        assert!(nvars >= 1 && order >= 1, "ring parameters must be positive");
        DifferentialForm {
            nvars,
            order,
            degree,
            terms: Terms::new(),
        }
    }

    /// The 0-form of a function.
    pub fn function(f: &TruncatedSeries) -> Self {
        let terms = f
            .terms()
            .map(|(e, c)| {
                (
                    FormKey {
                        exponents: e.clone(),
                        indices: Vec::new(),
                    },
                    c.clone(),
                )
            })
            .collect();
        DifferentialForm {
            nvars: f.nvars(),
            order: f.order(),
            degree: 0,
            terms,
        }
    }

    /// `d t_i` (0-based).
    pub fn dt(nvars: usize, order: usize, i: usize) -> Self {
        Self::function(&TruncatedSeries::var(nvars, order, i)).d()
    }

    /// `d t_{i_1} ^ .. ^ d t_{i_k}` for the given (not necessarily sorted) indices.
    pub fn dt_wedge(nvars: usize, order: usize, indices: &[usize]) -> Result<Self> {
        Self::from_terms(
            nvars,
            order,
            indices.len(),
            [(vec![0; nvars], indices.to_vec(), Rational::one())],
        )
    }

    /// Builds a form from `(exponents, indices, coefficient)` triples. Indices
    /// may come in any order; the permutation sign is applied and repeated
    /// indices give zero.
    pub fn from_terms<I>(nvars: usize, order: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<usize>, Rational)>,
    {
        if nvars == 0 || order == 0 {
            return Err(Error::InvalidParameter("ring parameters must be positive".into()));
        }
        let mut raw = Terms::new();
        for (e, idx, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} with {} variables",
                    e.len(),
                    nvars
                )));
            }
            if idx.len() != degree {
                return Err(Error::DimensionMismatch(format!(
                    "index set of size {} in a {degree}-form",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= nvars) {
                return Err(Error::VariableOutOfRange { index: bad, nvars });
            }
            if degree_of(&e) >= order {
                continue;
            }
            if let Some((positive, sorted)) = sort_indices(&idx) {
                add_term(
                    &mut raw,
                    FormKey {
                        exponents: e,
                        indices: sorted,
                    },
                    if positive { c } else { -c },
                );
            }
        }
        Ok(Self::normalized(nvars, order, degree, raw))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32], indices: &[usize]) -> Rational {
        self.terms
            .get(&FormKey {
                exponents: exponents.to_vec(),
                indices: indices.to_vec(),
            })
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn space(&self) -> Result<Arc<DeRhamSpace>> {
        omega_space(self.nvars, self.order, self.degree)
    }

    /// Coordinates in the quotient basis of [`DeRhamSpace::basis`].
    pub fn coordinates(&self) -> Vec<Rational> {
        if self.degree > self.nvars {
            return Vec::new();
        }
        self.space().expect("valid parameters").coordinates_of(&self.terms)
    }

    /// The degree-0 part as a series; `None` for positive degree.
    pub fn as_function(&self) -> Option<TruncatedSeries> {
        if self.degree != 0 {
            return None;
        }
        let terms = self.terms.iter().map(|(k, c)| (k.exponents.clone(), c.clone()));
        TruncatedSeries::from_terms(self.nvars, self.order, terms).ok()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::RingMismatch(self.nvars, self.order, other.nvars, other.order));
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "adding a {}-form to a {}-form",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_term(&mut terms, k.clone(), c.clone());
        }
        Ok(DifferentialForm { terms, ..self.clone_shape() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    fn clone_shape(&self) -> Self {
        DifferentialForm {
            nvars: self.nvars,
            order: self.order,
            degree: self.degree,
            terms: Terms::new(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone_shape();
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    pub fn mul_function(&self, f: &TruncatedSeries) -> Result<Self> {
        DifferentialForm::function(f).wedge(self)
    }

    /// Graded-commutative product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::RingMismatch(self.nvars, self.order, other.nvars, other.order));
        }
        let degree = self.degree + other.degree;
        let mut raw = Terms::new();
        if degree <= self.nvars {
            for (ka, ca) in &self.terms {
                let da = degree_of(&ka.exponents);
                for (kb, cb) in &other.terms {
                    if da + degree_of(&kb.exponents) >= self.order {
                        continue;
                    }
                    let Some((positive, idx)) = merge_indices(&ka.indices, &kb.indices) else {
                        continue;
                    };
                    let e = ka.exponents.iter().zip(&kb.exponents).map(|(x, y)| x + y).collect();
                    let c = ca * cb;
                    add_term(&mut raw, FormKey { exponents: e, indices: idx }, if positive { c } else { -c });
                }
            }
        }
        Ok(Self::normalized(self.nvars, self.order, degree, raw))
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let degree = self.degree + 1;
        let mut raw = Terms::new();
        if degree <= self.nvars {
            for (k, c) in &self.terms {
                for i in 0..self.nvars {
                    if k.exponents[i] == 0 {
                        continue;
                    }
                    let Some((positive, idx)) = merge_indices(&[i], &k.indices) else {
                        continue;
                    };
                    let mut e = k.exponents.clone();
                    e[i] -= 1;
                    let v = c * Rational::from_integer(k.exponents[i].into());
                    add_term(&mut raw, FormKey { exponents: e, indices: idx }, if positive { v } else { -v });
                }
            }
        }
        Self::normalized(self.nvars, self.order, degree, raw)
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// A witness `eta` with `d(eta) = self`, or `None` when the form is not
    /// exact. For 0-forms only zero counts as exact, witnessed by the zero
    /// 0-form.
    pub fn exact_witness(&self) -> Option<DifferentialForm> {
        if self.is_zero() {
            return Some(DifferentialForm::zero(
                self.nvars,
                self.order,
                self.degree.saturating_sub(1),
            ));
        }
        if self.degree == 0 || self.degree > self.nvars {
            return None;
        }
        let below = omega_space(self.nvars, self.order, self.degree - 1).ok()?;
        let columns = below.differential_columns().ok()?;
        let x = solve_rational_columns(&columns, &self.coordinates())?;
        let mut raw = Terms::new();
        for (i, c) in x.into_iter().enumerate() {
            add_term(&mut raw, below.basis[i].clone(), c);
        }
        Some(DifferentialForm {
            nvars: self.nvars,
            order: self.order,
            degree: self.degree - 1,
            terms: raw,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.exact_witness().is_some()
    }

    /// Image under `Omega^p_{A_M} -> Omega^p_{A_M'}`, `1 <= M' <= M`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order == 0 || order > self.order {
            return Err(Error::InvalidParameter(format!(
                "cannot truncate a form from order {} to {}",
                self.order, order
            )));
        }
        let raw = self
            .terms
            .iter()
            .filter(|(k, _)| degree_of(&k.exponents) < order)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        Ok(Self::normalized(self.nvars, order, self.degree, raw))
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| FormTermRecord {
                    exponents: k.exponents.clone(),
                    index_set: k.indices.clone(),
                    numerator: c.numer().to_string(),
                    denominator: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(nvars: usize, order: usize, json: &FormJson) -> Result<Self> {
        let terms = json
            .terms
            .iter()
            .map(|t| Ok((t.exponents.clone(), t.index_set.clone(), from_parts(&t.numerator, &t.denominator)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(nvars, order, json.degree, terms)
    }
}

macro_rules! forward_form_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&DifferentialForm> for &DifferentialForm {
            type Output = DifferentialForm;

            fn $method(self, rhs: &DifferentialForm) -> DifferentialForm {
                self.$checked(rhs).expect("form ring or degree mismatch")
            }
        }
    };
}

forward_form_binop!(Add, add, checked_add);
forward_form_binop!(Sub, sub, checked_sub);

impl std::ops::Neg for &DifferentialForm {
    type Output = DifferentialForm;

    fn neg(self) -> DifferentialForm {
        self.scale(&-Rational::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTermRecord {
    pub exponents: Vec<u32>,
    pub index_set: Vec<usize>,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: usize,
    pub terms: Vec<FormTermRecord>,
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&FormKey> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            a.indices
                .cmp(&b.indices)
                .then_with(|| degree_of(&a.exponents).cmp(&degree_of(&b.exponents)))
                .then_with(|| b.exponents.cmp(&a.exponents))
        });
        for (i, k) in keys.into_iter().enumerate() {
            let suffix = k
                .indices
                .iter()
                .map(|&j| if self.nvars == 1 { "dt".to_string() } else { format!("dt{}", j + 1) })
                .collect::<Vec<_>>()
                .join("^");
            crate::series::write_coefficient_term(f, i == 0, &self.terms[k], &k.exponents, self.nvars, &suffix)?;
        }
        Ok(())
    }
}
