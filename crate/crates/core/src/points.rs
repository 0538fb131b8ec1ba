//! Choosing evaluation sites `p_1..p_g` for functions `f_1..f_g` such that
//! the matrix `||f_j(p_k)||` (row = function, column = site) is invertible
//! and, for each requested row `r`, every minor obtained by deleting row `r`
//! and one column is nonzero.
//!
//! Candidates are consumed in stream order. Each new candidate is tried
//! together with every `(g-1)`-subset of the candidates admitted before it,
//! so selections are found in colexicographic order of stream position.
//! Subsets are grown one site at a time and abandoned as soon as their value
//! vectors become linearly dependent, and no subset search is started until
//! the admitted candidates span the full space (and span the row-deleted
//! subspaces that the requested minors need).

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::Matrix;

/// Verified certificate for a selection. Row indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSelection<S> {
    pub sites: Vec<S>,
    pub matrix: Matrix<Rational>,
    pub determinant: Rational,
    /// `(row, minors for each deleted column)` for every required row.
    pub minors: Vec<(usize, Vec<Rational>)>,
    pub candidates_consumed: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionConfig {
    /// Maximum number of candidates consumed; `None` means `64 * g`.
    pub budget: Option<usize>,
}

impl SelectionConfig {
    pub fn budget_for(&self, g: usize) -> usize {
        self.budget.unwrap_or(64 * g)
    }
}

struct Admitted<S> {
    site: S,
    values: Vec<Rational>,
}

/// Incremental independence check: rows kept in echelon form.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn try_insert(&mut self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &row[*pivot];
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

fn certify(
    columns: &[&[Rational]],
    required_rows: &BTreeSet<usize>,
) -> Option<(Matrix<Rational>, Rational, Vec<(usize, Vec<Rational>)>)> {
    let g = columns.len();
    let m = Matrix::from_fn(g, g, |i, j| columns[j][i].clone());
    let det = m.determinant().ok()?;
    if det.is_zero() {
        return None;
    }
    let mut minors = Vec::new();
    for &r in required_rows {
        let ms = m.row_deleted_minors(r).ok()?;
        if ms.iter().any(Zero::is_zero) {
            return None;
        }
        minors.push((r, ms));
    }
    Some((m, det, minors))
}

/// Picks `g` distinct sites from `candidates`. `evaluate` returns the vector
/// `(f_1(p), .., f_g(p))` for a site.
pub fn choose_points<S, I, F>(
    candidates: I,
    g: usize,
    mut evaluate: F,
    required_rows: &BTreeSet<usize>,
    config: SelectionConfig,
) -> Result<PointSelection<S>>
where
    S: Clone + PartialEq,
    I: IntoIterator<Item = S>,
    F: FnMut(&S) -> Result<Vec<Rational>>,
{
    if g == 0 {
        return Err(Error::InvalidParameter("cannot select zero points".into()));
    }
    if let Some(&r) = required_rows.iter().find(|&&r| r >= g) {
        return Err(Error::InvalidParameter(format!("required row {r} out of range for g = {g}")));
    }
    let budget = config.budget_for(g);
    let mut admitted: Vec<Admitted<S>> = Vec::new();
    let mut consumed = 0;
    let mut span = Echelon::default();
    let mut rank = 0;
    // For each required row r, the span of the value vectors with row r removed.
    let mut deleted_spans: Vec<(usize, Echelon, usize)> =
        required_rows.iter().map(|&r| (r, Echelon::default(), 0)).collect();

    for site in candidates.into_iter().take(budget) {
        consumed += 1;
        if admitted.iter().any(|a| a.site == site) {
            continue;
        }
        let values = evaluate(&site)?;
        if values.len() != g {
            return Err(Error::DimensionMismatch(format!(
                "evaluation returned {} values, expected {g}",
                values.len()
            )));
        }
        if values.iter().all(Zero::is_zero) {
            continue;
        }
        if span.try_insert(&values) {
            rank += 1;
        }
        for (r, ech, rk) in deleted_spans.iter_mut() {
            let reduced: Vec<Rational> = values
                .iter()
                .enumerate()
                .filter(|(i, _)| i != r)
                .map(|(_, v)| v.clone())
                .collect();
            if !reduced.is_empty() && ech.try_insert(&reduced) {
                *rk += 1;
            }
        }
        admitted.push(Admitted { site, values });

        let spans_ok = rank == g && deleted_spans.iter().all(|(_, _, rk)| *rk == g - 1);
        if admitted.len() < g || !spans_ok {
            continue;
        }
        let newest = admitted.len() - 1;
        let mut chosen = Vec::with_capacity(g);
        if let Some((idx, (matrix, determinant, minors))) =
            search_with_newest(&admitted, newest, g, required_rows, &mut chosen, Echelon::default(), 0)
        {
            return Ok(PointSelection {
                sites: idx.iter().map(|&i| admitted[i].site.clone()).collect(),
                matrix,
                determinant,
                minors,
                candidates_consumed: consumed,
            });
        }
    }
    Err(Error::SelectionExhausted {
        consumed,
        best_rank: rank,
        needed: g,
    })
}

type Found = (Vec<usize>, (Matrix<Rational>, Rational, Vec<(usize, Vec<Rational>)>));

// Chooses g-1 indices below `newest` (increasing), then appends `newest`.
fn search_with_newest<S>(
    admitted: &[Admitted<S>],
    newest: usize,
    g: usize,
    required_rows: &BTreeSet<usize>,
    chosen: &mut Vec<usize>,
    echelon: Echelon,
    start: usize,
) -> Option<Found> {
    if chosen.len() == g - 1 {
        let mut ech = echelon;
        if !ech.try_insert(&admitted[newest].values) {
            return None;
        }
        let mut idx = chosen.clone();
        idx.push(newest);
        let cols: Vec<&[Rational]> = idx.iter().map(|&i| admitted[i].values.as_slice()).collect();
        return certify(&cols, required_rows).map(|c| (idx, c));
    }
    let remaining = g - 1 - chosen.len();
    for i in start..newest {
        if newest - i < remaining {
            break;
        }
        let mut ech = echelon.clone();
        if !ech.try_insert(&admitted[i].values) {
            continue;
        }
        chosen.push(i);
        let found = search_with_newest(admitted, newest, g, required_rows, chosen, ech, i + 1);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Recomputes determinant and required minors from the sites' value vectors.
pub fn reverify<S>(
    selection: &PointSelection<S>,
    mut evaluate: impl FnMut(&S) -> Result<Vec<Rational>>,
    required_rows: &BTreeSet<usize>,
) -> Result<bool> {
    let values = selection
        .sites
        .iter()
        .map(&mut evaluate)
        .collect::<Result<Vec<_>>>()?;
    let cols: Vec<&[Rational]> = values.iter().map(Vec::as_slice).collect();
    Ok(match certify(&cols, required_rows) {
        Some((m, det, minors)) => m == selection.matrix && det == selection.determinant && minors == selection.minors,
        None => false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorsJson {
    pub row: usize,
    pub minors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionJson<S> {
    pub sites: Vec<S>,
    pub matrix: Vec<Vec<String>>,
    pub determinant: String,
    pub minors: Vec<MinorsJson>,
    pub candidates_consumed: usize,
}

impl<S: Clone> PointSelection<S> {
    pub fn to_json<T>(&self, site: impl Fn(&S) -> T) -> SelectionJson<T> {
        SelectionJson {
            sites: self.sites.iter().map(site).collect(),
            matrix: self
                .matrix
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            determinant: self.determinant.to_string(),
            minors: self
                .minors
                .iter()
                .map(|(row, ms)| MinorsJson {
                    row: *row,
                    minors: ms.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            candidates_consumed: self.candidates_consumed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn powers(g: usize) -> impl FnMut(&i64) -> Result<Vec<Rational>> {
        move |x: &i64| Ok((0..g as u32).map(|k| rat(x.pow(k))).collect())
    }

    fn rows(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn linear_family_skips_zero_site() {
        let sel = choose_points(0i64.., 2, powers(2), &rows(&[0]), SelectionConfig::default()).unwrap();
        assert_eq!(sel.sites, vec![1, 2]);
        assert_eq!(sel.determinant, rat(1));
        assert_eq!(sel.minors, vec![(0, vec![rat(2), rat(1)])]);
        assert_eq!(sel.candidates_consumed, 3);
        assert!(reverify(&sel, powers(2), &rows(&[0])).unwrap());
    }

    #[test]
    fn single_function() {
        let sel = choose_points(3i64.., 1, |x: &i64| Ok(vec![rat(*x)]), &rows(&[0]), SelectionConfig::default())
            .unwrap();
        assert_eq!(sel.sites, vec![3]);
        assert_eq!(sel.determinant, rat(3));
        assert_eq!(sel.minors, vec![(0, vec![rat(1)])]);
    }

    #[test]
    fn quadratic_family_vandermonde() {
        let sel = choose_points(1i64.., 3, powers(3), &rows(&[0]), SelectionConfig::default()).unwrap();
        assert_eq!(sel.sites, vec![1, 2, 3]);
        assert_eq!(sel.determinant, rat(2));
        assert_eq!(sel.minors, vec![(0, vec![rat(6), rat(6), rat(2)])]);
    }

    #[test]
    fn all_rows_required() {
        for g in 1..=4 {
            let all: Vec<usize> = (0..g).collect();
            let sel = choose_points(0i64.., g, powers(g), &rows(&all), SelectionConfig::default()).unwrap();
            assert!(sel.candidates_consumed <= g + 2, "g = {g}");
            assert!(reverify(&sel, powers(g), &rows(&all)).unwrap());
        }
    }

    #[test]
    fn dependent_functions_exhaust() {
        let err = choose_points(
            1i64..,
            2,
            |x: &i64| Ok(vec![rat(*x), rat(2 * x)]),
            &BTreeSet::new(),
            SelectionConfig { budget: Some(10) },
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::SelectionExhausted {
                consumed: 10,
                best_rank: 1,
                needed: 2
            }
        );
    }

    #[test]
    fn duplicate_sites_are_skipped() {
        let stream = vec![1i64, 1, 1, 2];
        let sel = choose_points(stream, 2, powers(2), &BTreeSet::new(), SelectionConfig::default()).unwrap();
        assert_eq!(sel.sites, vec![1, 2]);
        assert_eq!(sel.candidates_consumed, 4);
    }

    #[test]
    fn deterministic() {
        let a = choose_points(-3i64.., 3, powers(3), &rows(&[0, 1, 2]), SelectionConfig::default()).unwrap();
        let b = choose_points(-3i64.., 3, powers(3), &rows(&[0, 1, 2]), SelectionConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
