//! Odd-degree hyperelliptic curves `y^2 = s(x)` over `Q`, formal arcs on
//! them, and pullbacks of the regular differentials `x^j dx / (2y)`,
//! `j = 0..g-1`.
//!
//! Arcs are centered at rational points with `y != 0`, where `x` is an étale
//! coordinate. Along an arc `x = x_p + xi` with `xi` in the maximal ideal of
//! `A_M`, `y` is the unique square root of `s(x_p + xi)` with constant term
//! `y_p`, and `2y` is a unit of `A_M`, so every pullback is computed without
//! leaving `A_M`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::rational::{parse_rational, rat, rational_sqrt, Rational};
use crate::series::{SeriesMatrix, TermRecord, TruncatedSeries};

// Dense univariate polynomials over Q, lowest degree first, no trailing zeros.
mod poly {
    use super::*;

    pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn eval(p: &[Rational], x: &Rational) -> Rational {
        p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(p: &[Rational]) -> Vec<Rational> {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut r = a.to_vec();
        let lead = b.last().expect("nonzero divisor");
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let f = r.last().expect("nonempty") / lead;
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.last().cloned() {
            for c in a.iter_mut() {
                *c /= &lead;
            }
        }
        a
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    s: Vec<Rational>,
    genus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub x: Rational,
    pub y: Rational,
}

impl AffinePoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        AffinePoint { x, y }
    }
}

/// `x = center.x + displacement`, `y` its local square root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalArc {
    center: AffinePoint,
    displacement: TruncatedSeries,
    y: TruncatedSeries,
}

impl HyperellipticCurve {
    /// Validates `s` (coefficients lowest degree first): odd degree `2g+1 >= 3`
    /// and squarefree.
    pub fn new(s_coefficients: Vec<Rational>) -> Result<Self> {
        let s = poly::trim(s_coefficients);
        let deg = s.len().saturating_sub(1);
        if deg % 2 == 0 {
            return Err(Error::EvenDegree(deg));
        }
        if deg < 3 {
            return Err(Error::DegreeTooSmall(deg));
        }
        if poly::gcd(&s, &poly::derivative(&s)).len() > 1 {
            return Err(Error::NotSquarefree);
        }
        Ok(HyperellipticCurve {
            s,
            genus: (deg - 1) / 2,
        })
    }

    pub fn from_integers(s_coefficients: &[i64]) -> Result<Self> {
        Self::new(s_coefficients.iter().map(|&c| rat(c)).collect())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn s_coefficients(&self) -> &[Rational] {
        &self.s
    }

    pub fn eval_s(&self, x: &Rational) -> Rational {
        poly::eval(&self.s, x)
    }

    pub fn contains(&self, p: &AffinePoint) -> bool {
        &p.y * &p.y == self.eval_s(&p.x)
    }

    /// Checks `p` is on the curve and not a Weierstrass point.
    pub fn check_arc_center(&self, p: &AffinePoint) -> Result<()> {
        if !self.contains(p) {
            return Err(Error::NotOnCurve {
                x: p.x.to_string(),
                y: p.y.to_string(),
            });
        }
        if p.y.is_zero() {
            return Err(Error::WeierstrassPoint {
                x: p.x.to_string(),
                y: p.y.to_string(),
            });
        }
        Ok(())
    }

    /// `s(x)` for a series argument, by Horner.
    pub fn s_of(&self, x: &TruncatedSeries) -> TruncatedSeries {
        self.s
            .iter()
            .rev()
            .fold(x.zero_like(), |acc, c| &(&acc * x) + &x.constant_like(c.clone()))
    }

    /// The unique `y(u)` with `y(u)^2 = s(x_p + u)` in `Q[u]/u^order` and
    /// `y(0) = y_p`.
    pub fn local_expansion(&self, p: &AffinePoint, order: usize) -> Result<TruncatedSeries> {
        self.check_arc_center(p)?;
        let x = &TruncatedSeries::constant(1, order, p.x.clone()) + &TruncatedSeries::var(1, order, 0);
        self.s_of(&x).sqrt_unit(&p.y)
    }

    /// `g_j(u) = (x_p + u)^j / (2 y(u))`: the pullback of `x^j dx / (2y)`
    /// along `x = x_p + u`, against `du`.
    pub fn differential_coefficient(&self, j: usize, p: &AffinePoint, order: usize) -> Result<TruncatedSeries> {
        self.check_index(j)?;
        let y = self.local_expansion(p, order)?;
        let x = &TruncatedSeries::constant(1, order, p.x.clone()) + &TruncatedSeries::var(1, order, 0);
        Ok(&x.pow(j as u32) * &y.scale(&rat(2)).invert_unit()?)
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.genus {
            return Err(Error::InvalidParameter(format!(
                "differential index {j} out of range for genus {}",
                self.genus
            )));
        }
        Ok(())
    }

    /// Pullback of `x^j dx / (2y)` (0-based `j`) along `arc`, as an element of
    /// `Omega^1_{A_M}`. The only division is by the unit `2y`.
    pub fn pullback(&self, j: usize, arc: &FormalArc) -> Result<DifferentialForm> {
        self.check_index(j)?;
        let x = arc.x();
        let coefficient = &x.pow(j as u32) * &arc.y.scale(&rat(2)).invert_unit()?;
        DifferentialForm::function(&arc.displacement).d().mul_function(&coefficient)
    }

    /// The `g x g` matrix with entry `(i, l)` equal to
    /// `(x_l + u)^i / (2 y_l(u))`; at `u = 0` a column-scaled Vandermonde
    /// matrix in the `x_l`.
    pub fn ratio_matrix(&self, points: &[AffinePoint], order: usize) -> Result<SeriesMatrix> {
        if points.len() != self.genus {
            return Err(Error::DimensionMismatch(format!(
                "{} points for genus {}",
                points.len(),
                self.genus
            )));
        }
        let mut rows = vec![Vec::with_capacity(self.genus); self.genus];
        for p in points {
            for (i, row) in rows.iter_mut().enumerate() {
                row.push(self.differential_coefficient(i, p, order)?);
            }
        }
        SeriesMatrix::from_rows(rows)
    }

    /// The column `(x_p^i / (2 y_p))_i`: `ratio_matrix` entries at `u = 0`.
    pub fn ratio_column(&self, p: &AffinePoint) -> Result<Vec<Rational>> {
        self.check_arc_center(p)?;
        let inv = (&p.y * rat(2)).recip();
        let mut out = Vec::with_capacity(self.genus);
        let mut pw = Rational::one();
        for _ in 0..self.genus {
            out.push(&pw * &inv);
            pw *= &p.x;
        }
        Ok(out)
    }

    /// All non-Weierstrass points with `x = a/b`, `|a| <= bound`,
    /// `1 <= b <= max(bound, 1)`, both signs of `y`. Ordered by height
    /// `max(|a|, b)`, then `x`, then positive `y` first.
    pub fn find_rational_points(&self, bound: u64) -> Vec<AffinePoint> {
        let b_max = bound.max(1) as i64;
        let a_max = bound as i64;
        let mut found: Vec<(i64, AffinePoint)> = Vec::new();
        for b in 1..=b_max {
            for a in -a_max..=a_max {
                if a.gcd(&b) != 1 && !(a == 0 && b == 1) {
                    continue;
                }
                let x = Rational::new(BigInt::from(a), BigInt::from(b));
                let v = self.eval_s(&x);
                if v.is_zero() {
                    continue;
                }
                if let Some(y) = rational_sqrt(&v) {
                    let h = a.abs().max(b);
                    found.push((h, AffinePoint::new(x.clone(), y.clone())));
                    found.push((h, AffinePoint::new(x, -y)));
                }
            }
        }
        found.sort_by(|(ha, pa), (hb, pb)| {
            ha.cmp(hb)
                .then_with(|| pa.x.cmp(&pb.x))
                .then_with(|| match (pa.y.is_positive(), pb.y.is_positive()) {
                    (true, false) => Ordering::Less,
                    (false, true) => Ordering::Greater,
                    _ => Ordering::Equal,
                })
        });
        found.into_iter().map(|(_, p)| p).collect()
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            s_coeffs: self.s.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(json: &CurveJson) -> Result<Self> {
        Self::new(
            json.s_coeffs
                .iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

/// Interpolates a curve `y^2 = x^(2g+1) + a_(k-1) x^(k-1) + .. + a_0 + e(x)`
/// through `k` prescribed points, where the free coefficients `e(x)` on
/// `x^k..x^(2g)` start at zero and the `x^k` coefficient is bumped by one per
/// retry until the result is squarefree.
pub fn curve_through_points(
    points: &[(Rational, Rational)],
    genus: usize,
    retries: usize,
) -> Result<HyperellipticCurve> {
    let k = points.len();
    let top = 2 * genus + 1;
    if genus == 0 || k == 0 || k > top {
        return Err(Error::InvalidParameter(format!(
            "need 1..={top} points for genus {genus}, got {k}"
        )));
    }
    for (i, (x, y)) in points.iter().enumerate() {
        if y.is_zero() {
            return Err(Error::WeierstrassPoint {
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        if points[..i].iter().any(|(x2, _)| x2 == x) {
            return Err(Error::DuplicateX(x.to_string()));
        }
    }
    let vandermonde = crate::series::Matrix::from_fn(k, k, |l, i| {
        (0..i).fold(Rational::one(), |acc, _| acc * &points[l].0)
    });
    let inverse = vandermonde.inverse()?;
    let attempts = if k == top { 1 } else { retries.max(1) };
    for attempt in 0..attempts {
        let mut s = vec![Rational::zero(); top + 1];
        s[top] = Rational::one();
        if k < top {
            s[k] = rat(attempt as i64);
        }
        let rhs: Vec<Rational> = points
            .iter()
            .map(|(x, y)| y * y - poly::eval(&s, x))
            .collect();
        for (i, a) in inverse.mul_vec(&rhs)?.into_iter().enumerate() {
            s[i] = a;
        }
        match HyperellipticCurve::new(s) {
            Ok(c) => return Ok(c),
            Err(Error::NotSquarefree) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryBudgetExhausted(attempts))
}

impl FormalArc {
    pub fn new(curve: &HyperellipticCurve, center: AffinePoint, displacement: TruncatedSeries) -> Result<Self> {
        if !displacement.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let y_local = curve.local_expansion(&center, displacement.order())?;
        let y = y_local.substitute(&displacement)?;
        Ok(FormalArc {
            center,
            displacement,
            y,
        })
    }

    pub fn center(&self) -> &AffinePoint {
        &self.center
    }

    pub fn displacement(&self) -> &TruncatedSeries {
        &self.displacement
    }

    pub fn x(&self) -> TruncatedSeries {
        &self.displacement.constant_like(self.center.x.clone()) + &self.displacement
    }

    pub fn y(&self) -> &TruncatedSeries {
        &self.y
    }

    pub fn nvars(&self) -> usize {
        self.displacement.nvars()
    }

    pub fn order(&self) -> usize {
        self.displacement.order()
    }

    pub fn is_constant(&self) -> bool {
        self.displacement.is_zero()
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        Ok(FormalArc {
            center: self.center.clone(),
            displacement: self.displacement.truncate(order)?,
            y: self.y.truncate(order)?,
        })
    }

    pub fn to_json(&self) -> ArcJson {
        ArcJson {
            center: PointJson::from(&self.center),
            displacement: self.displacement.to_records(),
        }
    }

    pub fn from_json(curve: &HyperellipticCurve, nvars: usize, order: usize, json: &ArcJson) -> Result<Self> {
        let center = json.center.to_point()?;
        let displacement = TruncatedSeries::from_records(nvars, order, &json.displacement)?;
        Self::new(curve, center, displacement)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub s_coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub x: String,
    pub y: String,
}

impl From<&AffinePoint> for PointJson {
    fn from(p: &AffinePoint) -> Self {
        PointJson {
            x: p.x.to_string(),
            y: p.y.to_string(),
        }
    }
}

impl PointJson {
    pub fn to_point(&self) -> Result<AffinePoint> {
        Ok(AffinePoint::new(parse_rational(&self.x)?, parse_rational(&self.y)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub center: PointJson,
    pub displacement: Vec<TermRecord>,
}
