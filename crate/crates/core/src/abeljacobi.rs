//! The infinitesimal Abel-Jacobi class of 0-cycles of formal arcs, and the
//! construction of cycles with a prescribed class.
//!
//! A cycle `Z = sum n_l ([gamma_l] - [center_l])` maps to the `g`-vector whose
//! `j`-th entry is `sum n_l gamma_l^* omega_j` in `Omega^1_{A_M}`. Classes are
//! written in the basis dual to `omega_1..omega_g`.
//!
//! Construction of a cycle with class `(dh_1, .., dh_g)`:
//!
//! 1. pick `g` rational points whose ratio matrix at `u = 0` is invertible and
//!    has nonzero row-deleted minors for every direction with `dh_j != 0`;
//! 2. solve the one-variable flow with right-hand side `e_j`;
//! 3. substitute `h_j` into each flow component to get the arc displacements.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{AffinePoint, ArcJson, CurveJson, FormalArc, HyperellipticCurve, PointJson};
use crate::error::{Error, Result};
use crate::flow::{initial_velocities, solve_flow, FlowProblem, FlowSolution, FLOW_VAR};
use crate::forms::{DifferentialForm, FormJson};
use crate::points::{choose_points, reverify, PointSelection, SelectionConfig, SelectionJson};
use crate::rational::{parse_rational, Rational};
use crate::series::{Matrix, TermRecord, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCycle {
    nvars: usize,
    order: usize,
    terms: Vec<(FormalArc, i64)>,
}

impl ZeroCycle {
    pub fn new(nvars: usize, order: usize) -> Self {
        ZeroCycle {
            nvars,
            order,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(nvars: usize, order: usize, terms: Vec<(FormalArc, i64)>) -> Result<Self> {
        let mut z = Self::new(nvars, order);
        for (arc, n) in terms {
            z.push(arc, n)?;
        }
        Ok(z)
    }

    pub fn push(&mut self, arc: FormalArc, multiplicity: i64) -> Result<()> {
        if arc.nvars() != self.nvars || arc.order() != self.order {
            return Err(Error::RingMismatch(self.nvars, self.order, arc.nvars(), arc.order()));
        }
        self.terms.push((arc, multiplicity));
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[(FormalArc, i64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formal sum; no cancellation of repeated arcs.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut z = self.clone();
        for (arc, n) in &other.terms {
            z.push(arc.clone(), *n)?;
        }
        Ok(z)
    }

    pub fn neg(&self) -> Self {
        ZeroCycle {
            terms: self.terms.iter().map(|(a, n)| (a.clone(), -n)).collect(),
            ..self.clone()
        }
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        Ok(ZeroCycle {
            nvars: self.nvars,
            order,
            terms: self
                .terms
                .iter()
                .map(|(a, n)| Ok((a.truncate(order)?, *n)))
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> Vec<CycleTermJson> {
        self.terms
            .iter()
            .map(|(arc, n)| CycleTermJson {
                arc: arc.to_json(),
                multiplicity: *n,
            })
            .collect()
    }

    pub fn from_json(curve: &HyperellipticCurve, nvars: usize, order: usize, json: &[CycleTermJson]) -> Result<Self> {
        let terms = json
            .iter()
            .map(|t| Ok((FormalArc::from_json(curve, nvars, order, &t.arc)?, t.multiplicity)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(nvars, order, terms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelJacobiClass {
    pub components: Vec<DifferentialForm>,
}

impl AbelJacobiClass {
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.components.len() != other.components.len() {
            return Err(Error::DimensionMismatch(format!(
                "classes of length {} and {}",
                self.components.len(),
                other.components.len()
            )));
        }
        Ok(AbelJacobiClass {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.checked_add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(DifferentialForm::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        Ok(AbelJacobiClass {
            components: self.components.iter().map(|w| w.truncate(order)).collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> Vec<FormJson> {
        self.components.iter().map(DifferentialForm::to_json).collect()
    }
}

pub fn class_of_cycle(curve: &HyperellipticCurve, cycle: &ZeroCycle) -> Result<AbelJacobiClass> {
    let g = curve.genus();
    let mut components = vec![DifferentialForm::zero(cycle.nvars, cycle.order, 1); g];
    for (arc, n) in &cycle.terms {
        for (j, acc) in components.iter_mut().enumerate() {
            let w = curve.pullback(j, arc)?.scale(&Rational::from_integer((*n).into()));
            *acc = acc.checked_add(&w)?;
        }
    }
    Ok(AbelJacobiClass { components })
}

/// `(dh_1, .., dh_g)`.
pub fn target_class(targets: &[TruncatedSeries]) -> AbelJacobiClass {
    AbelJacobiClass {
        components: targets.iter().map(|h| DifferentialForm::function(h).d()).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructConfig {
    /// Height bound for the rational point search.
    pub point_bound: u64,
    pub selection: SelectionConfig,
    /// Seed for the order in which found points are offered to selection.
    pub seed: u64,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig {
            point_bound: 5,
            selection: SelectionConfig::default(),
            seed: 0,
        }
    }
}

/// Flow data for one direction `j` with `dh_j != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction {
    pub row: usize,
    pub flow: FlowSolution,
    /// `F(0)^-1 e_j`: the first-order coefficients of the flow components.
    pub velocities: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub cycle: ZeroCycle,
    pub selection: Option<PointSelection<AffinePoint>>,
    pub directions: Vec<Direction>,
}

fn check_targets(curve: &HyperellipticCurve, targets: &[TruncatedSeries]) -> Result<(usize, usize)> {
    if targets.len() != curve.genus() {
        return Err(Error::DimensionMismatch(format!(
            "{} targets for genus {}",
            targets.len(),
            curve.genus()
        )));
    }
    let (nvars, order) = (targets[0].nvars(), targets[0].order());
    for h in targets {
        if !h.same_ring(&targets[0]) {
            return Err(Error::RingMismatch(nvars, order, h.nvars(), h.order()));
        }
        if !h.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
    }
    if order < 2 {
        return Err(Error::InvalidParameter(format!("order must be at least 2, got {order}")));
    }
    Ok((nvars, order))
}

/// Directions `j` with `dh_j != 0`, 0-based.
pub fn required_rows(targets: &[TruncatedSeries]) -> BTreeSet<usize> {
    targets
        .iter()
        .enumerate()
        .filter(|(_, h)| !DifferentialForm::function(h).d().is_zero())
        .map(|(j, _)| j)
        .collect()
}

/// Selects `g` arc centers certified for `required`.
pub fn select_centers(
    curve: &HyperellipticCurve,
    required: &BTreeSet<usize>,
    config: &ConstructConfig,
) -> Result<PointSelection<AffinePoint>> {
    let g = curve.genus();
    let mut candidates = curve.find_rational_points(config.point_bound);
    let mut xs: Vec<&Rational> = candidates.iter().map(|p| &p.x).collect();
    xs.dedup();
    if xs.len() < g {
        return Err(Error::InsufficientPoints {
            found: xs.len(),
            needed: g,
        });
    }
    candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
    choose_points(candidates, g, |p| curve.ratio_column(p), required, config.selection)
}

pub fn construct_cycle(
    curve: &HyperellipticCurve,
    targets: &[TruncatedSeries],
    config: &ConstructConfig,
) -> Result<Construction> {
    let (nvars, order) = check_targets(curve, targets)?;
    let required = required_rows(targets);
    let mut cycle = ZeroCycle::new(nvars, order);
    if required.is_empty() {
        return Ok(Construction {
            cycle,
            selection: None,
            directions: Vec::new(),
        });
    }
    let selection = select_centers(curve, &required, config)?;
    let matrix = curve.ratio_matrix(&selection.sites, order)?;
    let mut directions = Vec::with_capacity(required.len());
    for &j in &required {
        let problem = FlowProblem::with_unit_rhs(matrix.clone(), j)?;
        let flow = solve_flow(&problem)?;
        let velocities = initial_velocities(&problem)?
            .iter()
            .map(TruncatedSeries::constant_term)
            .collect();
        for (p, phi) in selection.sites.iter().zip(&flow.phi) {
            let xi = phi.substitute(&targets[j])?;
            cycle.push(FormalArc::new(curve, p.clone(), xi)?, 1)?;
        }
        directions.push(Direction { row: j, flow, velocities });
    }
    Ok(Construction {
        cycle,
        selection: Some(selection),
        directions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub config: ConstructConfig,
    pub targets: Vec<TruncatedSeries>,
    pub construction: Construction,
    pub class: AbelJacobiClass,
    pub expected: AbelJacobiClass,
    /// Per component: class equals `dh_j` exactly.
    pub pass: Vec<bool>,
}

impl SurjectivityReport {
    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|&b| b)
    }

    /// Every direction's velocities are nonzero.
    pub fn velocities_nonzero(&self) -> bool {
        self.construction
            .directions
            .iter()
            .all(|d| d.velocities.iter().all(|v| !v.is_zero()))
    }
}

fn compare(class: &AbelJacobiClass, expected: &AbelJacobiClass) -> Vec<bool> {
    class
        .components
        .iter()
        .zip(&expected.components)
        .map(|(a, b)| a == b)
        .collect()
}

pub fn verify_surjectivity(
    curve: &HyperellipticCurve,
    targets: &[TruncatedSeries],
    config: &ConstructConfig,
) -> Result<SurjectivityReport> {
    let construction = construct_cycle(curve, targets, config)?;
    let class = class_of_cycle(curve, &construction.cycle)?;
    let expected = target_class(targets);
    let pass = compare(&class, &expected);
    Ok(SurjectivityReport {
        config: *config,
        targets: targets.to_vec(),
        construction,
        class,
        expected,
        pass,
    })
}

/// `sum_l f_il(phi_l, t_2..t_N) dphi_l ^ dt_2 ^ .. ^ dt_N` for each row `i`,
/// in `Omega^N_{A_M}`.
pub fn wedge_lhs(problem: &FlowProblem, solution: &FlowSolution) -> Result<Vec<DifferentialForm>> {
    let (n, m) = (problem.nvars(), problem.order());
    let tail: Vec<usize> = (0..n).filter(|&v| v != FLOW_VAR).collect();
    let volume_tail = if tail.is_empty() {
        DifferentialForm::function(&TruncatedSeries::one(n, m))
    } else {
        DifferentialForm::dt_wedge(n, m, &tail)?
    };
    let dphi = solution
        .phi
        .iter()
        .map(|p| DifferentialForm::function(p).d().wedge(&volume_tail))
        .collect::<Result<Vec<_>>>()?;
    (0..problem.size())
        .map(|i| {
            let mut acc = DifferentialForm::zero(n, m, n);
            for (l, (p, w)) in solution.phi.iter().zip(&dphi).enumerate() {
                let f = problem.matrix().get(i, l).substitute_var(FLOW_VAR, p)?;
                acc = acc.checked_add(&w.mul_function(&f)?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Checks `sum_l f_il(phi_l, ..) dphi_l ^ dt_2 ^ .. ^ dt_N = b_i dt_1 ^ .. ^ dt_N`
/// exactly in `Omega^N_{A_M}`, row by row.
pub fn wedge_identity(problem: &FlowProblem, solution: &FlowSolution) -> Result<Vec<bool>> {
    let (n, m) = (problem.nvars(), problem.order());
    let volume = DifferentialForm::dt_wedge(n, m, &(0..n).collect::<Vec<_>>())?;
    let lhs = wedge_lhs(problem, solution)?;
    lhs.iter()
        .zip(problem.rhs())
        .map(|(l, b)| Ok(*l == volume.mul_function(b)?))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetJson {
    pub h: Vec<Vec<TermRecord>>,
}

impl TargetJson {
    pub fn from_targets(targets: &[TruncatedSeries]) -> Self {
        TargetJson {
            h: targets.iter().map(TruncatedSeries::to_records).collect(),
        }
    }

    pub fn to_targets(&self, nvars: usize, order: usize) -> Result<Vec<TruncatedSeries>> {
        self.h
            .iter()
            .map(|r| TruncatedSeries::from_records(nvars, order, r))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleTermJson {
    pub arc: ArcJson,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionJson {
    pub row: usize,
    pub initial_velocities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub config: ConstructConfig,
    pub vars: usize,
    pub order: usize,
    pub curve: CurveJson,
    pub target: TargetJson,
    pub pass: Vec<bool>,
    pub all_pass: bool,
    pub cycle: Vec<CycleTermJson>,
    pub class: Vec<FormJson>,
    pub certificate: Option<SelectionJson<PointJson>>,
    pub directions: Vec<DirectionJson>,
}

impl SurjectivityReport {
    pub fn to_json(&self, curve: &HyperellipticCurve) -> ReportJson {
        let cycle = &self.construction.cycle;
        ReportJson {
            config: self.config,
            vars: cycle.nvars(),
            order: cycle.order(),
            curve: curve.to_json(),
            target: TargetJson::from_targets(&self.targets),
            pass: self.pass.clone(),
            all_pass: self.all_pass(),
            cycle: cycle.to_json(),
            class: self.class.to_json(),
            certificate: self.construction.selection.as_ref().map(|s| s.to_json(|p| PointJson::from(p))),
            directions: self
                .construction
                .directions
                .iter()
                .map(|d| DirectionJson {
                    row: d.row,
                    initial_velocities: d.velocities.iter().map(ToString::to_string).collect(),
                })
                .collect(),
        }
    }
}

/// Outcome of re-checking a report from its embedded inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecheckJson {
    /// Recomputed class of the recorded cycle equals `dh_j`.
    pub pass: Vec<bool>,
    /// Recorded class equals the recomputed one.
    pub class_matches: bool,
    /// Certificate recomputes, and covers every direction with `dh_j != 0`.
    pub certificate_ok: bool,
    /// Recorded velocities equal `F(0)^-1 e_j` and are nonzero.
    pub velocities_ok: bool,
    pub all_pass: bool,
}

/// Recomputes everything in a report from its curve, target and cycle.
pub fn recheck_report(report: &ReportJson) -> Result<RecheckJson> {
    let curve = HyperellipticCurve::from_json(&report.curve)?;
    let (n, m) = (report.vars, report.order);
    let targets = report.target.to_targets(n, m)?;
    check_targets(&curve, &targets)?;
    let cycle = ZeroCycle::from_json(&curve, n, m, &report.cycle)?;
    let class = class_of_cycle(&curve, &cycle)?;
    let pass = compare(&class, &target_class(&targets));
    let recorded = report
        .class
        .iter()
        .map(|w| DifferentialForm::from_json(n, m, w))
        .collect::<Result<Vec<_>>>();
    let class_matches = matches!(recorded, Ok(ref r) if *r == class.components);

    let required = required_rows(&targets);
    let (certificate_ok, velocities_ok) = match &report.certificate {
        None => (required.is_empty(), report.directions.is_empty()),
        Some(cert) => recheck_certificate(&curve, cert, &required, &report.directions)?,
    };
    let all_pass = pass.iter().all(|&b| b) && class_matches && certificate_ok && velocities_ok;
    Ok(RecheckJson {
        pass,
        class_matches,
        certificate_ok,
        velocities_ok,
        all_pass,
    })
}

fn recheck_certificate(
    curve: &HyperellipticCurve,
    cert: &SelectionJson<PointJson>,
    required: &BTreeSet<usize>,
    directions: &[DirectionJson],
) -> Result<(bool, bool)> {
    let sites = cert.sites.iter().map(PointJson::to_point).collect::<Result<Vec<_>>>()?;
    let parse_all = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
    let matrix = Matrix::from_rows(cert.matrix.iter().map(|r| parse_all(r)).collect::<Result<Vec<_>>>()?)?;
    let selection = PointSelection {
        sites,
        matrix,
        determinant: parse_rational(&cert.determinant)?,
        minors: cert
            .minors
            .iter()
            .map(|mj| Ok((mj.row, parse_all(&mj.minors)?)))
            .collect::<Result<Vec<_>>>()?,
        candidates_consumed: cert.candidates_consumed,
    };
    let certificate_ok = reverify(&selection, |p| curve.ratio_column(p), required)?;
    let rows: BTreeSet<usize> = directions.iter().map(|d| d.row).collect();
    let mut velocities_ok = certificate_ok && rows == *required && rows.len() == directions.len();
    if velocities_ok {
        for d in directions {
            let mut e = vec![Rational::zero(); selection.matrix.rows()];
            e[d.row] = Rational::one();
            let want = selection.matrix.solve(&e)?;
            let got = parse_all(&d.initial_velocities)?;
            velocities_ok &= got == want && got.iter().all(|v| !v.is_zero());
        }
    }
    Ok((certificate_ok, velocities_ok))
}
