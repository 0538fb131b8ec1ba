//! Formal flows: the unique `phi_1..phi_g` in `t_1 R[[t_1]]` with
//!
//! ```text
//! sum_l f_il(phi_l, t_2, .., t_N) * d(phi_l)/dt_1 = b_i      (i = 1..g)
//! ```
//!
//! where `R = Q[t_2..t_N]` (truncated) and the matrix `F(t_1=0)` is invertible
//! over `R`. Everything is computed inside `A_M = Q[t_1..t_N]/m^M` with
//! variable 0 as the flow parameter; the first argument of each `f_il` is
//! that same variable.
//!
//! Coefficients are found one power of `t_1` at a time: the `t_1^j`
//! coefficient of the residual depends on the `t_1^(j+1)` coefficients of the
//! `phi_l` only through `F(0) * (j+1) * c_(j+1)`, so each step is a linear
//! solve against the fixed matrix `F(0)`, inverted once.
//!
//! Differentiation costs one order, so the identity holds modulo `m^(M-1)`
//! (modulo `t^(M-1)` in one variable) while `phi` itself is exact modulo
//! `m^M`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::{SeriesMatrix, TermRecord, TruncatedSeries};

/// Flow parameter and distinguished variable.
pub const FLOW_VAR: usize = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowProblem {
    nvars: usize,
    order: usize,
    matrix: SeriesMatrix,
    rhs: Vec<TruncatedSeries>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    pub phi: Vec<TruncatedSeries>,
    pub order: usize,
}

/// Residuals `sum_l f_il(phi_l) phi_l' - b_i` with every term of degree
/// `>= max_valid_order` removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub max_valid_order: usize,
    pub residuals: Vec<TruncatedSeries>,
}

impl ResidualReport {
    pub fn vanishes(&self) -> bool {
        self.residuals.iter().all(TruncatedSeries::is_zero)
    }
}

impl FlowProblem {
    pub fn new(matrix: SeriesMatrix, rhs: Vec<TruncatedSeries>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "flow matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let g = matrix.rows();
        if rhs.len() != g {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for a {g}x{g} matrix",
                rhs.len()
            )));
        }
        let proto = matrix.get(0, 0).clone();
        let (nvars, order) = (proto.nvars(), proto.order());
        for s in matrix.to_rows().iter().flatten().chain(rhs.iter()) {
            if !s.same_ring(&proto) {
                return Err(Error::RingMismatch(nvars, order, s.nvars(), s.order()));
            }
        }
        if rhs.iter().any(|b| b.degree_in_var(FLOW_VAR) > 0) {
            return Err(Error::InvalidParameter(
                "right-hand side must be constant in the flow variable".into(),
            ));
        }
        let problem = FlowProblem {
            nvars,
            order,
            matrix,
            rhs,
        };
        let det = problem.leading_matrix().determinant()?;
        if !det.is_unit() {
            return Err(Error::NonUnit(format!("det F(0) = {det}")));
        }
        Ok(problem)
    }

    /// The problem with right-hand side the unit vector `e_row`.
    pub fn with_unit_rhs(matrix: SeriesMatrix, row: usize) -> Result<Self> {
        let proto = matrix.get(0, 0).clone();
        let rhs = (0..matrix.rows())
            .map(|i| if i == row { proto.one_like() } else { proto.zero_like() })
            .collect();
        Self::new(matrix, rhs)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &SeriesMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[TruncatedSeries] {
        &self.rhs
    }

    /// `F` with the flow variable set to zero: a matrix over `R`.
    pub fn leading_matrix(&self) -> SeriesMatrix {
        self.matrix
            .map(|f| f.coeff_in_var(FLOW_VAR, 0).expect("flow variable exists"))
    }

    /// `sum_l f_il(phi_l) * d(phi_l)/dt_1` for each row `i`.
    pub fn lhs(&self, phi: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
        if phi.len() != self.size() {
            return Err(Error::DimensionMismatch(format!(
                "{} series for a flow of size {}",
                phi.len(),
                self.size()
            )));
        }
        let derivs = phi
            .iter()
            .map(|p| p.derivative(FLOW_VAR))
            .collect::<Result<Vec<_>>>()?;
        (0..self.size())
            .map(|i| {
                let mut acc = self.rhs[0].zero_like();
                for (l, (p, dp)) in phi.iter().zip(&derivs).enumerate() {
                    let f = self.matrix.get(i, l).substitute_var(FLOW_VAR, p)?;
                    acc = &acc + &(&f * dp);
                }
                Ok(acc)
            })
            .collect()
    }
}

pub fn solve_flow(problem: &FlowProblem) -> Result<FlowSolution> {
    let g = problem.size();
    let leading_inverse = problem.leading_matrix().inverse()?;
    let mut phi = vec![problem.rhs[0].zero_like(); g];
    for j in 0..problem.order.saturating_sub(1) as u32 {
        let lhs = problem.lhs(&phi)?;
        let residual_j = lhs
            .iter()
            .zip(&problem.rhs)
            .map(|(a, b)| (a - b).coeff_in_var(FLOW_VAR, j))
            .collect::<Result<Vec<_>>>()?;
        let step = leading_inverse.mul_vec(&residual_j)?;
        let scale = -Rational::from_integer((j + 1).into()).recip();
        for (p, c) in phi.iter_mut().zip(step) {
            *p = &*p + &c.scale(&scale).shift_var(FLOW_VAR, j + 1)?;
        }
    }
    Ok(FlowSolution {
        phi,
        order: problem.order,
    })
}

pub fn verify_flow(problem: &FlowProblem, solution: &FlowSolution) -> Result<ResidualReport> {
    if solution.phi.iter().any(|p| p.nvars() != problem.nvars || p.order() != problem.order) {
        return Err(Error::RingMismatch(
            problem.nvars,
            problem.order,
            solution.phi[0].nvars(),
            solution.phi[0].order(),
        ));
    }
    let valid = problem.order - 1;
    let residuals = problem
        .lhs(&solution.phi)?
        .iter()
        .zip(&problem.rhs)
        .map(|(a, b)| (a - b).drop_from_degree(valid))
        .collect();
    Ok(ResidualReport {
        max_valid_order: valid,
        residuals,
    })
}

/// `F(0)^-1 b`: the `t_1`-coefficients of the solution.
pub fn initial_velocities(problem: &FlowProblem) -> Result<Vec<TruncatedSeries>> {
    problem.leading_matrix().solve(&problem.rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowProblemJson {
    pub vars: usize,
    pub order: usize,
    pub matrix: Vec<Vec<Vec<TermRecord>>>,
    pub rhs: Vec<Vec<TermRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowSolutionJson {
    pub vars: usize,
    pub order: usize,
    pub phi: Vec<Vec<TermRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualJson {
    pub max_valid_order: usize,
    pub residual_terms: Vec<Vec<TermRecord>>,
}

impl FlowProblem {
    pub fn to_json(&self) -> FlowProblemJson {
        FlowProblemJson {
            vars: self.nvars,
            order: self.order,
            matrix: self
                .matrix
                .to_rows()
                .iter()
                .map(|row| row.iter().map(TruncatedSeries::to_records).collect())
                .collect(),
            rhs: self.rhs.iter().map(TruncatedSeries::to_records).collect(),
        }
    }

    pub fn from_json(json: &FlowProblemJson) -> Result<Self> {
        if json.vars == 0 || json.order == 0 {
            return Err(Error::InvalidParameter("vars and order must be positive".into()));
        }
        let read = |recs: &Vec<TermRecord>| TruncatedSeries::from_records(json.vars, json.order, recs);
        let rows = json
            .matrix
            .iter()
            .map(|row| row.iter().map(read).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let rhs = json.rhs.iter().map(read).collect::<Result<Vec<_>>>()?;
        Self::new(SeriesMatrix::from_rows(rows)?, rhs)
    }
}

impl FlowSolution {
    pub fn to_json(&self) -> FlowSolutionJson {
        FlowSolutionJson {
            vars: self.phi.first().map_or(1, TruncatedSeries::nvars),
            order: self.order,
            phi: self.phi.iter().map(TruncatedSeries::to_records).collect(),
        }
    }

    pub fn from_json(json: &FlowSolutionJson) -> Result<Self> {
        Ok(FlowSolution {
            phi: json
                .phi
                .iter()
                .map(|r| TruncatedSeries::from_records(json.vars, json.order, r))
                .collect::<Result<Vec<_>>>()?,
            order: json.order,
        })
    }
}

impl ResidualReport {
    pub fn to_json(&self) -> ResidualJson {
        ResidualJson {
            max_valid_order: self.max_valid_order,
            residual_terms: self.residuals.iter().map(TruncatedSeries::to_records).collect(),
        }
    }
}
