//! Exact computation of infinitesimal Abel-Jacobi invariants of 0-cycles of
//! formal arcs on hyperelliptic curves.
//!
//! The crate is layered bottom-up:
//!
//! * [`series`]: truncated multivariate power series over `Q` and exact
//!   linear algebra over them.
//! * [`forms`]: the de Rham complex of the truncated algebra
//!   `A_M = Q[t_1..t_N]/m^M`.
//! * [`flow`]: the formal flow equation `sum_l f_il(phi_l) phi_l' = b_i`.
//! * [`points`]: selection of evaluation sites with nonsingular minors.
//! * [`curve`]: odd-degree hyperelliptic curves, formal arcs and pullbacks
//!   of regular differentials.
//! * [`abeljacobi`]: the class map on 0-cycles of arcs and the construction of
//!   cycles realizing a prescribed class.
//!
//! [`oracle`] holds slow reference implementations used to cross-check the
//! fast paths, and [`fixtures`] generates random inputs for tests.

pub mod abeljacobi;
pub mod curve;
pub mod error;
pub mod flow;
pub mod fixtures;
pub mod forms;
pub mod oracle;
pub mod points;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{Matrix, SeriesMatrix, TruncatedSeries};
