use serde::{Deserialize, Serialize};

use super::TruncatedSeries;
use crate::error::Result;
use crate::rational::{from_parts, Rational};

/// One term of a serialized series. Rationals travel as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub numerator: String,
    pub denominator: String,
}

impl TermRecord {
    pub fn new(exponents: Vec<u32>, c: &Rational) -> Self {
        TermRecord {
            exponents,
            numerator: c.numer().to_string(),
            denominator: c.denom().to_string(),
        }
    }

    pub fn coefficient(&self) -> Result<Rational> {
        from_parts(&self.numerator, &self.denominator)
    }
}

impl TruncatedSeries {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(e, c)| TermRecord::new(e.clone(), c))
            .collect()
    }

    /// Rebuilds a series in `Q[t_1..t_nvars]/m^order`; terms at or above the
    /// order are dropped, as with [`TruncatedSeries::from_terms`].
    pub fn from_records(nvars: usize, order: usize, records: &[TermRecord]) -> Result<Self> {
        let terms = records
            .iter()
            .map(|r| Ok((r.exponents.clone(), r.coefficient()?)))
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_terms(nvars, order, terms)
    }
}
