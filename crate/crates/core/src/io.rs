//! JSON shapes for operators and computed matrices.

use crate::calculus::CalculusResult;
use crate::error::{Error, Result};
use crate::operator::{OperatorMatrix, ParavectorOperator};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// `{"n": 2, "d": 3, "components": [[T0 row-major], [T1 row-major], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub n: usize,
    pub d: usize,
    pub components: Vec<Vec<f64>>,
}

impl OperatorJson {
    pub fn from_operator(t: &ParavectorOperator) -> Self {
        Self {
            n: t.n(),
            d: t.d(),
            components: t
                .components()
                .iter()
                .map(|m| m.transpose().as_slice().to_vec())
                .collect(),
        }
    }

    pub fn to_operator(&self) -> Result<ParavectorOperator> {
        if self.components.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                left: self.n + 1,
                right: self.components.len(),
            });
        }
        let comps = self
            .components
            .iter()
            .map(|c| {
                if c.len() != self.d * self.d {
                    return Err(Error::DimensionMismatch {
                        left: self.d * self.d,
                        right: c.len(),
                    });
                }
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidOperator("non-finite entry".into()));
                }
                Ok(DMatrix::from_row_slice(self.d, self.d, c))
            })
            .collect::<Result<Vec<_>>>()?;
        ParavectorOperator::new(self.n, comps)
    }
}

/// Rows of a matrix, outermost index first.
pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `{"value": [[...]], "err_estimate": ..., "nodes": ...}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalculusReport {
    pub value: Vec<Vec<f64>>,
    pub err_estimate: f64,
    pub nodes: usize,
}

impl CalculusReport {
    pub fn new(r: &CalculusResult) -> Self {
        Self {
            value: matrix_rows(r.value.matrix()),
            err_estimate: r.err_estimate,
            nodes: r.nodes,
        }
    }

    pub fn from_matrix(m: &OperatorMatrix, err_estimate: f64, nodes: usize) -> Self {
        Self {
            value: matrix_rows(m.matrix()),
            err_estimate,
            nodes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::random;

    #[test]
    fn operator_round_trip() {
        let t = random::paravector_operator(5, 2, 3, None);
        let j = OperatorJson::from_operator(&t);
        assert_eq!(j.components[1][1], t.components()[1][(0, 1)]);
        let back: OperatorJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_operator().unwrap(), t);
    }

    #[test]
    fn malformed_operator() {
        let j: OperatorJson = serde_json::from_str(r#"{"n":1,"d":2,"components":[[1,0,0,1]]}"#).unwrap();
        assert!(j.to_operator().is_err());
        let j: OperatorJson = serde_json::from_str(r#"{"n":1,"d":2,"components":[[1,0,0,1],[1,2,3]]}"#).unwrap();
        assert!(j.to_operator().is_err());
        assert!(serde_json::from_str::<OperatorJson>(r#"{"n":1,"d":2}"#).is_err());
    }
}
