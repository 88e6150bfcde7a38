use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::simplicial::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational};

/// On-disk form of a complex. Vertex ids are strings; they are ordered
/// numerically when all of them are integers and lexicographically
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub ambient_dim: usize,
    pub vertices: BTreeMap<String, Vec<String>>,
    pub maximal_cells: Vec<Vec<String>>,
}

fn canonical_order(labels: &mut [String]) {
    if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<i64>().unwrap());
    } else {
        labels.sort();
    }
}

impl ComplexFile {
    pub fn from_complex(x: &SimplicialComplex) -> Self {
        let vertices = (0..x.num_vertices())
            .map(|v| (x.label(v).to_string(), x.coords(v).iter().map(format_rational).collect()))
            .collect();
        let maximal_cells = x
            .maximal_cells()
            .iter()
            .map(|&c| x.cell(c).vertices().iter().map(|&v| x.label(v).to_string()).collect())
            .collect();
        ComplexFile { ambient_dim: x.ambient_dim(), vertices, maximal_cells }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        let mut labels: Vec<String> = self.vertices.keys().cloned().collect();
        canonical_order(&mut labels);
        let coords = labels
            .iter()
            .map(|l| self.vertices[l].iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let vertices = labels.into_iter().zip(coords).collect();
        SimplicialComplex::from_labelled(self.ambient_dim, vertices, self.maximal_cells.clone())
    }
}

impl SimplicialComplex {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ComplexFile::from_complex(self)).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: ComplexFile = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_complex()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_numeric_order() {
        let text = r#"{"ambient_dim": 1, "vertices": {"10": ["1"], "2": ["1/2"], "0": ["0"]},
                       "maximal_cells": [["0", "2"], ["2", "10"]]}"#;
        let x = SimplicialComplex::from_json_str(text).unwrap();
        assert_eq!(x.labels(), &["0", "2", "10"]);
        assert_eq!(x.f_vector(), vec![3, 2]);
        let again = SimplicialComplex::from_json(&x.to_json()).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn malformed_input_is_reported() {
        let bad = r#"{"ambient_dim": 1, "vertices": {"0": ["x"]}, "maximal_cells": [["0"]]}"#;
        assert!(matches!(SimplicialComplex::from_json_str(bad), Err(Error::Parse(_))));
        let unknown = r#"{"ambient_dim": 1, "vertices": {"0": ["0"]}, "maximal_cells": [["0", "9"]]}"#;
        assert!(matches!(SimplicialComplex::from_json_str(unknown), Err(Error::UnknownVertex(_))));
    }
}
