use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::cellular::same_base;
use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};

/// An integer per open cell.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    base: Arc<SimplicialComplex>,
    values: Vec<i64>,
}

impl PartialEq for ConstructibleFunction {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.values == other.values
    }
}

impl Eq for ConstructibleFunction {}

impl ConstructibleFunction {
    pub fn new(base: Arc<SimplicialComplex>, values: Vec<i64>) -> Self {
        assert_eq!(values.len(), base.num_cells());
        ConstructibleFunction { base, values }
    }

    pub fn zero(base: Arc<SimplicialComplex>) -> Self {
        let n = base.num_cells();
        ConstructibleFunction { base, values: vec![0; n] }
    }

    pub fn indicator(base: Arc<SimplicialComplex>, cells: impl IntoIterator<Item = CellId>) -> Self {
        let mut f = Self::zero(base);
        for c in cells {
            f.values[c] = 1;
        }
        f
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn get(&self, c: CellId) -> i64 {
        self.values[c]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn scale(&self, k: i64) -> Self {
        ConstructibleFunction { base: self.base.clone(), values: self.values.iter().map(|v| v * k).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: BTreeMap<String, i64> =
            self.values.iter().enumerate().map(|(c, &v)| (self.base.cell_name(c), v)).collect();
        serde_json::to_value(m).expect("serializable")
    }

    /// Cells absent from the table are zero.
    pub fn from_json(base: Arc<SimplicialComplex>, value: &serde_json::Value) -> Result<Self> {
        let m: BTreeMap<String, i64> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut f = Self::zero(base);
        for (name, v) in m {
            let c = f.base.parse_cell(&name)?;
            f.values[c] = v;
        }
        Ok(f)
    }
}

impl Neg for ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn neg(self) -> Self::Output {
        self.scale(-1)
    }
}

impl Add for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn add(self, rhs: Self) -> Self::Output {
        assert!(same_base(&self.base, &rhs.base), "functions on different complexes");
        let values = self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect();
        ConstructibleFunction { base: self.base.clone(), values }
    }
}

impl Sub for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn sub(self, rhs: Self) -> Self::Output {
        self + &rhs.scale(-1)
    }
}
