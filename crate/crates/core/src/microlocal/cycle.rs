use std::collections::BTreeMap;
use std::ops::Range;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::chambers::{ConormalChamber, ConormalFan};
use super::morse::{apply_weights, probe_weights};
use crate::complex::{CellId, CellRegion, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::sheaf::{resolve_complex, same_base, SheafComplex};

/// All conormal chambers of a complex, with the Euler weights of their
/// lower half-stars. Multiplicities of any sheaf are read off from its
/// local Euler characteristic through these weights.
#[derive(Debug)]
pub struct ConormalGeometry {
    base: Arc<SimplicialComplex>,
    fans: Vec<ConormalFan>,
    chambers: Vec<ConormalChamber>,
    ranges: Vec<Range<usize>>,
    weights: Vec<Vec<(CellId, i64)>>,
}

impl ConormalGeometry {
    pub fn new(x: &Arc<SimplicialComplex>) -> Result<Arc<Self>> {
        let per_cell: Vec<(ConormalFan, Vec<ConormalChamber>, Vec<Vec<(CellId, i64)>>)> = (0..x.num_cells())
            .into_par_iter()
            .map(|c| {
                let fan = ConormalFan::new(x, c);
                let ch = fan.chambers();
                let w = ch.iter().map(|k| probe_weights(x, k)).collect::<Result<Vec<_>>>()?;
                Ok((fan, ch, w))
            })
            .collect::<Result<_>>()?;
        let mut geo = ConormalGeometry { base: x.clone(), fans: Vec::new(), chambers: Vec::new(), ranges: Vec::new(), weights: Vec::new() };
        for (fan, ch, w) in per_cell {
            let start = geo.chambers.len();
            geo.fans.push(fan);
            geo.chambers.extend(ch);
            geo.weights.extend(w);
            geo.ranges.push(start..geo.chambers.len());
        }
        Ok(Arc::new(geo))
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn chambers(&self) -> &[ConormalChamber] {
        &self.chambers
    }

    pub fn chambers_of(&self, c: CellId) -> &[ConormalChamber] {
        &self.chambers[self.ranges[c].clone()]
    }

    pub fn fan(&self, c: CellId) -> &ConormalFan {
        &self.fans[c]
    }

    /// Index of the chamber of `c` with the given sign vector.
    pub fn find(&self, c: CellId, signs: &[(VertexId, i8)]) -> Option<usize> {
        self.ranges[c].clone().find(|&i| self.chambers[i].signs == signs)
    }

    /// Index of the chamber of `c` containing the covector `ξ`.
    pub fn locate(&self, c: CellId, xi: &[Rational]) -> Result<usize> {
        let signs = self.fans[c].signs_of(&self.base, xi)?;
        self.find(c, &signs).ok_or_else(|| Error::Invalid(format!("no chamber of {} realizes {signs:?}", self.base.cell_name(c))))
    }

    /// `CC(F)`. A sheaf on a smaller domain is extended by zero first.
    pub fn characteristic_cycle(self: &Arc<Self>, f: &SheafComplex) -> Result<ConormalCycle> {
        if !same_base(&self.base, f.base()) {
            return Err(Error::BaseMismatch);
        }
        let f = if f.domain().is_whole() { f.clone() } else { f.extend_by_zero(&CellRegion::whole(&self.base))? };
        let chi = f.chi_local();
        let values = (0..self.chambers.len())
            .map(|i| apply_weights(chi.values(), self.chambers[i].cell, &self.weights[i]))
            .collect();
        Ok(ConormalCycle { geometry: self.clone(), values })
    }
}

/// `CC(F)` on a freshly built geometry.
pub fn characteristic_cycle(f: &SheafComplex) -> Result<ConormalCycle> {
    ConormalGeometry::new(f.base())?.characteristic_cycle(f)
}

/// An integer per conormal chamber.
#[derive(Clone, Debug)]
pub struct ConormalCycle {
    geometry: Arc<ConormalGeometry>,
    values: Vec<i64>,
}

impl PartialEq for ConormalCycle {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.geometry.base, &other.geometry.base) && self.values == other.values
    }
}

impl Eq for ConormalCycle {}

impl ConormalCycle {
    pub fn zero(geometry: &Arc<ConormalGeometry>) -> Self {
        ConormalCycle { geometry: geometry.clone(), values: vec![0; geometry.chambers.len()] }
    }

    pub fn from_fn(geometry: &Arc<ConormalGeometry>, f: impl FnMut(&ConormalChamber) -> i64) -> Self {
        ConormalCycle { geometry: geometry.clone(), values: geometry.chambers.iter().map(f).collect() }
    }

    pub fn geometry(&self) -> &Arc<ConormalGeometry> {
        &self.geometry
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.geometry.base
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ConormalChamber, i64)> + '_ {
        self.geometry.chambers.iter().zip(self.values.iter().copied())
    }

    /// Multiplicities over one cell, in chamber order.
    pub fn over(&self, c: CellId) -> &[i64] {
        &self.values[self.geometry.ranges[c].clone()]
    }

    pub fn value(&self, c: CellId, signs: &[(VertexId, i8)]) -> Option<i64> {
        self.geometry.find(c, signs).map(|i| self.values[i])
    }

    /// Multiplicity at the chamber of `c` containing `ξ`.
    pub fn at_covector(&self, c: CellId, xi: &[Rational]) -> Result<i64> {
        Ok(self.values[self.geometry.locate(c, xi)?])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        ConormalCycle { geometry: self.geometry.clone(), values: self.values.iter().map(|v| v * k).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_base(self.base(), other.base()) {
            return Err(Error::BaseMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(ConormalCycle { geometry: self.geometry.clone(), values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    /// The complex together with every chamber, zeros included.
    pub fn to_json(&self) -> Value {
        let x = self.base();
        let chambers: Vec<Value> = self
            .entries()
            .map(|(ch, m)| {
                let cell: Vec<&str> = x.cell(ch.cell).vertices().iter().map(|&v| x.label(v)).collect();
                let signs: BTreeMap<&str, &str> =
                    ch.signs.iter().map(|&(v, s)| (x.label(v), if s > 0 { "+" } else { "-" })).collect();
                let witness: Vec<String> = ch.witness.iter().map(format_rational).collect();
                json!({ "cell": cell, "signs": signs, "witness": witness, "multiplicity": m })
            })
            .collect();
        json!({ "complex": x.to_json(), "chambers": chambers })
    }

    /// Reads a cycle with its own `"complex"` field (inline or a path
    /// relative to `dir`).
    pub fn load(value: &Value, dir: Option<&Path>) -> Result<Self> {
        let x = resolve_complex(value.get("complex").ok_or_else(|| Error::Parse("cycle: missing \"complex\"".into()))?, dir)?;
        Self::from_json(&ConormalGeometry::new(&Arc::new(x))?, value)
    }

    /// Chambers absent from the list are zero. Accepts a bare list or an
    /// object with a `"chambers"` list.
    pub fn from_json(geometry: &Arc<ConormalGeometry>, value: &Value) -> Result<Self> {
        let x = &geometry.base;
        let bad = |what: &str| Error::Parse(format!("cycle entry: {what}"));
        let mut out = Self::zero(geometry);
        let list = value.get("chambers").unwrap_or(value);
        for e in list.as_array().ok_or_else(|| bad("expected an array of chambers"))? {
            let mut vs: Vec<VertexId> = e["cell"]
                .as_array()
                .ok_or_else(|| bad("missing cell"))?
                .iter()
                .map(|v| {
                    let l = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
                    x.vertex_by_label(&l).ok_or(Error::UnknownVertex(l))
                })
                .collect::<Result<_>>()?;
            vs.sort_unstable();
            let c = x.find_vertices(&vs).ok_or_else(|| Error::MissingSimplex(format!("{vs:?}")))?;
            let mut signs = Vec::new();
            for (l, s) in e["signs"].as_object().ok_or_else(|| bad("missing signs"))? {
                let v = x.vertex_by_label(l).ok_or_else(|| Error::UnknownVertex(l.clone()))?;
                let s = match s.as_str() {
                    Some("+") => 1,
                    Some("-") => -1,
                    _ => return Err(bad("sign must be \"+\" or \"-\"")),
                };
                signs.push((v, s));
            }
            signs.sort_unstable();
            if let Some(w) = e.get("witness").and_then(Value::as_array) {
                let xi: Vec<Rational> =
                    w.iter().map(|t| parse_rational(t.as_str().unwrap_or_default())).collect::<Result<_>>()?;
                if !signs.is_empty() && geometry.fans[c].signs_of(x, &xi)? != signs {
                    return Err(bad("witness does not realize the signs"));
                }
            }
            let i = geometry.find(c, &signs).ok_or_else(|| bad("infeasible sign vector"))?;
            out.values[i] = e["multiplicity"].as_i64().ok_or_else(|| bad("missing multiplicity"))?;
        }
        Ok(out)
    }
}

/// `CC · [X]` at a generic covector: the sum over vertices of the
/// multiplicity at the chamber containing `ξ`.
pub fn index_pairing(c: &ConormalCycle, xi: &[Rational]) -> Result<i64> {
    let x = c.base();
    if xi.len() != x.ambient_dim() {
        return Err(Error::Shape(format!("covector of length {} in ambient dimension {}", xi.len(), x.ambient_dim())));
    }
    // Every edge lies in the star of its endpoints, so a constant edge
    // surfaces as a wall at one of them.
    (0..x.num_vertices()).map(|v| c.at_covector(x.vertex_cell(v), xi)).sum()
}
