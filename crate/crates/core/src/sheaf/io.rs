use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::cellular::CellularSheaf;
use super::complex::SheafComplex;
use crate::complex::{CellRegion, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Matrix};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(format_rational(x))).collect())).collect(),
    )
}

/// Parses a row-major matrix of rational strings (or integers) with the
/// expected shape.
pub fn matrix_from_json(v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let arr = v.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    if arr.len() != rows {
        return Err(Error::Shape(format!("matrix has {} rows, expected {rows}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for row in arr {
        let r = row.as_array().ok_or_else(|| parse_err("matrix row must be an array"))?;
        if r.len() != cols {
            return Err(Error::Shape(format!("matrix row has {} entries, expected {cols}", r.len())));
        }
        out.push(
            r.iter()
                .map(|x| match x {
                    Value::String(s) => parse_rational(s),
                    Value::Number(n) => parse_rational(&n.to_string()),
                    _ => Err(parse_err("matrix entries must be rationals")),
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(Matrix::from_rows(out, cols))
}

/// Resolves the `"complex"` field: an inline object or a path relative to
/// `dir`.
pub fn resolve_complex(v: &Value, dir: Option<&Path>) -> Result<SimplicialComplex> {
    match v {
        Value::String(p) => {
            let path = dir.map_or_else(|| Path::new(p).to_path_buf(), |d| d.join(p));
            let text = std::fs::read_to_string(&path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
            SimplicialComplex::from_json_str(&text)
        }
        Value::Object(_) => SimplicialComplex::from_json(v),
        _ => Err(parse_err("\"complex\" must be an object or a path")),
    }
}

impl SheafComplex {
    pub fn to_json(&self) -> Value {
        let x = self.base();
        let mut degrees = Map::new();
        for (i, t) in self.terms().iter().enumerate() {
            let k = self.min_degree() + i as i32;
            let stalks: BTreeMap<String, usize> =
                self.domain().cells().filter(|&c| t.stalk_dim(c) > 0).map(|c| (x.cell_name(c), t.stalk_dim(c))).collect();
            let mut restrictions = Map::new();
            for (t_, s) in t.codim_one_pairs() {
                let m = t.restriction_one(t_, s);
                if !m.is_empty() {
                    restrictions.insert(format!("{}<{}", x.cell_name(t_), x.cell_name(s)), matrix_to_json(&m));
                }
            }
            degrees.insert(k.to_string(), json!({ "stalks": stalks, "restrictions": restrictions }));
        }
        let mut differentials = Map::new();
        for (i, d) in self.diffs().iter().enumerate() {
            let k = self.min_degree() + i as i32;
            let mut per = Map::new();
            for (c, m) in d.iter().enumerate() {
                if !m.is_empty() {
                    per.insert(x.cell_name(c), matrix_to_json(m));
                }
            }
            differentials.insert(k.to_string(), Value::Object(per));
        }
        let mut out = json!({
            "complex": x.to_json(),
            "degrees": degrees,
            "differentials": differentials,
        });
        if !self.domain().is_whole() {
            out["domain"] = json!(self.domain().names(x));
        }
        out
    }

    pub fn from_json(v: &Value, dir: Option<&Path>) -> Result<SheafComplex> {
        let complex = resolve_complex(v.get("complex").ok_or_else(|| parse_err("missing \"complex\""))?, dir)?;
        Self::from_json_on(Arc::new(complex), v)
    }

    /// Parses a sheaf against an already loaded complex (the `"complex"`
    /// field is ignored).
    pub fn from_json_on(x: Arc<SimplicialComplex>, v: &Value) -> Result<SheafComplex> {
        let domain = match v.get("domain") {
            None | Some(Value::Null) => CellRegion::whole(&x),
            Some(d) => {
                let names: Vec<String> = serde_json::from_value(d.clone()).map_err(|e| parse_err(e.to_string()))?;
                let cells = names.iter().map(|n| x.parse_cell(n)).collect::<Result<Vec<_>>>()?;
                CellRegion::infer(&x, cells)?
            }
        };
        let degrees = v.get("degrees").and_then(Value::as_object).ok_or_else(|| parse_err("missing \"degrees\""))?;
        let empty = Map::new();
        let differentials = v.get("differentials").and_then(Value::as_object).unwrap_or(&empty);
        let parse_deg = |s: &String| s.parse::<i32>().map_err(|_| parse_err(format!("bad degree {s:?}")));
        let mut keys = degrees.keys().map(parse_deg).collect::<Result<Vec<_>>>()?;
        keys.extend(differentials.keys().map(|s| parse_deg(s).map(|k| k + 1)).collect::<Result<Vec<_>>>()?);
        let (Some(&lo), Some(&hi)) = (keys.iter().min(), keys.iter().max()) else {
            return Ok(SheafComplex::zero(x.clone(), domain));
        };
        let n = x.num_cells();
        let mut terms = Vec::new();
        for k in lo..=hi {
            let mut stalks = vec![0; n];
            let mut restrictions = BTreeMap::new();
            if let Some(d) = degrees.get(&k.to_string()) {
                if let Some(s) = d.get("stalks").and_then(Value::as_object) {
                    for (name, dim) in s {
                        let c = x.parse_cell(name)?;
                        stalks[c] = dim.as_u64().ok_or_else(|| parse_err("stalk dimension must be a count"))? as usize;
                    }
                }
                if let Some(r) = d.get("restrictions").and_then(Value::as_object) {
                    for (key, m) in r {
                        let (a, b) = key.split_once('<').ok_or_else(|| parse_err(format!("bad restriction key {key:?}")))?;
                        let (t, s) = (x.parse_cell(a)?, x.parse_cell(b)?);
                        restrictions.insert((t, s), matrix_from_json(m, stalks[s], stalks[t])?);
                    }
                }
            }
            terms.push(CellularSheaf::new(x.clone(), domain.clone(), stalks, restrictions)?);
        }
        let mut diffs = Vec::new();
        for k in lo..hi {
            let i = (k - lo) as usize;
            let mut d: Vec<Matrix> = (0..n).map(|c| Matrix::zeros(terms[i + 1].stalk_dim(c), terms[i].stalk_dim(c))).collect();
            if let Some(per) = differentials.get(&k.to_string()).and_then(Value::as_object) {
                for (name, m) in per {
                    let c = x.parse_cell(name)?;
                    d[c] = matrix_from_json(m, terms[i + 1].stalk_dim(c), terms[i].stalk_dim(c))?;
                }
            }
            diffs.push(d);
        }
        SheafComplex::new(lo, terms, diffs)
    }
}
