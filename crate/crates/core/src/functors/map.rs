use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::complex::{CellId, CellRegion, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::sheaf::resolve_complex;

/// A simplicial map between locally closed regions of two complexes, given
/// by a vertex map that sends every source cell onto a target cell.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    source_domain: CellRegion,
    target: Arc<SimplicialComplex>,
    target_domain: CellRegion,
    vertex_map: Vec<VertexId>,
    cell_map: Vec<Option<CellId>>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<SimplicialComplex>,
        source_domain: CellRegion,
        target: Arc<SimplicialComplex>,
        target_domain: CellRegion,
        vertex_map: Vec<VertexId>,
    ) -> Result<Self> {
        if vertex_map.len() != source.num_vertices() {
            return Err(Error::NotSimplicial("vertex map does not cover every source vertex".into()));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.num_vertices()) {
            return Err(Error::NotSimplicial(format!("vertex image {v} is not a target vertex")));
        }
        for (region, x) in [(&source_domain, &source), (&target_domain, &target)] {
            if !region.is_locally_closed(x) {
                return Err(Error::RegionKind { expected: "locally closed", detail: format!("{region:?}") });
            }
        }
        let mut cell_map = vec![None; source.num_cells()];
        for c in 0..source.num_cells() {
            let image: Vec<VertexId> = source.cell(c).vertices().iter().map(|&v| vertex_map[v]).collect();
            match target.find_vertices(&image) {
                Some(t) => {
                    if source_domain.contains(c) && !target_domain.contains(t) {
                        return Err(Error::NotSimplicial(format!(
                            "{} maps to {}, outside the target region",
                            source.cell_name(c),
                            target.cell_name(t)
                        )));
                    }
                    cell_map[c] = Some(t);
                }
                None => {
                    return Err(Error::NotSimplicial(format!("image of {} is not a cell", source.cell_name(c))));
                }
            }
        }
        Ok(SimplicialMap { source, source_domain, target, target_domain, vertex_map, cell_map })
    }

    pub fn identity(x: &Arc<SimplicialComplex>) -> Self {
        let whole = CellRegion::whole(x);
        Self::new(x.clone(), whole.clone(), x.clone(), whole, (0..x.num_vertices()).collect()).expect("identity")
    }

    /// Inclusion of a locally closed region (open embedding `j` or closed
    /// embedding `i`) into the whole complex.
    pub fn inclusion(x: &Arc<SimplicialComplex>, region: &CellRegion) -> Result<Self> {
        Self::new(x.clone(), region.clone(), x.clone(), CellRegion::whole(x), (0..x.num_vertices()).collect())
    }

    /// Constant map to the one-point complex.
    pub fn to_point(x: &Arc<SimplicialComplex>, domain: &CellRegion) -> Self {
        let pt = Arc::new(SimplicialComplex::point());
        let whole = CellRegion::whole(&pt);
        Self::new(x.clone(), domain.clone(), pt, whole, vec![0; x.num_vertices()]).expect("constant map")
    }

    /// Embedding of `sub` into `x` matching vertices by coordinates.
    pub fn subcomplex_embedding(sub: &Arc<SimplicialComplex>, x: &Arc<SimplicialComplex>) -> Result<Self> {
        if sub.ambient_dim() != x.ambient_dim() {
            return Err(Error::Invalid("subcomplex and complex live in different ambient spaces".into()));
        }
        let vertex_map = (0..sub.num_vertices())
            .map(|v| {
                (0..x.num_vertices())
                    .find(|&w| x.coords(w) == sub.coords(v))
                    .ok_or_else(|| Error::Invalid(format!("vertex {} of the subcomplex is not a vertex", sub.label(v))))
            })
            .collect::<Result<Vec<_>>>()?;
        let f = Self::new(sub.clone(), CellRegion::whole(sub), x.clone(), CellRegion::whole(x), vertex_map)?;
        let mut images: Vec<CellId> = f.cell_map.iter().map(|c| c.unwrap()).collect();
        images.sort_unstable();
        images.dedup();
        if images.len() != sub.num_cells() {
            return Err(Error::Invalid("the vertex map is not injective on cells".into()));
        }
        Ok(f)
    }

    /// Composite `g ∘ self`.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap> {
        if !crate::sheaf::same_base(&self.target, &g.source) {
            return Err(Error::BaseMismatch);
        }
        let vm = self.vertex_map.iter().map(|&v| g.vertex_map[v]).collect();
        Self::new(self.source.clone(), self.source_domain.clone(), g.target.clone(), g.target_domain.clone(), vm)
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn source_domain(&self) -> &CellRegion {
        &self.source_domain
    }

    pub fn target_domain(&self) -> &CellRegion {
        &self.target_domain
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    /// Image of a source cell.
    pub fn apply(&self, c: CellId) -> CellId {
        self.cell_map[c].expect("validated")
    }

    /// Cells of the source domain mapping onto the open cell `y`.
    pub fn cell_fiber(&self, y: CellId) -> Vec<CellId> {
        self.source_domain.cells().filter(|&c| self.apply(c) == y).collect()
    }

    /// Whether the map is injective on vertices with identical coordinates,
    /// i.e. an embedding of geometric realizations.
    pub fn is_isometric_embedding(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.vertex_map.iter().all(|v| seen.insert(*v))
            && (0..self.source.num_vertices()).all(|v| {
                let a = self.source.coords(v);
                let b = self.target.coords(self.vertex_map[v]);
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).is_zero())
            })
    }
}

fn region_from_json(x: &SimplicialComplex, v: Option<&Value>) -> Result<CellRegion> {
    match v {
        None | Some(Value::Null) => Ok(CellRegion::whole(x)),
        Some(d) => {
            let names: Vec<String> = serde_json::from_value(d.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            let cells = names.iter().map(|n| x.parse_cell(n)).collect::<Result<Vec<_>>>()?;
            CellRegion::infer(x, cells)
        }
    }
}

impl SimplicialMap {
    /// `{"source", "target", "vertex_map": {label: label}}` with optional
    /// `"source_domain"` and `"target_domain"` cell lists.
    pub fn to_json(&self) -> Value {
        let (x, y) = (&self.source, &self.target);
        let vertex_map: BTreeMap<&str, &str> =
            self.vertex_map.iter().enumerate().map(|(v, &w)| (x.label(v), y.label(w))).collect();
        let mut out = json!({ "source": x.to_json(), "target": y.to_json(), "vertex_map": vertex_map });
        if !self.source_domain.is_whole() {
            out["source_domain"] = json!(self.source_domain.names(x));
        }
        if !self.target_domain.is_whole() {
            out["target_domain"] = json!(self.target_domain.names(y));
        }
        out
    }

    /// Complexes may be inline or paths relative to `dir`.
    pub fn from_json(v: &Value, dir: Option<&Path>) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("map: missing {k:?}")));
        let x = Arc::new(resolve_complex(field("source")?, dir)?);
        let y = Arc::new(resolve_complex(field("target")?, dir)?);
        let table: BTreeMap<String, String> =
            serde_json::from_value(field("vertex_map")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut vertex_map = Vec::with_capacity(x.num_vertices());
        for v in 0..x.num_vertices() {
            let w = table.get(x.label(v)).ok_or_else(|| Error::NotSimplicial(format!("vertex {} is not mapped", x.label(v))))?;
            vertex_map.push(y.vertex_by_label(w).ok_or_else(|| Error::UnknownVertex(w.clone()))?);
        }
        let source_domain = region_from_json(&x, v.get("source_domain"))?;
        let target_domain = region_from_json(&y, v.get("target_domain"))?;
        SimplicialMap::new(x, source_domain, y, target_domain, vertex_map)
    }
}
