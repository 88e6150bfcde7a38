use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use cellsheaf::complex::{CellRegion, SimplicialComplex};
use cellsheaf::functors::SimplicialMap;
use cellsheaf::{ConormalCycle, SheafComplex};
use serde_json::Value;

pub const CORPUS_ENV: &str = "CELLSHEAF_CORPUS_DIR";

pub fn corpus_dir() -> PathBuf {
    std::env::var_os(CORPUS_ENV).map_or_else(|| PathBuf::from("corpus"), PathBuf::from)
}

/// Input files are looked up as given, then inside the corpus directory.
pub fn resolve(path: &Path) -> Result<PathBuf> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if path.is_relative() {
        let alt = corpus_dir().join(path);
        if alt.exists() {
            return Ok(alt);
        }
    }
    bail!(Usage(format!("no such file: {}", path.display())))
}

/// Failures of the invocation itself rather than of the mathematics.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub struct Loaded {
    pub value: Value,
    pub dir: PathBuf,
}

pub fn read_json(path: &Path) -> Result<Loaded> {
    let path = resolve(path)?;
    let text = std::fs::read_to_string(&path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let value = serde_json::from_str(&text).map_err(|e| cellsheaf::Error::Parse(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { value, dir })
}

pub fn complex(path: &Path) -> Result<Arc<SimplicialComplex>> {
    let l = read_json(path)?;
    let x = SimplicialComplex::from_json(&l.value).with_context(|| format!("loading complex {}", path.display()))?;
    Ok(Arc::new(x))
}

/// A sheaf on `base` if given, otherwise on the complex named in the file.
pub fn sheaf(path: &Path, base: Option<&Arc<SimplicialComplex>>) -> Result<SheafComplex> {
    let l = read_json(path)?;
    let f = match base {
        Some(x) => SheafComplex::from_json_on(x.clone(), &l.value),
        None => SheafComplex::from_json(&l.value, Some(&l.dir)),
    };
    f.with_context(|| format!("loading sheaf {}", path.display()))
}

pub fn map(path: &Path) -> Result<SimplicialMap> {
    let l = read_json(path)?;
    SimplicialMap::from_json(&l.value, Some(&l.dir)).with_context(|| format!("loading map {}", path.display()))
}

pub fn cycle(path: &Path) -> Result<ConormalCycle> {
    let l = read_json(path)?;
    ConormalCycle::load(&l.value, Some(&l.dir)).with_context(|| format!("loading cycle {}", path.display()))
}

pub fn region(x: &SimplicialComplex, names: &[String]) -> Result<CellRegion> {
    let cells = names.iter().map(|n| x.parse_cell(n)).collect::<cellsheaf::Result<Vec<_>>>()?;
    Ok(CellRegion::infer(x, cells)?)
}
