use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cellsheaf::corpus;
use serde_json::{json, Value};

fn write(path: &Path, v: &Value) -> Result<()> {
    if let Some(d) = path.parent() {
        std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
    }
    let text = serde_json::to_string_pretty(v)? + "\n";
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes `<item>.json` per complex and `<item>/<sheaf>.json` per sheaf
/// (pointing back at `../<item>.json`), `<item>/regions.json`, and
/// `pushforward_open_edge.json`, the interval's `Rj_*` of the open edge.
pub fn materialize(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let mut put = |rel: String, v: Value| -> Result<()> {
        write(&dir.join(&rel), &v)?;
        files.push(PathBuf::from(rel));
        Ok(())
    };
    for it in corpus::all() {
        let x = &it.complex;
        put(format!("{}.json", it.name), x.to_json())?;
        put(format!("{}/regions.json", it.name), json!({ "open": it.open.names(x), "closed": it.closed.names(x) }))?;
        for (s, f) in &it.sheaves {
            let mut v = f.to_json();
            v["complex"] = json!(format!("../{}.json", it.name));
            put(format!("{}/{s}.json", it.name), v)?;
        }
        if it.name == "interval" {
            let mut v = it.sheaf("pushforward_open").expect("bundled").to_json();
            v["complex"] = json!("interval.json");
            put("pushforward_open_edge.json".into(), v)?;
        }
    }
    Ok(files)
}
