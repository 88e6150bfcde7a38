use cellsheaf::linalg::GradedDims;
use cellsheaf::SheafComplex;
use comfy_table::presets::ASCII_MARKDOWN;
use comfy_table::Table;
use serde_json::{json, Map, Value};

pub struct Report {
    pub json: Value,
    pub table: String,
    pub violation: bool,
}

impl Report {
    pub fn new(json: Value, table: impl Into<String>) -> Self {
        Report { json, table: table.into(), violation: false }
    }
}

pub fn table<I, R, S>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = S>,
    S: ToString,
{
    let mut t = Table::new();
    t.load_preset(ASCII_MARKDOWN).set_header(header.iter().copied());
    for r in rows {
        t.add_row(r.into_iter().map(|s| s.to_string()).collect::<Vec<_>>());
    }
    t.to_string()
}

pub fn dims_json(d: &GradedDims) -> Value {
    serde_json::to_value(d).expect("serializable")
}

pub fn dims_table(d: &GradedDims) -> String {
    let mut rows: Vec<[String; 2]> = d.iter().map(|(k, n)| [k.to_string(), n.to_string()]).collect();
    if rows.is_empty() {
        rows.push(["all".into(), "0".into()]);
    }
    table(&["degree", "dim"], rows)
}

pub fn stalks_json(f: &SheafComplex) -> Value {
    let x = f.base();
    let m: Map<String, Value> = f.domain().cells().map(|c| (x.cell_name(c), dims_json(&f.stalk(c)))).collect();
    Value::Object(m)
}

/// The sheaf itself, loadable again, with its stalk cohomology attached.
pub fn sheaf_report(f: &SheafComplex) -> Report {
    let mut v = f.to_json();
    v["stalk_cohomology"] = stalks_json(f);
    let x = f.base();
    let rows = f.domain().cells().map(|c| [x.cell_name(c), f.stalk(c).to_string()]);
    Report::new(v, table(&["cell", "stalk cohomology"], rows))
}

pub fn graded_report(dims: &GradedDims, extra: Value) -> Report {
    let mut v = json!({ "dims": dims_json(dims), "euler": dims.euler() });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    Report::new(v, format!("{}\nEuler characteristic {}", dims_table(dims), dims.euler()))
}
