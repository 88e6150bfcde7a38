use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cellsheaf(dir: &Path, corpus: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellsheaf"))
        .args(args)
        .current_dir(dir)
        .env("CELLSHEAF_CORPUS_DIR", corpus)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

struct Env {
    work: tempfile::TempDir,
    corpus: tempfile::TempDir,
}

impl Env {
    fn new() -> Self {
        let env = Env { work: tempfile::tempdir().unwrap(), corpus: tempfile::tempdir().unwrap() };
        let out = env.run(&["corpus"]);
        assert!(out.status.success());
        env
    }

    fn run(&self, args: &[&str]) -> Output {
        cellsheaf(self.work.path(), self.corpus.path(), args)
    }

    fn write(&self, name: &str, v: &Value) {
        std::fs::write(self.work.path().join(name), v.to_string()).unwrap();
    }
}

#[test]
fn example_one_table_and_pairing() {
    let env = Env::new();
    let out = env.run(&["cc", "--complex", "interval.json", "--sheaf", "pushforward_open_edge.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cc = json(&out);
    let mut table: Vec<(String, String, i64)> = cc["chambers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let cell: Vec<&str> = e["cell"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
            (cell.join(","), e["witness"][0].as_str().unwrap().to_string(), e["multiplicity"].as_i64().unwrap())
        })
        .collect();
    table.sort();
    let want = [("0", "-1/1", 0), ("0", "1/1", 1), ("0,1", "0/1", 1), ("1", "-1/1", 1), ("1", "1/1", 0)];
    let want: Vec<(String, String, i64)> = want.iter().map(|&(c, w, m)| (c.into(), w.into(), m)).collect();
    assert_eq!(table, want);

    env.write("cc.json", &cc);
    let out = env.run(&["pair", "--cycle", "cc.json", "--covector", "1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["pairing"], 1);
    let out = env.run(&["--format", "table", "pair", "--cycle", "cc.json", "--covector", "-3/2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}

#[test]
fn non_generic_covector_has_its_own_exit_code() {
    let env = Env::new();
    let out = env.run(&["cc", "--sheaf", "octahedron/constant.json", "-o", "cc.json"]);
    assert!(out.status.success());
    let out = env.run(&["pair", "--cycle", "cc.json", "--covector", "0,0,1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = env.run(&["pair", "--cycle", "cc.json", "--covector", "1,2,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pairing"], 2);
}

#[test]
fn verify_prints_seed_and_passes() {
    let env = Env::new();
    let out = env.run(&["verify", "octahedron", "--seed", "7", "--covectors", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let cert = json(&out);
    assert_eq!(cert["seed"], 7);
    assert_eq!(cert["passed"], true);
    let checks = cert["certificates"][0]["checks"].as_array().unwrap();
    assert!(checks.len() > 50);
    assert!(checks.iter().all(|c| c["passed"] == true));
    let table = env.run(&["--format", "table", "verify", "octahedron", "--seed", "7", "--covectors", "5"]);
    assert!(String::from_utf8_lossy(&table.stdout).starts_with("seed 7"));
}

#[test]
fn reports_are_deterministic() {
    let env = Env::new();
    let a = env.run(&["cc", "--sheaf", "hemispheres/pushforward_open.json"]);
    let b = env.run(&["cc", "--sheaf", "hemispheres/pushforward_open.json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = env.run(&["verify", "circle", "mobius", "--covectors", "3"]);
    let b = env.run(&["verify", "circle", "mobius", "--covectors", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn outputs_reload() {
    let env = Env::new();
    for (cmd, args) in [
        ("dual", vec!["--sheaf", "circle/local_system.json"]),
        ("pushforward", vec!["--sheaf", "torus/random_0.json", "--to-point"]),
        ("pullback", vec!["--sheaf", "hemispheres/pushforward_open.json", "--region", "5"]),
    ] {
        let mut full = vec![cmd];
        full.extend(args);
        let out = env.run(&full);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        let file = format!("{cmd}.json");
        env.write(&file, &json(&out));
        let v = env.run(&["validate", "--sheaf", &file]);
        assert_eq!(v.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&v.stdout));
    }
    // The dual of the dual has the stalk cohomology of the original.
    let once = json(&env.run(&["dual", "--sheaf", "interval/pushforward_open.json"]));
    env.write("d.json", &once);
    let twice = json(&env.run(&["dual", "--sheaf", "d.json"]));
    let original = json(&env.run(&["pullback", "--sheaf", "interval/pushforward_open.json", "--region", "0", "1", "0,1"]));
    assert_eq!(twice["stalk_cohomology"], original["stalk_cohomology"]);
}

#[test]
fn maps_from_files() {
    let env = Env::new();
    // Collapse the second edge of the subdivided interval onto the right endpoint.
    let map = serde_json::json!({
        "source": format!("{}/subdivided_interval.json", env.corpus.path().display()),
        "target": format!("{}/interval.json", env.corpus.path().display()),
        "vertex_map": { "0": "0", "1": "1", "2": "1" },
    });
    env.write("map.json", &map);
    let up = json(&env.run(&["pullback", "--sheaf", "interval/constant.json", "--map", "map.json"]));
    assert!(up["stalk_cohomology"].as_object().unwrap().values().all(|d| d == &serde_json::json!({ "0": 1 })));
    env.write("up.json", &up);
    let down = json(&env.run(&["pushforward", "--sheaf", "up.json", "--map", "map.json"]));
    assert!(down["stalk_cohomology"].as_object().unwrap().values().all(|d| d == &serde_json::json!({ "0": 1 })));
    // Every fiber is compact, so Rf_! agrees with Rf_*.
    let proper = json(&env.run(&["pushforward", "--sheaf", "up.json", "--map", "map.json", "--proper"]));
    assert_eq!(proper["stalk_cohomology"], down["stalk_cohomology"]);
}

#[test]
fn graded_reports() {
    let env = Env::new();
    let h = json(&env.run(&["cohomology", "--sheaf", "torus/constant.json"]));
    assert_eq!(h["dims"], serde_json::json!({ "0": 1, "1": 2, "2": 1 }));
    let h = json(&env.run(&["cohomology", "--sheaf", "mobius/local_system.json"]));
    assert_eq!(h["dims"], serde_json::json!({}));
    let hc = json(&env.run(&["cohomology-c", "--sheaf", "interval/extension_by_zero.json"]));
    assert_eq!(hc["dims"], serde_json::json!({ "1": 1 }));
    let mid = json(&env.run(&["local-cohomology", "--sheaf", "subdivided_interval/constant.json", "--support", "1"]));
    assert_eq!(mid["dims"], serde_json::json!({ "1": 1 }));
    for route in ["support", "ext"] {
        let again = json(&env.run(&[
            "local-cohomology", "--sheaf", "subdivided_interval/constant.json", "--support", "1", "--route", route,
        ]));
        assert_eq!(again["dims"], mid["dims"]);
    }
    let ext = json(&env.run(&["ext", "--source", "circle/constant.json", "--target", "circle/local_system.json"]));
    assert_eq!(ext["dims"], serde_json::json!({}));
    let e = json(&env.run(&["euler", "--sheaf", "hemispheres/pushforward_open.json"]));
    assert_eq!((e["euler"].as_i64(), e["integral"].as_i64()), (Some(1), Some(1)));
}

#[test]
fn errors_map_to_exit_codes() {
    let env = Env::new();
    assert_eq!(env.run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(env.run(&["cohomology", "--sheaf", "missing.json"]).status.code(), Some(2));
    assert_eq!(env.run(&["verify", "klein_bottle"]).status.code(), Some(2));
    env.write("bad.json", &serde_json::json!({ "degrees": {} }));
    let out = env.run(&["validate", "--sheaf", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
    // A restriction square that does not commute.
    let mut f: Value = serde_json::from_str(
        &std::fs::read_to_string(env.corpus.path().join("interval/constant.json")).unwrap(),
    )
    .unwrap();
    f["complex"] = serde_json::json!(format!("{}/interval.json", env.corpus.path().display()));
    f["degrees"]["0"]["restrictions"]["0<0,1"] = serde_json::json!([["2/1"]]);
    env.write("twisted.json", &f);
    assert_eq!(env.run(&["validate", "--sheaf", "twisted.json"]).status.code(), Some(0));
    f["degrees"]["0"]["restrictions"]["0<0,1"] = serde_json::json!([["0/1", "1/1"]]);
    env.write("misshapen.json", &f);
    assert_eq!(env.run(&["validate", "--sheaf", "misshapen.json"]).status.code(), Some(1));
}
