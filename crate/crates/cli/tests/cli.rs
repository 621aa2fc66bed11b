use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn orbitree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitree"))
        .args(args)
        .current_dir(root())
        .env_remove("ORBITREE_BUDGET_SCALE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = orbitree(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn golden(name: &str) -> String {
    fs::read_to_string(root().join("corpus/expected").join(name)).unwrap()
}

#[test]
fn info_matches_golden() {
    for f in ["A1", "A2", "I3", "CS"] {
        let o = orbitree(&["info", &format!("corpus/{f}.mealy"), "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), golden(&format!("{f}.info.json")), "{f}");
    }
}

#[test]
fn tree_and_windows_match_golden() {
    let o = orbitree(&["orbit-tree", "corpus/A1.mealy", "--depth", "4", "--format", "json"]);
    assert_eq!(stdout(&o), golden("A1.tree4.json"));
    let o = orbitree(&["orbit-tree", "corpus/A1.mealy", "--depth", "4", "--format", "dot"]);
    assert_eq!(stdout(&o), golden("A1.tree4.dot"));
    let o = orbitree(&["windows", "corpus/A1.mealy", "--format", "json"]);
    assert_eq!(stdout(&o), golden("A1.windows.json"));
}

#[test]
fn census_matches_golden() {
    let o = orbitree(&["enumerate", "--states", "2", "--letters", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("census-2x2.jsonl"));
}

#[test]
fn a1_flags() {
    let v = json(&["info", "corpus/A1.mealy"]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["subcommand"], "info");
    for flag in ["invertible", "reversible", "bireversible", "connected"] {
        assert_eq!(v[flag], true, "{flag}");
    }
    assert_eq!(v["connection_degree"]["value"], 2);
    assert_eq!(v["minimized_states"], 3);
}

#[test]
fn a2_is_disconnected() {
    let v = json(&["info", "corpus/A2.mealy"]);
    assert_eq!(v["connected"], false);
    assert_eq!(v["connection_degree"]["value"], 0);
}

#[test]
fn malformed_input_exits_2() {
    let o = orbitree(&["info", "corpus/bad.mealy"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.mealy");
    fs::write(&p, "mealy X\nalphabet 1 2\nstates x\nx: 1|1->x\n").unwrap();
    assert_eq!(orbitree(&["classify", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_4() {
    assert_eq!(orbitree(&["info", "corpus/nope.mealy"]).status.code(), Some(4));
}

#[test]
fn tree_sizes() {
    let v = json(&["orbit-tree", "corpus/I3.mealy", "--depth", "3"]);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 1 + 3 + 9 + 27);
    assert!(v["edges"].as_array().unwrap().iter().all(|e| e["label"] == 1));
    let v = json(&["orbit-tree", "corpus/A1.mealy", "--depth", "0"]);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 1);
    assert!(v["edges"].as_array().unwrap().is_empty());
    assert_eq!(v["heavy_branch"], serde_json::json!([]));
}

#[test]
fn default_tree_depth_is_7() {
    let v = json(&["orbit-tree", "corpus/A1.mealy"]);
    assert_eq!(v["config"]["depth"], 7);
    let deepest = v["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["level"].as_u64().unwrap())
        .max();
    assert_eq!(deepest, Some(7));
}

#[test]
fn order_reports() {
    let v = json(&["order", "corpus/A1.mealy", "--word", "xyz", "--k-budget", "10"]);
    assert_eq!(v["order"]["verdict"], "AtLeast");
    assert_eq!(v["order"]["k"], 10);
    assert_eq!(v["growth"]["sizes"][0], 18);
    let v = json(&["order", "corpus/A2.mealy", "--word", "y"]);
    assert_eq!(v["order"]["verdict"], "Finite");
    assert_eq!(v["order"]["order"], 2);
    assert_eq!(
        orbitree(&["order", "corpus/A2.mealy", "--word", ""]).status.code(),
        Some(4)
    );
    assert_eq!(
        orbitree(&["order", "corpus/A2.mealy", "--word", "w"]).status.code(),
        Some(4)
    );
}

#[test]
fn classify_verdicts() {
    for (f, verdict) in [("I3", "Finite"), ("CS", "Finite")] {
        let v = json(&["classify", &format!("corpus/{f}.mealy")]);
        assert_eq!(v["classification"]["verdict"], verdict, "{f}");
        assert_eq!(v["verified"], true);
    }
    let v = json(&["classify", "corpus/A2.mealy", "--closure-elements", "200"]);
    assert_eq!(v["classification"]["verdict"], "Unknown");
    assert_eq!(v["config"]["budgets"]["closure_elements"], 200);
}

#[test]
fn find_infinite_not_applicable() {
    for f in ["CS", "A2", "I3"] {
        let v = json(&["find-infinite", &format!("corpus/{f}.mealy")]);
        assert_eq!(v["search"]["status"], "not_applicable", "{f}");
    }
}

#[test]
fn windows_need_connected() {
    assert_eq!(orbitree(&["windows", "corpus/A2.mealy"]).status.code(), Some(4));
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = orbitree(&["info", "corpus/A1.mealy", "--member-budget", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["connection_degree"]["kind"], "AtLeast");
    assert!(v["note"].as_str().unwrap().contains("budget"));
    assert_eq!(v["invertible"], true);
}

#[test]
fn budget_scale_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_orbitree"))
        .args(["info", "corpus/CS.mealy", "--format", "json"])
        .current_dir(root())
        .env("ORBITREE_BUDGET_SCALE", "0.5")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["budget_scale"], 0.5);
    assert_eq!(v["config"]["budgets"]["member_budget"], 500_000);
}

fn items(text: &str) -> BTreeMap<u64, String> {
    text.lines()
        .filter_map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            v.get("index").map(|i| (i.as_u64().unwrap(), l.to_string()))
        })
        .collect()
}

#[test]
fn census_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let out = dir.path().join("out.jsonl");
    let (ck, out) = (ck.to_str().unwrap(), out.to_str().unwrap());
    let base = [
        "enumerate",
        "--states",
        "2",
        "--letters",
        "2",
        "--format",
        "json",
        "--checkpoint",
        ck,
        "--out",
        out,
    ];
    let mut first = base.to_vec();
    first.extend(["--limit", "5"]);
    assert_eq!(orbitree(&first).status.code(), Some(0));
    let partial = fs::read_to_string(out).unwrap();
    assert!(!partial.contains("summary"));
    assert_eq!(orbitree(&base).status.code(), Some(0));
    let resumed = fs::read_to_string(out).unwrap();
    let full = golden("census-2x2.jsonl");
    assert_eq!(items(&resumed), items(&full));
    assert_eq!(resumed.lines().last(), full.lines().last());

    let other = [
        "enumerate",
        "--states",
        "2",
        "--letters",
        "3",
        "--checkpoint",
        ck,
        "--out",
        out,
    ];
    assert_eq!(orbitree(&other).status.code(), Some(4));
}

#[test]
fn deterministic_output() {
    let args = [
        "classify",
        "corpus/A2.mealy",
        "--format",
        "json",
        "--closure-elements",
        "100",
    ];
    assert_eq!(stdout(&orbitree(&args)), stdout(&orbitree(&args)));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.txt");
    let o = orbitree(&["info", "corpus/CS.mealy", "--out", p.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(p).unwrap().contains("connection degree: 1"));
}

#[test]
fn one_state_census_is_finite() {
    let o = orbitree(&[
        "enumerate",
        "--states",
        "1",
        "--letters",
        "3",
        "--all",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let items: Vec<&Value> = lines.iter().filter(|v| v.get("index").is_some()).collect();
    assert!(!items.is_empty());
    for v in &items {
        assert!(v["verdict"] == "Finite" || v["verdict"] == "n/a", "{v}");
    }
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["infinite"], 0);
    assert_eq!(summary["unknown"], 0);
    assert_eq!(summary["finite"], 3);
    assert_eq!(summary["unclassified"], 4);
}

#[test]
fn census_sizes_are_capped() {
    assert_eq!(
        orbitree(&["enumerate", "--states", "4", "--letters", "2"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        orbitree(&["enumerate", "--states", "0", "--letters", "2"])
            .status
            .code(),
        Some(4)
    );
}
