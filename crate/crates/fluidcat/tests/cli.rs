use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fluidcat::document::SpaceDocument;
use fluidcat::generate::{random_space, rng};
use fluidcat::report::CheckSummary;
use fluidcat::suite::check_category;
use fluidcat_core::fincat::MorId;
use fluidcat_core::thick::DirectedSystem;
use fluidcat_core::InfoSpace;
use serde_json::Value;

fn l5_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/l5.json")
}

fn fluidcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluidcat")).args(args).output().unwrap()
}

fn on_l5(command: &str, extra: &[&str]) -> Output {
    let path = l5_path();
    let mut args = vec![command, "--input", path.to_str().unwrap(), "--epsilon", "1.5"];
    args.extend_from_slice(extra);
    fluidcat(&args)
}

fn result(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tool"], "fluidcat");
    assert!(v["config"].is_object());
    v["result"].clone()
}

#[test]
fn cover_warns_on_disconnected_graph() {
    let out = on_l5("cover", &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let r = result(&out);
    assert_eq!(r["balls"].as_array().unwrap().len(), 5);
    assert_eq!(r["components"], serde_json::json!([["a", "b", "c", "d"], ["e"]]));
    assert_eq!(r["connected"], false);
}

#[test]
fn cover_of_single_atom_is_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.json");
    std::fs::write(&path, r#"{"atoms":["a"],"metric":{"type":"matrix","d":[[0]]}}"#).unwrap();
    let out = fluidcat(&["cover", "--input", path.to_str().unwrap(), "--epsilon", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let r = result(&out);
    assert_eq!(r["balls"].as_array().unwrap().len(), 1);
    assert_eq!(r["components"].as_array().unwrap().len(), 1);
    assert!(r.get("warning").is_none());
}

#[test]
fn input_errors_exit_two() {
    let l5 = l5_path();
    let out = fluidcat(&["cover", "--input", l5.to_str().unwrap(), "--epsilon", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positive"));

    assert_eq!(on_l5("strata", &["--levels", "0", "--core", "a"]).status.code(), Some(2));
    assert_eq!(on_l5("wavefn", &["--lambda", "1"]).status.code(), Some(2));
    assert_eq!(on_l5("bundle", &["--arity", "0"]).status.code(), Some(2));
    assert_eq!(on_l5("wavefn", &["--core", "z"]).status.code(), Some(2));
    assert_eq!(on_l5("check", &["--format", "dot"]).status.code(), Some(2));
    assert_eq!(fluidcat(&["cover", "--epsilon", "1"]).status.code(), Some(2));
    assert_eq!(fluidcat(&["cover", "--input", "/nonexistent.json", "--epsilon", "1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"atoms":["a","b"],"metric":{"type":"matrix","d":[[0,1],[2,0]]}}"#).unwrap();
    assert_eq!(fluidcat(&["cover", "--input", path.to_str().unwrap(), "--epsilon", "1"]).status.code(), Some(2));
}

#[test]
fn wavefn_reports_worked_values() {
    let out = on_l5("wavefn", &["--core", "a", "--levels", "2", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    let probs: Vec<(String, f64)> = r[0]["prob"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["atom"].as_str().unwrap().to_string(), e["prob"].as_f64().unwrap()))
        .collect();
    assert_eq!(probs, vec![("a".into(), 0.4), ("b".into(), 0.4), ("c".into(), 0.2)]);
}

#[test]
fn bundle_counts() {
    let out = on_l5("bundle", &["--levels", "1", "--arity", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r["elements"]["objects"], 5);
    assert_eq!(r["elements"]["morphisms"], 25);
    for check in ["cofibered", "cover", "duality", "delta_functor"] {
        assert_eq!(r["checks"][check], serde_json::json!([]), "{check}");
    }
}

#[test]
fn system_strata_and_colimit() {
    let r = result(&on_l5("system", &["--levels", "2"]));
    assert_eq!(r["levels"].as_array().unwrap().len(), 3);
    let steps: Vec<u64> = r["stabilization"].as_array().unwrap().iter().map(|e| e["step"].as_u64().unwrap()).collect();
    assert_eq!(steps, vec![3, 2, 2, 3, 1]);

    let r = result(&on_l5("strata", &["--levels", "3", "--core", "a"]));
    assert_eq!(r[0]["strata"], serde_json::json!([["a", "b"], ["c"], ["d"]]));

    let r = result(&on_l5("colimit", &[]));
    assert_eq!(r["cells"], serde_json::json!([["a", "b", "c", "d"], ["e"]]));
    assert_eq!(r["collapses_to_whole"], false);
}

#[test]
fn dot_renderings() {
    for command in ["cover", "system", "towers", "bundle"] {
        let out = on_l5(command, &["--levels", "1", "--format", "dot"]);
        assert_eq!(out.status.code(), Some(0), "{command}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("graph") || text.starts_with("digraph"), "{command}");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let to_file = on_l5("towers", &["--output", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), on_l5("towers", &[]).stdout);
}

#[test]
fn check_passes_on_l5() {
    let out = on_l5("check", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = result(&out);
    assert_eq!(r["failed"], 0);
    assert!(r["passed"].as_u64().unwrap() > 0);
}

#[test]
fn check_passes_on_random_spaces() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5u64 {
        let space = random_space(&mut rng(seed), 10);
        let path = dir.path().join(format!("space{seed}.json"));
        std::fs::write(&path, SpaceDocument::from_space(&space).to_json()).unwrap();
        let seed = seed.to_string();
        let out = fluidcat(&["check", "--input", path.to_str().unwrap(), "--epsilon", "3", "--seed", &seed]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn corrupted_category_fails_with_named_law() {
    let s = InfoSpace::from_line(&["a", "b", "c"], &[0.0, 1.0, 2.0]).unwrap();
    let sys = DirectedSystem::build(&s, 1.5, 1).unwrap();
    let mut cat = sys.levels[1].category.clone();
    let (g, f) = (MorId(1), MorId(3));
    let h = cat.compose(g, f).unwrap();
    cat.set_composite(g, f, if h == MorId(0) { MorId(4) } else { MorId(0) });
    let summary = CheckSummary::new(vec![check_category("corrupted", &cat)]);
    assert_eq!(summary.exit_code(), 1);
    let laws: Vec<&str> = summary.suites[0].failed.iter().map(|f| f.law.as_str()).collect();
    assert!(laws.contains(&"category.composite_endpoints") || laws.contains(&"category.left_identity"), "{laws:?}");
}
