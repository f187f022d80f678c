use std::f64::consts::FRAC_PI_2;
use std::process::Command;

use grasscrit::cli::run;
use serde_json::{json, Value};

fn call(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("grasscrit").chain(args.iter().copied());
    let (code, text) = run(argv);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

const E12: &str = "[[1,0],[0,1],[0,0],[0,0]]";

#[test]
fn distance_of_orthogonal_planes() {
    let input = format!(r#"{{"E":{E12},"F":[[0,0],[0,0],[1,0],[0,1]]}}"#);
    let (code, out) = call(&["distance", "--json", &input]);
    assert_eq!(code, 0);
    assert!((num(&out["delta"]) - FRAC_PI_2 * 2f64.sqrt()).abs() < 1e-14);
    assert_eq!(out["schema_version"], 1);
    assert_eq!(out["command"], "distance");
}

#[test]
fn angles_and_log() {
    let (c, s) = (0.4f64.cos(), 0.4f64.sin());
    let input = json!({"E": [[1, 0], [0, 1], [0, 0], [0, 0]], "F": [[c, 0], [0, 1], [s, 0], [0, 0]]}).to_string();
    let (code, out) = call(&["angles", "--json", &input]);
    assert_eq!(code, 0);
    let a: Vec<f64> = out["angles"].as_array().unwrap().iter().map(num).collect();
    assert!(a[0].abs() < 1e-15 && (a[1] - 0.4).abs() < 1e-15);
    let (code, out) = call(&["log", "--json", &input]);
    assert_eq!(code, 0);
    assert!((num(&out["norm"]) - 0.4).abs() < 1e-14);
}

#[test]
fn log_on_cut_locus_is_a_domain_error() {
    let input = format!(r#"{{"E":{E12},"F":[[1,0],[0,0],[0,1],[0,0]]}}"#);
    let (code, out) = call(&["log", "--json", &input]);
    assert_eq!(code, 3);
    assert_eq!(out["error"]["code"], "OnCutLocus");
}

#[test]
fn schubert_min_is_norm_of_smallest_angles() {
    let t = [0.3f64, 0.8, 1.1];
    let mut l = vec![vec![0.0; 3]; 7];
    for (i, ti) in t.iter().enumerate() {
        l[i][i] = ti.cos();
        l[3 + i][i] = ti.sin();
    }
    let w: Vec<Vec<f64>> = (0..7).map(|i| (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for s in [1usize, 2] {
        let input = json!({"W": w, "L": l, "s": s}).to_string();
        let (code, out) = call(&["schubert-min", "--json", &input]);
        assert_eq!(code, 0);
        let expect = t[..s].iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((num(&out["value"]) - expect).abs() < 1e-12);
    }
}

#[test]
fn rank_deficient_basis_is_an_input_error() {
    let input = r#"{"E":[[1,2],[2,4],[0,0],[0,0]],"F":[[1,0],[0,1],[0,0],[0,0]]}"#;
    let (code, out) = call(&["angles", "--json", input]);
    assert_eq!(code, 2);
    assert_eq!(out["error"]["code"], "RankDeficient");
    assert_eq!(out["error"]["path"], "$.E");
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(call(&["angles", "--json", "{not json"]).0, 2);
    assert_eq!(call(&["angles"]).1["error"]["code"], "MissingInput");
    assert_eq!(call(&["no-such-command"]).1["error"]["code"], "ParseError");
    assert_eq!(call(&["distance", "--json", r#"{"E":[[1,0],[0,1],[0,0],[0,0]]}"#]).1["error"]["code"], "MissingField");
}

#[test]
fn non_hypersurface_exits_three() {
    let two = r#"{"equations":[{"n":4,"k":2,"terms":[{"idx":[0],"coef":1}]},{"n":4,"k":2,"terms":[{"idx":[1],"coef":1}]}]}"#;
    let (code, out) = call(&["gdc-sample", "--seed", "1", "--json", two]);
    assert_eq!(code, 3);
    assert_eq!(out["error"]["code"], "NotHypersurface");
    let plucker = r#"{"n":4,"k":2,"terms":[{"idx":[0,5],"coef":1},{"idx":[1,4],"coef":-1},{"idx":[2,3],"coef":1}]}"#;
    assert_eq!(call(&["gdc-sample", "--seed", "1", "--json", plucker]).0, 3);
}

#[test]
fn randomized_commands_need_a_seed() {
    let input = r#"{"L":[[1,0],[0,1],[0,0],[0,0]],"S":[[1,0],[0,0],[0,1],[0,0]]}"#;
    let (code, out) = call(&["subdiff-dim", "--json", input]);
    assert_eq!(code, 2);
    assert_eq!(out["error"]["code"], "MissingSeed");
    let (code, out) = call(&["subdiff-dim", "--seed", "3", "--json", input]);
    assert_eq!(code, 0);
    assert_eq!(out["dimension"], 1);
    assert_eq!(out["seed"], 3);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let poly = r#"{"n":4,"k":2,"terms":[{"idx":[0],"coef":0.3},{"idx":[1],"coef":-1.1},{"idx":[2],"coef":0.7},{"idx":[3],"coef":0.2},{"idx":[4],"coef":0.9},{"idx":[5],"coef":-0.4}]}"#;
    let args = ["gdc-sample", "--seed", "9", "--trials", "2", "--starts", "16", "--json", poly];
    let a = run(std::iter::once("grasscrit").chain(args));
    let b = run(std::iter::once("grasscrit").chain(args));
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}

#[test]
fn file_input_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let inp = dir.path().join("in.json");
    let outp = dir.path().join("out.json");
    std::fs::write(&inp, format!(r#"{{"E":{E12}}}"#)).unwrap();
    let (code, text) = run(["grasscrit", "plucker", "--in", inp.to_str().unwrap(), "--out", outp.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&outp).unwrap(), text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(num(&v["coords"][0]), 1.0);
    assert_eq!(v["subsets"].as_array().unwrap().len(), 6);
}

#[test]
fn bound_reports_exact_integer() {
    let (code, out) = call(&["bound", "--k", "2", "--n", "4", "--d", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out["c2"], 18);
    assert!(out["c1_over_c"].as_str().unwrap().chars().all(|c| c.is_ascii_digit()));
}

#[test]
fn binary_splits_stdout_and_stderr() {
    let exe = env!("CARGO_BIN_EXE_grasscrit");
    let ok = Command::new(exe).args(["bound", "--k", "2", "--n", "4", "--d", "1"]).output().unwrap();
    assert!(ok.status.success() && ok.stderr.is_empty());
    assert!(serde_json::from_slice::<Value>(&ok.stdout).is_ok());
    let bad = Command::new(exe).args(["angles", "--json", "[]"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    let err: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(err["schema_version"], 1);
}

#[test]
fn thread_count_does_not_change_output() {
    let poly = r#"{"n":4,"k":2,"terms":[{"idx":[0],"coef":0.3},{"idx":[1],"coef":-1.1},{"idx":[2],"coef":0.7},{"idx":[3],"coef":0.2},{"idx":[4],"coef":0.9},{"idx":[5],"coef":-0.4}]}"#;
    let go = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_grasscrit"))
            .env("GRASSCRIT_THREADS", threads)
            .args(["gdc-sample", "--seed", "3", "--trials", "2", "--starts", "16", "--json", poly])
            .output()
            .unwrap()
    };
    let (one, many) = (go("1"), go("6"));
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(go("zero").status.code(), Some(2));
}
