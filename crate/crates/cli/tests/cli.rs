use std::process::{Command, Output};

use serde_json::Value;

fn ncd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncd"))
        .args(args)
        .env_remove("NCD_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ncd(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn count_with_brute() {
    assert_eq!(stdout(&["count", "--d", "2", "--k", "2", "--brute"]), "formula=7 brute=7 OK\n");
    assert_eq!(stdout(&["count", "--d", "2", "--n", "5"]), "formula=7\n");
    assert_eq!(
        stdout(&["count", "--d", "1", "--k", "4", "--kind", "rank_count", "--j", "2", "--brute"]),
        "formula=20 brute=20 OK\n"
    );
}

#[test]
fn mobius_type_a() {
    assert_eq!(stdout(&["mobius", "--d", "1", "--k", "3"]).trim(), "-5");
    assert_eq!(stdout(&["mobius", "--d", "1", "--k", "3", "--brute"]), "formula=-5 brute=-5 OK\n");
}

#[test]
fn parking_chain_json() {
    let v = json(&["parking", "--d", "2", "--values", "2,1,3,1,3", "--emit", "chain"]);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 6);
    assert_eq!(steps[1]["blocks"][1], serde_json::json!([2, 3, 8]));
    assert_eq!(steps[4]["blocks"][0], serde_json::json!([1, 2, 3, 6, 7, 8, 9, 10, 11]));
}

#[test]
fn parking_tree_text() {
    let out = stdout(&["parking", "--d", "2", "--values", "2,1,3,1,3", "--emit", "tree", "--format", "text"]);
    assert_eq!(out.lines().next().unwrap(), "inf(4_1(1_1(5_1 5_2 3_1 3_2) 1_2) 4_2 2_1 2_2)");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ncd(&["count", "--d", "2", "--n", "6"]).status.code(), Some(2));
    assert_eq!(ncd(&["count", "--d", "2", "--k", "1", "--n", "3"]).status.code(), Some(2));
    assert_eq!(ncd(&["parking", "--d", "1", "--values", "3,3"]).status.code(), Some(2));
    assert_eq!(ncd(&["render", "--partition", "1,3|2,4"]).status.code(), Some(2));
    assert_eq!(ncd(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ncd"))
        .args(["poset", "--d", "1", "--k", "4"])
        .env("NCD_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(ncd(&["verify", "--d", "1", "--k", "3"]).status.code(), Some(0));
    // some intervals of NC^2_7 have no unique rising chain
    let out = ncd(&["verify", "--d", "2", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL el_labeling_on_intervals"));
    assert_eq!(text.matches("FAIL").count(), 1);
}

#[test]
fn antipode_methods_agree() {
    let both = json(&["antipode", "--d", "2", "--k", "2"]);
    let hyper = json(&["antipode", "--d", "2", "--k", "2", "--method", "hypertree"]);
    assert_eq!(both, hyper);
    assert_eq!(
        both,
        serde_json::json!([{"sizes": [3, 3], "coeff": 5}, {"sizes": [5], "coeff": -1}])
    );
}

#[test]
fn poset_dump_round_trips() {
    let dir = std::env::temp_dir().join(format!("ncd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("poset.json");
    let p = path.to_str().unwrap();
    stdout(&["poset", "--d", "2", "--k", "2", "--out", p]);
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(first["elements"].as_array().unwrap().len(), 7);
    let again = json(&["poset", "--input", p]);
    assert_eq!(first, again);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn chains_emit_modes() {
    assert_eq!(stdout(&["chains", "--d", "1", "--k", "3", "--emit", "count"]).trim(), "16");
    let labels = json(&["chains", "--d", "2", "--k", "2"]);
    assert_eq!(labels.as_array().unwrap().len(), 5);
    let pfs = json(&["chains", "--d", "2", "--k", "2", "--emit", "parking"]);
    assert!(pfs.as_array().unwrap().iter().all(|v| v["d"] == 2));
}

#[test]
fn table_layouts() {
    let text = stdout(&["table", "--d", "2", "--k", "3"]);
    assert_eq!(text.lines().last().unwrap().split_whitespace().collect::<Vec<_>>(), ["3", "1", "14", "14", "1"]);
    let csv = stdout(&["table", "--d", "1", "--k", "2", "--format", "csv"]);
    assert_eq!(csv, "k,j=0,j=1,j=2\n0,1,,\n1,1,1,\n2,1,3,1\n");
    assert_eq!(json(&["table", "--d", "1", "--k", "2", "--format", "json"]), serde_json::json!([["1"], ["1", "1"], ["1", "3", "1"]]));
}

#[test]
fn series_dump() {
    let v = json(&["series", "--d", "1", "--order", "2", "--format", "json"]);
    assert_eq!(v["order"], 2);
    let terms = v["terms"].as_array().unwrap();
    let middle = terms.iter().find(|t| t["x"] == 2 && t["s"] == 1).unwrap();
    assert_eq!((middle["num"].as_i64(), middle["den"].as_i64()), (Some(3), Some(1)));
}

#[test]
fn render_svg() {
    let svg = stdout(&["render", "--partition", "1|2,9,10|3|4,5,6,7,8|11"]);
    assert!(svg.starts_with("<svg") && svg.contains("stroke-dasharray"));
    let svg = stdout(&["render", "--tree", "1,2|3"]);
    assert!(svg.contains("<line"));
    let svg = stdout(&["render", "--parking", "2,1,3,1,3", "--d", "2"]);
    assert!(svg.contains("&#8734;"));
    assert_eq!(ncd(&["render", "--partition", "1|2", "--format", "json"]).status.code(), Some(2));
}

#[test]
fn trees_plane_json() {
    let v = json(&["trees", "--d", "1", "--k", "2"]);
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert!(v[0]["tree"]["labels"].is_array());
}
