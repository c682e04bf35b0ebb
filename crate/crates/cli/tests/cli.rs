use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn cagespec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cagespec")).args(args).output().expect("binary runs")
}

fn piped(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cagespec"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv_rows(out: &Output) -> Vec<csv::StringRecord> {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    csv::Reader::from_reader(&out.stdout[..]).records().map(Result::unwrap).collect()
}

#[test]
fn snf_examples() {
    let v = json(&cagespec(&["snf", "[[6,-2],[2,6]]"]));
    assert_eq!(v["D"], serde_json::json!([[2, 0], [0, 20]]));
    assert_eq!(v["singular"], false);

    let v = json(&cagespec(&["snf", "[[1,0],[0,1]]"]));
    assert_eq!(v["D"], serde_json::json!([[1, 0], [0, 1]]));

    let v = json(&cagespec(&["snf", "[[1,2],[2,4]]"]));
    assert_eq!(v["D"], serde_json::json!([[1, 0], [0, 0]]));
    assert_eq!(v["singular"], true);

    let v = json(&piped(&["snf", "-"], b"[[4]]"));
    assert_eq!(v["D"], serde_json::json!([[4]]));
}

#[test]
fn spectrum_examples() {
    let v = json(&cagespec(&["spectrum", "--spec", "6,2,-2,6,0,0"]));
    assert_eq!(v["M_raw"], serde_json::json!([3, -1, -1, -1]));
    assert_eq!(v["oracle_match"], true);
    assert_eq!(v["full"].as_array().unwrap().len(), 40);

    let v = json(&cagespec(&["spectrum", "--spec", "1,0,0,1,0,0"]));
    assert_eq!(v["full"], serde_json::json!([3.0]));

    let v = json(&cagespec(&["spectrum", "--spec", "2,0,0,2,0,0"]));
    let full: Vec<f64> = serde_json::from_value(v["full"].clone()).unwrap();
    let expected = [3.0, -1.0, -1.0, -1.0];
    assert!(full.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-9), "{full:?}");
}

#[test]
fn construct_output_round_trips_through_spectrum() {
    for spec in ["6,2,-2,6,0,0", "3,1,-1,4,1,0", "5,0,2,3,1,1"] {
        let graph = cagespec(&["construct", "--spec", spec]);
        assert_eq!(graph.status.code(), Some(0));
        let via_graph = json(&piped(&["spectrum", "--graph", "-"], &graph.stdout));
        let direct = json(&cagespec(&["spectrum", "--spec", spec]));
        assert_eq!(via_graph, direct, "{spec}");
    }
}

#[test]
fn construct_formats() {
    let rows = csv_rows(&cagespec(&["construct", "--spec", "6,2,-2,6,0,0", "--format", "csv"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][10], "2;20");
    assert_eq!(&rows[0][11], "3;-1;-1;-1");

    let out = cagespec(&["construct", "--spec", "6,2,-2,6,0,0", "--format", "human"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Z_2 x Z_20"));
}

#[test]
fn fold_reports_isomorphism() {
    let v = json(&cagespec(&["fold", "--spec", "6,2,-2,6,0,0"]));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["vertex_count"], 40);
    assert_eq!(v["labels"].as_array().unwrap().len(), 40);
}

#[test]
fn census_small() {
    let rows = csv_rows(&cagespec(&["census", "--max-index", "1"]));
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let s: u32 = row[7].parse().unwrap();
        let f3: u32 = row[8].parse().unwrap();
        assert!([0, 2, 3, 4].contains(&s));
        assert_eq!(s + f3, 4);
    }

    let deduped = csv_rows(&cagespec(&["census", "--max-index", "1", "--dedup"]));
    assert!(deduped.len() <= 4);
}

#[test]
fn census_contains_the_index_forty_example() {
    let rows = csv_rows(&cagespec(&["census", "--max-index", "40", "--jobs", "2"]));
    assert!(rows.iter().any(|r| &r[10] == "2;20" && &r[7] == "0" && &r[11] == "3;-1;-1;-1"));

    let header = cagespec(&["census", "--max-index", "3"]);
    let first = String::from_utf8_lossy(&header.stdout).lines().next().unwrap().to_owned();
    assert_eq!(first, "p,q,r,s,p1,p2,n_vertices,semiedges,f3,f6,moduli,m_canonical,spectral_radius");
}

#[test]
fn census_is_deterministic_across_thread_counts() {
    let one = cagespec(&["census", "--max-index", "20", "--jobs", "1"]);
    let many = Command::new(env!("CARGO_BIN_EXE_cagespec"))
        .args(["census", "--max-index", "20"])
        .env("CAGESPEC_JOBS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn crystal_families() {
    let v = json(&cagespec(&["crystal", "--family", "path", "--sublattice", "4"]));
    assert_eq!(v["spectrum"]["M_canonical"], serde_json::json!([2, 0]));
    assert_eq!(v["spectrum"]["s"], 2);

    let v = json(&cagespec(&["crystal", "--family", "grid", "--d", "2", "--sublattice", "7,3,0,4"]));
    assert_eq!(v["spectrum"]["full"].as_array().unwrap().len(), 28);
    assert_eq!(v["spectrum"]["s"], 4);
    assert_eq!(v["spectrum"]["oracle_match"], true);

    let v = json(&cagespec(&["crystal", "--family", "diamond", "--d", "3", "--sublattice", "2,0,0,0,2,0,0,0,2", "--a-choice", "offset"]));
    assert_eq!(v["spectrum"]["s"], 0);
    let m = v["spectrum"]["M_canonical"].clone();
    assert!(m == serde_json::json!([4, -2, -2]) || m == serde_json::json!([4, 0, -2, -2]), "{m}");

    let a = cagespec(&["crystal", "--family", "grid", "--seed", "9"]);
    let b = cagespec(&["crystal", "--family", "grid", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_passes_on_a_small_census() {
    let v = json(&cagespec(&["verify", "--max-index", "10"]));
    assert_eq!(v["violations"], serde_json::json!([]));
    assert!(v["specs_checked"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["snf", "[[1,2],[3"][..],
        &["snf", "[[1,2],[3]]"],
        &["construct", "--spec", "1,2,3"],
        &["construct", "--spec", "1,2,2,4,0,0"],
        &["census", "--max-index", "0"],
        &["spectrum", "--spec", "1,0,0,1,0,0", "--tolerance", "-1"],
        &["crystal", "--family", "grid", "--d", "2", "--sublattice", "1,2,3"],
        &["crystal", "--family", "grid", "--d", "2", "--sublattice", "1,2,2,4"],
        &["nonsense"],
    ] {
        assert_eq!(cagespec(args).status.code(), Some(2), "{args:?}");
    }
    let bad_graph = br#"{"moduli":[4],"sum_set":[[1]],"edges":[[0,1,1]]}"#;
    assert_eq!(piped(&["spectrum", "--graph", "-"], bad_graph).status.code(), Some(2));
}

#[test]
fn computation_failures_exit_three() {
    let huge = "[[9223372036854775807,9223372036854775806],[9223372036854775805,9223372036854775807]]";
    assert_eq!(cagespec(&["snf", huge]).status.code(), Some(3));
    assert_eq!(cagespec(&["spectrum", "--spec", "6,2,-2,6,0,0", "--tolerance", "1e-300"]).status.code(), Some(3));
}
