use std::path::PathBuf;
use std::process::{Command, Output};

use nilper::exactmath::rational::parse_vector;
use nilper::fixture::{shipped, Fixture};
use nilper::sweep::{scan, ScanOptions};
use nilper::torus::classify;

fn nilper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilper")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nilper-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_reference_points() {
    let o = nilper(&["classify", "--fixture", "a1", "--point", "1/5,2/5"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("Periodic"));
    let o = nilper(&["classify", "--fixture", "a1", "--point", "1/2,0"]);
    assert!(stdout(&o).starts_with("EventuallyPeriodic"));
    let o = nilper(&["classify", "--fixture", "identity", "--point", "3/7,-1/4"]);
    assert_eq!(stdout(&o).lines().next(), Some("Periodic period=1"));
}

#[test]
fn cli_verdicts_match_the_library() {
    let Fixture::Torus(f) = shipped("a2").unwrap() else { panic!("torus fixture") };
    for p in ["1/3,2/3", "1/4,1/2", "0,1/2", "5/6,1/9"] {
        let o = nilper(&["classify", "--fixture", "a2", "--point", p, "--json"]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let lib = classify(&f.map, &parse_vector(p).unwrap()).unwrap().0.verdict;
        assert_eq!(v["verdict"], serde_json::to_value(lib).unwrap(), "{p}");
    }
}

#[test]
fn nil_infra_and_cover_fixtures_classify() {
    let o = nilper(&["classify", "--fixture", "phi2", "--point", "1/2,0,0"]);
    assert_eq!(stdout(&o).lines().next(), Some("EventuallyPeriodic preperiod=1 period=1"));
    let o = nilper(&["classify", "--fixture", "klein_bottle", "--point", "1/5,1/7", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["verdict"], "Periodic");
    assert!(v["covers"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    let o = nilper(&["classify", "--fixture", "expand_cover", "--point", "0,0", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["fiber"].as_array().unwrap().len(), 6);
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "A": [[1, 0]], "b": ["0", "0"]}"#).unwrap();
    assert_eq!(nilper(&["classify", "--fixture", bad.to_str().unwrap(), "--point", "0,0"]).status.code(), Some(2));
    assert_eq!(nilper(&["classify", "--fixture", "/no/such/file.json", "--point", "0,0"]).status.code(), Some(2));
    assert_eq!(nilper(&["classify", "--fixture", "a1", "--point", "sqrt(2),sqrt(3)"]).status.code(), Some(3));
    assert_eq!(nilper(&["classify", "--fixture", "a1", "--point", "1/2+sqrt(2),0"]).status.code(), Some(3));
    assert_eq!(nilper(&["classify", "--fixture", "a1", "--point", "1/2"]).status.code(), Some(3));
    assert_eq!(nilper(&["scan", "--fixture", "sqrt2_translation", "--max-den", "3"]).status.code(), Some(3));
}

#[test]
fn scan_files_are_identical_across_workers_and_match_the_library() {
    let mut outputs = Vec::new();
    for w in ["1", "2", "8"] {
        let path = scratch(&format!("a3-{w}.json"));
        let o = nilper(&["scan", "--fixture", "a3", "--max-den", "9", "--workers", w, "--out", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read_to_string(path).unwrap());
    }
    assert!(outputs.windows(2).all(|p| p[0] == p[1]));
    let lib = scan(&shipped("a3").unwrap(), ScanOptions { max_den: 9, workers: 1 }, None).unwrap();
    assert_eq!(outputs[0], lib.to_json());
}

#[test]
fn density_and_fixture_listing() {
    let o = nilper(&["density", "--fixture", "a1", "--max-den", "7"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ms: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["m"].as_u64().unwrap()).collect();
    assert_eq!(ms, vec![3, 5, 7]);
    let o = nilper(&["density", "--fixture", "sqrt2_translation", "--max-den", "7"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["per_empty"], true);
    let dir = scratch("fixtures");
    let o = nilper(&["fixtures", "--out", dir.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().count(), 10);
    let copy = dir.join("klein_bottle.json");
    let o = nilper(&["classify", "--fixture", copy.to_str().unwrap(), "--point", "1/3,0"]);
    assert!(stdout(&o).starts_with("EventuallyPeriodic"));
}
