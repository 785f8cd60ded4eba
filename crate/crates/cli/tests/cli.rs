use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hopf_core::io::{double_from_json, hopf_from_json, hopf_to_json, read_json, tensor_to_json, to_json_string, write_json};
use hopf_core::{group_algebra, CTensor, GroupTable, HopfSpec, C64};
use serde_json::{json, Value};
use tempfile::TempDir;

fn hopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn group(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "groups", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_spec(path: &str, h: &HopfSpec) {
    write_json(Path::new(path), &hopf_to_json(h)).unwrap();
}

#[test]
fn make_writes_specs_of_the_right_dimension() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "z2.json");
    assert_eq!(code(&hopf(&["make", &group("z2.json"), "--kind", "group-algebra", "-o", &out])), 0);
    assert_eq!(read_json(Path::new(&out)).unwrap()["dim"], json!(2));
    let out = path(&dir, "fs3.json");
    assert_eq!(code(&hopf(&["make", &group("s3.json"), "--kind", "function-algebra", "-o", &out])), 0);
    assert_eq!(read_json(Path::new(&out)).unwrap()["dim"], json!(6));
    let out = path(&dir, "dual.json");
    assert_eq!(code(&hopf(&["make", &group("s3.json"), "--kind", "dual", "-o", &out])), 0);
    assert_eq!(code(&hopf(&["verify", &out])), 0);
}

#[test]
fn make_output_round_trips_byte_identically() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "fs3.json");
    hopf(&["make", &group("s3.json"), "--kind", "function-algebra", "-o", &out]);
    let text = std::fs::read_to_string(&out).unwrap();
    let h = hopf_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(to_json_string(&hopf_to_json(&h)), text);
    let again = path(&dir, "again.json");
    hopf(&["make", &group("s3.json"), "--kind", "function-algebra", "-o", &again]);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text);
}

#[test]
fn invalid_group_exits_3_naming_the_axiom() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, r#"{"order":2,"product":[[1,1],[1,1]]}"#).unwrap();
    let o = hopf(&["make", &bad, "--kind", "group-algebra", "-o", &path(&dir, "x.json")]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("identity"), "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&hopf(&["make", &bad, "--kind", "group-algebra", "-o", &path(&dir, "x.json")])), 2);
    assert_eq!(code(&hopf(&["verify", &bad])), 2);
    std::fs::write(&bad, r#"{"dim":2}"#).unwrap();
    assert_eq!(code(&hopf(&["verify", &bad])), 2);
}

#[test]
fn verify_group_algebra_passes_with_zero_residuals() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "cs3.json");
    hopf(&["make", &group("s3.json"), "--kind", "group-algebra", "-o", &spec]);
    let o = hopf(&["verify", &spec]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("tolerance: abs 2e-9, rel 1e-8"), "{text}");
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with("overall") && (l.ends_with("pass") || l.ends_with("FAIL"))).collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|l| l.contains(" 0.000e0 ") && l.ends_with("pass")), "{text}");
}

#[test]
fn zeroed_antipode_fails_verification() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "broken.json");
    let mut parts = group_algebra(&GroupTable::symmetric(3)).into_parts();
    parts.antipode = CTensor::zeros(&[6, 6]).unwrap();
    write_spec(&spec, &HopfSpec::from_parts(parts).unwrap());
    let o = hopf(&["verify", &spec]);
    assert_eq!(code(&o), 1);
    let line = stdout(&o).lines().find(|l| l.starts_with("hopf.antipode ")).unwrap().to_string();
    assert!(line.ends_with("FAIL"), "{line}");
}

#[test]
fn json_report_schema() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "z3.json");
    hopf(&["make", &group("z3.json"), "--kind", "group-algebra", "-o", &spec]);
    let o = hopf(&["verify", &spec, "--json", "--tolerance", "1e-10"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tolerance"]["abs"], json!(1e-10));
    assert_eq!(v["report"]["overall"], json!(true));
    let entry = &v["report"]["entries"][0];
    assert!(entry["check"].is_string() && entry["residual"].is_number() && entry["pass"].is_boolean());
}

#[test]
fn verify_pairing_file() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "p.json");
    assert_eq!(code(&hopf(&["pairing", &group("s3.json"), "--kind", "canonical", "-o", &p])), 0);
    let o = hopf(&["verify", &p]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("pairing.star_compat_mirror"));
    assert!(stdout(&o).contains("galois.galois_inverse_duality"));
}

#[test]
fn z2_double_with_oracle() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "p.json");
    let d = path(&dir, "d.json");
    hopf(&["pairing", &group("z2.json"), "--kind", "canonical-swapped", "-o", &p]);
    let o = hopf(&["double", &p, "-o", &d, "--verify", "--oracle", &group("z2.json"), "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle_deviation"], json!(0.0));
    let export = read_json(Path::new(&d)).unwrap();
    assert_eq!(export["dim"], json!(4));
    assert!(export.get("embed_A").is_some() && export.get("index_map").is_some());
    assert!(double_from_json(&export).unwrap().is_some());
    assert_eq!(hopf_from_json(&export).unwrap().dim(), 4);
}

#[test]
fn degenerate_pairing_exits_4() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "p.json");
    hopf(&["pairing", &group("z2.json"), "--kind", "canonical", "-o", &p]);
    let mut v = read_json(Path::new(&p)).unwrap();
    v["P"] = tensor_to_json(&CTensor::zeros(&[2, 2]).unwrap());
    write_json(Path::new(&p), &v).unwrap();
    assert_eq!(code(&hopf(&["double", &p, "-o", &path(&dir, "d.json")])), 4);
    assert_eq!(code(&hopf(&["double", &p, "-o", &path(&dir, "d.json"), "--force"])), 4);
}

#[test]
fn s3_pairing_gives_dim_36_double() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "p.json");
    let d = path(&dir, "d.json");
    hopf(&["pairing", &group("s3.json"), "--kind", "canonical", "-o", &p]);
    assert_eq!(code(&hopf(&["double", &p, "-o", &d])), 0);
    assert_eq!(read_json(Path::new(&d)).unwrap()["dim"], json!(36));
}

#[test]
fn gns_on_z2_double_and_norm_table() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "p.json");
    let d = path(&dir, "d.json");
    hopf(&["pairing", &group("z2.json"), "--kind", "canonical", "-o", &p]);
    hopf(&["double", &p, "-o", &d]);
    // (u, δ_e) has index 1·2 + 0
    let norms = path(&dir, "norms.json");
    let x = CTensor::basis(4, 2).unwrap();
    std::fs::write(&norms, to_json_string(&json!([{"name": "u_delta_e", "coords": tensor_to_json(&x)}]))).unwrap();
    let o = hopf(&["gns", &d, "--samples", "100", "--seed", "7", "--norms", &norms, "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let norm = v["norms"][0]["vector_norm"].as_f64().unwrap();
    assert!((norm - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    let checks: Vec<&str> = v["report"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["check"].as_str().unwrap())
        .collect();
    assert!(checks.contains(&"isometry.product_norm"));
}

#[test]
fn gns_without_solvable_integral_exits_5() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "s.json");
    let mut parts = group_algebra(&GroupTable::cyclic(2)).into_parts();
    parts.integral = None;
    parts.comult.set(&[1, 0, 0], C64::new(0.1, 0.0));
    write_spec(&spec, &HopfSpec::from_parts(parts).unwrap());
    let o = hopf(&["gns", &spec]);
    assert_eq!(code(&o), 5);
    assert!(stderr(&o).contains("no invariant integral"), "{}", stderr(&o));
}

#[test]
fn gns_with_indefinite_gram_exits_5() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "s.json");
    let mut parts = group_algebra(&GroupTable::cyclic(4)).into_parts();
    parts.star = CTensor::identity(4).unwrap();
    write_spec(&spec, &HopfSpec::from_parts(parts).unwrap());
    let o = hopf(&["gns", &spec]);
    assert_eq!(code(&o), 5);
    assert!(stderr(&o).contains("not positive definite"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "p.json");
    hopf(&["pairing", &group("s3.json"), "--kind", "canonical-swapped", "-o", &p]);
    let d = path(&dir, "d.json");
    let run = || {
        let double = hopf(&["double", &p, "-o", &d, "--verify", "--oracle", &group("s3.json"), "--json"]);
        let gns = hopf(&["gns", &d, "--samples", "20", "--seed", "11", "--json"]);
        (std::fs::read(&d).unwrap(), double.stdout, gns.stdout)
    };
    let first = run();
    assert_eq!(first, run());
}
