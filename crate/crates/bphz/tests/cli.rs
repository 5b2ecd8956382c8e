use std::process::{Command, Output};

fn bphz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bphz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quartic_coproduct_text() {
    let o = bphz(&["coproduct", "--expr", "z4^4", "--ell", "-1", "--dim", "3", "--rule", "2,4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), " 96  z3^2  (x)  z2 z4^2\n768  z3^2 . z3^2  (x)  z2^2\n");
}

#[test]
fn json_is_byte_stable() {
    let args = ["coproduct", "--expr", "z4^6", "--rule", "2,4", "--json"];
    let a = bphz(&args);
    let b = bphz(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let first = &v.as_array().unwrap()[0];
    assert_eq!(first["key"][0], "z3^2");
    assert_eq!(first["num"], "240");
    assert_eq!(first["den"], "1");
}

#[test]
fn verify_suite_passes() {
    let o = bphz(&["verify", "--suite", "orbit-stabilizer", "--max-edges", "6"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("pass"));
}

#[test]
fn phi4_report_lists_counterterms() {
    let o = bphz(&["phi4", "--max-n", "6"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("gamma_2  = 8*alpha4^2*Pi[z3^2]"), "{s}");
    assert!(s.contains("resummation to order 8: ok"));
}

#[test]
fn triple_edge_insertion() {
    let o = bphz(&["insert", "--expr", "n=2; e=1-2,1-2,1-2", "--into", "n=2; e=1-2,1-2", "--rule", "2,4"]);
    assert_eq!(stdout(&o), "4  n=3; e=1-2,1-3,2-3,2-3,2-3\n");
}

#[test]
fn renormalised_value_on_a_lattice() {
    let dir = std::env::temp_dir().join(format!("bphz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.json");
    std::fs::write(&path, r#"{"d": 1, "N": 2, "K": [2.0, 0.5]}"#).unwrap();
    let o = bphz(&["bphz", "--expr", "z4^4", "--rule", "2,4", "--kernel", path.to_str().unwrap(), "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["numeric"].as_f64().unwrap().is_finite());
    assert_eq!(v["kernel"]["N"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn syntax_errors_report_offsets_and_exit_2() {
    let o = bphz(&["lift", "--expr", "z4 . q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 5"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bphz(&["coproduct"]).status.code(), Some(2));
    assert_eq!(bphz(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bphz(&["degree", "--expr", "z4", "--ell", "3/2"]).status.code(), Some(2));
    assert_eq!(bphz(&["degree", "--expr", "z4", "--rule", "2,x"]).status.code(), Some(2));
    assert_eq!(bphz(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn degree_with_rational_ell() {
    let o = bphz(&["degree", "--expr", "z3^2", "--ell", "-1/2", "--dim", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // (-1/4) * 6 + 2 * 1 = 1/2
    assert_eq!(v["degree"]["num"], "1");
    assert_eq!(v["degree"]["den"], "2");
    assert_eq!(v["divergent"], false);
}
