//! End-to-end checks of the binary: exit-code contract, golden-output
//! determinism, and the thin-adapter rule (the CLI's JSON must equal
//! what the library computes directly).

use std::process::{Command, Output};

fn vardim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vardim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = vardim(args);
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(
        vardim(&["check", "--variety", "NB", "zxyxz = zyxyz"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        vardim(&["check", "--variety", "V3", "zxyz = zyxz"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        vardim(&["check", "--variety", "NOPE", "x = x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(vardim(&["check"]).status.code(), Some(2));
    assert_eq!(
        vardim(&["hyperassoc", "--variety", "RegB"]).status.code(),
        Some(0)
    );
    assert_eq!(
        vardim(&["hyperassoc", "--variety", "B"]).status.code(),
        Some(1)
    );
    // backend caps surface as errors
    assert_eq!(
        vardim(&["check", "--variety", "B", "xyzw = wzyx"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spec_level_answers() {
    assert_eq!(
        stdout(&["check", "--variety", "NB", "zxyxz = zyxyz"]).trim(),
        "true"
    );
    assert!(stdout(&["dimension", "--variety", "RegB"]).starts_with("4\n"));
    assert_eq!(
        stdout(&["derive-identity", "--sigma", "s5", "zxy = zyx"]).trim(),
        "zxyxz = zyxyz"
    );
    assert_eq!(
        stdout(&["free-algebra", "--gens", "2", "--variety", "B", "--count"]).trim(),
        "6"
    );
    assert_eq!(
        stdout(&["normalize", "--variety", "V3", "zxyxz"]).trim(),
        "V3:zxy"
    );
    assert_eq!(
        stdout(&["normalize", "--variety", "NB", "zxyxz"]).trim(),
        "NB:(z,{x,y,z},z)"
    );
    assert_eq!(stdout(&["normalize", "xyxy"]).trim(), "xy");
    assert_eq!(
        stdout(&["derived-variety", "--variety", "V5", "--sigma", "s5"]).trim(),
        "V3"
    );
    assert_eq!(
        stdout(&["derived-set", "--variety", "NB"]).trim(),
        "{LZ, RZ, V1, V2, NB}"
    );
}

#[test]
fn dimension_table_json_is_deterministic_and_thin() {
    let first = stdout(&["dimension-table", "--json"]);
    let second = stdout(&["dimension-table", "--json"]);
    assert_eq!(
        first, second,
        "table output must be byte-identical across runs"
    );
    let threaded = stdout(&["dimension-table", "--json", "--threads", "4"]);
    assert_eq!(first, threaded, "threading must not change the output");

    // thin adapter: byte-for-byte the library's own serialization
    let table = vardim::registry::shared().dimension_table().unwrap();
    let expected = format!("{}\n", serde_json::to_string_pretty(&table).unwrap());
    assert_eq!(first, expected);
}

#[test]
fn lattice_commands() {
    assert_eq!(stdout(&["lattice-check", "x v (x ^ y) = x"]).trim(), "true");
    assert_eq!(
        vardim(&["lattice-check", "x v y = x ^ y"]).status.code(),
        Some(1)
    );
    let enumerated = stdout(&["lattice-enumerate", "--depth", "2"]);
    assert!(enumerated.starts_with("4\n"));

    let cert = stdout(&["fluidity-cert", "--models", "chain2", "--distributive"]);
    assert!(cert.starts_with("dimension 0\n"));
    let cert = stdout(&["fluidity-cert", "--models", "M3"]);
    assert!(cert.starts_with("dimension 0\n"));
    assert!(cert.contains("selfdual"));

    let dot = stdout(&["lattice-dot"]);
    assert!(dot.starts_with("digraph varieties {"));
    assert!(dot.contains("\"NB\" [label=\"NB: zxyz≈zyxz\"];"));
    assert!(dot.contains("\"T\" -> \"LZ\";"));
    assert!(dot.ends_with("}\n"));
}

#[test]
fn model_files_round_trip_through_json() {
    let dir = std::env::temp_dir().join(format!("vardim-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    // the four-element boolean lattice
    std::fs::write(
        &path,
        r#"{"size":4,"ops":{
            "join":[[0,1,2,3],[1,1,3,3],[2,3,2,3],[3,3,3,3]],
            "meet":[[0,0,0,0],[0,1,0,1],[0,0,2,2],[0,1,2,3]]}}"#,
    )
    .unwrap();
    let out = stdout(&[
        "lattice-check",
        "--file",
        path.to_str().unwrap(),
        "x ^ (y v z) = (x ^ y) v (x ^ z)",
    ]);
    assert_eq!(out.trim(), "true");

    let derived = vardim(&[
        "lattice-derive",
        "--file",
        path.to_str().unwrap(),
        "--sigma",
        "join:=x^y,meet:=xvy",
    ]);
    assert_eq!(
        derived.status.code(),
        Some(0),
        "dual of a lattice is a lattice"
    );

    // a non-lattice is rejected with a validation error
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"size":2,"ops":{"join":[[0,0],[1,1]],"meet":[[0,0],[0,1]]}}"#,
    )
    .unwrap();
    let out = vardim(&["lattice-check", "--file", bad.to_str().unwrap(), "x = x"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_reports_witnesses_on_failure() {
    let out = vardim(&["check", "--variety", "SL", "xy = x"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("false"));
    assert!(text.contains("witness"));

    let json = vardim(&["check", "--variety", "SL", "xy = x", "--json"]);
    let text = String::from_utf8(json.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["holds"], serde_json::json!(false));
    assert_eq!(v["witness"]["lhs"], serde_json::json!("xy"));
}
