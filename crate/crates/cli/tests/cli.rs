use std::process::{Command, Output};

fn zdense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zdense"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn triangle_gens_roundtrip() {
    let out = zdense(&["triangle-gens"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["field"], "Q(sqrt2)");
    assert_eq!(v["generators"], serde_json::json!(["x", "y"]));
    // x = [[0,-1],[1,1]]
    let x = &v["images"][0]["entries"];
    assert_eq!(x[0]["a"], "0");
    assert_eq!(x[1]["a"], "-1");
    assert_eq!(x[3]["a"], "1");
    // y entries carry sqrt2 parts
    let y = &v["images"][1]["entries"];
    assert_eq!(y[1], serde_json::json!({"a": "-1", "b": "-1"}));
}

#[test]
fn orbifold_gens_dimensions() {
    for n in ["3", "5", "7"] {
        let out = zdense(&["orbifold-gens", "--n", n]);
        assert!(out.status.success(), "n={n}");
        let v = stdout_json(&out);
        assert_eq!(v["generators"].as_array().unwrap().len(), 4);
        assert_eq!(v["images"][0]["rows"], n.parse::<usize>().unwrap());
    }
}

#[test]
fn even_n_rejected_at_parse() {
    let out = zdense(&["orbifold-gens", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = zdense(&["certify", "--n", "2", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_t_rejected_at_parse() {
    let out = zdense(&["bend", "--n", "3", "--t=-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = zdense(&["certify", "--n", "3", "--t=-1/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bend_at_zero_reproduces_base() {
    let base = stdout_json(&zdense(&["orbifold-gens", "--n", "3"]));
    let bent = stdout_json(&zdense(&["bend", "--n", "3", "--t", "0"]));
    assert_eq!(bent["t"], "0");
    assert_eq!(bent["representation"]["images"], base["images"]);
}

#[test]
fn certify_single_t() {
    let out = zdense(&["certify", "--n", "3", "--t", "1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["psl2_base"]["pass"], true);
    let cert = &v["certificates"][0];
    assert_eq!(cert["schema"], "zdense-cert/1");
    assert_eq!(cert["verdict"], "ZARISKI_DENSE_CERTIFIED");
    assert_eq!(cert["t"], "1");
    for stage in cert["stages"].as_array().unwrap() {
        assert_eq!(stage["pass"], true, "stage {}", stage["stage"]);
    }
}

#[test]
fn certify_t_list_writes_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("certs.json");
    let out = zdense(&[
        "certify",
        "--n",
        "3",
        "--t-list",
        "0,1,1/2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // summary on stdout, JSON in the file
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("verdict=FUCHSIAN_LOCUS"));
    assert!(summary.contains("verdict=ZARISKI_DENSE_CERTIFIED"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 3);
    assert_eq!(certs[0]["verdict"], "FUCHSIAN_LOCUS");
    assert_eq!(certs[1]["verdict"], "ZARISKI_DENSE_CERTIFIED");
    assert_eq!(certs[2]["verdict"], "ZARISKI_DENSE_CERTIFIED");
    // no stray temp file
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn certify_with_rationalize() {
    let out = zdense(&["certify", "--n", "3", "--t", "1", "--rationalize"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let cert = &v["certificates"][0];
    let stages = cert["stages"].as_array().unwrap();
    assert!(stages.iter().any(|s| s["stage"] == "rationality" && s["pass"] == true));
    assert!(cert["rational_images"].is_array());
    assert_eq!(cert["rational_images"][0]["field"], "Q");
}

#[test]
fn cover_output() {
    let out = zdense(&["cover"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["index"], 3);
    assert_eq!(v["genus"], 2);
    assert_eq!(v["euler_characteristic"], -2);
    assert_eq!(v["torsion_free"], true);
}

#[test]
fn integralize_at_t_zero() {
    let out = zdense(&["integralize", "--n", "3", "--t", "0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    for g in v["generators"].as_array().unwrap() {
        assert_eq!(g["field"], "Q");
        for e in g["entries"].as_array().unwrap() {
            let s = e.as_str().unwrap();
            assert!(!s.contains('/'), "non-integer entry {s}");
        }
    }
}

#[test]
fn integralize_off_locus_exits_3() {
    // no invariant lattice exists at t=1: resource-bound exit code
    let out = zdense(&["integralize", "--n", "3", "--t", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tight_sat_bound_exits_3() {
    let out = zdense(&["integralize", "--n", "5", "--t", "0", "--sat-bound", "0"]);
    assert_eq!(out.status.code(), Some(3));
}
