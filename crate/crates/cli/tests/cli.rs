use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagtutte"))
        .args(args)
        .env("FLAGTUTTE_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn compute_golden_outputs() {
    let cases = [
        ("kt", "flag_u13_u23.json", "x^2*y^2 + x^2*y + x*y^2 + x^2 + 2*x*y + y^2"),
        ("lvt", "flag_u13_u23.json", "x*z + y + 2*z + 2"),
        ("tutte", "uniform_1_2.json", "x + y"),
        ("h", "uniform_1_2.json", "s"),
        ("kchar", "flag_u13_u23.json", "q^2 - 2*q + 1"),
    ];
    for (inv, file, expected) in cases {
        let o = run(&["compute", "--invariant", inv, "--input", &data(file)]);
        assert_eq!(o.status.code(), Some(0), "{inv}");
        assert_eq!(stdout(&o).trim_end(), expected, "{inv}");
    }
}

#[test]
fn compute_inline_json_and_equivariant() {
    let o = run(&[
        "compute",
        "--invariant",
        "kt",
        "--equivariant",
        "--format",
        "json",
        "--input",
        r#"{"type":"uniform","r":1,"n":2}"#,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["polynomial"], "x + y");
    assert_eq!(v["equivariant"]["n"], 2);
    assert_eq!(v["equivariant"]["terms"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--identity", "brion-example"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS sum t_1t_2+t_1t_3+t_2^2+t_2t_3+t_3^2"));

    let o = run(&["verify", "--identity", "kt22", "--input", &data("flag_u13_u23.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("KT(2,2)=48, |pB|=6"));

    let o = run(&["verify", "--identity", "delcont", "--input", r#"{"type":"uniform","r":2,"n":3}"#]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_exit_code_follows_the_verdict() {
    let o = run(&["verify", "--identity", "h-uv", "--input", &data("flag_u24_u34_lvdiagram.json")]);
    let out = stdout(&o);
    assert!(out.contains("phi = 2*u*v + 1"), "{out}");
    let failed = out.lines().last().unwrap().starts_with("FAIL");
    assert_eq!(o.status.code(), Some(if failed { 4 } else { 0 }));
}

#[test]
fn kchi_observations_never_fail() {
    let o = run(&["verify", "--identity", "kchi-conjecture", "--input", r#"{"type":"uniform","r":2,"n":4}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("q^2 - 2*q + 1"));
}

#[test]
fn pseudobases_listing() {
    let o = run(&["pseudobases", "--input", &data("flag_u13_u23.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("sizes {1:3, 2:3}"));
    let o = run(&["pseudobases", "--format", "json", "--input", &data("flag_u14_u34.json")]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["sizes"], serde_json::json!({"1": 4, "2": 6, "3": 4}));
    let o = run(&["pseudobases", "--input", &data("k4_graphic.json")]);
    assert!(stdout(&o).trim_end().ends_with("sizes {3:16}"));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        vec!["compute", "--invariant", "kt", "--input", r#"{"type":"uniform","r":3,"n":2}"#],
        vec!["compute", "--invariant", "kt", "--input", "no/such/file.json"],
        vec!["compute", "--invariant", "kt", "--input", r#"{"type":"uniform","#],
        vec!["compute", "--invariant", "nope", "--input", r#"{"type":"uniform","r":1,"n":2}"#],
        vec!["verify", "--identity", "nope"],
        vec![
            "compute",
            "--invariant",
            "tutte",
            "--input",
            r#"{"type":"flag","constituents":[{"type":"uniform","r":2,"n":3},{"type":"uniform","r":1,"n":3}]}"#,
        ],
        vec!["compute", "--invariant", "h", "--input", r#"{"type":"uniform","r":1,"n":1}"#],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&["compute", "--invariant", "kt", "--input", r#"{"type":"uniform","#]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1 column"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["corpus", "--kind", "flags", "--max-n", "4"]);
    let b = run(&["corpus", "--kind", "flags", "--max-n", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let first = stdout(&a).lines().next().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["type"], "flag");

    let args = ["compute", "--invariant", "kt", "--equivariant", "--input", &data("flag_u14_u34.json")];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn thread_flag_is_accepted() {
    let o = run(&["--threads", "2", "compute", "--invariant", "tutte", "--input", &data("k4_graphic.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("x^3 + "));
}
