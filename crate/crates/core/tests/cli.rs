use std::io::Write;
use std::process::{Command, Output, Stdio};

fn twoassoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoassoc")).args(args).env_remove("TWOASSOC_MAX_DIM").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn face_vector_prints_the_row() {
    let o = twoassoc(&["face-vector", "--n", "3,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "6,6,1\n");
}

#[test]
fn verify_reports_rank() {
    let o = twoassoc(&["verify", "--n", "1,1,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("certificate rank 2"));
    let j: serde_json::Value = serde_json::from_slice(&twoassoc(&["verify", "--r", "5", "--json"]).stdout).unwrap();
    assert_eq!(j["check"]["rank"], 3);
}

#[test]
fn oracle_check_matches() {
    assert_eq!(stdout(&twoassoc(&["oracle-check", "--n", "1,1"])), "match\n");
}

#[test]
fn compare_appendix_passes() {
    let o = twoassoc(&["compare-appendix"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("20 of 20 rows match\n"));
}

#[test]
fn output_is_deterministic() {
    let a = twoassoc(&["enumerate", "--n", "2,1", "--list", "--json"]);
    let b = twoassoc(&["enumerate", "--n", "2,1", "--list", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn max_dim_bound_and_env_override() {
    let o = twoassoc(&["enumerate", "--n", "5,1"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["ok"], false);
    let with_bound = |bound: &str| {
        Command::new(env!("CARGO_BIN_EXE_twoassoc"))
            .args(["face-vector", "--n", "2,1,0"])
            .env("TWOASSOC_MAX_DIM", bound)
            .output()
            .unwrap()
    };
    assert_eq!(with_bound("2").status.code(), Some(1));
    assert_eq!(stdout(&with_bound("3")), "30,45,17,1\n");
}

#[test]
fn convert_round_trips_through_stdin() {
    let run = |input: &str| {
        let mut child = Command::new(env!("CARGO_BIN_EXE_twoassoc"))
            .arg("convert")
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
        let o = child.wait_with_output().unwrap();
        assert!(o.status.success());
        stdout(&o)
    };
    let pair = r#"{"n":[1,1],"bubble":{"kind":"C2","children":[{"kind":"SEAM","children":[{"kind":"MARK","children":[]}]},{"kind":"SEAM","children":[{"kind":"MARK","children":[]}]}]}}"#;
    let brackets = run(pair);
    assert!(brackets.contains("brackets2"));
    let back = run(&brackets);
    assert_eq!(run(&back), brackets);
    assert_eq!(run(&run("[[[],[]],[]]")).trim(), "[[[],[]],[]]");
}

#[test]
fn decompose_by_key() {
    let o = twoassoc(&["decompose", "--n", "2,1", "--face", "C(S(m,m),S(m))@[[],[]]"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("17 faces"));
}

#[test]
fn export_dot_layers() {
    let o = twoassoc(&["export", "--r", "4", "--format", "dot"]);
    assert_eq!(stdout(&o).matches("rank=same").count(), 3);
}
