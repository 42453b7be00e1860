use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jetbracket"))
}

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
}

fn check(name: &str, extra: &[&str]) -> Output {
    bin()
        .arg("check")
        .arg(problem(name))
        .args(extra)
        .output()
        .unwrap()
}

fn with_stdin(sub: &str, input: &str) -> Output {
    let mut child = bin()
        .arg(sub)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    for (file, code) in [
        ("kdv.jb", 0),
        ("potential_kdv.jb", 0),
        ("kdv_negative.jb", 1),
        ("heat.jb", 1),
        ("transport.jb", 3),
    ] {
        assert_eq!(check(file, &[]).status.code(), Some(code), "{file}");
    }
    let dir = std::env::temp_dir().join(format!("jetbracket_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.jb");
    std::fs::write(&bad, "vars x[1], u[1]\nevolve u = sin(u)\n").unwrap();
    let out = bin().arg("check").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains(":2:12: non-polynomial right-hand side"),
        "{err}"
    );
    let missing = bin()
        .arg("check")
        .arg(dir.join("missing.jb"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_mention_the_expected_conclusions() {
    let kdv = stdout(&check("kdv.jb", &[]));
    assert!(kdv.contains("A1, A2: Hamiltonian pair, automatically compatible"));
    assert!(kdv.contains("(seed 20031017)"));
    let transport = stdout(&check("transport.jb", &[]));
    assert!(transport.contains("conclusion: withheld"));
    assert!(transport.contains("hypothesis violated: order ≤ 1"));
    let heat = stdout(&check("heat.jb", &[]));
    assert!(heat.contains("residual: 2*D_xxx"));
    let pkdv = stdout(&check("potential_kdv.jb", &[]));
    assert!(pkdv.contains("B is symplectic"));
}

#[test]
fn json_is_byte_stable_and_echoes_the_seed() {
    let a = check("kdv.jb", &["--json", "-", "--seed", "7"]);
    let b = check("kdv.jb", &["--json", "-", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["seed"], 7);
    assert_eq!(json["schema"], "jetbracket-report/1");
    assert_eq!(json["checks"][4]["details"]["certificates"][0]["seed"], 7);
    let other = check("kdv.jb", &["--json", "-", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn json_matches_golden_file() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/kdv.json");
    let out = check("kdv.jb", &["--json", "-"]);
    let expected = std::fs::read_to_string(&golden).unwrap();
    assert_eq!(stdout(&out), expected);
}

#[test]
fn json_written_to_file() {
    let path = std::env::temp_dir().join(format!("jetbracket_report_{}.json", std::process::id()));
    let out = check(
        "heat.jb",
        &[
            "--json",
            path.to_str().unwrap(),
            "--samples",
            "2",
            "--budget",
            "20",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[1] check 2form B: FAIL"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(json["samples"], 2);
    assert_eq!(json["checks"][0]["verdict"], "fail");
    let residual = &json["checks"][0]["details"]["residual"]["entries"][0];
    assert_eq!(residual["text"], "2*D_xxx");
    assert_eq!(residual["summands"][0]["sigma"], serde_json::json!([3]));
    assert_eq!(
        residual["summands"][0]["coefficient"]["terms"][0]["coefficient"],
        "2"
    );
    assert_eq!(
        json["checks"][2]["details"]["certificates"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn operator_algebra_on_stdin() {
    let out = with_stdin("adjoint", "D_xxx + 4*u*D_x + 2*u_x\nu*D_x\n");
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-D_xxx - 4*u*D_x - 2*u_x\n-u*D_x - u_x\n");
    let out = with_stdin("compose", "vars x[2], w[1]\nD_x1\nw*D_x2\n");
    assert_eq!(stdout(&out), "w*D_x1x2 + w_x1*D_x2\n");
    let out = with_stdin("symbol", "D_xxx + 4*u*D_x\n");
    assert_eq!(stdout(&out), "θ^3\n");
    let out = with_stdin("adjoint", "D_x*u\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:4: D_σ must be the rightmost factor"));
}

#[test]
fn problem_files_round_trip() {
    for name in [
        "kdv.jb",
        "kdv_negative.jb",
        "potential_kdv.jb",
        "heat.jb",
        "transport.jb",
    ] {
        let text = std::fs::read_to_string(problem(name)).unwrap();
        let parsed = jetbracket::cli::parse(&text).unwrap();
        assert_eq!(
            jetbracket::cli::parse(&parsed.pretty()).unwrap(),
            parsed,
            "{name}"
        );
    }
}
