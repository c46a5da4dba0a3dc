use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_factorsets"))
        .args(args)
        .env_remove("FACTORSET_BUDGET_MB")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn factors_command() {
    assert_eq!(
        stdout(&["factors", "001", "--n", "2", "--circular"]),
        "00,01,10\n"
    );
    assert_eq!(stdout(&["factors", "001", "--n", "2"]), "00,01\n");
    assert_eq!(code(&["factors", "0", "--n", "3"]), 2);
    assert_eq!(code(&["factors", "012", "--n", "1"]), 2);
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "factors",
        "001",
        "--n",
        "2",
        "--circular",
    ]))
    .unwrap();
    assert_eq!(
        json["factors"]["members"],
        serde_json::json!(["00", "01", "10"])
    );
    assert_eq!(json["schema_version"], 1);
}

#[test]
fn witness_command() {
    assert_eq!(
        stdout(&["witness", "00,11", "--n", "2"]),
        "not representable\n"
    );
    assert_eq!(
        stdout(&["witness", "--full", "--n", "2", "--circular"]),
        "4 0011\n"
    );
    assert_eq!(
        stdout(&["witness", "000", "--n", "3", "--circular"]),
        "1 0\n"
    );
    // 00,01,10 as a bitmap: bits 0, 1, 2
    assert_eq!(stdout(&["witness", "7", "--hex", "--n", "2"]), "4 0010\n");
    assert_eq!(code(&["witness", "--n", "2"]), 2);
}

#[test]
fn enumerate_command() {
    let text = stdout(&["enumerate", "--n", "3"]);
    assert!(text.contains("circularly representable sets: 27"));
    assert!(text.contains("representable sets: 121"));
    assert!(text.contains("nu = 9"));
    assert!(text.contains("mu = 10"));
    let row1 = stdout(&["--format", "csv", "enumerate", "--n", "1"]);
    assert!(row1.lines().nth(1).unwrap().starts_with("1,3,3,2,2,"));
    let search = stdout(&["--format", "json", "enumerate", "--n", "3"]);
    let oracle = stdout(&["--format", "json", "enumerate", "--n", "3", "--oracle"]);
    assert_eq!(search, oracle);
    let cover = stdout(&["--format", "json", "enumerate", "--n", "4", "--edge-cover"]);
    assert_eq!(
        cover,
        stdout(&["--format", "json", "enumerate", "--n", "4"])
    );
    assert_eq!(code(&["enumerate", "--n", "6", "--edge-cover"]), 2);
    assert_eq!(
        code(&["enumerate", "--n", "3", "--edge-cover", "--oracle"]),
        2
    );
    assert_eq!(code(&["enumerate", "--n", "5"]), 2);
    assert_eq!(code(&["enumerate", "--n", "4", "--max-memory-mb", "1"]), 3);
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_factorsets"))
        .args(["enumerate", "--n", "4"])
        .env("FACTORSET_BUDGET_MB", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ttable_command() {
    assert_eq!(
        stdout(&["ttable", "--n-max", "1", "--t-max", "4"]),
        "2,3,3,3\n"
    );
    let csv = stdout(&["--format", "csv", "ttable", "--n-max", "3", "--t-max", "5"]);
    assert_eq!(csv, "n,1,2,3,4,5\n1,2,3,3,3,3\n2,,4,7,11,12\n3,,,8,15,27\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format", "json", "ttable", "--n-max", "3", "--t-max", "6",
    ]))
    .unwrap();
    let cells = json["cells"].as_array().unwrap();
    let cell = |t: u64, n: u64| {
        cells
            .iter()
            .find(|c| c["t"] == t && c["n"] == n)
            .unwrap()
            .clone()
    };
    assert_eq!(cell(5, 3)["method"], "both");
    assert_eq!(cell(6, 3)["method"], "brute");
    let md = stdout(&["--format", "md", "ttable", "--n-max", "2", "--t-max", "3"]);
    assert!(md.starts_with("| n \\ t | 1 | 2 | 3 |"));
}

#[test]
fn closed_form_provenance_under_tight_budget() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "--max-memory-mb",
        "1",
        "ttable",
        "--n-max",
        "12",
        "--t-max",
        "16",
    ]))
    .unwrap();
    let cell = json["cells"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["t"] == 16 && c["n"] == 12)
        .unwrap()
        .clone();
    assert_eq!(cell["method"], "closed");
}

#[test]
fn bounds_command() {
    let three = stdout(&["bounds", "--n", "3"]);
    assert!(three.starts_with("2^4 = 16 <= |C_3| = 27 <= 10^2 = 100"));
    let five = stdout(&["bounds", "--n", "5"]);
    assert!(five.starts_with("2^16 = 65536 <= |C_5| = 2466131 <= 10^8 = 100000000"));
    assert_eq!(code(&["bounds", "--n", "1"]), 2);
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format", "json", "bounds", "--n", "3", "--audit",
    ]))
    .unwrap();
    assert_eq!(json["holds"], true);
    assert_eq!(json["audit"]["bound"], "100");
    assert_eq!(
        json["audit"]["l_table"][2],
        serde_json::json!(["4", "2", "0"])
    );
}

#[test]
fn verify_command() {
    assert!(stdout(&["verify", "--theorem1", "7", "4"]).starts_with("pass"));
    assert_eq!(code(&["verify", "--theorem1", "7", "3"]), 2);
    assert_eq!(
        code(&["verify", "--theorem1", "7", "3", "--unrestricted"]),
        1
    );
    let conj = stdout(&["verify", "--conjecture2n", "3"]);
    assert!(conj.starts_with("pass"));
    assert!(conj.contains("(1 up to complement)"));
    assert!(conj.contains("010110 011010 period 5"));
    assert!(stdout(&["verify", "--hamiltonian", "200", "--seed", "7"]).starts_with("pass"));
    assert_eq!(code(&["verify"]), 2);
}

#[test]
fn json_is_independent_of_workers() {
    for args in [
        &["enumerate", "--n", "4"][..],
        &["ttable", "--n-max", "4", "--t-max", "12"],
        &["verify", "--hamiltonian", "50", "--seed", "3"],
    ] {
        let outputs: Vec<String> = ["1", "4", "16"]
            .iter()
            .map(|w| {
                let mut full = vec!["--format", "json", "--workers", w];
                full.extend_from_slice(args);
                stdout(&full)
            })
            .collect();
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[0], outputs[2]);
    }
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["--no-such-flag", "bounds", "--n", "3"]), 2);
    assert_eq!(code(&["--schema-version", "2", "bounds", "--n", "3"]), 2);
    assert!(stdout(&["--schema-version", "1", "bounds", "--n", "2"]).contains("<= |C_2| = 6 <="));
}
