//! Behavioral tests for the binary: exit codes, numeric verification,
//! CSV export, and the render/parse round trip.

use std::process::Command;

use logtower_cli::{lower, parser};

fn logtower(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_logtower"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn exit_codes() {
    // success
    assert_eq!(logtower(&["classify", "1"]).status.code(), Some(0));
    // input errors: syntax, lowering, violated precondition
    assert_eq!(logtower(&["classify", "1 +"]).status.code(), Some(2));
    assert_eq!(logtower(&["classify", "log(x+1)"]).status.code(), Some(2));
    assert_eq!(logtower(&["phi", "x"]).status.code(), Some(2));
    assert_eq!(
        logtower(&["flw", "--f", "0", "--g", "1"]).status.code(),
        Some(2)
    );
    // numeric-domain error: the evaluator rejects depth 4
    let deep = "omega(4)/4";
    assert_eq!(
        logtower(&["simulate", deep, "--csv", "/tmp/logtower_deep.csv"])
            .status
            .code(),
        Some(3)
    );
    // numeric-domain error: window below the admissible minimum
    assert_eq!(
        logtower(&[
            "simulate",
            "omega(2)/4",
            "--t0",
            "2.0",
            "--csv",
            "/tmp/logtower_t0.csv"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn error_messages_point_into_input() {
    let out = logtower(&["classify", "log(x+1)"]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains('^'), "no caret in: {}", msg);
    assert!(msg.contains("log(x+1)"));
}

#[test]
fn verify_numeric_appends_probe_without_changing_verdict() {
    let plain = logtower(&["classify", "1", "--json"]);
    let with_probe = logtower(&["classify", "1", "--json", "--verify-numeric"]);
    let plain: serde_json::Value = serde_json::from_slice(&plain.stdout).unwrap();
    let probed: serde_json::Value = serde_json::from_slice(&with_probe.stdout).unwrap();
    assert_eq!(plain.get("probe"), None);
    assert_eq!(probed["probe"], "oscillating_trend");
    assert_eq!(plain["verdict"], probed["verdict"]);
    assert_eq!(plain["witness"], probed["witness"]);

    // Depth-4 input: the probe reduces through the tower first.
    let deep = logtower(&["classify", "omega(4)/4", "--json", "--verify-numeric"]);
    let deep: serde_json::Value = serde_json::from_slice(&deep.stdout).unwrap();
    assert_eq!(deep["verdict"], "nonoscillating");
    assert_eq!(deep["probe"], "quiescent_trend");
}

#[test]
fn simulate_writes_csvs() {
    let dir = std::env::temp_dir().join("logtower_sim_test");
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("traj.csv");
    let out = logtower(&[
        "simulate",
        "5/(2*x^2)",
        "--t0",
        "10",
        "--t1",
        "1000",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("t,y,yp"));
    let first = lines.next().unwrap();
    // 17 significant digits: mantissa with 16 decimal places
    assert!(
        first.starts_with("1.0000000000000000e1,"),
        "unexpected first row: {}",
        first
    );
    // header + one row per sample, samples = steps + 1
    assert_eq!(
        body.lines().count() as u64,
        summary["steps"].as_u64().unwrap() + 2
    );
    let zeros_csv = dir.join("traj.zeros.csv");
    let zeros = std::fs::read_to_string(&zeros_csv).unwrap();
    assert!(zeros.starts_with("index,t_zero"));
    assert_eq!(
        zeros.lines().count() as u64 - 1,
        summary["zeros"].as_u64().unwrap()
    );
    // Euler coefficient a = 5/2 on [10, 1000]: nu = 1.5, about 2 zeros.
    let n_zeros = summary["zeros"].as_u64().unwrap();
    assert!((1..=3).contains(&n_zeros), "zeros = {}", n_zeros);
}

#[test]
fn riccati_subcommand() {
    // z = y'/y for y = x^(1/2) solves the Riccati relation at f = 1/(4x^2).
    let out = logtower(&["riccati", "--z", "1/(2*x)", "--f", "1/(4*x^2)", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["satisfied"], true);
    let out = logtower(&["riccati", "--z", "0", "--f", "1", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["satisfied"], false);
}

#[test]
fn rendering_is_a_parse_fixed_point() {
    let inputs = [
        "1/(4*x^2)",
        "omega(3)/4 + gamma(3)^2/8",
        "lambda(2)*x - l2^(1/2)",
        "sigma_gamma(2)",
        "x^(-7/2)*l1 + 3/4",
        "-x + 1/2 - gamma(1)^2",
        "0",
        "1",
        "log(x*l1^2)",
    ];
    for input in inputs {
        let once = lower::lower(&parser::parse(input).unwrap()).unwrap();
        let rendered = once.to_string();
        let twice = lower::lower(&parser::parse(&rendered).unwrap())
            .unwrap_or_else(|e| panic!("{} -> {} fails to re-parse: {:?}", input, rendered, e));
        assert_eq!(twice, once, "value drift for {}", input);
        assert_eq!(twice.to_string(), rendered, "string drift for {}", input);
    }
}
