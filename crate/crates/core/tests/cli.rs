use std::process::{Command, Output};

use cryptarith::experiment::{read_records_csv, RunRecord};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cryptarith"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = cli(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_slice(&ok(args)).expect("valid json")
}

const SMALL_BOARD: &[&str] = &[
    "--strategy",
    "blackboard",
    "--agents",
    "10",
    "--board-size",
    "7",
    "--runs",
    "12",
    "--seed",
    "5",
];

#[test]
fn simulate_is_independent_of_thread_count() {
    let base = |threads: &str, format: &str| {
        let mut args = vec!["simulate"];
        args.extend_from_slice(SMALL_BOARD);
        args.extend_from_slice(&["--threads", threads, "--format", format]);
        ok(&args)
    };
    for format in ["csv", "json"] {
        assert_eq!(base("1", format), base("3", format), "{format}");
    }
}

#[test]
fn sweep_and_null_model_are_independent_of_thread_count() {
    let sweep = |threads: &str| {
        ok(&[
            "sweep",
            "--strategy",
            "imitative",
            "--agents",
            "4",
            "--imitation-prob",
            "0.9,1",
            "--runs",
            "6",
            "--max-cost",
            "0.5",
            "--threads",
            threads,
            "--format",
            "csv",
        ])
    };
    assert_eq!(sweep("1"), sweep("4"));
    let null = |threads: &str| {
        ok(&[
            "null-model",
            "--board-size",
            "7,351",
            "--runs",
            "30",
            "--max-cost",
            "0.02",
            "--threads",
            threads,
        ])
    };
    assert_eq!(null("1"), null("2"));
}

#[test]
fn csv_and_json_records_agree() {
    let mut args = vec!["simulate", "--format", "csv"];
    args.extend_from_slice(SMALL_BOARD);
    let from_csv = read_records_csv(ok(&args).as_slice()).unwrap();
    args[2] = "json";
    let doc = json(&args);
    let from_json: Vec<RunRecord> = serde_json::from_value(doc["runs"].clone()).unwrap();
    assert_eq!(from_csv.len(), 12);
    assert_eq!(from_csv, from_json);
    assert_eq!(doc["summary"]["n_runs"], 12);
    assert_eq!(doc["config"]["seed"], 5);
}

#[test]
fn records_carry_their_parameters() {
    let doc = json(&[
        "simulate",
        "--strategy",
        "imitative",
        "--agents",
        "3",
        "--imitation-prob",
        "0.5",
        "--runs",
        "3",
        "--max-cost",
        "0.2",
    ]);
    for r in doc["runs"].as_array().unwrap() {
        assert_eq!(r["strategy"], "imitative");
        assert_eq!(r["M"], 3);
        assert_eq!(r["p"], 0.5);
        let c = r["C"].as_f64().unwrap();
        // censored runs stop on the first update past the cutoff
        assert!(c <= 0.2 + 1e-6);
        if !r["solved"].as_bool().unwrap() {
            assert!((c - 0.2).abs() < 1e-6);
        }
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# small blackboard run\nstrategy = blackboard\nagents = 10\nboard_size = 7\nruns = 4\nseed = 9\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let from_file = json(&["simulate", "--config", p]);
    assert_eq!(from_file["params"]["board_size"], 7);
    assert_eq!(from_file["runs"].as_array().unwrap().len(), 4);
    let overridden = json(&["simulate", "--config", p, "--runs", "2", "--seed", "9"]);
    assert_eq!(overridden["runs"].as_array().unwrap().len(), 2);
    assert_eq!(overridden["runs"][0], from_file["runs"][0]);
    assert_eq!(overridden["params"]["board_size"], 7);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.csv");
    let stdout = ok(&["catalog", "--format", "csv"]);
    let written = ok(&[
        "catalog",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(written.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let text = String::from_utf8(stdout).unwrap();
    assert_eq!(text.lines().count(), 352);
    assert_eq!(
        text.lines()
            .skip(1)
            .filter(|l| l.ends_with(",true"))
            .count(),
        6
    );
}

#[test]
fn landscape_census() {
    let a = ok(&["landscape", "--threads", "1"]);
    let b = ok(&["landscape", "--threads", "2"]);
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["total_states"], 3_628_800);
    assert_eq!(report["minima_count"], 102);
    assert_eq!(report["global_minima_count"], 1);
    let csv = String::from_utf8(ok(&["landscape", "--format", "csv"])).unwrap();
    assert_eq!(csv.lines().count(), 103);
}

fn fails(args: &[&str], needle: &str) {
    let out = cli(args);
    assert!(!out.status.success(), "{args:?} should fail");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(needle), "{args:?}: {err}");
}

#[test]
fn bad_input_is_rejected() {
    fails(&["simulate", "--strategy", "telepathy"], "telepathy");
    fails(&["simulate", "--agents", "0", "--runs", "1"], "");
    fails(&["simulate", "--imitation-prob", "1.5", "--runs", "1"], "");
    fails(&["simulate", "--threads", "0", "--runs", "1"], "threads");
    fails(&["simulate", "--runs", "0"], "runs");
    fails(&["simulate", "--format", "xml"], "xml");
    fails(&["simulate", "--agents", "2,3"], "sweep");
    fails(&["sweep", "--runs", "1"], "exactly one");
    fails(
        &["sweep", "--agents", "2,3", "--imitation-prob", "0,1"],
        "exactly one",
    );
    fails(&["simulate", "--max-cost=-1"], "max-cost");
    fails(&["simulate", "--config", "/nonexistent/run.conf"], "");
    fails(
        &[
            "simulate",
            "--strategy",
            "blackboard",
            "--board-size",
            "400",
            "--runs",
            "1",
        ],
        "",
    );

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "colour = blue\n").unwrap();
    fails(&["simulate", "--config", path.to_str().unwrap()], "colour");
}
