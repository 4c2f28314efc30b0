use std::process::{Command, Output};

use serde_json::Value;

fn ampsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ampsep"))
        .args(args)
        .env_remove("AMPSEP_SEED")
        .output()
        .expect("binary runs")
}

fn json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("JSON report")
}

#[test]
fn separate_accepts_yes_instance_within_bound() {
    let report = json(&ampsep(&[
        "separate", "--t", "0.25", "--tprime", "0.0625", "--delta", "0.05", "--p", "0.25",
        "--trials", "2000", "--seed", "7",
    ]));
    assert!(report["results"]["accept_rate"].as_f64().unwrap() >= 0.95);
    let max_calls = report["bounds"]["max_run_calls_a"].as_f64().unwrap();
    assert!(max_calls <= report["bounds"]["query_bound"].as_f64().unwrap());
    assert_eq!(report["bounds"]["bound_violations"], 0);
}

#[test]
fn curves_emit_one_row_per_grid_point() {
    let output = ampsep(&[
        "curves",
        "--rho-y",
        "0.9",
        "--rho-n-max",
        "0.1",
        "--steps",
        "100",
    ]);
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho_n,classical,estimation,separation"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 100);
    for (i, row) in rows.iter().enumerate() {
        let rho_n = 0.1 * i as f64 / 100.0;
        let yes: f64 = 0.1;
        let expected = [
            rho_n,
            yes / (yes - rho_n),
            1.0 / (yes - rho_n),
            1.0 / (yes.sqrt() - rho_n.sqrt()),
        ];
        for (got, want) in row.iter().zip(expected) {
            // six significant digits
            assert!(
                (got - want).abs() <= 5e-6 * want.abs().max(1e-300),
                "row {i}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn mwdp_finds_planted_weight() {
    let report = json(&ampsep(&[
        "mwdp",
        "--n",
        "3",
        "--weights",
        "1,2,3,4",
        "--wt",
        "3",
        "--delta",
        "0.1",
        "--trials",
        "1",
        "--seed",
        "1",
    ]));
    assert_eq!(report["results"]["returned_weights"]["3"], 1);
    assert_eq!(report["results"]["max_as_calls"], 2);
}

#[test]
fn truth_table_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "# weight 5 of 8\nn=3\n10110110\n").unwrap();
    let report = json(&ampsep(&[
        "wdp",
        "--truth-table",
        path.to_str().unwrap(),
        "--k1",
        "1",
        "--k2",
        "5",
        "--delta",
        "0.1",
        "--trials",
        "50",
    ]));
    assert_eq!(report["spec"]["function"]["kind"], "truth_table");
    assert!(report["results"]["accept_rate"].as_f64().unwrap() >= 0.9);
}

#[test]
fn identical_seed_gives_identical_report() {
    let args = [
        "trials", "--p", "0.3", "--t", "0.3", "--tprime", "0.1", "--delta", "0.1", "--trials",
        "40", "--seed", "5",
    ];
    let first = ampsep(&args);
    let second = ampsep(&[&args[..], &["--parallel", "3"]].concat());
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn seed_is_read_from_environment() {
    let args = [
        "estimate",
        "--p",
        "0.3",
        "--epsilon",
        "0.1",
        "--delta",
        "0.1",
        "--trials",
        "20",
        "--per-trial",
    ];
    let from_env = Command::new(env!("CARGO_BIN_EXE_ampsep"))
        .args(args)
        .env("AMPSEP_SEED", "42")
        .output()
        .unwrap();
    let from_flag = ampsep(&[&args[..], &["--seed", "42"]].concat());
    assert_eq!(json(&from_env), json(&from_flag));
    assert_eq!(json(&from_env)["spec"]["seed"], 42);
}

#[test]
fn report_is_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let output = ampsep(&[
        "estimate",
        "--p",
        "0.5",
        "--epsilon",
        "0.1",
        "--delta",
        "0.1",
        "--format",
        "csv",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn invalid_spec_exits_with_two() {
    for args in [
        &[
            "separate", "--t", "0.1", "--tprime", "0.2", "--delta", "0.05", "--p", "0.2",
        ][..],
        &[
            "estimate",
            "--p",
            "1.5",
            "--epsilon",
            "0.1",
            "--delta",
            "0.1",
        ],
        &[
            "estimate",
            "--p",
            "0.5",
            "--epsilon",
            "0.3",
            "--delta",
            "0.1",
        ],
        &[
            "mwdp",
            "--n",
            "3",
            "--weights",
            "4,2",
            "--wt",
            "2",
            "--delta",
            "0.1",
        ],
        &[
            "separate", "--t", "0.5", "--tprime", "0.1", "--delta", "0.05",
        ],
    ] {
        let output = ampsep(args);
        assert_eq!(output.status.code(), Some(2), "{args:?}");
        let stderr = String::from_utf8(output.stderr).unwrap();
        assert!(stderr.starts_with("error: "), "{stderr}");
        assert_eq!(stderr.lines().count(), 1, "{stderr}");
    }
}

#[test]
fn unwritable_output_exits_with_one() {
    let output = ampsep(&[
        "estimate",
        "--p",
        "0.5",
        "--epsilon",
        "0.1",
        "--delta",
        "0.1",
        "-o",
        "/nonexistent/dir/report.json",
    ]);
    assert_eq!(output.status.code(), Some(1));
}
