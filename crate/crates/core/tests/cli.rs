use std::path::PathBuf;
use std::process::Command;

use tempfile::TempDir;

use ssconv::cli::run;
use ssconv::{decoder, DecodeProblem, StateSpaceEncoder};

fn example_code() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/rsc2.ssc")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn ssconv(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["ssconv"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn table_reproduces_worked_example() {
    let code = example_code();
    let (status, out, _) = ssconv(&["table", "--code", code.to_str().unwrap()]);
    assert_eq!(status, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "u state next output");
    assert_eq!(
        &lines[1..],
        [
            "0 00 00 00",
            "1 00 10 11",
            "0 01 10 00",
            "1 01 00 11",
            "0 10 11 01",
            "1 10 01 10",
            "0 11 01 01",
            "1 11 11 10",
        ]
    );
}

#[test]
fn encode_bits_file() {
    let dir = TempDir::new().unwrap();
    let bits = write(&dir, "bits.txt", "1 0 1\n");
    let code = example_code();
    let args = [
        "encode",
        "--code",
        code.to_str().unwrap(),
        "--in",
        bits.to_str().unwrap(),
    ];
    let (status, out, _) = ssconv(&args);
    assert_eq!(status, 0);
    assert_eq!(out, "1 1 0 1 1 0\n");

    let mut zero = args.to_vec();
    zero.extend(["--terminate", "zero"]);
    let (status, out, _) = ssconv(&zero);
    assert_eq!(status, 0);
    // 11 -> 01 -> 10 reaches 11; steering 11 -> 00 takes 11 -u=0-> 01 -u=1-> 00
    assert_eq!(out, "1 1 0 1 1 0 0 1 1 1\n");

    let mut from = args.to_vec();
    from.extend(["--initial-state", "10"]);
    let (status, out, _) = ssconv(&from);
    assert_eq!(status, 0);
    assert_eq!(out, "1 0 0 0 1 0\n");
}

#[test]
fn decode_matches_library_for_every_algorithm() {
    let dir = TempDir::new().unwrap();
    let values = [0.9, 0.8, 0.1, 0.6, 0.7, 0.2];
    let text: Vec<String> = values.iter().map(f64::to_string).collect();
    let received = write(&dir, "rx.txt", &text.join(" "));
    let enc = StateSpaceEncoder::rsc_example();
    let lib = decoder::decode(&enc, &DecodeProblem::with_defaults(&enc, &values).unwrap()).unwrap();
    let code = example_code();
    for algo in ["bowyer", "viterbi", "brute"] {
        let (status, out, err) = ssconv(&[
            "decode",
            "--code",
            code.to_str().unwrap(),
            "--received",
            received.to_str().unwrap(),
            "--algo",
            algo,
        ]);
        assert_eq!(status, 0, "{err}");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "inputs: 1 0 1");
        assert_eq!(lines[1], "codeword: 1 1 0 1 1 0");
        assert_eq!(lines[2], "states: 00 10 11 11");
        let cost: f64 = lines[3].strip_prefix("cost: ").unwrap().parse().unwrap();
        assert!((cost - lib.total_cost).abs() < 1e-9);
        assert!((cost - 0.35).abs() < 1e-12);
    }
}

#[test]
fn decode_infeasible_termination_is_domain_error() {
    let dir = TempDir::new().unwrap();
    let received = write(&dir, "rx.txt", "1 1");
    let code = example_code();
    let (status, _, err) = ssconv(&[
        "decode",
        "--code",
        code.to_str().unwrap(),
        "--received",
        received.to_str().unwrap(),
        "--initial-state",
        "10",
        "--terminate",
        "zero",
    ]);
    assert_eq!(status, 2);
    assert!(err.contains("no valid codeword"), "{err}");
}

#[test]
fn analyze_report() {
    let code = example_code();
    let (status, out, _) = ssconv(&[
        "analyze",
        "--code",
        code.to_str().unwrap(),
        "--steer",
        "00",
        "11",
    ]);
    assert_eq!(status, 0);
    assert!(
        out.contains("controllability matrix:\n  1 1\n  0 1\n"),
        "{out}"
    );
    assert!(out.contains("controllability rank: 2\ncontrollable: yes\n"));
    assert!(out.contains("observable: yes"));
    assert!(out.contains("  {00}\n"));
    assert!(out.contains("  {01 -> 10 -> 11}\n"));
    assert!(out.contains("steer 00 -> 11: T=2 inputs: 1 0\n"));
}

#[test]
fn analyze_orbits_lists_transients() {
    let dir = TempDir::new().unwrap();
    // nilpotent dynamics: every state drains into 00
    let code = write(&dir, "nil.ssc", "dims: 2 1 1\n0 1\n0 0\n1\n0\n1 0\n1\n");
    let (status, out, _) = ssconv(&["analyze", "--code", code.to_str().unwrap(), "--orbits"]);
    assert_eq!(status, 0);
    assert!(out.contains("  {00}\n    transients: 01 10 11\n"), "{out}");
}

#[test]
fn simulate_csv_is_deterministic() {
    let code = example_code();
    let args = [
        "simulate",
        "--code",
        code.to_str().unwrap(),
        "--channel",
        "awgn:0",
        "--grid",
        "1,3",
        "--trials",
        "30",
        "--frame-bits",
        "40",
        "--seed",
        "99",
        "--decision",
        "soft",
    ];
    let (status, first, err) = ssconv(&args);
    assert_eq!(status, 0, "{err}");
    let (_, second, _) = ssconv(&args);
    assert_eq!(first, second);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(ssconv(&seq).1, first);

    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(
        lines[0],
        "param,trials,info_bits,bit_errors,ber,decoder,decision"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,30,1200,"));
    assert!(lines[1].ends_with(",bowyer,soft"));
}

#[test]
fn simulate_bsc_noiseless_and_uncoded() {
    let code = example_code();
    let base = [
        "simulate",
        "--code",
        code.to_str().unwrap(),
        "--channel",
        "bsc:0",
        "--trials",
        "10",
        "--frame-bits",
        "20",
        "--seed",
        "1",
        "--decision",
        "hard",
    ];
    let (status, out, _) = ssconv(&base);
    assert_eq!(status, 0);
    assert_eq!(out.lines().nth(1).unwrap(), "0,10,200,0,0,bowyer,hard");

    let mut uncoded = base.to_vec();
    uncoded.push("--uncoded");
    let (status, out, _) = ssconv(&uncoded);
    assert_eq!(status, 0);
    assert!(out.lines().nth(1).unwrap().ends_with(",none,hard"));
}

#[test]
fn usage_and_input_errors() {
    let dir = TempDir::new().unwrap();
    let code = example_code();
    assert_eq!(ssconv(&["table"]).0, 1);
    assert_eq!(ssconv(&["table", "--code", "/nonexistent/x.ssc"]).0, 1);
    assert_eq!(
        ssconv(&["table", "--code", code.to_str().unwrap(), "--bogus"]).0,
        1
    );

    let bad = write(&dir, "bad.ssc", "dims: 2 1 2\n1 1\n1 2\n");
    let (status, _, err) = ssconv(&["table", "--code", bad.to_str().unwrap()]);
    assert_eq!(status, 2);
    assert!(err.contains("line 3"), "{err}");

    let bits = write(&dir, "bits.txt", "1 x 0");
    let args = [
        "encode",
        "--code",
        code.to_str().unwrap(),
        "--in",
        bits.to_str().unwrap(),
    ];
    assert_eq!(ssconv(&args).0, 1);

    let args = [
        "simulate",
        "--code",
        code.to_str().unwrap(),
        "--channel",
        "bsc:0.7",
        "--trials",
        "1",
        "--frame-bits",
        "4",
        "--seed",
        "0",
    ];
    assert_eq!(ssconv(&args).0, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ssconv");
    let code = example_code();
    let ok = Command::new(bin)
        .args(["table", "--code"])
        .arg(&code)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().lines().count(), 9);
    let usage = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}
