use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cubelock(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubelock"))
        .args(args)
        .current_dir(dir)
        .env_remove("CUBELOCK_CONFIG")
        .output()
        .expect("binary runs")
}

fn cubelock_with_config(dir: &Path, config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubelock"))
        .args(args)
        .current_dir(dir)
        .env("CUBELOCK_CONFIG", config)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn setup_key(dir: &Path, name: &str, seed: &str) {
    let out = cubelock(dir, &["--seed", seed, "setup", "--T", "1", "--lambda", "520", "--out", name]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn file_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "k.key", "aa");
    let message: Vec<u8> = (0..=255u8).cycle().take(20).collect();
    std::fs::write(d.join("msg.bin"), &message).unwrap();
    let out = cubelock(d, &["encrypt", "--key", "k.key", "--in", "msg.bin", "--out", "c.ct"]);
    assert!(out.status.success(), "{}", stderr(&out));
    std::fs::copy(d.join("c.ct"), d.join("copy.ct")).unwrap();
    let out = cubelock(d, &["decrypt", "--key", "k.key", "--in", "copy.ct", "--out", "plain.bin"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(std::fs::read(d.join("plain.bin")).unwrap(), message);
    let summary = stderr(&out);
    assert!(summary.contains("wall_time_ms=") && summary.contains("sequential_depth="), "{summary}");
}

#[test]
fn setup_sizes_the_prime_from_t_and_lambda() {
    let dir = TempDir::new().unwrap();
    let out = cubelock(dir.path(), &["--seed", "1", "setup", "--T", "2", "--lambda", "300"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("cubelock-key v1"));
    assert!(stderr(&out).contains("target_bits=600 prime_bits=601"), "{}", stderr(&out));
}

#[test]
fn every_decrypt_strategy_agrees() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "k.key", "bb");
    assert!(cubelock(d, &["encrypt", "--key", "k.key", "--message", "strategies", "--out", "c.ct"]).status.success());
    for extra in [
        &["--reduction", "barrett"][..],
        &["--evaluation", "sequential", "--window", "1"],
        &["--window", "9", "--reduction", "montgomery"],
    ] {
        let mut args = vec!["decrypt", "--key", "k.key", "--in", "c.ct"];
        args.extend_from_slice(extra);
        let out = cubelock(d, &args);
        assert!(out.status.success(), "{extra:?}: {}", stderr(&out));
        assert_eq!(stdout(&out), "strategies");
    }
}

#[test]
fn wrong_key_exits_3() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "a.key", "01");
    setup_key(d, "b.key", "02");
    assert!(cubelock(d, &["encrypt", "--key", "a.key", "--message", "x", "--out", "c.ct"]).status.success());
    let out = cubelock(d, &["decrypt", "--key", "b.key", "--in", "c.ct"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("wrong key"), "{}", stderr(&out));
}

#[test]
fn malformed_files_report_line_numbers() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "k.key", "03");
    std::fs::write(d.join("bad.ct"), "cubelock-ct v1\nfp=zz\n").unwrap();
    let out = cubelock(d, &["decrypt", "--key", "k.key", "--in", "bad.ct"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(cubelock(d, &["decrypt"]).status.code(), Some(2));
    assert_eq!(cubelock(d, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(cubelock(d, &["calibrate", "--duration", "0"]).status.code(), Some(2));
    assert_eq!(cubelock(d, &["--seed", "xyz", "attack", "gcd-swap", "--p", "23"]).status.code(), Some(2));
    assert_eq!(cubelock(d, &["--help"]).status.code(), Some(0));
}

#[test]
fn missing_file_exits_1() {
    let dir = TempDir::new().unwrap();
    assert_eq!(cubelock(dir.path(), &["decrypt", "--key", "nope.key", "--in", "nope.ct"]).status.code(), Some(1));
}

#[test]
fn oversized_message_exits_4() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "k.key", "04");
    std::fs::write(d.join("big.bin"), vec![7u8; 200]).unwrap();
    let out = cubelock(d, &["encrypt", "--key", "k.key", "--in", "big.bin"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    std::fs::write(d.join("huge.bin"), vec![7u8; (1 << 20) + 1]).unwrap();
    assert_eq!(cubelock(d, &["encrypt", "--key", "k.key", "--in", "huge.bin"]).status.code(), Some(4));
}

#[test]
fn seed_makes_output_deterministic() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "k.key", "05");
    let run = || stdout(&cubelock(d, &["--seed", "c0ffee", "encrypt", "--key", "k.key", "--message", "same"]));
    assert_eq!(run(), run());
    let other = stdout(&cubelock(d, &["--seed", "c0ffef", "encrypt", "--key", "k.key", "--message", "same"]));
    assert_ne!(run(), other);
    let ekera = || stdout(&cubelock(d, &["--seed", "7", "attack", "ekera", "--p", "23", "--trials", "4"]));
    assert_eq!(ekera(), ekera());
}

#[test]
fn config_file_is_applied_and_validated() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "k.key", "06");
    let cfg = d.join("cubelock.conf");
    std::fs::write(&cfg, "# test config\nseed_len=64\nwindow_width=3\nreduction_strategy=barrett\n").unwrap();
    let out = cubelock_with_config(d, &cfg, &["encrypt", "--key", "k.key", "--message", "cfg", "--out", "c.ct"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(std::fs::read_to_string(d.join("c.ct")).unwrap().contains("l=64"));
    let out = cubelock_with_config(d, &cfg, &["decrypt", "--key", "k.key", "--in", "c.ct"]);
    assert_eq!(stdout(&out), "cfg");
    assert!(stderr(&out).contains("window=3 reduction=barrett"), "{}", stderr(&out));

    std::fs::write(&cfg, "seed_len=64\nwindow_width=99\n").unwrap();
    let out = cubelock_with_config(d, &cfg, &["decrypt", "--key", "k.key", "--in", "c.ct"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn chain_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    setup_key(d, "k.key", "07");
    let out = cubelock(
        d,
        &[
            "--seed",
            "08",
            "chain",
            "build",
            "--key",
            "k.key",
            "--stages",
            "swap-or-not:12,both-ends,cycle-walk-fpe",
            "--out",
            "ch.txt",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let out = cubelock(d, &["encrypt", "--key", "k.key", "--chain", "ch.txt", "--message", "chained", "--out", "c.ct"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = cubelock(d, &["decrypt", "--key", "k.key", "--chain", "ch.txt", "--in", "c.ct"]);
    assert_eq!(stdout(&out), "chained", "{}", stderr(&out));
    // Opening a chained ciphertext without its chain is refused.
    assert_ne!(cubelock(d, &["decrypt", "--key", "k.key", "--in", "c.ct"]).status.code(), Some(0));

    let y = stdout(&cubelock(d, &["chain", "apply", "--chain", "ch.txt", "--input", "deadbeef"]));
    let x = stdout(&cubelock(d, &["chain", "invert", "--chain", "ch.txt", "--input", y.trim()]));
    assert_eq!(x.trim(), "deadbeef");
}

#[test]
fn chain_bench_reports_every_column() {
    let dir = TempDir::new().unwrap();
    let out = cubelock(dir.path(), &["chain", "bench", "--bits", "2048", "--trials", "1", "--rounds", "8", "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["bits"], 2048);
    assert_eq!(doc["median_ns"].as_object().unwrap().len(), 5);
}

#[test]
fn gcd_swap_records_and_verdict() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // m = 2: f(2) = 8, g(8) = 7, f(7) = 343 = 21 mod 23 (odd, 22 < 23), g(21) = 22.
    let out = cubelock(d, &["attack", "gcd-swap", "--p", "23", "--m", "2"]);
    let text = stdout(&out);
    assert!(text.contains("m=2 c=22"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("verdict:")));
    let sweep = stdout(&cubelock(d, &["attack", "gcd-swap", "--p", "1019"]));
    assert!(sweep.contains("trials=1019") && sweep.contains("unsound=0"), "{sweep}");
    assert_eq!(cubelock(d, &["attack", "gcd-swap", "--p", "24"]).status.code(), Some(4));
}

#[test]
fn fixed_base_records_and_verdict() {
    let dir = TempDir::new().unwrap();
    let out = cubelock(dir.path(), &["attack", "fixed-base", "--p", "2039", "--x", "1234"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("x=1234 ") && text.contains("recovered=1234 ") && text.contains("ok=1"), "{text}");
    assert!(text.contains("4904691122 bits"), "{text}");
    assert!(text.lines().last().unwrap().starts_with("verdict: plaintext recovered"));
}

#[test]
fn ekera_records_are_line_oriented() {
    let dir = TempDir::new().unwrap();
    let out = cubelock(dir.path(), &["--seed", "2", "attack", "ekera", "--p", "23", "--d", "7", "--trials", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let records: Vec<&str> = text.lines().filter(|l| l.starts_with("trial=")).collect();
    assert_eq!(records.len(), 5);
    for (i, r) in records.iter().enumerate() {
        let keys: Vec<&str> = r.split(' ').map(|f| f.split('=').next().unwrap()).collect();
        assert_eq!(keys, ["trial", "j", "k", "recovered", "ok"], "{r}");
        assert!(r.starts_with(&format!("trial={i} ")));
    }
    assert!(text.lines().last().unwrap().starts_with("verdict:"));
}

#[test]
fn bench_json_reports_ratio() {
    let dir = TempDir::new().unwrap();
    let out =
        cubelock(dir.path(), &["--seed", "3", "bench", "--bits", "2048", "--trials", "2", "--json", "--parallel"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &doc["results"][0];
    assert_eq!(row["bits"], 2048);
    assert!(row["ratio"].as_f64().unwrap() > 1.0);
    assert_eq!(row["decrypt_depth"], 2048);
    assert!(row["fixed_base_parallel_ns"].as_f64().is_some());
}

#[test]
fn calibrate_prints_speeds_and_table() {
    let dir = TempDir::new().unwrap();
    let out = cubelock(dir.path(), &["--seed", "4", "calibrate", "--duration", "0.6"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let speed = |bits: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("lambda({bits})"))).unwrap();
        line.split_whitespace().nth(2).unwrap().parse().unwrap()
    };
    assert!(speed("4096") > speed("16384") && speed("16384") > speed("70034"), "{text}");
    let rows: Vec<u64> =
        text.lines().filter_map(|l| l.split_once('|')).filter_map(|(_, n)| n.trim().parse().ok()).collect();
    assert_eq!(rows.len(), 4, "{text}");
    assert!(rows.windows(2).all(|w| w[0] < w[1]), "{text}");
}
