use std::fs;
use std::path::Path;
use std::process::Command;

const RULES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/default.rules");

fn forge(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_forge")).args(args).output().unwrap()
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn empty_benchmark_file_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("empty.bench");
    fs::write(&bench, "; nothing here\n").unwrap();
    let out = dir.path().join("out");
    let status =
        forge(&["run", "--benchmarks", bench.to_str().unwrap(), "--rules", RULES, "--out", out.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert_eq!(report(&out)["totals"]["benchmarks"], 0);
    assert!(out.join("summary.txt").is_file());
    assert!(out.join("histogram.csv").is_file());
}

#[test]
fn config_file_drives_a_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("cos.bench");
    fs::write(&bench, "(cos x)\n").unwrap();
    let out = dir.path().join("out");
    let config = dir.path().join("forge.toml");
    let text = format!(
        "benchmarks = {:?}\nrules = {:?}\nout = {:?}\niters = 5\nemit-lp = true\n",
        bench.to_str().unwrap(),
        RULES,
        out.to_str().unwrap()
    );
    fs::write(&config, text).unwrap();
    let status = forge(&["run", "--config", config.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let report = report(&out);
    assert_eq!(report["totals"]["benchmarks"], 1);
    assert_eq!(report["totals"]["sentinel_trips"], 0);
    assert!(out.join("bench_000.lp").is_file());
}

#[test]
fn bad_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("bad.bench");
    fs::write(&bench, "(sin x\n").unwrap();
    let status = forge(&["run", "--benchmarks", bench.to_str().unwrap(), "--rules", RULES]);
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("error"));
}
