use std::path::Path;
use std::process::{Command, Output};

use frogleap::harness::{load_config, read_csv_file, CSV_HEADER};
use frogleap::{ExperimentKind, ExperimentSpec};

fn frogleap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frogleap")).args(args).output().unwrap()
}

const TINY: &[&str] = &["--n", "2,4", "--pop", "12", "--memeplexes", "3", "--generations", "15", "--seeds", "1..2"];

fn tiny(cmd: &str) -> Output {
    let mut args = vec![cmd];
    args.extend_from_slice(TINY);
    frogleap(&args)
}

/// Drops the trailing `elapsed_ms` column.
fn without_timings(csv: &[u8]) -> Vec<String> {
    String::from_utf8_lossy(csv)
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn writes_csv_to_stdout() {
    let out = tiny("sweep-n");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    // 2 n × 2 seeds × 3 modes
    assert_eq!(lines.len(), 13);
    assert!(lines[1..].iter().all(|l| l.starts_with("subcarrier_sweep,")));
}

#[test]
fn reruns_match_apart_from_timings() {
    for cmd in ["convergence", "sweep-m", "versus-ga", "timing"] {
        let (a, b) = (tiny(cmd), tiny(cmd));
        assert!(a.status.success(), "{cmd}");
        assert_eq!(without_timings(&a.stdout), without_timings(&b.stdout), "{cmd}");
    }
}

#[test]
fn oracle_subcommand() {
    let out = frogleap(&["oracle", "--generations", "50", "--seeds", "1..3", "--mode", "urgence"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].contains(",oracle,") && rows[1].contains(",final,"));
}

#[test]
fn config_file_round_trip_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        n_values: vec![3],
        population_size: 10,
        memeplexes: vec![2],
        generations: vec![8],
        seeds: vec![4, 5],
        output: Some(dir.path().join("nested/out.csv")),
        ..ExperimentSpec::defaults(ExperimentKind::Timing)
    };
    let config = dir.path().join("timing.conf");
    std::fs::write(&config, spec.to_config_string()).unwrap();
    assert_eq!(load_config(&config).unwrap(), spec);

    let out = frogleap(&["run", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let rows = read_csv_file(spec.output.as_deref().unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.n == 3 && r.population == 10 && r.generations == 8));

    // Command-line flags override the file.
    let other = dir.path().join("other.csv");
    let out = frogleap(&["run", config.to_str().unwrap(), "--mode", "urgence", "--out", other.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(read_csv_file(&other).unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| frogleap(args).status.code();
    assert_eq!(code(&["sweep-n", "--mode", "video"]), Some(1));
    assert_eq!(code(&["sweep-n", "--pop", "5", "--memeplexes", "6"]), Some(1));
    assert_eq!(code(&["sweep-n", "--seeds", "9..3"]), Some(1));
    assert_eq!(code(&["sweep-n", "--jump-rule", "sideways"]), Some(1));
    assert_eq!(code(&["oracle", "--n", "3"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["run", "/nonexistent/spec.conf"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "experiment = timing\nthis line has no equals\n").unwrap();
    let out = frogleap(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let target = blocker.join("out.csv");
    let out = frogleap(&["sweep-n", "--n", "2", "--pop", "4", "--memeplexes", "2", "--generations", "1", "--seeds", "1", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&target).exists());
}
