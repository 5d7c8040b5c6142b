//! End-to-end tests of the `sag` binary: flags, file outputs, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const EXAMPLE_1: &str = "0 0 2 2 5 1 1\n0 0 2 2 10 4 0\n1 1 2 2 10 3 0\n2 2 3 3 5 2 0\n";
const EXAMPLE_2: &str = "0 2 9 10 20 1 1\n1 2 5 6 25 4 0\n4 5 1 2 25 3 0\n3 6 2 3 25 2 0\n";
const SMOKE_ALARM: &str = "1 2 3 4 6 1 1\n";

fn sag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_is_deterministic_and_reports_ht_count() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.jobs");
    let out2 = dir.path().join("b.jobs");
    let run = |out: &Path| {
        let res = sag(&[
            "generate",
            "--num-jobs",
            "200",
            "--utilization",
            "60",
            "--ht-ratio",
            "15",
            "--seed",
            "9",
            "--out",
            p(out),
        ]);
        assert_eq!(res.status.code(), Some(0));
        res
    };
    let res = run(&out1);
    assert!(stdout(&res).contains("ht_jobs=30"));
    run(&out2);
    assert_eq!(
        std::fs::read(&out1).unwrap(),
        std::fs::read(&out2).unwrap(),
        "same flags must produce byte-identical job-set files"
    );
}

#[test]
fn generate_rejects_zero_jobs_and_low_utilization() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jobs");
    let res = sag(&[
        "generate", "--num-jobs", "0", "--utilization", "60", "--ht-ratio", "0", "--seed", "1",
        "--out", p(&out),
    ]);
    assert_eq!(res.status.code(), Some(1));
    let res = sag(&[
        "generate", "--num-jobs", "10", "--utilization", "30", "--ht-ratio", "0", "--seed", "1",
        "--out", p(&out),
    ]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn construct_prints_the_summary_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex1.jobs", EXAMPLE_1);
    let res = sag(&["construct", "--algo", "original", "--policy", "fp", "--input", p(&input)]);
    assert_eq!(res.status.code(), Some(0));
    let line = stdout(&res);
    assert!(line.starts_with("vertices=5 width=1 schedulable=true time="), "got: {line}");
}

#[test]
fn construct_writes_dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "smoke.jobs", SMOKE_ALARM);
    let dot = dir.path().join("g.dot");
    let res = sag(&[
        "construct", "--algo", "original", "--input", p(&input), "--dot", p(&dot),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("label=\"S").count(), 2);
    assert!(text.contains("S1->S2 [label=\"J1\"];"));
}

#[test]
fn hybrid_equals_original_without_ht_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("noht.jobs");
    let res = sag(&[
        "generate", "--num-jobs", "40", "--utilization", "60", "--ht-ratio", "0", "--seed", "4",
        "--out", p(&input),
    ]);
    assert_eq!(res.status.code(), Some(0));

    let run = |algo: &str, report: &Path, dot: &Path| {
        let res = sag(&[
            "construct", "--algo", algo, "--input", p(&input), "--report", p(report),
            "--dot", p(dot), "--format", "csv",
        ]);
        assert_eq!(res.status.code(), Some(0));
    };
    let (rep_h, dot_h) = (dir.path().join("h.csv"), dir.path().join("h.dot"));
    let (rep_o, dot_o) = (dir.path().join("o.csv"), dir.path().join("o.dot"));
    run("hybrid", &rep_h, &dot_h);
    run("original", &rep_o, &dot_o);

    assert_eq!(
        std::fs::read(&dot_h).unwrap(),
        std::fs::read(&dot_o).unwrap(),
        "graphs coincide without HT jobs"
    );
    // reports agree except for the wall-clock line
    let strip = |path: &Path| -> Vec<String> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("construct_wall_time"))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(strip(&rep_h), strip(&rep_o));
}

#[test]
fn construct_respects_the_state_cap() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex2.jobs", EXAMPLE_2);
    let res = sag(&[
        "construct", "--algo", "hybrid", "--input", p(&input), "--state-cap", "3",
    ]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8_lossy(&res.stderr).into_owned();
    assert!(err.contains("state cap"), "stderr: {err}");
}

#[test]
fn verify_passes_the_hybrid_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex2.jobs", EXAMPLE_2);
    let res = sag(&["verify", "--input", p(&input), "--algo", "hybrid", "--policy", "fp"]);
    assert_eq!(res.status.code(), Some(0));
    assert!(stdout(&res).contains("PASS"));
}

#[test]
fn verify_rejects_the_extended_example_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex2.jobs", EXAMPLE_2);
    let res = sag(&["verify", "--input", p(&input), "--algo", "extended"]);
    assert_eq!(res.status.code(), Some(2));
    let text = stdout(&res);
    assert!(text.contains("FAIL"));
    assert!(text.contains("witness:"), "got: {text}");

    let res = sag(&["verify", "--input", p(&input), "--algo", "original"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn verify_bails_out_on_oversized_instances() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("big.jobs");
    let res = sag(&[
        "generate", "--num-jobs", "1000", "--utilization", "60", "--ht-ratio", "15", "--seed",
        "1", "--out", p(&input),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let res = sag(&["verify", "--input", p(&input), "--algo", "hybrid"]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8_lossy(&res.stderr).into_owned();
    assert!(err.contains("shrink"), "stderr: {err}");
}

#[test]
fn sweep_emits_one_row_per_cell_in_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let res = sag(&[
        "sweep", "--utilizations", "45,60", "--ht-ratios", "0,50", "--jobs-per-set", "8",
        "--seeds", "1", "--out", p(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 2 * 3, "header plus one row per cell");
    assert_eq!(
        lines[0],
        "utilization,ht_ratio,algorithm,seed,vertices,edges,max_width,schedulable,time_s,scenario_log10,error"
    );
    let keys: Vec<String> = lines[1..]
        .iter()
        .map(|l| l.split(',').take(4).collect::<Vec<_>>().join(","))
        .collect();
    let mut expected = Vec::new();
    for u in ["45", "60"] {
        for h in ["0", "50"] {
            for algo in ["original", "extended", "hybrid"] {
                expected.push(format!("{u},{h},{algo},1"));
            }
        }
    }
    assert_eq!(keys, expected);
}

#[test]
fn sweep_single_cell_and_determinism_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for out in [&out1, &out2] {
        let res = sag(&[
            "sweep", "--utilizations", "60", "--ht-ratios", "20", "--algos", "hybrid",
            "--jobs-per-set", "12", "--seeds", "3", "--out", p(out),
        ]);
        assert_eq!(res.status.code(), Some(0));
    }
    let strip_time = |path: &Path| -> Vec<String> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|line| {
                let mut cells: Vec<&str> = line.split(',').collect();
                if cells.len() > 8 {
                    cells[8] = "-"; // time_s varies between runs
                }
                cells.join(",")
            })
            .collect()
    };
    let a = strip_time(&out1);
    assert_eq!(a.len(), 2);
    assert_eq!(a, strip_time(&out2));
}

#[test]
fn sweep_default_grid_has_231_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("full.csv");
    let res = sag(&["sweep", "--jobs-per-set", "5", "--out", p(&out)]);
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    // 7 utilizations x 11 ht ratios x 3 algorithms, plus the header
    assert_eq!(text.lines().count(), 1 + 231);
    assert!(text.lines().skip(1).all(|l| l.ends_with(',')), "no cell errors expected");
}

#[test]
fn sweep_rejects_invalid_grids() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let res = sag(&["sweep", "--utilizations", "30", "--out", p(&out)]);
    assert_eq!(res.status.code(), Some(1));
    let res = sag(&["sweep", "--ht-ratios", "120", "--out", p(&out)]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    let res = sag(&["construct", "--algo", "imaginary", "--input", "nope"]);
    assert_eq!(res.status.code(), Some(1));
    let res = sag(&["no-such-command"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.jobs", "1 2 3\n");
    let res = sag(&["construct", "--algo", "original", "--input", p(&input)]);
    assert_eq!(res.status.code(), Some(1));
    let err = String::from_utf8_lossy(&res.stderr).into_owned();
    assert!(err.contains("line 1"), "stderr: {err}");
}
