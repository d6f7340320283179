use std::path::Path;
use std::process::{Command, Output};

use fracwalk_cli::commands::solve;
use fracwalk_cli::output::{read_rows, write_rows};
use fracwalk_cli::{RunConfig, SummaryRow};

const EX2: &str = r#"{
    "case_id": "ex2-2d",
    "dimension": 2,
    "s": 0.5,
    "domain": {"kind": "ball"},
    "boundary": {"name": "example2_g", "x_prime": [1.4142135623730951, 1.4142135623730951]},
    "exact": {"name": "example2_g", "x_prime": [1.4142135623730951, 1.4142135623730951]},
    "points": [[0.6, 0.6], [0.0, -0.3]],
    "samples": 4000,
    "seed": 5
}"#;

fn fracwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracwalk")).args(args).env_remove("FRACWALK_THREADS").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn rows_in_memory() -> Vec<SummaryRow> {
    let prep = RunConfig::from_json(EX2).unwrap().prepare().unwrap();
    solve(&prep, 2).unwrap().into_iter().map(|(r, _)| r).collect()
}

#[test]
fn csv_and_json_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let rows = rows_in_memory();
    for name in ["rows.csv", "rows.json"] {
        let p = dir.path().join(name);
        write_rows(&p, &rows).unwrap();
        let back: Vec<SummaryRow> = read_rows(&p).unwrap();
        assert_eq!(back, rows, "{name}");
    }
}

fn without_wall_time(csv: &str) -> Vec<String> {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
}

#[test]
fn reruns_are_identical_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex2.json", EX2);
    let a = fracwalk(&["solve", "--config", &cfg, "--threads", "1"]);
    let b = fracwalk(&["solve", "--config", &cfg, "--threads", "3"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let (a, b) = (String::from_utf8(a.stdout).unwrap(), String::from_utf8(b.stdout).unwrap());
    assert_eq!(a.lines().count(), 3);
    assert_eq!(without_wall_time(&a), without_wall_time(&b));

    // the binary writes what the library computes
    let out = dir.path().join("out.csv");
    assert!(fracwalk(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let from_file: Vec<SummaryRow> = read_rows(&out).unwrap();
    let mut mem = rows_in_memory();
    for (m, f) in mem.iter_mut().zip(&from_file) {
        m.wall_seconds = f.wall_seconds;
    }
    assert_eq!(from_file, mem);
}

#[test]
fn overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex2.json", EX2);
    let out = dir.path().join("o.json");
    let o = fracwalk(&["solve", "--config", &cfg, "--samples", "500", "--seed", "9", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let rows: Vec<SummaryRow> = read_rows(&out).unwrap();
    assert!(rows.iter().all(|r| r.n_samples == 500));
    assert!(String::from_utf8_lossy(&o.stderr).contains("|err|"));
}

#[test]
fn zero_problem_gives_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "zero.json",
        r#"{"dimension": 3, "s": 0.4, "domain": {"kind": "ball", "radius": 2.0}, "points": [[0.5, 0.5, 0.5]], "samples": 100}"#,
    );
    let out = dir.path().join("z.csv");
    assert!(fracwalk(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let rows: Vec<SummaryRow> = read_rows(&out).unwrap();
    assert_eq!((rows[0].estimate, rows[0].variance), (0.0, 0.0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &EX2.replace("\"s\": 0.5", "\"s\": 1.5"));
    let o = fracwalk(&["solve", "--config", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("s"));

    let missing = fracwalk(&["solve", "--config", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));

    // a walk of one step from the cube centre cannot leave a 10D cube when s is near 1
    let lo = ["0"; 10].join(",");
    let hi = ["1"; 10].join(",");
    let mid = ["0.5"; 10].join(",");
    let capped = write(
        dir.path(),
        "cap.json",
        &format!(
            r#"{{"dimension": 10, "s": 0.99, "domain": {{"kind": "box", "lo": [{lo}], "hi": [{hi}]}},
            "boundary": {{"name": "constant", "c": 1}}, "points": [[{mid}]], "samples": 4, "max_steps": 1}}"#
        ),
    );
    let o = fracwalk(&["solve", "--config", &capped]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));

    assert_eq!(fracwalk(&["reproduce", "--table", "13"]).status.code(), Some(2), "clap usage errors exit with 2");
}

#[test]
fn quadrature_and_convergence_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "ex1.json",
        r#"{"dimension": 2, "s": 0.5, "domain": {"kind": "ball"},
            "boundary": {"name": "example1_g", "x_prime": [3.0, 0.0]}, "points": [[0.6, 0.6]],
            "quadrature": {"coarsest": 16}}"#,
    );
    let q = fracwalk(&["quadrature", "--config", &cfg, "--h", "1/64"]);
    assert!(q.status.success());
    let text = String::from_utf8(q.stdout).unwrap();
    assert!(text.starts_with("case_id,point,inv_h,value"));

    let c = fracwalk(&["convergence", "--config", &cfg, "--levels", "4"]);
    assert!(c.status.success());
    assert_eq!(String::from_utf8(c.stdout).unwrap().lines().count(), 5);
}

#[test]
fn steps_and_checks_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "b.json",
        r#"{"dimension": 3, "s": 0.5, "domain": {"kind": "ball"}, "points": [[0, 0, 0]], "samples": 2000}"#,
    );
    let o = fracwalk(&["steps", "--config", &cfg, "--s-grid", "0.3,0.6", "--radius-grid", "0.2,0.7"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")), "{text}");

    let o = fracwalk(&["checks"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("[PASS]")), "{text}");
}

#[test]
fn reproduce_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t1.csv");
    let o = fracwalk(&["reproduce", "--table", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("12/12 checks passed"));
    let header = std::fs::read_to_string(out).unwrap();
    assert!(header.starts_with("table,case,quantity,reference,run,tolerance,pass"));
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let prep = RunConfig::load(&path).and_then(|c| c.prepare());
        assert!(prep.is_ok(), "{}: {:?}", path.display(), prep.err());
        count += 1;
    }
    assert!(count >= 5);
}
