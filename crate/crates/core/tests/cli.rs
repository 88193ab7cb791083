use std::process::Command;

fn bench() -> Command {
    Command::new(env!("CARGO_BIN_EXE_asga-bench"))
}

#[test]
fn successful_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench()
        .args(["--problem", "l1", "--n", "10", "--budget-oracle", "20", "--solver", "ASGA-1", "--solver", "nsdsg"])
        .args(["--format", "json", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ASGA-1") && stdout.contains("NSDSG"));
    assert!(dir.path().join("summary.csv").exists());
    let json_files = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"))
        .count();
    // two traces for each of the 7 default grid points, plus errors.json
    assert_eq!(json_files, 15);
}

#[test]
fn failing_cell_gives_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench()
        .args(["--problem", "svm-l1", "--n", "8", "--m", "12", "--budget-oracle", "10", "--solver", "PGA", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PGA"));
}

#[test]
fn bad_arguments_are_rejected() {
    let out = bench().args(["--solver", "newton"]).output().unwrap();
    assert!(!out.status.success());
    let out = bench().args(["--problem", "lasso"]).output().unwrap();
    assert!(!out.status.success());
}
