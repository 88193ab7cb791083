//! Pins the bench trace format and numbers against a checked-in file.
//! Wall time is masked. Regenerate with `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::fs;
use std::path::PathBuf;

use asga::bench::{
    run_experiment, trace_from_csv, trace_to_csv, Budget, ExperimentConfig, GridPoint, ProblemFamily, ProblemSpec,
};
use asga::Method;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/l1_micro.csv")
}

#[test]
fn micro_run_matches_golden_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig {
        name: "golden".into(),
        problem: ProblemSpec {
            family: ProblemFamily::L1,
            n: 12,
            ..ProblemSpec::default()
        },
        grid: vec![GridPoint {
            lambda: Some(0.05),
            ..GridPoint::default()
        }],
        solvers: vec![Method::Asga1, Method::Asga4, Method::Fista],
        budget: Budget {
            seconds: None,
            oracle_calls: Some(24),
        },
        seed: 5,
        output: dir.path().to_path_buf(),
        ..ExperimentConfig::default()
    };
    let result = run_experiment(&config).unwrap();
    let mut records = Vec::new();
    for cell in &result.cells {
        records.extend(cell.trace.iter().cloned().map(|mut r| {
            r.wall_s = 0.0;
            r
        }));
    }
    let produced = trace_to_csv(&records).unwrap();

    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &produced).unwrap();
    }
    let expected = fs::read_to_string(&path).expect("golden file missing; run with UPDATE_GOLDEN=1");
    assert_eq!(trace_from_csv(&produced).unwrap(), trace_from_csv(&expected).unwrap());
    assert_eq!(produced, expected);

    // The per-cell file written by the run has the same rows, wall time aside.
    let asga1 = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.to_string_lossy().ends_with("__ASGA-1.csv"))
        .unwrap();
    let first = trace_from_csv(&fs::read_to_string(asga1).unwrap()).unwrap();
    assert_eq!(first.len(), result.cells[0].trace.len());
}
