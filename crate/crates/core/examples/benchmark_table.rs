//! A small experiment grid through the bench runner, printed as a table of
//! best value and oracle calls per solver.

use asga::bench::{run_experiment, Budget, ExperimentConfig, GridPoint, ProblemFamily, ProblemSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("asga-benchmark-table");
    let config = ExperimentConfig {
        name: "elastic-net-demo".into(),
        problem: ProblemSpec {
            family: ProblemFamily::ElasticNet,
            n: 200,
            ..ProblemSpec::default()
        },
        grid: [1e-2, 1e-3]
            .into_iter()
            .map(|l2| GridPoint {
                lambda1: Some(1e-3),
                lambda2: Some(l2),
                ..GridPoint::default()
            })
            .collect(),
        budget: Budget {
            seconds: None,
            oracle_calls: Some(3000),
        },
        output: out.clone(),
        ..ExperimentConfig::default()
    };
    let result = run_experiment(&config)?;
    print!("{}", result.summary_table());
    println!("traces in {}", out.display());
    Ok(())
}
