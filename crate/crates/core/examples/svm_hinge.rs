//! Nonsmooth hinge-loss SVM with the three regularizers. `f` has bounded
//! subgradient variation (`ν = 0`), so the line-search variants have to
//! discover a curvature estimate that depends on the accuracy.

use asga::solvers::SolverSettings;
use asga::zoo::{build_svm, gen_svm_synthetic, SvmRegularizer};
use asga::{run_solver, Method, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = gen_svm_synthetic(100, 50, 3)?;
    for reg in [SvmRegularizer::L1, SvmRegularizer::L22, SvmRegularizer::L22L1] {
        let problem = build_svm(&data, 0.1, reg)?;
        println!("{}", problem.name());
        for method in [Method::Asga2, Method::Asga4, Method::Nesun, Method::Nsdsg] {
            let config = RunConfig {
                max_oracle_calls: Some(4000),
                solver: SolverSettings::with_eps(1e-2),
                ..RunConfig::default()
            };
            let out = run_solver(&problem, method, &config)?;
            let margins = data.augmented().dot(&out.x);
            let errors = margins.iter().filter(|&&v| v <= 0.0).count();
            println!("  {method:>6}  h = {:.4}  training errors = {errors}", out.best_h().unwrap());
        }
    }
    Ok(())
}
