//! Sparse recovery on an ill-conditioned inverse-Laplace instance: every
//! solver gets the same oracle budget and we compare the best objective.

use asga::zoo::{build_l1_least_squares, gen_inverse_laplace};
use asga::{run_solver, Method, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bundle = gen_inverse_laplace(200, 7)?;
    let problem = build_l1_least_squares(&bundle, 1e-3)?;
    let config = RunConfig {
        max_oracle_calls: Some(2000),
        ..RunConfig::default()
    };
    println!("{}", problem.name());
    for method in Method::ALL {
        let out = run_solver(&problem, method, &config)?;
        let last = out.trace.last().expect("budget allows at least one step");
        println!("{:>6}  best h = {:.6e}  iterations = {:4}  calls = {}", method, out.best_h().unwrap(), last.k, last.n_f);
    }
    Ok(())
}
