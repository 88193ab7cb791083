//! Elastic net restricted to a box. The proximal-gradient baselines refuse
//! boxes unless asked, so only the model-based methods run here.

use asga::zoo::{build_elastic_net, gen_inverse_laplace};
use asga::{run_solver, Domain, Method, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bundle = gen_inverse_laplace(300, 1)?;
    let problem = build_elastic_net(&bundle, 1e-3, 1e-3, Some(Domain::symmetric_box(300, 0.5)?))?;
    let config = RunConfig {
        max_seconds: Some(1.0),
        ..RunConfig::default()
    };
    for method in [Method::Asga1, Method::Asga2, Method::Asga3, Method::Asga4, Method::Nesun, Method::Nsdsg] {
        let out = run_solver(&problem, method, &config)?;
        let inside = problem.domain().contains(out.x.view());
        println!("{method:>6}  best h = {:.6e}  feasible = {inside}", out.best_h().unwrap());
    }
    match run_solver(&problem, Method::Fista, &config) {
        Err(e) => println!(" FISTA  refused: {e}"),
        Ok(_) => unreachable!("boxes need allow_constrained"),
    }
    Ok(())
}
