//! Stopping on the accuracy certificate: given `R ≥ ½‖x* − x0‖²`, the run
//! halts once `R/S_k ≤ ε/2`, which guarantees `h(x_k) − h* ≤ ε`.

use std::sync::Arc;

use asga::{run_solver, Certificate, CompositeProblem, Domain, Method, Quadratic, RunConfig, SimplePart, Smoothness};
use ndarray::Array1;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 40;
    let diag: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
    let center = Array1::from_elem(n, 1.0);
    let f = Quadratic::diagonal(&diag, center.clone())?;
    let problem = CompositeProblem::new(Arc::new(f), SimplePart::l1(0.5)?, Domain::WholeSpace)?
        .with_smoothness(Smoothness::lipschitz(n as f64)?);
    let eps = 1e-4;
    // ψ only shrinks the minimizer towards the origin, so ‖x*‖ ≤ ‖center‖.
    let radius = 0.5 * center.dot(&center);
    let config = RunConfig {
        certificate: Some(Certificate { radius_sq_half: radius, eps }),
        stop_on_certificate: true,
        ..RunConfig::default()
    };
    for method in [Method::Asga1, Method::Asga3] {
        let out = run_solver(&problem, method, &config)?;
        let last = out.trace.last().unwrap();
        println!(
            "{method}: stopped by {:?} after {} iterations, h = {:.9}, bound = {:.3e}",
            out.stop,
            last.k,
            last.h,
            last.cert_bound.unwrap()
        );
    }
    Ok(())
}
