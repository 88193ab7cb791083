//! The curvature estimate ASGA-1/3 use when the gradient is only Hölder
//! continuous: how it grows as the target accuracy tightens.

use asga::solvers::ZetaEquation;
use asga::{holder_majorant, solve_lhat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (s_sum, mu, l) = (10.0, 0.0, 2.0);
    println!("{:>5} {:>8} {:>14} {:>6} {:>10}", "nu", "eps", "L_hat", "iters", "rel. resid");
    for nu in [0.0, 0.5, 0.9, 1.0] {
        for eps in [1e-2, 1e-4, 1e-6] {
            let sol = solve_lhat(s_sum, mu, nu, l, eps)?;
            let zeta = ZetaEquation::new(s_sum, mu, nu, l, eps, 0.0)?;
            println!("{nu:>5} {eps:>8.0e} {:>14.6e} {:>6} {:>10.2e}", sol.value, sol.iterations, zeta.eval(sol.value) / sol.value.max(1.0));
        }
    }
    println!("first-step check at nu = 0: L^2/eps = {}", holder_majorant(0.0, 2.0, 1e-2)?);
    Ok(())
}
