//! The separable subproblem behind every step, solved in closed form and
//! checked against its optimality conditions.

use asga::prox::satisfies_kkt;
use asga::{project_box, soft_threshold, solve_separable, Domain, SeparableBoxL1Task};
use ndarray::array;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let y = array![-2.0, -0.3, 0.0, 0.7, 3.0];
    println!("soft threshold at 0.5: {}", soft_threshold(y.view(), 0.5)?);
    let bounds = Domain::symmetric_box(5, 1.0)?;
    println!("projection onto [-1, 1]: {}", project_box(y.view(), &bounds)?);

    let linear = array![0.1, -0.2, 0.0, 0.3, -1.0];
    let task = SeparableBoxL1Task::new(y.view(), linear.view(), 1.5, 0.4, &bounds);
    let x = solve_separable(&task)?;
    println!("box + l1 + ridge subproblem: {x}");
    println!("objective {:.6}, optimality holds: {}", task.objective(x.view()), satisfies_kkt(&task, x.view(), 1e-12));
    Ok(())
}
