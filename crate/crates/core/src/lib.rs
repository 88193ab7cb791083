//! Accelerated (sub)gradient methods for composite convex problems
//! `min f(x) + ψ(x)` over a box or the whole space, where `f` has a
//! Hölder-continuous (sub)gradient.
//!
//! The crate is organized bottom-up:
//!
//! * [`problem`]: problem description, metered oracle, Hölder majorant.
//! * [`prox`]: closed-form solvers for the separable auxiliary problems.
//! * [`solvers`]: the four accelerated schemes, step-size arithmetic,
//!   line searches, certificates and the run loop.
//! * [`baselines`]: subgradient, proximal-gradient and FISTA references.
//! * [`zoo`]: instance generators and problem builders.
//! * [`bench`]: configuration-driven experiment runner.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bench;
pub mod error;
pub mod problem;
pub mod prox;
pub mod solvers;
pub mod zoo;

pub use error::{Error, Result};
pub use problem::{
    bregman, holder_majorant, CompositeProblem, Domain, Evaluator, ProxModel, Quadratic, SimplePart,
    SmoothFunction, Smoothness,
};
pub use prox::{project_box, soft_threshold, solve_separable, SeparableBoxL1Task};
pub use solvers::{
    certificate_bound, next_step_size, run_solver, solve_lhat, Certificate, Method, RunConfig, RunOutcome,
    RunRecord, SolverSettings,
};
