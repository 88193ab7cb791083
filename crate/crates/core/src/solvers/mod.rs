//! Solver front end: the [`Solver`] trait, method selection, and the run loop.

mod asga;
mod estimation;
mod run;
mod scaling;

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

pub use asga::{Asga, AsgaParams, AsgaVariant, IterateState, LineSearchState};
pub use estimation::EstimationState;
pub use run::{
    certificate_bound, run_iterations, run_solver, Certificate, RunConfig, RunFailure, RunOutcome, RunRecord,
    StopReason,
};
pub use scaling::{next_step_size, solve_lhat, solve_lhat_shifted, LhatSolution, ScalingState, ZetaEquation};

use crate::baselines::{nesun_preset, Fista, Nsdsg, Pga};
use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, Evaluator};

/// One iterative method driven by the run loop.
pub trait Solver {
    /// Name shown in traces.
    fn label(&self) -> String;

    /// Parameter summary for traces, `key=value` pairs separated by `;`.
    fn params_string(&self) -> String;

    /// Advances one outer iteration. On error the state is unchanged.
    fn step(&mut self, ev: &mut Evaluator<'_>) -> Result<()>;

    /// The iterate the method reports.
    fn iterate(&self) -> ArrayView1<'_, f64>;

    /// `h` at the reported iterate when the step already paid for it.
    fn iterate_value(&self) -> Option<f64> {
        None
    }

    /// `S_k` for methods built on a scaling sequence.
    fn scaling_sum(&self) -> Option<f64> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "ASGA-1")]
    Asga1,
    #[serde(rename = "ASGA-2")]
    Asga2,
    #[serde(rename = "ASGA-3")]
    Asga3,
    #[serde(rename = "ASGA-4")]
    Asga4,
    #[serde(rename = "NESUN")]
    Nesun,
    #[serde(rename = "NSDSG")]
    Nsdsg,
    #[serde(rename = "PGA")]
    Pga,
    #[serde(rename = "FISTA")]
    Fista,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Nsdsg,
        Method::Pga,
        Method::Fista,
        Method::Nesun,
        Method::Asga1,
        Method::Asga2,
        Method::Asga3,
        Method::Asga4,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Asga1 => "ASGA-1",
            Method::Asga2 => "ASGA-2",
            Method::Asga3 => "ASGA-3",
            Method::Asga4 => "ASGA-4",
            Method::Nesun => "NESUN",
            Method::Nsdsg => "NSDSG",
            Method::Pga => "PGA",
            Method::Fista => "FISTA",
        }
    }

    pub fn asga_variant(self) -> Option<AsgaVariant> {
        match self {
            Method::Asga1 => Some(AsgaVariant::One),
            Method::Asga2 => Some(AsgaVariant::Two),
            Method::Asga3 => Some(AsgaVariant::Three),
            Method::Asga4 => Some(AsgaVariant::Four),
            _ => None,
        }
    }

    /// Instantiates the method on `problem` starting from `x0`.
    pub fn build(self, problem: &CompositeProblem, settings: &SolverSettings, x0: Array1<f64>) -> Result<Box<dyn Solver>> {
        match self {
            Method::Asga1 | Method::Asga2 | Method::Asga3 | Method::Asga4 => {
                let variant = self.asga_variant().expect("ASGA method");
                let mut params = AsgaParams::for_problem(problem, settings.eps);
                if let Some(mu) = settings.mu {
                    params = params.with_mu(mu);
                }
                params.l0 = settings.l0;
                params.gamma1 = settings.gamma1.unwrap_or(AsgaParams::DEFAULT_GAMMA1);
                params.gamma2 = settings.gamma2.unwrap_or(AsgaParams::DEFAULT_GAMMA2);
                params.trial_cap = settings.trial_cap;
                Ok(Box::new(Asga::new(variant, problem, params, x0)?))
            }
            Method::Nesun => {
                let mut params = nesun_preset(settings.eps);
                params.l0 = settings.l0;
                params.trial_cap = settings.trial_cap;
                Ok(Box::new(Asga::new(AsgaVariant::Four, problem, params, x0)?))
            }
            Method::Nsdsg => Ok(Box::new(Nsdsg::new(
                problem,
                settings.alpha0.unwrap_or(Nsdsg::DEFAULT_ALPHA0),
                x0,
            )?)),
            Method::Pga => Ok(Box::new(Pga::new(problem, settings.lipschitz, settings.allow_constrained, x0)?)),
            Method::Fista => Ok(Box::new(Fista::new(problem, settings.lipschitz, settings.allow_constrained, x0)?)),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "asga1" => Method::Asga1,
            "asga2" => Method::Asga2,
            "asga3" => Method::Asga3,
            "asga4" => Method::Asga4,
            "nesun" => Method::Nesun,
            "nsdsg" => Method::Nsdsg,
            "pga" => Method::Pga,
            "fista" => Method::Fista,
            _ => return Err(Error::Configuration(format!("unknown solver '{s}'"))),
        })
    }
}

/// Method parameters; unset entries fall back to per-method defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Target accuracy `ε`.
    pub eps: f64,
    /// Override of the convexity modulus (capped by the problem's).
    pub mu: Option<f64>,
    /// Initial line-search constant.
    pub l0: f64,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub trial_cap: usize,
    /// Initial step of the diminishing-step subgradient method.
    pub alpha0: Option<f64>,
    /// Lipschitz constant for the proximal-gradient baselines.
    pub lipschitz: Option<f64>,
    /// Lets PGA and FISTA run on box-constrained problems.
    pub allow_constrained: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            eps: 1e-4,
            mu: None,
            l0: 1.0,
            gamma1: None,
            gamma2: None,
            trial_cap: AsgaParams::DEFAULT_TRIAL_CAP,
            alpha0: None,
            lipschitz: None,
            allow_constrained: false,
        }
    }
}

impl SolverSettings {
    pub fn with_eps(eps: f64) -> Self {
        Self {
            eps,
            ..Self::default()
        }
    }
}
