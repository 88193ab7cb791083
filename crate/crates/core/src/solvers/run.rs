use std::fmt;
use std::time::Instant;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use super::{Method, Solver, SolverSettings};
use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, Evaluator};

/// `R ≥ B(x*, x0)` together with the target accuracy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub radius_sq_half: f64,
    pub eps: f64,
}

/// `R/S + ε/2`, an upper bound on `h(x_k) − h*` once `S = S_k > 0`.
pub fn certificate_bound(cert: &Certificate, s_sum: f64) -> Result<f64> {
    if !(s_sum > 0.0) {
        return Err(Error::InvalidArgument(format!("S must be positive, got {s_sum}")));
    }
    if !(cert.radius_sq_half >= 0.0) || !(cert.eps > 0.0) {
        return Err(Error::InvalidArgument("certificate needs R >= 0 and eps > 0".into()));
    }
    Ok(cert.radius_sq_half / s_sum + 0.5 * cert.eps)
}

/// One outer iteration of telemetry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub solver: String,
    pub problem: String,
    pub params: String,
    pub k: u64,
    pub wall_s: f64,
    pub h: f64,
    #[serde(rename = "N_f")]
    pub n_f: u64,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    pub cert_bound: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub solver: SolverSettings,
    /// Starting point; defaults to the projection of the origin onto `C`.
    pub x0: Option<Array1<f64>>,
    pub max_oracle_calls: Option<u64>,
    pub max_seconds: Option<f64>,
    pub max_iterations: Option<u64>,
    pub certificate: Option<Certificate>,
    /// Stop as soon as `R/S_k ≤ ε/2`; needs `certificate`.
    pub stop_on_certificate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    OracleBudget,
    TimeBudget,
    Certificate,
    MaxIterations,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trace: Vec<RunRecord>,
    /// Final reported iterate.
    pub x: Array1<f64>,
    pub oracle_calls: u64,
    pub stop: StopReason,
}

impl RunOutcome {
    /// Smallest `h` over the trace.
    pub fn best_h(&self) -> Option<f64> {
        self.trace.iter().map(|r| r.h).reduce(f64::min)
    }
}

/// A failed run with the trace collected before the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub trace: Vec<RunRecord>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (after {} iterations)", self.error, self.trace.len())
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<Error> for RunFailure {
    fn from(error: Error) -> Self {
        Self { error, trace: Vec::new() }
    }
}

/// Projection of the origin onto the problem's domain.
pub fn default_start(problem: &CompositeProblem) -> Array1<f64> {
    let mut x = Array1::zeros(problem.dim());
    problem.domain().clamp_in_place(&mut x);
    x
}

/// Builds `method` on `problem` and runs it under `config`.
pub fn run_solver(problem: &CompositeProblem, method: Method, config: &RunConfig) -> std::result::Result<RunOutcome, RunFailure> {
    let x0 = config.x0.clone().unwrap_or_else(|| default_start(problem));
    let mut solver = method.build(problem, &config.solver, x0)?;
    run_iterations(solver.as_mut(), problem, config)
}

/// Drives an already built solver until the first stop rule fires.
///
/// An oracle budget that runs out inside an iteration ends the run and
/// discards that partial iteration.
pub fn run_iterations(
    solver: &mut dyn Solver,
    problem: &CompositeProblem,
    config: &RunConfig,
) -> std::result::Result<RunOutcome, RunFailure> {
    if config.stop_on_certificate && config.certificate.is_none() {
        return Err(Error::Configuration("certificate stopping needs a radius estimate".into()).into());
    }
    let mut ev = match config.max_oracle_calls {
        Some(b) => Evaluator::with_budget(problem, b),
        None => Evaluator::new(problem),
    };
    let label = solver.label();
    let params = solver.params_string();
    let start = Instant::now();
    let mut trace: Vec<RunRecord> = Vec::new();
    let mut k: u64 = 0;

    let stop = loop {
        if config.max_iterations.is_some_and(|m| k >= m) {
            break StopReason::MaxIterations;
        }
        if config.max_seconds.is_some_and(|t| start.elapsed().as_secs_f64() >= t) {
            break StopReason::TimeBudget;
        }
        if ev.remaining() == Some(0) {
            break StopReason::OracleBudget;
        }
        if config.stop_on_certificate {
            let cert = config.certificate.expect("checked above");
            if let Some(s) = solver.scaling_sum().filter(|&s| s > 0.0) {
                if cert.radius_sq_half / s <= 0.5 * cert.eps {
                    break StopReason::Certificate;
                }
            }
        }
        match solver.step(&mut ev) {
            Ok(()) => {}
            Err(Error::BudgetExhausted(_)) => break StopReason::OracleBudget,
            Err(error) => return Err(RunFailure { error, trace }),
        }
        k += 1;
        let h = solver
            .iterate_value()
            .unwrap_or_else(|| problem.objective(solver.iterate()));
        if !h.is_finite() {
            return Err(RunFailure {
                error: Error::NumericOverflow("objective at iterate"),
                trace,
            });
        }
        let s = solver.scaling_sum();
        let cert_bound = match (config.certificate, s) {
            (Some(c), Some(s)) if s > 0.0 => certificate_bound(&c, s).ok(),
            _ => None,
        };
        trace.push(RunRecord {
            solver: label.clone(),
            problem: problem.name().to_string(),
            params: params.clone(),
            k,
            wall_s: start.elapsed().as_secs_f64(),
            h,
            n_f: ev.calls(),
            s,
            cert_bound,
        });
    };

    Ok(RunOutcome {
        trace,
        x: solver.iterate().to_owned(),
        oracle_calls: ev.calls(),
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Domain, Quadratic, SimplePart, Smoothness};
    use ndarray::array;
    use std::sync::Arc;

    fn quad() -> CompositeProblem {
        let q = Quadratic::diagonal(&[1.0, 4.0], array![1.0, -1.0]).unwrap();
        CompositeProblem::new(Arc::new(q), SimplePart::Zero, Domain::WholeSpace)
            .unwrap()
            .with_smoothness(Smoothness::lipschitz(4.0).unwrap())
    }

    #[test]
    fn certificate_bound_cases() {
        let c = Certificate { radius_sq_half: 2.0, eps: 0.1 };
        assert!((certificate_bound(&c, 1e300).unwrap() - 0.05).abs() < 1e-15);
        let z = Certificate { radius_sq_half: 0.0, eps: 0.1 };
        for s in [0.1, 1.0, 100.0] {
            assert_eq!(certificate_bound(&z, s).unwrap(), 0.05);
        }
        assert!(certificate_bound(&c, 0.0).is_err());
        assert!(certificate_bound(&c, 1.0).unwrap() >= certificate_bound(&c, 2.0).unwrap());
    }

    #[test]
    fn zero_budget_returns_start() {
        let p = quad();
        let cfg = RunConfig {
            max_oracle_calls: Some(0),
            x0: Some(array![0.3, 0.2]),
            ..RunConfig::default()
        };
        for m in [Method::Asga1, Method::Asga4, Method::Fista] {
            let out = run_solver(&p, m, &cfg).unwrap();
            assert!(out.trace.is_empty());
            assert_eq!(out.x, array![0.3, 0.2]);
            assert_eq!(out.stop, StopReason::OracleBudget);
        }
    }

    #[test]
    fn budget_is_never_exceeded() {
        let p = quad();
        for m in Method::ALL {
            for b in [1, 2, 5, 17] {
                let cfg = RunConfig {
                    max_oracle_calls: Some(b),
                    ..RunConfig::default()
                };
                let out = run_solver(&p, m, &cfg).unwrap();
                assert!(out.oracle_calls <= b);
                if let Some(last) = out.trace.last() {
                    assert!(last.n_f <= b);
                }
            }
        }
    }

    #[test]
    fn certificate_rule_stops_at_first_small_ratio() {
        let p = quad();
        let r = 0.5 * (1.0f64 + 1.0);
        let eps = 1e-3;
        let cfg = RunConfig {
            certificate: Some(Certificate { radius_sq_half: r, eps }),
            stop_on_certificate: true,
            max_iterations: Some(100_000),
            ..RunConfig::default()
        };
        let out = run_solver(&p, Method::Asga1, &cfg).unwrap();
        assert_eq!(out.stop, StopReason::Certificate);
        let n = out.trace.len();
        assert!(r / out.trace[n - 1].s.unwrap() <= eps / 2.0);
        if n >= 2 {
            assert!(r / out.trace[n - 2].s.unwrap() > eps / 2.0);
        }
    }

    #[test]
    fn trace_fields_are_monotone() {
        let p = quad();
        let cfg = RunConfig {
            max_iterations: Some(30),
            ..RunConfig::default()
        };
        for m in Method::ALL {
            let out = run_solver(&p, m, &cfg).unwrap();
            assert_eq!(out.trace.len(), 30);
            for w in out.trace.windows(2) {
                assert!(w[1].k == w[0].k + 1);
                assert!(w[1].n_f >= w[0].n_f);
                assert!(w[1].wall_s >= w[0].wall_s);
            }
        }
    }

    #[test]
    fn missing_radius_is_a_configuration_error() {
        let p = quad();
        let cfg = RunConfig {
            stop_on_certificate: true,
            ..RunConfig::default()
        };
        let err = run_solver(&p, Method::Asga1, &cfg).unwrap_err();
        assert!(matches!(err.error, Error::Configuration(_)));
    }
}
