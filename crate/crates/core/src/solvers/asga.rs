//! The four accelerated schemes.
//!
//! All four share one estimation function and one scaling sequence and
//! differ in two choices:
//!
//! | scheme | model point | constant | reported iterate |
//! |--------|-------------|----------|------------------|
//! | ASGA-1 | `y_k`       | known    | `x_k`            |
//! | ASGA-2 | `y_k`       | search   | `x_k`            |
//! | ASGA-3 | `x_{k+1}`   | known    | `y_k`            |
//! | ASGA-4 | `x_{k+1}`   | search   | `y_k`            |
//!
//! Each step computes everything tentatively and commits only once all of
//! its oracle calls have succeeded, so an interrupted step leaves the state
//! untouched.

use ndarray::{Array1, ArrayView1};

use super::estimation::{l1_parts, EstimationState};
use super::scaling::{solve_lhat_shifted, LhatSolution, ScalingState};
use super::Solver;
use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, Evaluator, Smoothness};
use crate::prox::{solve_separable, SeparableBoxL1Task};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsgaVariant {
    One,
    Two,
    Three,
    Four,
}

impl AsgaVariant {
    pub fn uses_line_search(self) -> bool {
        matches!(self, AsgaVariant::Two | AsgaVariant::Four)
    }

    pub fn double_subproblem(self) -> bool {
        matches!(self, AsgaVariant::Three | AsgaVariant::Four)
    }

    pub fn label(self) -> &'static str {
        match self {
            AsgaVariant::One => "ASGA-1",
            AsgaVariant::Two => "ASGA-2",
            AsgaVariant::Three => "ASGA-3",
            AsgaVariant::Four => "ASGA-4",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsgaParams {
    /// Target accuracy; also the slack of the inexact majorant.
    pub eps: f64,
    /// Convexity modulus used in the step-size equation.
    pub mu: f64,
    /// Convexity modulus of `f` used in the lower models.
    pub mu_f: f64,
    /// Initial constant of the line search.
    pub l0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Maximum inner trials per iteration before giving up.
    pub trial_cap: usize,
    pub label: String,
}

impl AsgaParams {
    pub const DEFAULT_GAMMA1: f64 = 4.0;
    pub const DEFAULT_GAMMA2: f64 = 0.9;
    pub const DEFAULT_TRIAL_CAP: usize = 60;

    /// Defaults taking `μ` and `μ_f` from the problem.
    pub fn for_problem(problem: &CompositeProblem, eps: f64) -> Self {
        Self {
            eps,
            mu: problem.mu(),
            mu_f: problem.mu_f(),
            l0: 1.0,
            gamma1: Self::DEFAULT_GAMMA1,
            gamma2: Self::DEFAULT_GAMMA2,
            trial_cap: Self::DEFAULT_TRIAL_CAP,
            label: String::new(),
        }
    }

    /// Caps the step-size modulus at `mu`, lowering the model modulus with it.
    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self.mu_f = self.mu_f.min(mu);
        self
    }

    pub fn validate(&self, problem: &CompositeProblem) -> Result<()> {
        let bad = |msg: String| Err(Error::Configuration(msg));
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.mu_f >= 0.0) || self.mu_f > problem.mu_f() {
            return bad(format!(
                "model modulus {} exceeds the problem's mu_f = {}",
                self.mu_f,
                problem.mu_f()
            ));
        }
        if !(self.mu >= 0.0) || self.mu > self.mu_f + problem.mu_p() {
            return bad(format!(
                "step modulus {} exceeds mu_f + mu_p = {}",
                self.mu,
                self.mu_f + problem.mu_p()
            ));
        }
        if !(self.l0 > 0.0) || !self.l0.is_finite() {
            return bad(format!("initial constant must be positive, got {}", self.l0));
        }
        if !(self.gamma1 > 1.0) || !(self.gamma2 > 0.0 && self.gamma2 < 1.0) {
            return bad(format!(
                "need gamma1 > 1 and 0 < gamma2 < 1, got ({}, {})",
                self.gamma1, self.gamma2
            ));
        }
        if self.trial_cap == 0 {
            return bad("trial cap must be positive".into());
        }
        Ok(())
    }
}

/// Backtracking state of ASGA-2/4.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSearchState {
    /// Running estimate `L_k`.
    pub l: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Exponent `p` of the accepted trial in the last iteration.
    pub p: u32,
    /// Oracle calls spent by the line search so far.
    pub oracle_calls: u64,
    /// Smallest `α` over every trial so far.
    pub min_alpha: f64,
}

/// Iterates of the current step.
///
/// For ASGA-1/2, `x` is `x_k` and `y` the last model point `y_{k-1}`. For
/// ASGA-3/4, `y` is `y_k`, `x` the last model point `x_k`, and `u` the last
/// auxiliary minimizer. The estimation minimizer (`z_k` or `v_k`) lives in
/// the [`EstimationState`].
#[derive(Clone, Debug)]
pub struct IterateState {
    pub x: Array1<f64>,
    pub y: Array1<f64>,
    pub u: Option<Array1<f64>>,
}

#[derive(Clone, Debug)]
pub struct Asga {
    variant: AsgaVariant,
    params: AsgaParams,
    smoothness: Option<Smoothness>,
    scaling: ScalingState,
    est: EstimationState,
    it: IterateState,
    line_search: Option<LineSearchState>,
    last_lhat: Option<LhatSolution>,
    value: Option<f64>,
    iteration: usize,
}

/// `a·p + (1 − a)·q`.
fn combine(a: f64, p: ArrayView1<'_, f64>, q: ArrayView1<'_, f64>) -> Array1<f64> {
    let mut out = q.mapv(|v| (1.0 - a) * v);
    out.scaled_add(a, &p);
    out
}

impl Asga {
    pub fn new(variant: AsgaVariant, problem: &CompositeProblem, params: AsgaParams, x0: Array1<f64>) -> Result<Self> {
        params.validate(problem)?;
        let smoothness = problem.smoothness();
        if !variant.uses_line_search() && smoothness.is_none() {
            return Err(Error::Configuration(format!(
                "{} needs the smoothness parameters of the problem",
                variant.label()
            )));
        }
        let est = EstimationState::new(problem, x0.clone())?;
        let line_search = variant.uses_line_search().then_some(LineSearchState {
            l: params.l0,
            gamma1: params.gamma1,
            gamma2: params.gamma2,
            p: 0,
            oracle_calls: 0,
            min_alpha: 1.0,
        });
        Ok(Self {
            variant,
            params,
            smoothness,
            scaling: ScalingState::initial(),
            est,
            it: IterateState {
                x: x0.clone(),
                y: x0,
                u: None,
            },
            line_search,
            last_lhat: None,
            value: None,
            iteration: 0,
        })
    }

    pub fn variant(&self) -> AsgaVariant {
        self.variant
    }

    pub fn params(&self) -> &AsgaParams {
        &self.params
    }

    pub fn scaling(&self) -> &ScalingState {
        &self.scaling
    }

    pub fn estimation(&self) -> &EstimationState {
        &self.est
    }

    pub fn iterates(&self) -> &IterateState {
        &self.it
    }

    pub fn line_search(&self) -> Option<&LineSearchState> {
        self.line_search.as_ref()
    }

    /// Root-finder result of the last known-constant step.
    pub fn last_lhat(&self) -> Option<LhatSolution> {
        self.last_lhat
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    fn lhat(&mut self) -> Result<f64> {
        let sm = self.smoothness.expect("checked at construction");
        let sol = solve_lhat_shifted(
            self.scaling.s_sum,
            self.params.mu,
            sm.nu,
            sm.l_nu,
            self.params.eps,
            sm.quadratic_curvature,
        )?;
        self.last_lhat = Some(sol);
        Ok(sol.value)
    }

    fn step_single(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        let lh = self.lhat()?;
        let problem = ev.problem();
        let prop = self.scaling.propose(self.params.mu, lh)?;
        let t = self.single_trial(ev, problem, &prop, false)?;
        self.commit_single(prop, t);
        Ok(())
    }

    fn single_trial(
        &self,
        ev: &mut Evaluator<'_>,
        problem: &CompositeProblem,
        prop: &ScalingState,
        with_value: bool,
    ) -> Result<SingleTrial> {
        let a = prop.alpha;
        let mut y = combine(a, self.est.minimizer().view(), self.it.x.view());
        problem.domain().clamp_in_place(&mut y);
        let (fy, g) = ev.first_order(y.view())?;
        let est = self.est.updated(problem, prop.s_next, fy, g.view(), y.view(), self.params.mu_f)?;
        let mut x = combine(a, est.minimizer().view(), self.it.x.view());
        problem.domain().clamp_in_place(&mut x);
        let fx = if with_value { Some(ev.value_f(x.view())?) } else { None };
        Ok(SingleTrial { y, fy, g, est, x, fx })
    }

    fn commit_single(&mut self, prop: ScalingState, t: SingleTrial) {
        self.scaling = ScalingState {
            s_sum: prop.next_sum(),
            ..prop
        };
        self.est = t.est;
        self.it = IterateState { x: t.x, y: t.y, u: None };
        self.iteration += 1;
    }

    fn step_single_search(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        let problem = ev.problem();
        let ls = self.line_search.clone().expect("line-search scheme");
        let mut min_alpha = ls.min_alpha;
        for p in 0..self.params.trial_cap as u32 {
            let l_bar = ls.l * ls.gamma1.powi(p as i32);
            if !l_bar.is_finite() {
                break;
            }
            let prop = self.scaling.propose(self.params.mu, l_bar)?;
            min_alpha = min_alpha.min(prop.alpha);
            let t = self.single_trial(ev, problem, &prop, true)?;
            let fx = t.fx.expect("value requested");
            let d = &t.x - &t.y;
            let bound = t.fy + t.g.dot(&d) + 0.5 * l_bar * d.dot(&d) + 0.5 * prop.alpha * self.params.eps;
            if fx <= bound {
                self.value = Some(fx + problem.psi(t.x.view()));
                self.commit_single(prop, t);
                self.line_search = Some(LineSearchState {
                    l: ls.gamma2 * l_bar,
                    p,
                    oracle_calls: ls.oracle_calls + 2 * (p as u64 + 1),
                    min_alpha,
                    ..ls
                });
                return Ok(());
            }
        }
        Err(self.stall(&ls))
    }

    fn stall(&self, ls: &LineSearchState) -> Error {
        Error::LineSearchStall {
            iteration: self.iteration,
            trials: self.params.trial_cap,
            last_l: ls.l * ls.gamma1.powi(self.params.trial_cap.saturating_sub(1) as i32),
        }
    }

    /// Minimizer of `½(1 + Sμ)‖x − v‖² + s(⟨g, x⟩ + (μ_f/2)‖x − x̂‖² + ψ(x))` over `C`.
    fn aux_minimizer(
        &self,
        problem: &CompositeProblem,
        s: f64,
        g: ArrayView1<'_, f64>,
        xq: ArrayView1<'_, f64>,
    ) -> Result<Array1<f64>> {
        let w = 1.0 + self.scaling.s_sum * self.params.mu;
        let scale = s / w;
        let mut lin = g.mapv(|v| scale * v);
        if self.params.mu_f != 0.0 {
            lin.scaled_add(-scale * self.params.mu_f, &xq);
        }
        let (weight, leading) = l1_parts(problem.simple());
        let task = SeparableBoxL1Task::new(
            self.est.minimizer().view(),
            lin.view(),
            scale * self.params.mu_f,
            scale * weight,
            problem.domain(),
        )
        .with_l1_leading(leading);
        solve_separable(&task)
    }

    fn double_trial(
        &self,
        ev: &mut Evaluator<'_>,
        problem: &CompositeProblem,
        prop: &ScalingState,
    ) -> Result<DoubleTrial> {
        let a = prop.alpha;
        let mut x = combine(a, self.est.minimizer().view(), self.it.y.view());
        problem.domain().clamp_in_place(&mut x);
        let (fx, g) = ev.first_order(x.view())?;
        let u = self.aux_minimizer(problem, prop.s_next, g.view(), x.view())?;
        let mut y = combine(a, u.view(), self.it.y.view());
        problem.domain().clamp_in_place(&mut y);
        let fy = ev.value_f(y.view())?;
        Ok(DoubleTrial { x, fx, g, u, y, fy })
    }

    fn commit_double(&mut self, problem: &CompositeProblem, prop: ScalingState, t: DoubleTrial) -> Result<()> {
        let est = self
            .est
            .updated(problem, prop.s_next, t.fx, t.g.view(), t.x.view(), self.params.mu_f)?;
        self.value = Some(t.fy + problem.psi(t.y.view()));
        self.scaling = ScalingState {
            s_sum: prop.next_sum(),
            ..prop
        };
        self.est = est;
        self.it = IterateState {
            x: t.x,
            y: t.y,
            u: Some(t.u),
        };
        self.iteration += 1;
        Ok(())
    }

    fn step_double(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        let lh = self.lhat()?;
        let problem = ev.problem();
        let prop = self.scaling.propose(self.params.mu, lh)?;
        let t = self.double_trial(ev, problem, &prop)?;
        self.commit_double(problem, prop, t)
    }

    fn step_double_search(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        let problem = ev.problem();
        let ls = self.line_search.clone().expect("line-search scheme");
        let mut min_alpha = ls.min_alpha;
        for p in 0..self.params.trial_cap as u32 {
            let l_bar = ls.l * ls.gamma1.powi(p as i32);
            if !l_bar.is_finite() {
                break;
            }
            let prop = self.scaling.propose(self.params.mu, l_bar)?;
            min_alpha = min_alpha.min(prop.alpha);
            let t = self.double_trial(ev, problem, &prop)?;
            let d = &t.y - &t.x;
            let bound = t.fx + t.g.dot(&d) + 0.5 * l_bar * d.dot(&d) + 0.5 * prop.alpha * self.params.eps;
            if t.fy <= bound {
                self.commit_double(problem, prop, t)?;
                self.line_search = Some(LineSearchState {
                    l: ls.gamma2 * l_bar,
                    p,
                    oracle_calls: ls.oracle_calls + 2 * (p as u64 + 1),
                    min_alpha,
                    ..ls
                });
                return Ok(());
            }
        }
        Err(self.stall(&ls))
    }
}

struct SingleTrial {
    y: Array1<f64>,
    fy: f64,
    g: Array1<f64>,
    est: EstimationState,
    x: Array1<f64>,
    fx: Option<f64>,
}

struct DoubleTrial {
    x: Array1<f64>,
    fx: f64,
    g: Array1<f64>,
    u: Array1<f64>,
    y: Array1<f64>,
    fy: f64,
}

impl Solver for Asga {
    fn label(&self) -> String {
        if self.params.label.is_empty() {
            self.variant.label().to_string()
        } else {
            self.params.label.clone()
        }
    }

    fn params_string(&self) -> String {
        let p = &self.params;
        if self.variant.uses_line_search() {
            format!(
                "eps={:e};mu={:e};L0={:e};gamma1={};gamma2={}",
                p.eps, p.mu, p.l0, p.gamma1, p.gamma2
            )
        } else {
            format!("eps={:e};mu={:e}", p.eps, p.mu)
        }
    }

    fn step(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        self.value = None;
        match self.variant {
            AsgaVariant::One => self.step_single(ev),
            AsgaVariant::Two => self.step_single_search(ev),
            AsgaVariant::Three => self.step_double(ev),
            AsgaVariant::Four => self.step_double_search(ev),
        }
    }

    fn iterate(&self) -> ArrayView1<'_, f64> {
        if self.variant.double_subproblem() {
            self.it.y.view()
        } else {
            self.it.x.view()
        }
    }

    fn iterate_value(&self) -> Option<f64> {
        self.value
    }

    fn scaling_sum(&self) -> Option<f64> {
        Some(self.scaling.s_sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Domain, Quadratic, SimplePart};
    use ndarray::array;
    use std::sync::Arc;

    fn scalar_problem() -> CompositeProblem {
        let q = Quadratic::diagonal(&[1.0], array![0.0]).unwrap();
        CompositeProblem::new(Arc::new(q), SimplePart::Zero, Domain::WholeSpace)
            .unwrap()
            .with_smoothness(Smoothness::lipschitz(1.0).unwrap())
    }

    fn run(variant: AsgaVariant, p: &CompositeProblem, x0: Array1<f64>, iters: usize) -> Asga {
        let mut s = Asga::new(variant, p, AsgaParams::for_problem(p, 1e-3), x0).unwrap();
        let mut ev = Evaluator::new(p);
        for _ in 0..iters {
            s.step(&mut ev).unwrap();
        }
        s
    }

    #[test]
    fn first_step_collapses() {
        let p = scalar_problem();
        let x0 = array![1.0];
        let s = run(AsgaVariant::One, &p, x0.clone(), 1);
        assert_eq!(s.scaling().alpha, 1.0);
        // y_0 = z_0 = x_0 and x_1 = z_1.
        assert_eq!(s.iterates().y, x0);
        assert_eq!(&s.iterates().x, s.estimation().minimizer());

        let s = run(AsgaVariant::Three, &p, x0.clone(), 1);
        assert_eq!(s.iterates().x, x0);
    }

    #[test]
    fn scalar_quadratic_descends_with_certificate() {
        // f = ½x², L = 1: ASGA-1 takes s = 1 so z_1 = x_0 − g(x_0) = 0 and stays there.
        let p = scalar_problem();
        let mut s = Asga::new(AsgaVariant::One, &p, AsgaParams::for_problem(&p, 1e-3), array![1.0]).unwrap();
        let mut ev = Evaluator::new(&p);
        let mut prev = p.objective(array![1.0].view());
        for _ in 0..20 {
            s.step(&mut ev).unwrap();
            let h = p.objective(s.iterate());
            assert!(h <= prev);
            let st = s.scaling();
            assert!(st.s_sum * (h - 0.5e-3) <= s.estimation().phi_star() + 1e-12);
            prev = h;
        }
        assert!(prev <= 1e-12);
        assert_eq!(ev.calls(), 20);
    }

    #[test]
    fn line_search_accepts_first_trial_when_constant_is_large() {
        let p = scalar_problem();
        let mut params = AsgaParams::for_problem(&p, 1e-3);
        params.l0 = 8.0;
        let mut s = Asga::new(AsgaVariant::Two, &p, params, array![3.0]).unwrap();
        let mut ev = Evaluator::new(&p);
        s.step(&mut ev).unwrap();
        let ls = s.line_search().unwrap();
        assert_eq!(ls.p, 0);
        assert_eq!(ls.l, 0.9 * 8.0);
        assert_eq!(ev.calls(), 2);
    }

    #[test]
    fn known_constant_needed_without_line_search() {
        let q = Quadratic::diagonal(&[1.0], array![0.0]).unwrap();
        let p = CompositeProblem::new(Arc::new(q), SimplePart::Zero, Domain::WholeSpace).unwrap();
        let err = Asga::new(AsgaVariant::One, &p, AsgaParams::for_problem(&p, 1e-3), array![0.0]);
        assert!(matches!(err, Err(Error::Configuration(_))));
        assert!(Asga::new(AsgaVariant::Two, &p, AsgaParams::for_problem(&p, 1e-3), array![0.0]).is_ok());
    }

    #[test]
    fn rejects_modulus_above_problem() {
        let p = scalar_problem();
        let mut params = AsgaParams::for_problem(&p, 1e-3);
        params.mu = 0.5;
        assert!(Asga::new(AsgaVariant::One, &p, params, array![0.0]).is_err());
    }
}
