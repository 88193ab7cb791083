//! Reference methods: diminishing-step subgradient (NSDSG), proximal
//! gradient (PGA), FISTA, and the NESUN configuration of ASGA-4.
//!
//! Each baseline makes exactly one oracle call per iteration.

use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, Evaluator};
use crate::prox::{solve_separable, SeparableBoxL1Task};
use crate::solvers::{AsgaParams, Solver};

/// `argmin_C ½‖x − center‖² + ⟨t·g, x⟩ + t·ψ(x)`.
fn prox_step(problem: &CompositeProblem, center: ArrayView1<'_, f64>, g: &Array1<f64>, t: f64) -> Result<Array1<f64>> {
    let lin = g.mapv(|v| t * v);
    let (weight, leading) = match problem.simple() {
        crate::problem::SimplePart::Zero => (0.0, None),
        crate::problem::SimplePart::L1 { weight, leading } => (*weight, *leading),
    };
    let task = SeparableBoxL1Task::new(center, lin.view(), 0.0, t * weight, problem.domain()).with_l1_leading(leading);
    solve_separable(&task)
}

/// ASGA-4 with `μ = 0`, `γ1 = 2`, `γ2 = 0.5`.
pub fn nesun_preset(eps: f64) -> AsgaParams {
    AsgaParams {
        eps,
        mu: 0.0,
        mu_f: 0.0,
        l0: 1.0,
        gamma1: 2.0,
        gamma2: 0.5,
        trial_cap: AsgaParams::DEFAULT_TRIAL_CAP,
        label: "NESUN".into(),
    }
}

/// Projected/proximal subgradient method with steps `α0/√k`.
#[derive(Clone, Debug)]
pub struct Nsdsg {
    alpha0: f64,
    x: Array1<f64>,
    k: u64,
}

impl Nsdsg {
    pub const DEFAULT_ALPHA0: f64 = 1e-1;
    pub const SVM_ALPHA0: f64 = 5e-11;

    pub fn new(problem: &CompositeProblem, alpha0: f64, x0: Array1<f64>) -> Result<Self> {
        if !(alpha0 > 0.0) || !alpha0.is_finite() {
            return Err(Error::Configuration(format!("alpha0 must be positive, got {alpha0}")));
        }
        problem.check_dim(x0.view())?;
        Ok(Self { alpha0, x: x0, k: 1 })
    }

    /// Step used at iteration `k ≥ 1`.
    pub fn step_size(&self, k: u64) -> f64 {
        self.alpha0 / (k as f64).sqrt()
    }
}

impl Solver for Nsdsg {
    fn label(&self) -> String {
        "NSDSG".into()
    }

    fn params_string(&self) -> String {
        format!("alpha0={:e}", self.alpha0)
    }

    fn step(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        let problem = ev.problem();
        let g = ev.subgrad_f(self.x.view())?;
        self.x = prox_step(problem, self.x.view(), &g, self.step_size(self.k))?;
        self.k += 1;
        Ok(())
    }

    fn iterate(&self) -> ArrayView1<'_, f64> {
        self.x.view()
    }
}

fn lipschitz_for(problem: &CompositeProblem, lipschitz: Option<f64>, allow_constrained: bool, name: &str) -> Result<f64> {
    if problem.domain().is_box() && !allow_constrained {
        return Err(Error::Unsupported(format!(
            "{name} is disabled on box-constrained problems unless explicitly allowed"
        )));
    }
    let l = match lipschitz {
        Some(l) => l,
        None => match problem.smoothness() {
            Some(sm) if sm.nu == 1.0 => sm.l_nu + sm.quadratic_curvature,
            _ => {
                return Err(Error::Configuration(format!(
                    "{name} needs a Lipschitz constant of the gradient"
                )))
            }
        },
    };
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Configuration(format!("Lipschitz constant must be positive, got {l}")));
    }
    Ok(l)
}

/// Proximal gradient with constant step `1/L`.
#[derive(Clone, Debug)]
pub struct Pga {
    l: f64,
    x: Array1<f64>,
}

impl Pga {
    pub fn new(problem: &CompositeProblem, lipschitz: Option<f64>, allow_constrained: bool, x0: Array1<f64>) -> Result<Self> {
        let l = lipschitz_for(problem, lipschitz, allow_constrained, "PGA")?;
        problem.check_dim(x0.view())?;
        Ok(Self { l, x: x0 })
    }

    pub fn lipschitz(&self) -> f64 {
        self.l
    }
}

impl Solver for Pga {
    fn label(&self) -> String {
        "PGA".into()
    }

    fn params_string(&self) -> String {
        format!("L={:e}", self.l)
    }

    fn step(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        let problem = ev.problem();
        let g = ev.subgrad_f(self.x.view())?;
        self.x = prox_step(problem, self.x.view(), &g, 1.0 / self.l)?;
        Ok(())
    }

    fn iterate(&self) -> ArrayView1<'_, f64> {
        self.x.view()
    }
}

/// FISTA with constant step `1/L`.
///
/// On a box (when allowed) the box is folded into the prox and the
/// extrapolated point is clamped back into it before the oracle call.
#[derive(Clone, Debug)]
pub struct Fista {
    l: f64,
    x: Array1<f64>,
    y: Array1<f64>,
    t: f64,
}

impl Fista {
    pub fn new(problem: &CompositeProblem, lipschitz: Option<f64>, allow_constrained: bool, x0: Array1<f64>) -> Result<Self> {
        let l = lipschitz_for(problem, lipschitz, allow_constrained, "FISTA")?;
        problem.check_dim(x0.view())?;
        Ok(Self {
            l,
            y: x0.clone(),
            x: x0,
            t: 1.0,
        })
    }

    /// Current momentum parameter `t_k`.
    pub fn t(&self) -> f64 {
        self.t
    }
}

impl Solver for Fista {
    fn label(&self) -> String {
        "FISTA".into()
    }

    fn params_string(&self) -> String {
        format!("L={:e}", self.l)
    }

    fn step(&mut self, ev: &mut Evaluator<'_>) -> Result<()> {
        let problem = ev.problem();
        let g = ev.subgrad_f(self.y.view())?;
        let x_new = prox_step(problem, self.y.view(), &g, 1.0 / self.l)?;
        let t_new = 0.5 * (1.0 + (1.0 + 4.0 * self.t * self.t).sqrt());
        let beta = (self.t - 1.0) / t_new;
        let mut y = &x_new + &((&x_new - &self.x) * beta);
        problem.domain().clamp_in_place(&mut y);
        self.x = x_new;
        self.y = y;
        self.t = t_new;
        Ok(())
    }

    fn iterate(&self) -> ArrayView1<'_, f64> {
        self.x.view()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Domain, Quadratic, SimplePart, Smoothness};
    use crate::solvers::{run_solver, Asga, AsgaVariant, Method, RunConfig, SolverSettings};
    use ndarray::{array, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn random_quadratic(n: usize, seed: u64, mu: f64, l: f64) -> (CompositeProblem, Array1<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let diag: Vec<f64> = (0..n).map(|i| mu + (l - mu) * i as f64 / (n - 1) as f64).collect();
        let c: Array1<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let q = Quadratic::diagonal(&diag, c.clone()).unwrap();
        let p = CompositeProblem::new(Arc::new(q), SimplePart::Zero, Domain::WholeSpace)
            .unwrap()
            .with_smoothness(Smoothness::lipschitz(l).unwrap());
        (p, c)
    }

    fn lasso(seed: u64) -> CompositeProblem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Array2::from_shape_fn((15, 25), |_| rng.random_range(-1.0..1.0));
        let y: Array1<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
        let l = crate::zoo::power_norm_sq(&a, 7).unwrap();
        let ls = crate::zoo::LeastSquares::new(a, y, 0.0).unwrap();
        CompositeProblem::new(Arc::new(ls), SimplePart::l1(0.1).unwrap(), Domain::WholeSpace)
            .unwrap()
            .with_smoothness(Smoothness::lipschitz(l).unwrap())
    }

    fn iterate_h<S: Solver>(p: &CompositeProblem, s: &mut S, n: usize) -> Vec<f64> {
        let mut ev = Evaluator::new(p);
        (0..n)
            .map(|_| {
                s.step(&mut ev).unwrap();
                p.objective(s.iterate())
            })
            .collect()
    }

    #[test]
    fn nsdsg_schedule() {
        let (p, _) = random_quadratic(3, 1, 1.0, 2.0);
        let s = Nsdsg::new(&p, 0.8, Array1::zeros(3)).unwrap();
        assert_eq!(s.step_size(1), 0.8);
        for k in [1u64, 3, 10, 250] {
            assert!((s.step_size(4 * k) / s.step_size(k) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn nsdsg_is_gradient_descent_without_psi() {
        let (p, _) = random_quadratic(3, 2, 1.0, 2.0);
        let x0 = array![0.4, -0.1, 0.9];
        let mut s = Nsdsg::new(&p, 0.3, x0.clone()).unwrap();
        let mut ev = Evaluator::new(&p);
        s.step(&mut ev).unwrap();
        let g = p.smooth().subgradient(x0.view());
        let want = &x0 - &(&g * 0.3);
        for j in 0..3 {
            assert!((s.iterate()[j] - want[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn pga_descends_monotonically() {
        let p = lasso(3);
        let mut s = Pga::new(&p, None, false, Array1::zeros(25)).unwrap();
        let hs = iterate_h(&p, &mut s, 300);
        let mut prev = p.objective(Array1::zeros(25).view());
        for h in hs {
            assert!(h <= prev + 1e-12);
            prev = h;
        }
    }

    #[test]
    fn pga_fixed_point_and_rate() {
        let (p, c) = random_quadratic(20, 4, 0.0, 5.0);
        let mut s = Pga::new(&p, None, false, c.clone()).unwrap();
        let mut ev = Evaluator::new(&p);
        s.step(&mut ev).unwrap();
        assert_eq!(s.iterate(), c.view());

        let x0 = Array1::zeros(20);
        let r2 = c.dot(&c);
        let mut s = Pga::new(&p, None, false, x0).unwrap();
        for (k, h) in iterate_h(&p, &mut s, 200).into_iter().enumerate() {
            let k = (k + 1) as f64;
            assert!(h <= 5.0 * r2 / (2.0 * k) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fista_momentum_and_rate() {
        let (p, c) = random_quadratic(20, 5, 0.0, 5.0);
        let mut s = Fista::new(&p, None, false, Array1::zeros(20)).unwrap();
        assert_eq!(s.t(), 1.0);
        let mut ev = Evaluator::new(&p);
        s.step(&mut ev).unwrap();
        assert!((s.t() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let mut t = s.t();
        for _ in 0..50 {
            s.step(&mut ev).unwrap();
            let want = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            assert_eq!(s.t(), want);
            t = want;
        }

        let r2 = c.dot(&c);
        let mut s = Fista::new(&p, None, false, Array1::zeros(20)).unwrap();
        for (k, h) in iterate_h(&p, &mut s, 300).into_iter().enumerate() {
            let k = (k + 1) as f64;
            assert!(h <= 2.0 * 5.0 * r2 / ((k + 1.0) * (k + 1.0)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn proximal_baselines_need_a_lipschitz_constant() {
        let q = Quadratic::diagonal(&[1.0], array![0.0]).unwrap();
        let p = CompositeProblem::new(Arc::new(q), SimplePart::Zero, Domain::WholeSpace).unwrap();
        assert!(matches!(Pga::new(&p, None, false, array![0.0]), Err(Error::Configuration(_))));
        assert!(Pga::new(&p, Some(1.0), false, array![0.0]).is_ok());
        let sm = Smoothness::new(0.0, 1.0).unwrap();
        let p = p.with_smoothness(sm);
        assert!(matches!(Fista::new(&p, None, false, array![0.0]), Err(Error::Configuration(_))));
    }

    #[test]
    fn proximal_baselines_refuse_boxes_by_default() {
        let q = Quadratic::diagonal(&[1.0], array![0.0]).unwrap();
        let p = CompositeProblem::new(Arc::new(q), SimplePart::Zero, Domain::symmetric_box(1, 1.0).unwrap())
            .unwrap()
            .with_smoothness(Smoothness::lipschitz(1.0).unwrap());
        assert!(matches!(Pga::new(&p, None, false, array![0.0]), Err(Error::Unsupported(_))));
        assert!(matches!(Fista::new(&p, None, false, array![0.0]), Err(Error::Unsupported(_))));
        assert!(Fista::new(&p, None, true, array![0.0]).is_ok());
    }

    #[test]
    fn nesun_preset_readback() {
        let p = nesun_preset(1e-3);
        assert_eq!((p.mu, p.gamma1, p.gamma2), (0.0, 2.0, 0.5));
        assert_eq!(p.mu_f, 0.0);
    }

    #[test]
    fn nesun_matches_asga4_without_convexity() {
        let p = lasso(8);
        let cfg = |gammas: Option<(f64, f64)>| RunConfig {
            solver: SolverSettings {
                eps: 1e-4,
                gamma1: gammas.map(|g| g.0),
                gamma2: gammas.map(|g| g.1),
                ..SolverSettings::default()
            },
            max_iterations: Some(80),
            ..RunConfig::default()
        };
        let a = run_solver(&p, Method::Nesun, &cfg(None)).unwrap();
        let b = run_solver(&p, Method::Asga4, &cfg(Some((2.0, 0.5)))).unwrap();
        assert_eq!(a.trace.len(), b.trace.len());
        for (ra, rb) in a.trace.iter().zip(&b.trace) {
            assert_eq!(ra.h.to_bits(), rb.h.to_bits());
            assert_eq!(ra.n_f, rb.n_f);
        }
        assert_eq!(a.trace[0].solver, "NESUN");
    }

    #[test]
    fn asga4_uses_convexity_nesun_ignores() {
        // μ = 0.1 quadratic: ASGA-4 with μ reaches the target gap in no more calls.
        let (p, _) = random_quadratic(30, 9, 0.1, 10.0);
        let p = p.with_strong_convexity(0.1, 0.0).unwrap();
        let calls_to = |solver: &mut dyn Solver| {
            let mut ev = Evaluator::new(&p);
            for _ in 0..20_000 {
                solver.step(&mut ev).unwrap();
                if p.objective(solver.iterate()) <= 1e-6 {
                    return ev.calls();
                }
            }
            u64::MAX
        };
        let x0 = Array1::zeros(30);
        let mut asga = Asga::new(AsgaVariant::Four, &p, AsgaParams::for_problem(&p, 1e-8), x0.clone()).unwrap();
        let mut nesun = Asga::new(AsgaVariant::Four, &p, nesun_preset(1e-8), x0).unwrap();
        let a = calls_to(&mut asga);
        let n = calls_to(&mut nesun);
        assert!(a <= n, "ASGA-4 {a} vs NESUN {n}");
    }
}
