//! Composite problems `min f(x) + ψ(x)` over a simple convex set `C`.
//!
//! The smooth (or subdifferentiable) part `f` is reached only through the
//! [`SmoothFunction`] oracle. `ψ` is a weighted ℓ1 norm or zero, and `C` is
//! either the whole space or a box. All geometry is Euclidean: the
//! prox-function is `ω(x) = ½‖x − x0‖²`, whose Bregman distance is
//! `½‖x − y‖²`.
//!
//! Oracle calls are metered by an [`Evaluator`], which lives in the state of
//! a single run. The problem itself is immutable and can be shared between
//! concurrent runs.

use std::fmt;
use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};

/// First-order oracle for the `f` part of a composite objective.
///
/// For `ν > 0` the returned vector is the gradient; for nonsmooth `f` it is
/// any fixed selection from the subdifferential.
pub trait SmoothFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: ArrayView1<'_, f64>) -> f64;

    fn value_and_subgradient(&self, x: ArrayView1<'_, f64>) -> (f64, Array1<f64>);

    fn subgradient(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        self.value_and_subgradient(x).1
    }
}

/// `f(x) = ½ (x − c)ᵀ H (x − c) + offset` with symmetric positive semidefinite `H`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    hessian: Array2<f64>,
    center: Array1<f64>,
    offset: f64,
}

impl Quadratic {
    pub fn new(hessian: Array2<f64>, center: Array1<f64>, offset: f64) -> Result<Self> {
        let n = center.len();
        if hessian.nrows() != n || hessian.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: hessian.nrows(),
            });
        }
        Ok(Self {
            hessian,
            center,
            offset,
        })
    }

    pub fn diagonal(diag: &[f64], center: Array1<f64>) -> Result<Self> {
        if diag.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err(Error::InvalidArgument(
                "diagonal entries must be finite and nonnegative".into(),
            ));
        }
        Self::new(Array2::from_diag(&Array1::from(diag.to_vec())), center, 0.0)
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn center(&self) -> &Array1<f64> {
        &self.center
    }

    pub fn hessian(&self) -> &Array2<f64> {
        &self.hessian
    }
}

impl SmoothFunction for Quadratic {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn value(&self, x: ArrayView1<'_, f64>) -> f64 {
        let d = &x - &self.center;
        0.5 * d.dot(&self.hessian.dot(&d)) + self.offset
    }

    fn value_and_subgradient(&self, x: ArrayView1<'_, f64>) -> (f64, Array1<f64>) {
        let d = &x - &self.center;
        let g = self.hessian.dot(&d);
        (0.5 * d.dot(&g) + self.offset, g)
    }
}

/// The simple part `ψ`.
#[derive(Clone, Debug, PartialEq)]
pub enum SimplePart {
    Zero,
    /// `ψ(x) = weight · Σ_{j < leading} |x_j|`; `leading = None` penalizes every coordinate.
    L1 { weight: f64, leading: Option<usize> },
}

impl SimplePart {
    pub fn l1(weight: f64) -> Result<Self> {
        Self::check_weight(weight)?;
        Ok(SimplePart::L1 {
            weight,
            leading: None,
        })
    }

    /// ℓ1 penalty restricted to the first `count` coordinates (e.g. an unpenalized SVM bias).
    pub fn l1_leading(weight: f64, count: usize) -> Result<Self> {
        Self::check_weight(weight)?;
        Ok(SimplePart::L1 {
            weight,
            leading: Some(count),
        })
    }

    fn check_weight(weight: f64) -> Result<()> {
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "l1 weight must be finite and nonnegative, got {weight}"
            )));
        }
        Ok(())
    }

    pub fn weight(&self) -> f64 {
        match self {
            SimplePart::Zero => 0.0,
            SimplePart::L1 { weight, .. } => *weight,
        }
    }

    /// Number of penalized leading coordinates in an `n`-vector.
    pub fn penalized_len(&self, n: usize) -> usize {
        match self {
            SimplePart::Zero => 0,
            SimplePart::L1 { leading: None, .. } => n,
            SimplePart::L1 {
                leading: Some(c), ..
            } => (*c).min(n),
        }
    }

    pub fn eval(&self, x: ArrayView1<'_, f64>) -> f64 {
        match self {
            SimplePart::Zero => 0.0,
            SimplePart::L1 { weight, .. } => {
                let p = self.penalized_len(x.len());
                weight * x.iter().take(p).map(|v| v.abs()).sum::<f64>()
            }
        }
    }
}

/// The feasible set `C`.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    WholeSpace,
    /// Componentwise `lo ≤ x ≤ hi`; infinite entries are allowed.
    Box { lo: Array1<f64>, hi: Array1<f64> },
}

impl Domain {
    pub fn boxed(lo: Array1<f64>, hi: Array1<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        for (l, h) in lo.iter().zip(hi.iter()) {
            if l.is_nan() || h.is_nan() || l > h {
                return Err(Error::InvalidArgument(format!(
                    "box bounds must satisfy lo <= hi, got [{l}, {h}]"
                )));
            }
        }
        Ok(Domain::Box { lo, hi })
    }

    /// `[-radius, radius]^n`.
    pub fn symmetric_box(n: usize, radius: f64) -> Result<Self> {
        Self::boxed(Array1::from_elem(n, -radius), Array1::from_elem(n, radius))
    }

    pub fn is_box(&self) -> bool {
        matches!(self, Domain::Box { .. })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Domain::WholeSpace => None,
            Domain::Box { lo, .. } => Some(lo.len()),
        }
    }

    #[inline]
    pub fn bounds(&self, j: usize) -> (f64, f64) {
        match self {
            Domain::WholeSpace => (f64::NEG_INFINITY, f64::INFINITY),
            Domain::Box { lo, hi } => (lo[j], hi[j]),
        }
    }

    pub fn contains(&self, x: ArrayView1<'_, f64>) -> bool {
        match self {
            Domain::WholeSpace => true,
            Domain::Box { lo, hi } => {
                x.len() == lo.len()
                    && x.iter()
                        .zip(lo.iter().zip(hi.iter()))
                        .all(|(v, (l, h))| *l <= *v && *v <= *h)
            }
        }
    }

    /// Clamps `x` into the box in place. Used to absorb rounding when a
    /// convex combination of feasible points drifts by an ulp.
    pub fn clamp_in_place(&self, x: &mut Array1<f64>) {
        if let Domain::Box { lo, hi } = self {
            for ((v, l), h) in x.iter_mut().zip(lo.iter()).zip(hi.iter()) {
                *v = v.clamp(*l, *h);
            }
        }
    }
}

/// Hölder smoothness `‖∇f(x) − ∇f(y)‖ ≤ L_ν ‖x − y‖^ν`.
///
/// `quadratic_curvature` accounts for an additive term of `f` that is an
/// exact quadratic with Hessian bounded by `quadratic_curvature · I` and is
/// not covered by `L_ν` (a ridge term on top of a hinge loss, say). It
/// shifts the effective majorant constant by that amount.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Smoothness {
    pub nu: f64,
    pub l_nu: f64,
    pub quadratic_curvature: f64,
}

impl Smoothness {
    pub fn new(nu: f64, l_nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::InvalidArgument(format!("nu must lie in [0, 1], got {nu}")));
        }
        if !(l_nu > 0.0) || !l_nu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "L_nu must be finite and positive, got {l_nu}"
            )));
        }
        Ok(Self {
            nu,
            l_nu,
            quadratic_curvature: 0.0,
        })
    }

    pub fn lipschitz(l: f64) -> Result<Self> {
        Self::new(1.0, l)
    }

    pub fn with_quadratic_curvature(mut self, curvature: f64) -> Result<Self> {
        if !(curvature >= 0.0) || !curvature.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "quadratic curvature must be finite and nonnegative, got {curvature}"
            )));
        }
        self.quadratic_curvature = curvature;
        Ok(self)
    }
}

/// `min f(x) + ψ(x)` subject to `x ∈ C`.
#[derive(Clone)]
pub struct CompositeProblem {
    name: String,
    smooth: Arc<dyn SmoothFunction>,
    simple: SimplePart,
    domain: Domain,
    mu_f: f64,
    mu_p: f64,
    smoothness: Option<Smoothness>,
}

impl fmt::Debug for CompositeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompositeProblem")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("simple", &self.simple)
            .field("domain_is_box", &self.domain.is_box())
            .field("mu_f", &self.mu_f)
            .field("mu_p", &self.mu_p)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl CompositeProblem {
    pub fn new(
        smooth: Arc<dyn SmoothFunction>,
        simple: SimplePart,
        domain: Domain,
    ) -> Result<Self> {
        let n = smooth.dim();
        if let Some(d) = domain.dim() {
            if d != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: d,
                });
            }
        }
        Ok(Self {
            name: "problem".into(),
            smooth,
            simple,
            domain,
            mu_f: 0.0,
            mu_p: 0.0,
            smoothness: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_strong_convexity(mut self, mu_f: f64, mu_p: f64) -> Result<Self> {
        if !(mu_f >= 0.0) || !(mu_p >= 0.0) || !mu_f.is_finite() || !mu_p.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "strong convexity parameters must be finite and nonnegative, got ({mu_f}, {mu_p})"
            )));
        }
        self.mu_f = mu_f;
        self.mu_p = mu_p;
        Ok(self)
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = Some(smoothness);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.smooth.dim()
    }

    pub fn smooth(&self) -> &dyn SmoothFunction {
        self.smooth.as_ref()
    }

    pub fn simple(&self) -> &SimplePart {
        &self.simple
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn mu_f(&self) -> f64 {
        self.mu_f
    }

    pub fn mu_p(&self) -> f64 {
        self.mu_p
    }

    /// `μ = μ_f + μ_p`.
    pub fn mu(&self) -> f64 {
        self.mu_f + self.mu_p
    }

    pub fn smoothness(&self) -> Option<Smoothness> {
        self.smoothness
    }

    /// Unmetered `h(x) = f(x) + ψ(x)` for monitoring and tests.
    pub fn objective(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.smooth.value(x) + self.simple.eval(x)
    }

    pub fn psi(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.simple.eval(x)
    }

    pub(crate) fn check_dim(&self, x: ArrayView1<'_, f64>) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Metered access to a problem's oracle for one run.
///
/// One call is one evaluation at a point: a `(value, subgradient)` pair, a
/// value alone, or `h`. Every successful method call increments the counter
/// by exactly one. With a budget set, a call that would exceed it fails with
/// [`Error::BudgetExhausted`] before touching the oracle.
#[derive(Debug)]
pub struct Evaluator<'a> {
    problem: &'a CompositeProblem,
    calls: u64,
    budget: Option<u64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a CompositeProblem) -> Self {
        Self {
            problem,
            calls: 0,
            budget: None,
        }
    }

    pub fn with_budget(problem: &'a CompositeProblem, budget: u64) -> Self {
        Self {
            problem,
            calls: 0,
            budget: Some(budget),
        }
    }

    pub fn problem(&self) -> &'a CompositeProblem {
        self.problem
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn remaining(&self) -> Option<u64> {
        self.budget.map(|b| b.saturating_sub(self.calls))
    }

    fn charge(&mut self, x: ArrayView1<'_, f64>) -> Result<()> {
        self.problem.check_dim(x)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("query point is not finite".into()));
        }
        if let Some(b) = self.budget {
            if self.calls >= b {
                return Err(Error::BudgetExhausted(b));
            }
        }
        self.calls += 1;
        Ok(())
    }

    fn check_domain(&self, x: ArrayView1<'_, f64>) -> Result<()> {
        if self.problem.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::DomainViolation)
        }
    }

    /// `h(x) = f(x) + ψ(x)`.
    pub fn eval_h(&mut self, x: ArrayView1<'_, f64>) -> Result<f64> {
        self.charge(x)?;
        finite(self.problem.objective(x), "objective")
    }

    /// `f(x)` alone.
    pub fn value_f(&mut self, x: ArrayView1<'_, f64>) -> Result<f64> {
        self.charge(x)?;
        finite(self.problem.smooth.value(x), "oracle value")
    }

    /// A member of `∂f(x)`.
    pub fn subgrad_f(&mut self, x: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        self.check_domain(x)?;
        self.charge(x)?;
        let g = self.problem.smooth.subgradient(x);
        finite_vec(g, "oracle subgradient")
    }

    /// `(f(x), g(x))` with `g(x) ∈ ∂f(x)`, as one call.
    pub fn first_order(&mut self, x: ArrayView1<'_, f64>) -> Result<(f64, Array1<f64>)> {
        self.check_domain(x)?;
        self.charge(x)?;
        let (v, g) = self.problem.smooth.value_and_subgradient(x);
        Ok((finite(v, "oracle value")?, finite_vec(g, "oracle subgradient")?))
    }
}

fn finite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericOverflow(what))
    }
}

fn finite_vec(v: Array1<f64>, what: &'static str) -> Result<Array1<f64>> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(Error::NumericOverflow(what))
    }
}

/// Smallest constant `L̃` for which the Hölder condition implies the
/// inexact quadratic majorant
/// `f(x) ≤ f(y) + ⟨∇f(y), x − y⟩ + ½ L̃ ‖x − y‖² + δ/2`:
///
/// `L̃ = ((1 − ν) / (δ (1 + ν)))^((1 − ν)/(1 + ν)) · L_ν^(2/(1 + ν))`,
///
/// with `0⁰ = 1`, so `ν = 1` gives `L̃ = L_ν` exactly.
pub fn holder_majorant(nu: f64, l_nu: f64, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::InvalidArgument(format!("nu must lie in [0, 1], got {nu}")));
    }
    if !(l_nu > 0.0) {
        return Err(Error::InvalidArgument(format!("L_nu must be positive, got {l_nu}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    if nu == 1.0 {
        return Ok(l_nu);
    }
    let expo = (1.0 - nu) / (1.0 + nu);
    let base = (1.0 - nu) / (delta * (1.0 + nu));
    Ok(base.powf(expo) * l_nu.powf(2.0 / (1.0 + nu)))
}

/// Euclidean prox-model `ω(x) = ½‖x − x0‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProxModel {
    center: Array1<f64>,
}

impl ProxModel {
    pub fn euclidean(center: Array1<f64>) -> Self {
        Self { center }
    }

    pub fn center(&self) -> &Array1<f64> {
        &self.center
    }

    pub fn omega(&self, x: ArrayView1<'_, f64>) -> Result<f64> {
        bregman(self, x, self.center.view())
    }
}

/// Bregman distance `B_ω(x, y) = ω(x) − ω(y) − ⟨∇ω(y), x − y⟩`, which for
/// the Euclidean model equals `½‖x − y‖²` regardless of the center.
pub fn bregman(model: &ProxModel, x: ArrayView1<'_, f64>, y: ArrayView1<'_, f64>) -> Result<f64> {
    let n = model.center.len();
    for v in [x.len(), y.len()] {
        if v != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v,
            });
        }
    }
    Ok(0.5
        * x.iter()
            .zip(y.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn centered(n: usize, b: Array1<f64>) -> Arc<Quadratic> {
        Arc::new(Quadratic::new(Array2::eye(n), b, 0.0).unwrap())
    }

    #[test]
    fn eval_h_at_quadratic_minimum() {
        let p = CompositeProblem::new(centered(3, Array1::zeros(3)), SimplePart::Zero, Domain::WholeSpace)
            .unwrap();
        let mut ev = Evaluator::new(&p);
        assert_eq!(ev.eval_h(Array1::zeros(3).view()).unwrap(), 0.0);
        assert_eq!(ev.calls(), 1);
    }

    #[test]
    fn eval_h_direct_substitution() {
        let p = CompositeProblem::new(
            centered(2, array![2.0, 0.0]),
            SimplePart::l1(1.0).unwrap(),
            Domain::WholeSpace,
        )
        .unwrap();
        let mut ev = Evaluator::new(&p);
        assert_eq!(ev.eval_h(array![1.0, 0.0].view()).unwrap(), 1.5);
    }

    #[test]
    fn eval_h_matches_compensated_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..5.0)).collect();
        let c: Array1<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let q = Quadratic::diagonal(&diag, c.clone()).unwrap();
        let p = CompositeProblem::new(Arc::new(q), SimplePart::l1(0.3).unwrap(), Domain::WholeSpace)
            .unwrap();
        let x: Array1<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();

        // Kahan summation of the elementwise terms.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for j in 0..n {
            let term = 0.5 * diag[j] * (x[j] - c[j]).powi(2) + 0.3 * x[j].abs();
            let yv = term - comp;
            let t = sum + yv;
            comp = (t - sum) - yv;
            sum = t;
        }
        let mut ev = Evaluator::new(&p);
        let h = ev.eval_h(x.view()).unwrap();
        assert!((h - sum).abs() <= 1e-12 * sum.abs().max(1.0));
    }

    #[test]
    fn eval_h_rejects_wrong_dimension() {
        let p = CompositeProblem::new(centered(2, Array1::zeros(2)), SimplePart::Zero, Domain::WholeSpace)
            .unwrap();
        let mut ev = Evaluator::new(&p);
        assert!(matches!(
            ev.eval_h(Array1::zeros(3).view()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(ev.calls(), 0);
    }

    #[test]
    fn overflow_is_reported() {
        let p = CompositeProblem::new(centered(1, Array1::zeros(1)), SimplePart::Zero, Domain::WholeSpace)
            .unwrap();
        let mut ev = Evaluator::new(&p);
        assert!(matches!(
            ev.eval_h(array![1e200].view()),
            Err(Error::NumericOverflow(_))
        ));
    }

    #[test]
    fn subgradient_outside_box_is_a_domain_violation() {
        let p = CompositeProblem::new(
            centered(2, Array1::zeros(2)),
            SimplePart::Zero,
            Domain::symmetric_box(2, 1.0).unwrap(),
        )
        .unwrap();
        let mut ev = Evaluator::new(&p);
        assert!(matches!(
            ev.subgrad_f(array![2.0, 0.0].view()),
            Err(Error::DomainViolation)
        ));
        assert!(ev.subgrad_f(array![1.0, -1.0].view()).is_ok());
    }

    #[test]
    fn counter_is_exact_and_budget_is_enforced() {
        let p = CompositeProblem::new(centered(2, Array1::zeros(2)), SimplePart::Zero, Domain::WholeSpace)
            .unwrap();
        let mut ev = Evaluator::with_budget(&p, 3);
        let x = array![0.5, 0.5];
        ev.eval_h(x.view()).unwrap();
        ev.subgrad_f(x.view()).unwrap();
        ev.first_order(x.view()).unwrap();
        assert_eq!(ev.calls(), 3);
        assert!(matches!(ev.value_f(x.view()), Err(Error::BudgetExhausted(3))));
        assert_eq!(ev.calls(), 3);
    }

    #[test]
    fn least_squares_gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Array2::from_shape_fn((6, 4), |_| rng.random_range(-1.0..1.0));
        let y: Array1<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let ls = crate::zoo::LeastSquares::new(a, y, 0.0).unwrap();
        for _ in 0..20 {
            let x: Array1<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g = ls.subgradient(x.view());
            let h = 1e-6;
            for j in 0..4 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let fd = (ls.value(xp.view()) - ls.value(xm.view())) / (2.0 * h);
                assert!((fd - g[j]).abs() <= 1e-6 * (1.0 + g[j].abs()));
            }
        }
    }

    #[test]
    fn holder_majorant_cases() {
        assert_eq!(holder_majorant(1.0, 5.0, 0.3).unwrap(), 5.0);
        assert_relative_eq!(holder_majorant(0.0, 2.0, 0.1).unwrap(), 40.0, max_relative = 1e-14);
        // ((0.5)/(0.2·1.5))^{1/3} · 3^{4/3} = (5/3 · 81)^{1/3} = 135^{1/3}
        assert_relative_eq!(
            holder_majorant(0.5, 3.0, 0.2).unwrap(),
            135f64.cbrt(),
            max_relative = 1e-13
        );
        assert!(holder_majorant(0.5, 3.0, 0.0).is_err());
        assert!(holder_majorant(0.5, 3.0, -1.0).is_err());
    }

    #[test]
    fn holder_majorant_monotone_in_delta() {
        for &nu in &[0.0, 0.25, 0.5, 0.9] {
            let mut prev = f64::INFINITY;
            for i in 1..50 {
                let d = i as f64 * 0.05;
                let v = holder_majorant(nu, 2.5, d).unwrap();
                assert!(v < prev);
                prev = v;
            }
        }
        let vals: Vec<f64> = (1..20)
            .map(|i| holder_majorant(1.0, 2.5, i as f64 * 0.1).unwrap())
            .collect();
        assert!(vals.iter().all(|&v| v == 2.5));
    }

    #[test]
    fn bregman_cases() {
        let m = ProxModel::euclidean(array![3.0, -1.0]);
        let x = array![1.0, 0.0];
        assert_eq!(bregman(&m, x.view(), x.view()).unwrap(), 0.0);
        assert_eq!(bregman(&m, x.view(), array![0.0, 0.0].view()).unwrap(), 0.5);
        assert!(bregman(&m, x.view(), array![0.0].view()).is_err());
    }

    #[test]
    fn box_validation() {
        assert!(Domain::boxed(array![1.0], array![0.0]).is_err());
        let d = Domain::boxed(array![f64::NEG_INFINITY, 0.0], array![0.0, f64::INFINITY]).unwrap();
        assert!(d.contains(array![-1e300, 1e300].view()));
        assert!(!d.contains(array![1.0, 0.0].view()));
    }

    #[test]
    fn simple_part_leading_mask() {
        let psi = SimplePart::l1_leading(2.0, 2).unwrap();
        assert_eq!(psi.eval(array![1.0, -1.0, 5.0].view()), 4.0);
        assert!(SimplePart::l1(-1.0).is_err());
    }
}
