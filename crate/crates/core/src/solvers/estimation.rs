use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, SimplePart};
use crate::prox::{solve_separable, SeparableBoxL1Task};

/// Explicit coefficients of the estimation function
///
/// `φ(x) = ½‖x − x0‖² + ⟨a, x⟩ + (q/2)‖x‖² + c + S·ψ(x)`
///
/// together with its minimizer over `C` and minimum value.
#[derive(Clone, Debug)]
pub struct EstimationState {
    center: Array1<f64>,
    lin: Array1<f64>,
    quad: f64,
    constant: f64,
    psi_scale: f64,
    minimizer: Array1<f64>,
    phi_star: f64,
}

impl EstimationState {
    /// `φ_0(x) = ½‖x − x0‖²`, minimized at `x0` itself.
    pub fn new(problem: &CompositeProblem, x0: Array1<f64>) -> Result<Self> {
        problem.check_dim(x0.view())?;
        if !problem.domain().contains(x0.view()) {
            return Err(Error::DomainViolation);
        }
        let n = x0.len();
        Ok(Self {
            minimizer: x0.clone(),
            center: x0,
            lin: Array1::zeros(n),
            quad: 0.0,
            constant: 0.0,
            psi_scale: 0.0,
            phi_star: 0.0,
        })
    }

    /// Adds `s·[f(p) + ⟨g, x − p⟩ + (μ_f/2)‖x − p‖² + ψ(x)]` and re-minimizes.
    pub fn updated(
        &self,
        problem: &CompositeProblem,
        s: f64,
        f_p: f64,
        g: ArrayView1<'_, f64>,
        p: ArrayView1<'_, f64>,
        mu_f: f64,
    ) -> Result<Self> {
        let mut next = self.clone();
        next.lin.zip_mut_with(&g, |a, &gj| *a += s * gj);
        if mu_f != 0.0 {
            next.lin.scaled_add(-s * mu_f, &p);
        }
        next.quad += s * mu_f;
        next.constant += s * (f_p - g.dot(&p) + 0.5 * mu_f * p.dot(&p));
        next.psi_scale += s;
        next.minimizer = next.solve(problem)?;
        next.phi_star = next.value_at(problem.simple(), next.minimizer.view());
        if !next.phi_star.is_finite() {
            return Err(Error::NumericOverflow("estimation function"));
        }
        Ok(next)
    }

    fn solve(&self, problem: &CompositeProblem) -> Result<Array1<f64>> {
        let (weight, leading) = l1_parts(problem.simple());
        let task = SeparableBoxL1Task::new(
            self.center.view(),
            self.lin.view(),
            self.quad,
            self.psi_scale * weight,
            problem.domain(),
        )
        .with_l1_leading(leading);
        solve_separable(&task)
    }

    /// `φ(x)` from the stored coefficients.
    pub fn value_at(&self, psi: &SimplePart, x: ArrayView1<'_, f64>) -> f64 {
        let d = &x - &self.center;
        0.5 * d.dot(&d) + self.lin.dot(&x) + 0.5 * self.quad * x.dot(&x) + self.constant + self.psi_scale * psi.eval(x)
    }

    pub fn minimizer(&self) -> &Array1<f64> {
        &self.minimizer
    }

    /// `φ* = min_C φ`.
    pub fn phi_star(&self) -> f64 {
        self.phi_star
    }

    pub fn psi_scale(&self) -> f64 {
        self.psi_scale
    }

    pub fn linear(&self) -> &Array1<f64> {
        &self.lin
    }

    pub fn quad(&self) -> f64 {
        self.quad
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn center(&self) -> &Array1<f64> {
        &self.center
    }
}

pub(crate) fn l1_parts(psi: &SimplePart) -> (f64, Option<usize>) {
    match psi {
        SimplePart::Zero => (0.0, None),
        SimplePart::L1 { weight, leading } => (*weight, *leading),
    }
}
