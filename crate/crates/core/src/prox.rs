//! Closed-form solvers for the auxiliary problems.
//!
//! Every subproblem the accelerated methods need (the estimation-sequence
//! minimizer, the double-subproblem `u`-step, and the baselines' prox
//! steps) is an instance of one separable problem:
//!
//! ```text
//! min_{lo ≤ x ≤ hi}  ½‖x − x0‖² + ⟨a, x⟩ + (q/2)‖x‖² + r‖x‖₁
//! ```
//!
//! Its unique minimizer is, per coordinate, "shrink then clamp":
//! `clamp(soft(x0_j − a_j, r) / (1 + q), lo_j, hi_j)`. Since each
//! coordinate is a strongly convex one-dimensional problem, clamping the
//! unconstrained minimizer gives the constrained one.
//!
//! The module also ships a brute-force minimizer that evaluates objectives
//! pointwise and serves as the independent check for the closed form.

use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::problem::Domain;

/// Orthogonal projection onto a box (identity on the whole space).
pub fn project_box(y: ArrayView1<'_, f64>, domain: &Domain) -> Result<Array1<f64>> {
    check_domain_dim(domain, y.len())?;
    let mut out = y.to_owned();
    domain.clamp_in_place(&mut out);
    Ok(out)
}

/// Componentwise `sign(y_j) · max(|y_j| − r, 0)`.
pub fn soft_threshold(y: ArrayView1<'_, f64>, r: f64) -> Result<Array1<f64>> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be nonnegative, got {r}")));
    }
    Ok(y.mapv(|v| shrink(v, r)))
}

#[inline]
fn shrink(m: f64, r: f64) -> f64 {
    if m.abs() <= r {
        0.0
    } else if m > 0.0 {
        m - r
    } else {
        m + r
    }
}

fn check_domain_dim(domain: &Domain, n: usize) -> Result<()> {
    match domain.dim() {
        Some(d) if d != n => Err(Error::DimensionMismatch {
            expected: d,
            found: n,
        }),
        _ => Ok(()),
    }
}

/// The canonical separable subproblem
/// `min ½‖x − x0‖² + ⟨a, x⟩ + (q/2)‖x‖² + r Σ_{j<p} |x_j|` over a box.
#[derive(Clone, Copy, Debug)]
pub struct SeparableBoxL1Task<'a> {
    /// `q ≥ 0`, weight of `½‖x‖²` beyond the unit prox term.
    pub quad_weight: f64,
    /// `a`.
    pub linear: ArrayView1<'a, f64>,
    /// `r ≥ 0`.
    pub l1_weight: f64,
    /// Only the first `p` coordinates carry the ℓ1 term; `None` means all.
    pub l1_leading: Option<usize>,
    pub bounds: &'a Domain,
    /// `x0`.
    pub center: ArrayView1<'a, f64>,
}

impl<'a> SeparableBoxL1Task<'a> {
    pub fn new(
        center: ArrayView1<'a, f64>,
        linear: ArrayView1<'a, f64>,
        quad_weight: f64,
        l1_weight: f64,
        bounds: &'a Domain,
    ) -> Self {
        Self {
            quad_weight,
            linear,
            l1_weight,
            l1_leading: None,
            bounds,
            center,
        }
    }

    pub fn with_l1_leading(mut self, leading: Option<usize>) -> Self {
        self.l1_leading = leading;
        self
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    #[inline]
    pub fn l1_weight_at(&self, j: usize) -> f64 {
        match self.l1_leading {
            Some(p) if j >= p => 0.0,
            _ => self.l1_weight,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.center.len();
        if self.linear.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.linear.len(),
            });
        }
        check_domain_dim(self.bounds, n)?;
        if !(self.quad_weight >= 0.0) || !self.quad_weight.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "quadratic weight must be finite and nonnegative, got {}",
                self.quad_weight
            )));
        }
        if !(self.l1_weight >= 0.0) || !self.l1_weight.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "l1 weight must be finite and nonnegative, got {}",
                self.l1_weight
            )));
        }
        Ok(())
    }

    /// Objective value of coordinate `j` at `t`.
    pub fn coordinate_objective(&self, j: usize, t: f64) -> f64 {
        let d = t - self.center[j];
        0.5 * d * d + self.linear[j] * t + 0.5 * self.quad_weight * t * t + self.l1_weight_at(j) * t.abs()
    }

    pub fn objective(&self, x: ArrayView1<'_, f64>) -> f64 {
        (0..self.dim()).map(|j| self.coordinate_objective(j, x[j])).sum()
    }
}

/// Closed-form minimizer of a [`SeparableBoxL1Task`].
pub fn solve_separable(task: &SeparableBoxL1Task<'_>) -> Result<Array1<f64>> {
    task.validate()?;
    let scale = 1.0 + task.quad_weight;
    let out = Array1::from_shape_fn(task.dim(), |j| {
        let m = task.center[j] - task.linear[j];
        let r = task.l1_weight_at(j);
        let (lo, hi) = task.bounds.bounds(j);
        let t = shrink(m, r) / scale;
        // Exact zero when the shrink kills the coordinate and zero is feasible.
        if t == 0.0 && lo <= 0.0 && 0.0 <= hi {
            0.0
        } else {
            t.clamp(lo, hi)
        }
    });
    Ok(out)
}

/// Componentwise optimality check of `x` for `task`:
/// `0 ∈ (1 + q)x − (x0 − a) + r∂|x| + N_box(x)`, evaluated as interval
/// membership with an absolute `slack`.
pub fn satisfies_kkt(task: &SeparableBoxL1Task<'_>, x: ArrayView1<'_, f64>, slack: f64) -> bool {
    let scale = 1.0 + task.quad_weight;
    (0..task.dim()).all(|j| {
        let (lo, hi) = task.bounds.bounds(j);
        let xj = x[j];
        if xj < lo || xj > hi {
            return false;
        }
        let grad = scale * xj - (task.center[j] - task.linear[j]);
        let r = task.l1_weight_at(j);
        // r ∂|x_j|
        let (mut a, mut b) = if xj > 0.0 {
            (r, r)
        } else if xj < 0.0 {
            (-r, -r)
        } else {
            (-r, r)
        };
        // N_box(x_j): (−∞, 0] at a finite lower bound, [0, ∞) at a finite upper bound.
        if xj == lo && lo.is_finite() {
            a = f64::NEG_INFINITY;
        }
        if xj == hi && hi.is_finite() {
            b = f64::INFINITY;
        }
        let target = -grad;
        let tol = slack * (1.0 + grad.abs().max(r));
        target >= a - tol && target <= b + tol
    })
}

/// Minimizes a convex function of one variable on `[lo, hi]` (possibly
/// unbounded) by bracketing followed by golden-section search.
pub fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = bracket(&f, lo, hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut guard = 0;
    while (b - a) > tol * (1.0 + a.abs().max(b.abs())) && guard < 400 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        guard += 1;
    }
    // The endpoints are candidates too: the minimum may sit on a bound.
    let mid = 0.5 * (a + b);
    [lo, hi, a, b, mid]
        .into_iter()
        .filter(|t| t.is_finite() && *t >= lo && *t <= hi)
        .map(|t| (t, f(t)))
        .fold((mid, f(mid)), |best, cand| if cand.1 < best.1 { cand } else { best })
        .0
}

fn bracket(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    if lo.is_finite() && hi.is_finite() {
        return (lo, hi);
    }
    let anchor = 0f64.clamp(lo, hi);
    let f0 = f(anchor);
    let mut radius = 1.0;
    let (mut a, mut b);
    loop {
        a = (anchor - radius).max(lo);
        b = (anchor + radius).min(hi);
        let left_ok = a == lo || f(a) >= f0;
        let right_ok = b == hi || f(b) >= f0;
        if (left_ok && right_ok) || radius > 1e150 {
            break;
        }
        radius *= 2.0;
    }
    (a, b)
}

/// Search mode for [`brute_force_min`].
pub enum BruteForceObjective<'f> {
    /// A general scalar field; requires a bounded box of dimension ≤ 3.
    Grid(&'f dyn Fn(&[f64]) -> f64),
    /// `Σ_j φ_j(x_j)` supplied as `(j, t) ↦ φ_j(t)`; any dimension, unbounded allowed.
    Separable(&'f dyn Fn(usize, f64) -> f64),
}

/// Brute-force minimizer used as a verification oracle.
///
/// `Grid` runs a zooming grid search (each pass keeps the best of 41 points
/// per axis and shrinks the window around it) until the spacing falls below
/// `resolution`. `Separable` runs golden-section search per coordinate.
pub fn brute_force_min(
    objective: BruteForceObjective<'_>,
    domain: &Domain,
    dim: usize,
    resolution: f64,
) -> Result<Array1<f64>> {
    if !(resolution > 0.0) {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    check_domain_dim(domain, dim)?;
    match objective {
        BruteForceObjective::Separable(phi) => Ok(Array1::from_shape_fn(dim, |j| {
            let (lo, hi) = domain.bounds(j);
            golden_section_min(|t| phi(j, t), lo, hi, resolution * 1e-3)
        })),
        BruteForceObjective::Grid(field) => {
            if dim == 0 || dim > 3 {
                return Err(Error::Unsupported(format!(
                    "grid search supports dimensions 1 to 3, got {dim}"
                )));
            }
            let mut lo: Vec<f64> = (0..dim).map(|j| domain.bounds(j).0).collect();
            let mut hi: Vec<f64> = (0..dim).map(|j| domain.bounds(j).1).collect();
            if lo.iter().chain(hi.iter()).any(|v| !v.is_finite()) {
                return Err(Error::Unsupported(
                    "grid search on an unbounded domain needs separable structure".into(),
                ));
            }
            let (glo, ghi) = (lo.clone(), hi.clone());
            const PTS: usize = 41;
            let mut best = vec![0.0; dim];
            loop {
                let steps: Vec<f64> = (0..dim).map(|j| (hi[j] - lo[j]) / (PTS - 1) as f64).collect();
                let mut best_val = f64::INFINITY;
                let total = PTS.pow(dim as u32);
                let mut point = vec![0.0; dim];
                for idx in 0..total {
                    let mut rem = idx;
                    for j in 0..dim {
                        point[j] = lo[j] + (rem % PTS) as f64 * steps[j];
                        rem /= PTS;
                    }
                    let v = field(&point);
                    if v < best_val {
                        best_val = v;
                        best.copy_from_slice(&point);
                    }
                }
                let spacing = steps.iter().cloned().fold(0.0, f64::max);
                if spacing <= resolution {
                    break;
                }
                for j in 0..dim {
                    lo[j] = (best[j] - 2.0 * steps[j]).max(glo[j]);
                    hi[j] = (best[j] + 2.0 * steps[j]).min(ghi[j]);
                }
            }
            Ok(Array1::from(best))
        }
    }
}
