//! Scaling-sequence arithmetic and the effective-constant equation.

use crate::error::{Error, Result};

/// Positive root `s` of `s² L = (1 + Sμ)(S + s)`.
pub fn next_step_size(s_sum: f64, mu: f64, l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidArgument(format!("L must be finite and positive, got {l}")));
    }
    if !(s_sum >= 0.0) || !(mu >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "S and mu must be nonnegative, got S = {s_sum}, mu = {mu}"
        )));
    }
    let c = 1.0 + s_sum * mu;
    let s = (c + (c * c + 4.0 * l * s_sum * c).sqrt()) / (2.0 * l);
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::NumericOverflow("step size"));
    }
    Ok(s)
}

/// `S_k`, the pending step `s_{k+1}`, `α_k = s_{k+1}/S_{k+1}`, and the
/// constant the step was sized for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingState {
    pub s_sum: f64,
    pub s_next: f64,
    pub alpha: f64,
    pub l_hat: f64,
}

impl ScalingState {
    pub fn initial() -> Self {
        Self {
            s_sum: 0.0,
            s_next: 0.0,
            alpha: 1.0,
            l_hat: 0.0,
        }
    }

    /// Sizes the next step for constant `l` without moving `S`.
    pub fn propose(&self, mu: f64, l: f64) -> Result<ScalingState> {
        let s = next_step_size(self.s_sum, mu, l)?;
        Ok(ScalingState {
            s_sum: self.s_sum,
            s_next: s,
            alpha: s / (self.s_sum + s),
            l_hat: l,
        })
    }

    /// `S_{k+1}` for a proposed step.
    pub fn next_sum(&self) -> f64 {
        self.s_sum + self.s_next
    }

    /// `s² L − (1 + Sμ)(S + s)`, which vanishes for a proposed step.
    pub fn residual(&self, mu: f64) -> f64 {
        self.s_next * self.s_next * self.l_hat - (1.0 + self.s_sum * mu) * self.next_sum()
    }
}

/// Root of the effective-constant equation and the number of root-finder
/// iterations spent on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LhatSolution {
    pub value: f64,
    pub iterations: usize,
}

/// Parameters of `ζ(θ) = θ − (c + √(c² + 4θSc))^e · L̃ − shift`.
#[derive(Clone, Copy, Debug)]
pub struct ZetaEquation {
    c: f64,
    s_sum: f64,
    expo: f64,
    l_tilde: f64,
    shift: f64,
}

impl ZetaEquation {
    pub fn new(s_sum: f64, mu: f64, nu: f64, l_nu: f64, eps: f64, shift: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::InvalidArgument(format!("nu must lie in [0, 1], got {nu}")));
        }
        if !(l_nu > 0.0) || !(eps > 0.0) || !(s_sum >= 0.0) || !(mu >= 0.0) || !(shift >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid parameters S = {s_sum}, mu = {mu}, L_nu = {l_nu}, eps = {eps}, shift = {shift}"
            )));
        }
        let c = 1.0 + s_sum * mu;
        let expo = (1.0 - nu) / (1.0 + nu);
        let l_tilde = if nu == 1.0 {
            l_nu
        } else {
            ((1.0 - nu) / (2.0 * c * eps * (1.0 + nu))).powf(expo) * l_nu.powf(2.0 / (1.0 + nu))
        };
        Ok(Self {
            c,
            s_sum,
            expo,
            l_tilde,
            shift,
        })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        theta - self.majorant(theta)
    }

    /// The subtracted term; the root is its fixed point.
    fn majorant(&self, theta: f64) -> f64 {
        let c = self.c;
        let root = c + (c * c + 4.0 * theta * self.s_sum * c).sqrt();
        root.powf(self.expo) * self.l_tilde + self.shift
    }

    pub fn l_tilde(&self) -> f64 {
        self.l_tilde
    }
}

const ROOT_TOL: f64 = 1e-10;
const MAX_DOUBLINGS: usize = 200;
const MAX_ROOT_ITERS: usize = 400;

/// Effective constant `L̂` for the known-smoothness schemes: the unique
/// positive root of `ζ(θ) = θ − (c + √(c² + 4θSc))^e · L̃` with
/// `c = 1 + Sμ` and `e = (1 − ν)/(1 + ν)`.
pub fn solve_lhat(s_sum: f64, mu: f64, nu: f64, l_nu: f64, eps: f64) -> Result<LhatSolution> {
    solve_lhat_shifted(s_sum, mu, nu, l_nu, eps, 0.0)
}

/// As [`solve_lhat`] with an additive `shift` on the majorant, covering an
/// exact quadratic term of curvature `shift` inside `f`.
pub fn solve_lhat_shifted(
    s_sum: f64,
    mu: f64,
    nu: f64,
    l_nu: f64,
    eps: f64,
    shift: f64,
) -> Result<LhatSolution> {
    let eq = ZetaEquation::new(s_sum, mu, nu, l_nu, eps, shift)?;
    if nu == 1.0 {
        return Ok(LhatSolution {
            value: l_nu + shift,
            iterations: 0,
        });
    }
    let accept = |theta: f64, z: f64| z.abs() <= ROOT_TOL * theta.max(1.0);

    // ζ(0) < 0; the majorant at 0 is a lower bound for the root.
    let mut lo = 0.0;
    let mut z_lo = eq.eval(lo);
    let mut hi = eq.majorant(0.0);
    let mut z_hi = eq.eval(hi);
    if accept(hi, z_hi) {
        return Ok(LhatSolution {
            value: hi,
            iterations: 0,
        });
    }
    let mut doublings = 0;
    while z_hi <= 0.0 {
        if doublings == MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NumericFailure(format!(
                "no sign change of the effective-constant equation after {doublings} doublings"
            )));
        }
        lo = hi;
        z_lo = z_hi;
        hi *= 2.0;
        z_hi = eq.eval(hi);
        doublings += 1;
    }

    // Regula falsi with a bisection fallback whenever the bracket fails to halve.
    let mut iterations = 0;
    let mut last_width = hi - lo;
    while iterations < MAX_ROOT_ITERS {
        iterations += 1;
        let mut t = hi - z_hi * (hi - lo) / (z_hi - z_lo);
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        let zt = eq.eval(t);
        if accept(t, zt) {
            return Ok(LhatSolution { value: t, iterations });
        }
        if zt < 0.0 {
            lo = t;
            z_lo = zt;
        } else {
            hi = t;
            z_hi = zt;
        }
        if hi - lo > 0.5 * last_width {
            let m = 0.5 * (lo + hi);
            let zm = eq.eval(m);
            if accept(m, zm) {
                return Ok(LhatSolution { value: m, iterations });
            }
            if zm < 0.0 {
                lo = m;
                z_lo = zm;
            } else {
                hi = m;
                z_hi = zm;
            }
        }
        last_width = hi - lo;
        if last_width <= f64::EPSILON * hi {
            // The bracket is at machine resolution; take the better end.
            let best = if z_lo.abs() <= z_hi.abs() { lo } else { hi };
            let zb = eq.eval(best);
            if accept(best, zb) {
                return Ok(LhatSolution { value: best, iterations });
            }
            break;
        }
    }
    Err(Error::NumericFailure(format!(
        "effective-constant root not resolved in {iterations} iterations"
    )))
}
