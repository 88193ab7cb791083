//! Test-problem generators and builders: ℓ1 least squares and elastic net on
//! an ill-posed inverse-Laplace system, and hinge-loss linear SVMs.

use std::fs::File;
use std::io::Write as _;
use std::path::Path;
use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, Domain, SimplePart, SmoothFunction, Smoothness};

/// `f(x) = ½‖Ax − y‖² + (ridge/2)‖x‖²`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    a: Array2<f64>,
    at: Array2<f64>,
    y: Array1<f64>,
    ridge: f64,
}

impl LeastSquares {
    pub fn new(a: Array2<f64>, y: Array1<f64>, ridge: f64) -> Result<Self> {
        if a.nrows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: y.len(),
            });
        }
        if !(ridge >= 0.0) || !ridge.is_finite() {
            return Err(Error::InvalidArgument(format!("ridge must be nonnegative, got {ridge}")));
        }
        let at = a.t().as_standard_layout().into_owned();
        Ok(Self { a, at, y, ridge })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }
}

impl SmoothFunction for LeastSquares {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: ArrayView1<'_, f64>) -> f64 {
        let r = self.a.dot(&x) - &self.y;
        0.5 * r.dot(&r) + 0.5 * self.ridge * x.dot(&x)
    }

    fn value_and_subgradient(&self, x: ArrayView1<'_, f64>) -> (f64, Array1<f64>) {
        let r = self.a.dot(&x) - &self.y;
        let mut g = self.at.dot(&r);
        if self.ridge != 0.0 {
            g.scaled_add(self.ridge, &x);
        }
        (0.5 * r.dot(&r) + 0.5 * self.ridge * x.dot(&x), g)
    }
}

/// `f(w̃) = Σ_i [1 − A_i w̃]₊ + (ridge/2)‖w‖²`, where `w` is the first
/// `penalized` coordinates of `w̃`.
///
/// The subgradient is `−Aᵀδ + ridge·w` with `δ_i = 1` iff `A_i w̃ < 1`.
#[derive(Clone, Debug)]
pub struct Hinge {
    a: Array2<f64>,
    at: Array2<f64>,
    ridge: f64,
    penalized: usize,
}

impl Hinge {
    pub fn new(a: Array2<f64>, ridge: f64, penalized: usize) -> Result<Self> {
        if penalized > a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.ncols(),
                found: penalized,
            });
        }
        if !(ridge >= 0.0) || !ridge.is_finite() {
            return Err(Error::InvalidArgument(format!("ridge must be nonnegative, got {ridge}")));
        }
        let at = a.t().as_standard_layout().into_owned();
        Ok(Self {
            a,
            at,
            ridge,
            penalized,
        })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.a
    }

    fn ridge_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        if self.ridge == 0.0 {
            return 0.0;
        }
        0.5 * self.ridge * x.iter().take(self.penalized).map(|v| v * v).sum::<f64>()
    }
}

impl SmoothFunction for Hinge {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: ArrayView1<'_, f64>) -> f64 {
        let m = self.a.dot(&x);
        m.iter().map(|&v| (1.0 - v).max(0.0)).sum::<f64>() + self.ridge_value(x)
    }

    fn value_and_subgradient(&self, x: ArrayView1<'_, f64>) -> (f64, Array1<f64>) {
        let m = self.a.dot(&x);
        let delta = m.mapv(|v| if v < 1.0 { 1.0 } else { 0.0 });
        let loss: f64 = m.iter().map(|&v| (1.0 - v).max(0.0)).sum();
        let mut g = -self.at.dot(&delta);
        if self.ridge != 0.0 {
            for j in 0..self.penalized {
                g[j] += self.ridge * x[j];
            }
        }
        (loss + self.ridge_value(x), g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub generator: String,
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
}

/// A linear system `y ≈ A x_true` with its provenance.
#[derive(Clone, Debug)]
pub struct InstanceBundle {
    pub a: Array2<f64>,
    pub y: Array1<f64>,
    pub x_true: Option<Array1<f64>>,
    pub meta: GeneratorMeta,
}

/// Square ill-posed system from an inverse-Laplace kernel; see
/// [`gen_inverse_laplace_rect`].
pub fn gen_inverse_laplace(n: usize, seed: u64) -> Result<InstanceBundle> {
    gen_inverse_laplace_rect(n, n, seed)
}

/// `m × n` discretization of `(Kx)(s) = ∫₀^∞ e^{−st} x(t) dt`.
///
/// The integral is mapped to `(0, 1)` by `t = u/(1 − u)` and discretized
/// with the midpoint rule, giving `A_ij = w_j e^{−s_i t_j}` with
/// `s_i = 10 i/m`. The signal is `x_true(t) = e^{−t/2}`, and the
/// observations are `A x_true + 0.1·U(0, 1)` entrywise.
pub fn gen_inverse_laplace_rect(m: usize, n: usize, seed: u64) -> Result<InstanceBundle> {
    if n < 8 || m < 8 {
        return Err(Error::InvalidArgument(format!(
            "inverse-Laplace generator needs at least 8 rows and columns, got {m} x {n}"
        )));
    }
    let nodes: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let u = (j as f64 + 0.5) / n as f64;
            let t = u / (1.0 - u);
            let w = 1.0 / (n as f64 * (1.0 - u) * (1.0 - u));
            (t, w)
        })
        .collect();
    let a = Array2::from_shape_fn((m, n), |(i, j)| {
        let s = 10.0 * (i + 1) as f64 / m as f64;
        let (t, w) = nodes[j];
        w * (-s * t).exp()
    });
    let x_true: Array1<f64> = nodes.iter().map(|&(t, _)| (-0.5 * t).exp()).collect();
    let z = a.dot(&x_true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = z.mapv(|v| v + 0.1 * rng.random::<f64>());
    Ok(InstanceBundle {
        a,
        y,
        x_true: Some(x_true),
        meta: GeneratorMeta {
            generator: "inverse-laplace".into(),
            rows: m,
            cols: n,
            seed,
        },
    })
}

/// Largest eigenvalue of `AᵀA` (that is, `‖A‖₂²`) by power iteration from a
/// seeded random start, inflated by a relative `1e-6` so it can serve as an
/// upper bound.
pub fn power_norm_sq(a: &Array2<f64>, seed: u64) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Array1<f64> = (0..a.ncols()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    v /= v.dot(&v).sqrt();
    let mut lambda = 0.0;
    for _ in 0..1000 {
        let av = a.dot(&v);
        let w = a.t().dot(&av);
        let est = av.dot(&av);
        let norm = w.dot(&w).sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w / norm;
        let converged = (est - lambda).abs() <= 1e-8 * est;
        lambda = est;
        if converged {
            break;
        }
    }
    // The Rayleigh quotient of the final direction is the sharpest estimate.
    let av = a.dot(&v);
    lambda = lambda.max(av.dot(&av));
    if !lambda.is_finite() {
        return Err(Error::NumericOverflow("power iteration"));
    }
    Ok(lambda * (1.0 + 1e-6))
}

/// `min ½‖y − Ax‖² + λ‖x‖₁` over `ℝⁿ`.
pub fn build_l1_least_squares(bundle: &InstanceBundle, lambda: f64) -> Result<CompositeProblem> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let l = power_norm_sq(&bundle.a, bundle.meta.seed)?;
    let f = LeastSquares::new(bundle.a.clone(), bundle.y.clone(), 0.0)?;
    Ok(CompositeProblem::new(Arc::new(f), SimplePart::l1(lambda)?, Domain::WholeSpace)?
        .with_name(format!("l1-ls(lambda={lambda:e})"))
        .with_smoothness(Smoothness::lipschitz(l)?))
}

/// `min ½‖y − Ax‖² + ½λ₁‖x‖² + λ₂‖x‖₁` over `ℝⁿ` or a box, with the
/// quadratic regularizer in `f` (so `μ_f = λ₁`).
pub fn build_elastic_net(
    bundle: &InstanceBundle,
    lambda1: f64,
    lambda2: f64,
    bounds: Option<Domain>,
) -> Result<CompositeProblem> {
    for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    let l = power_norm_sq(&bundle.a, bundle.meta.seed)? + lambda1;
    let f = LeastSquares::new(bundle.a.clone(), bundle.y.clone(), lambda1)?;
    let boxed = bounds.is_some();
    let name = if boxed { "elastic-net-box" } else { "elastic-net" };
    Ok(CompositeProblem::new(
        Arc::new(f),
        SimplePart::l1(lambda2)?,
        bounds.unwrap_or(Domain::WholeSpace),
    )?
    .with_name(format!("{name}(lambda1={lambda1:e},lambda2={lambda2:e})"))
    .with_strong_convexity(lambda1, 0.0)?
    .with_smoothness(Smoothness::lipschitz(l)?))
}

/// Labeled samples for binary classification.
#[derive(Clone, Debug, PartialEq)]
pub struct SvmData {
    features: Array2<f64>,
    labels: Array1<f64>,
}

impl SvmData {
    pub fn new(features: Array2<f64>, labels: Array1<f64>) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.nrows(),
                found: labels.len(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&l| l != 1.0 && l != -1.0) {
            return Err(Error::InvalidArgument(format!("labels must be +1 or -1, got {bad}")));
        }
        Ok(Self { features, labels })
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> &Array1<f64> {
        &self.labels
    }

    pub fn samples(&self) -> usize {
        self.features.nrows()
    }

    /// `A = (diag(y) X, y)`, so that row `i` is `(y_i x_iᵀ, y_i)`.
    pub fn augmented(&self) -> Array2<f64> {
        let (m, n) = self.features.dim();
        let mut a = Array2::zeros((m, n + 1));
        for (i, (row, &l)) in self.features.axis_iter(Axis(0)).zip(self.labels.iter()).enumerate() {
            for j in 0..n {
                a[[i, j]] = l * row[j];
            }
            a[[i, n]] = l;
        }
        a
    }
}

/// Gaussian features labeled by a planted sparse separator, with 5% of the
/// labels flipped so the data are not separable.
pub fn gen_svm_synthetic(m: usize, n: usize, seed: u64) -> Result<SvmData> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("need at least one sample and one feature".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features = Array2::from_shape_fn((m, n), |_| rng.sample::<f64, _>(StandardNormal));
    let support = n.min(10);
    let w: Array1<f64> = (0..n)
        .map(|j| if j < support { StandardNormal.sample(&mut rng) } else { 0.0 })
        .collect();
    let bias: f64 = 0.1 * rng.sample::<f64, _>(StandardNormal);
    let labels = features.dot(&w).mapv(|v| {
        let l = if v + bias >= 0.0 { 1.0 } else { -1.0 };
        if rng.random::<f64>() < 0.05 {
            -l
        } else {
            l
        }
    });
    SvmData::new(features, labels)
}

/// Regularizer `φ(w)` of the SVM objective `Σ[1 − A w̃]₊ + λ φ(w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SvmRegularizer {
    /// `‖w‖₁`
    L1,
    /// `‖w‖₂²`
    L22,
    /// `½‖w‖₂² + ‖w‖₁`
    L22L1,
}

/// Builds the SVM problem. The quadratic part of the regularizer goes into
/// `f`, the ℓ1 part into `ψ`; the bias is never penalized.
///
/// `f` is a hinge loss (`ν = 0`, `L₀ = √m‖Aᵀ‖₂`) plus an exact quadratic,
/// recorded as the smoothness' quadratic curvature. Since the bias is free,
/// `f` is not strongly convex and `μ_f = 0`.
pub fn build_svm(data: &SvmData, lambda: f64, reg: SvmRegularizer) -> Result<CompositeProblem> {
    build_svm_with(data, lambda, reg, false)
}

/// As [`build_svm`]; with `ridge_convexity` the ridge curvature is also
/// declared as `μ_f`, which is valid only on the `w` block.
pub fn build_svm_with(data: &SvmData, lambda: f64, reg: SvmRegularizer, ridge_convexity: bool) -> Result<CompositeProblem> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let n = data.features.ncols();
    let a = data.augmented();
    let l0 = (data.samples() as f64).sqrt() * power_norm_sq(&a, 0)?.sqrt();
    let (curvature, psi) = match reg {
        SvmRegularizer::L1 => (0.0, SimplePart::l1_leading(lambda, n)?),
        SvmRegularizer::L22 => (2.0 * lambda, SimplePart::Zero),
        SvmRegularizer::L22L1 => (lambda, SimplePart::l1_leading(lambda, n)?),
    };
    let f = Hinge::new(a, curvature, n)?;
    let label = match reg {
        SvmRegularizer::L1 => "svm-l1",
        SvmRegularizer::L22 => "svm-l22",
        SvmRegularizer::L22L1 => "svm-l22l1",
    };
    let mu_f = if ridge_convexity { curvature } else { 0.0 };
    Ok(CompositeProblem::new(Arc::new(f), psi, Domain::WholeSpace)?
        .with_name(format!("{label}(lambda={lambda:e})"))
        .with_strong_convexity(mu_f, 0.0)?
        .with_smoothness(Smoothness::new(0.0, l0)?.with_quadratic_curvature(curvature)?))
}

/// Reads `label,feature,...` rows (no header) into [`SvmData`].
pub fn load_labeled_csv(path: impl AsRef<Path>) -> Result<SvmData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path.as_ref())
        .map_err(csv_io)?;
    let mut labels = Vec::new();
    let mut rows: Vec<f64> = Vec::new();
    let mut width: Option<usize> = None;
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::Format {
                line,
                message: e.to_string(),
            }
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() < 2 {
            return Err(Error::Format {
                line,
                message: "expected a label followed by at least one feature".into(),
            });
        }
        match width {
            None => width = Some(rec.len() - 1),
            Some(w) if w != rec.len() - 1 => {
                return Err(Error::Format {
                    line,
                    message: format!("expected {w} features, found {}", rec.len() - 1),
                })
            }
            _ => {}
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| Error::Format {
                line,
                message: format!("cannot parse '{s}' as a number"),
            })
        };
        let label = parse(&rec[0])?;
        if label != 1.0 && label != -1.0 {
            return Err(Error::Format {
                line,
                message: format!("label must be +1 or -1, got {label}"),
            });
        }
        labels.push(label);
        for field in rec.iter().skip(1) {
            rows.push(parse(field)?);
        }
    }
    let Some(n) = width else {
        return Err(Error::InvalidArgument(format!(
            "no samples in {}",
            path.as_ref().display()
        )));
    };
    let features = Array2::from_shape_vec((labels.len(), n), rows)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    SvmData::new(features, Array1::from(labels))
}

/// Writes [`SvmData`] in the format read by [`load_labeled_csv`].
pub fn write_labeled_csv(path: impl AsRef<Path>, data: &SvmData) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    for (row, label) in data.features.axis_iter(Axis(0)).zip(data.labels.iter()) {
        let mut fields = vec![format!("{label}")];
        fields.extend(row.iter().map(|v| format!("{v:e}")));
        writer.write_record(&fields).map_err(csv_io)?;
    }
    let mut file = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    file.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format {
            line: 0,
            message: format!("{other:?}"),
        },
    }
}
