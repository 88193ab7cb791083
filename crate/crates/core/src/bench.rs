//! Experiment runner: a grid of problem instances times a list of solvers,
//! each cell run under a wall-clock or oracle-call budget, with per-cell
//! traces, convergence curves and a summary of best values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, Domain};
use crate::solvers::{run_solver, Method, RunConfig, RunRecord, SolverSettings};
use crate::zoo::{
    build_elastic_net, build_l1_least_squares, build_svm, gen_inverse_laplace_rect, gen_svm_synthetic,
    load_labeled_csv, SvmRegularizer,
};
use crate::baselines::Nsdsg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemFamily {
    L1,
    ElasticNet,
    ElasticNetBox,
    SvmL1,
    SvmL22,
    SvmL22l1,
}

impl ProblemFamily {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
            .map_err(|_| Error::Configuration(format!("unknown problem family '{s}'")))
    }

    pub fn is_svm(self) -> bool {
        matches!(self, ProblemFamily::SvmL1 | ProblemFamily::SvmL22 | ProblemFamily::SvmL22l1)
    }

    /// Solvers applicable to the family by default.
    pub fn default_solvers(self) -> Vec<Method> {
        match self {
            ProblemFamily::L1 | ProblemFamily::ElasticNet => Method::ALL.to_vec(),
            _ => Method::ALL
                .into_iter()
                .filter(|m| !matches!(m, Method::Pga | Method::Fista))
                .collect(),
        }
    }

    /// Regularization grid used when the configuration gives none.
    pub fn default_grid(self) -> Vec<GridPoint> {
        let lam = |v: f64| GridPoint {
            lambda: Some(v),
            ..GridPoint::default()
        };
        let pair = |a: f64, b: f64| GridPoint {
            lambda1: Some(a),
            lambda2: Some(b),
            ..GridPoint::default()
        };
        match self {
            ProblemFamily::L1 => [10.0, 1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5].into_iter().map(lam).collect(),
            ProblemFamily::ElasticNet | ProblemFamily::ElasticNetBox => {
                vec![pair(1e-2, 1e-2), pair(1e-2, 1e-3), pair(1e-3, 1e-2), pair(1e-3, 1e-3)]
            }
            _ => [1.0, 1e-1].into_iter().map(lam).collect(),
        }
    }
}

/// One point of the regularization grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<f64>,
}

impl GridPoint {
    fn label(&self) -> String {
        let mut parts = Vec::new();
        for (k, v) in [("lambda", self.lambda), ("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if let Some(v) = v {
                parts.push(format!("{k}={v:e}"));
            }
        }
        parts.join(";")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProblemSpec {
    pub family: ProblemFamily,
    /// Columns of the design matrix (features for SVM).
    pub n: usize,
    /// Rows; defaults to `n` for least squares and 50 samples for SVM.
    pub m: Option<usize>,
    /// Labeled CSV replacing the synthetic SVM data.
    pub data: Option<PathBuf>,
    /// Half-width of the box for `elastic-net-box`.
    pub box_radius: f64,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self {
            family: ProblemFamily::L1,
            n: 500,
            m: None,
            data: None,
            box_radius: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_calls: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub name: String,
    pub problem: ProblemSpec,
    /// Empty means the family's default grid.
    pub grid: Vec<GridPoint>,
    /// Empty means the family's default solver list.
    pub solvers: Vec<Method>,
    pub eps: f64,
    pub budget: Budget,
    pub seed: u64,
    pub output: PathBuf,
    pub format: OutputFormat,
    /// Extra solver parameters; `eps` here is overridden by the field above.
    pub settings: SolverSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            problem: ProblemSpec::default(),
            grid: Vec::new(),
            solvers: Vec::new(),
            eps: 1e-4,
            budget: Budget::default(),
            seed: 0,
            output: PathBuf::from("bench-out"),
            format: OutputFormat::Csv,
            settings: SolverSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fills defaults and checks the configuration.
    pub fn resolved(&self) -> Result<Self> {
        let mut c = self.clone();
        if c.grid.is_empty() {
            c.grid = c.problem.family.default_grid();
        }
        if c.solvers.is_empty() {
            c.solvers = c.problem.family.default_solvers();
        }
        if c.budget.seconds.is_none() && c.budget.oracle_calls.is_none() {
            return Err(Error::Configuration("a time or oracle-call budget is required".into()));
        }
        if c.budget.seconds.is_some_and(|s| !(s > 0.0)) || c.budget.oracle_calls == Some(0) {
            return Err(Error::Configuration("budgets must be positive".into()));
        }
        if !(c.eps > 0.0) {
            return Err(Error::Configuration(format!("eps must be positive, got {}", c.eps)));
        }
        c.settings.eps = c.eps;
        Ok(c)
    }

    fn build_problem(&self, point: &GridPoint) -> Result<CompositeProblem> {
        let spec = &self.problem;
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Configuration(format!("grid point needs {name} for {:?}", spec.family)))
        };
        if spec.family.is_svm() {
            let data = match &spec.data {
                Some(path) => load_labeled_csv(path)?,
                None => gen_svm_synthetic(spec.m.unwrap_or(50), spec.n, self.seed)?,
            };
            let reg = match spec.family {
                ProblemFamily::SvmL1 => SvmRegularizer::L1,
                ProblemFamily::SvmL22 => SvmRegularizer::L22,
                _ => SvmRegularizer::L22L1,
            };
            return build_svm(&data, need(point.lambda, "lambda")?, reg);
        }
        let bundle = gen_inverse_laplace_rect(spec.m.unwrap_or(spec.n), spec.n, self.seed)?;
        match spec.family {
            ProblemFamily::L1 => build_l1_least_squares(&bundle, need(point.lambda, "lambda")?),
            ProblemFamily::ElasticNet => {
                build_elastic_net(&bundle, need(point.lambda1, "lambda1")?, need(point.lambda2, "lambda2")?, None)
            }
            _ => build_elastic_net(
                &bundle,
                need(point.lambda1, "lambda1")?,
                need(point.lambda2, "lambda2")?,
                Some(Domain::symmetric_box(spec.n, spec.box_radius)?),
            ),
        }
    }
}

/// Outcome of one (grid point, solver) cell.
#[derive(Clone, Debug)]
pub struct CellResult {
    pub problem: String,
    pub grid: String,
    pub solver: String,
    pub trace: Vec<RunRecord>,
    pub error: Option<String>,
}

/// Best value and final oracle count of one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub grid: String,
    pub solver: String,
    pub f_b: Option<f64>,
    #[serde(rename = "N_f")]
    pub n_f: u64,
    pub iterations: u64,
    pub status: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
}

impl ExperimentResult {
    pub fn summary(&self) -> Vec<SummaryRow> {
        self.cells
            .iter()
            .map(|c| SummaryRow {
                problem: c.problem.clone(),
                grid: c.grid.clone(),
                solver: c.solver.clone(),
                f_b: c.trace.iter().map(|r| r.h).reduce(f64::min),
                n_f: c.trace.last().map_or(0, |r| r.n_f),
                iterations: c.trace.last().map_or(0, |r| r.k),
                status: c.error.clone().unwrap_or_else(|| "ok".into()),
            })
            .collect()
    }

    pub fn any_failed(&self) -> bool {
        self.cells.iter().any(|c| c.error.is_some())
    }

    /// Grid points as rows, solvers as columns, `f_b / N_f` per entry.
    pub fn summary_table(&self) -> String {
        let rows = self.summary();
        let mut grids: Vec<String> = Vec::new();
        let mut solvers: Vec<String> = Vec::new();
        let mut entries: BTreeMap<(String, String), String> = BTreeMap::new();
        for r in &rows {
            if !grids.contains(&r.grid) {
                grids.push(r.grid.clone());
            }
            if !solvers.contains(&r.solver) {
                solvers.push(r.solver.clone());
            }
            let e = match (r.f_b, r.status.as_str()) {
                (Some(f), "ok") => format!("{f:.4e} / {}", r.n_f),
                (Some(f), _) => format!("{f:.4e} / {} !", r.n_f),
                (None, "ok") => "-".into(),
                (None, _) => "failed".into(),
            };
            entries.insert((r.grid.clone(), r.solver.clone()), e);
        }
        let gw = grids.iter().map(|g| g.len()).max().unwrap_or(4).max(4);
        let cw = entries.values().map(|e| e.len()).chain(solvers.iter().map(|s| s.len())).max().unwrap_or(8);
        let mut out = String::new();
        let _ = write!(out, "{:gw$}", "grid");
        for s in &solvers {
            let _ = write!(out, "  {s:>cw$}");
        }
        out.push('\n');
        for g in &grids {
            let _ = write!(out, "{g:gw$}");
            for s in &solvers {
                let e = entries.get(&(g.clone(), s.clone())).map_or("", String::as_str);
                let _ = write!(out, "  {e:>cw$}");
            }
            out.push('\n');
        }
        out
    }
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

/// Runs every cell of the experiment and writes all outputs.
///
/// The output directory is created (and probed for writability) before any
/// solver runs. Cell failures are recorded, not propagated.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let config = config.resolved()?;
    fs::create_dir_all(&config.output)?;
    let probe = config.output.join(".write-probe");
    fs::write(&probe, b"")?;
    fs::remove_file(&probe)?;

    let mut cells = Vec::new();
    for point in &config.grid {
        let grid = point.label();
        let problem = match config.build_problem(point) {
            Ok(p) => p,
            Err(e) => {
                for m in &config.solvers {
                    cells.push(CellResult {
                        problem: format!("{:?}", config.problem.family),
                        grid: grid.clone(),
                        solver: m.label().into(),
                        trace: Vec::new(),
                        error: Some(e.to_string()),
                    });
                }
                continue;
            }
        };
        for &method in &config.solvers {
            let mut settings = config.settings.clone();
            if method == Method::Nsdsg && settings.alpha0.is_none() && config.problem.family.is_svm() {
                settings.alpha0 = Some(Nsdsg::SVM_ALPHA0);
            }
            let run = RunConfig {
                solver: settings,
                max_oracle_calls: config.budget.oracle_calls,
                max_seconds: config.budget.seconds,
                ..RunConfig::default()
            };
            let (trace, error) = match run_solver(&problem, method, &run) {
                Ok(out) => (out.trace, None),
                Err(f) => (f.trace, Some(f.error.to_string())),
            };
            cells.push(CellResult {
                problem: problem.name().to_string(),
                grid: grid.clone(),
                solver: method.label().into(),
                trace,
                error,
            });
        }
    }
    let result = ExperimentResult { config, cells };
    write_experiment(&result)?;
    Ok(result)
}

/// Writes per-cell traces and curves, `summary.csv` and `errors.json`.
pub fn write_experiment(result: &ExperimentResult) -> Result<Vec<PathBuf>> {
    let dir = &result.config.output;
    let mut written = Vec::new();
    for cell in result.cells.iter().filter(|c| !c.trace.is_empty()) {
        let stem = sanitize(&format!("{}__{}", cell.problem, cell.solver));
        let files = emit_outputs(&cell.trace, result.config.format, dir, &stem)
            .map_err(|e| extend_manifest(e, &written))?;
        written.extend(files);
    }
    let summary = dir.join("summary.csv");
    write_summary_csv(&summary, &result.summary()).map_err(|e| partial(e, &written))?;
    written.push(summary);

    let failures: BTreeMap<String, &str> = result
        .cells
        .iter()
        .filter_map(|c| c.error.as_deref().map(|e| (format!("{} / {}", c.problem, c.solver), e)))
        .collect();
    let errors = dir.join("errors.json");
    let body = serde_json::to_string_pretty(&failures)?;
    fs::write(&errors, body).map_err(|e| partial(e, &written))?;
    written.push(errors);
    Ok(written)
}

fn partial(source: io::Error, completed: &[PathBuf]) -> Error {
    Error::PartialWrite {
        completed: completed.to_vec(),
        source,
    }
}

fn extend_manifest(e: Error, before: &[PathBuf]) -> Error {
    match e {
        Error::PartialWrite { mut completed, source } => {
            let mut all = before.to_vec();
            all.append(&mut completed);
            Error::PartialWrite { completed: all, source }
        }
        Error::Io(source) => partial(source, before),
        other => other,
    }
}

/// Writes one trace as `<stem>.<csv|json>` plus a tab-separated curve
/// `<stem>.curve.tsv` (`k N_f wall_s h`) for plotting.
pub fn emit_outputs(trace: &[RunRecord], format: OutputFormat, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("refusing to write an empty trace".into()));
    }
    let mut done = Vec::new();
    let main = dir.join(format!("{stem}.{}", format.extension()));
    let body = match format {
        OutputFormat::Csv => trace_to_csv(trace)?,
        OutputFormat::Json => serde_json::to_string_pretty(trace)?,
    };
    fs::write(&main, body).map_err(|e| partial(e, &done))?;
    done.push(main);

    let curve = dir.join(format!("{stem}.curve.tsv"));
    let mut text = String::from("# k\tN_f\twall_s\th\n");
    for r in trace {
        let _ = writeln!(text, "{}\t{}\t{}\t{}", r.k, r.n_f, r.wall_s, r.h);
    }
    fs::write(&curve, text).map_err(|e| partial(e, &done))?;
    done.push(curve);
    Ok(done)
}

pub fn trace_to_csv(trace: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in trace {
        w.serialize(r).map_err(csv_error)?;
    }
    if trace.is_empty() {
        w.write_record(["solver", "problem", "params", "k", "wall_s", "h", "N_f", "S", "cert_bound"])
            .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn trace_from_csv(text: &str) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|rec| rec.map_err(csv_error)).collect()
}

pub fn trace_from_json(text: &str) -> Result<Vec<RunRecord>> {
    Ok(serde_json::from_str(text)?)
}

fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    let mut f = w.into_inner().map_err(|e| e.into_error())?;
    f.flush()
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format {
            line,
            message: format!("{other:?}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: u64, h: f64, s: Option<f64>) -> RunRecord {
        RunRecord {
            solver: "ASGA-1".into(),
            problem: "l1-ls(lambda=1e-1)".into(),
            params: "eps=1e-4;mu=0e0".into(),
            k,
            wall_s: 0.001 * k as f64,
            h,
            n_f: k,
            s,
            cert_bound: None,
        }
    }

    fn micro_config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            problem: ProblemSpec {
                family: ProblemFamily::L1,
                n: 20,
                ..ProblemSpec::default()
            },
            grid: vec![GridPoint {
                lambda: Some(0.1),
                ..GridPoint::default()
            }],
            solvers: vec![Method::Asga1],
            budget: Budget {
                seconds: None,
                oracle_calls: Some(100),
            },
            seed: 3,
            output: dir.to_path_buf(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn three_records_make_four_lines() {
        let t = vec![record(1, 3.0, Some(0.5)), record(2, 2.0, Some(1.0)), record(3, 1.5, None)];
        let csv = trace_to_csv(&t).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "solver,problem,params,k,wall_s,h,N_f,S,cert_bound");
        assert!(lines[3].ends_with(",,"));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let t = vec![record(1, 3.25, Some(0.5)), record(2, 1.0 / 3.0, Some(1e-300)), record(3, -0.0, None)];
        let a = trace_from_csv(&trace_to_csv(&t).unwrap()).unwrap();
        let b = trace_from_json(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(a, t);
        assert_eq!(b, t);
    }

    #[test]
    fn empty_trace_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let err = emit_outputs(&[], OutputFormat::Csv, dir.path(), "x").unwrap_err();
        assert!(err.to_string().contains("empty trace"));
    }

    #[test]
    fn oracle_budget_contract() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_experiment(&micro_config(dir.path())).unwrap();
        assert_eq!(res.cells.len(), 1);
        let trace = &res.cells[0].trace;
        assert!(!trace.is_empty());
        assert!(trace.last().unwrap().n_f <= 100);
        let row = &res.summary()[0];
        assert_eq!(row.f_b, trace.iter().map(|r| r.h).reduce(f64::min));
        assert!(dir.path().join("summary.csv").exists());
        assert!(dir.path().join("errors.json").exists());
    }

    #[test]
    fn rerun_is_bit_identical() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let mut c = micro_config(d1.path());
        c.solvers = vec![Method::Asga2, Method::Nsdsg, Method::Fista];
        let a = run_experiment(&c).unwrap();
        c.output = d2.path().to_path_buf();
        let b = run_experiment(&c).unwrap();
        let sa = fs::read_to_string(d1.path().join("summary.csv")).unwrap();
        let sb = fs::read_to_string(d2.path().join("summary.csv")).unwrap();
        assert_eq!(sa, sb);
        assert_eq!(a.summary(), b.summary());
    }

    #[test]
    fn unwritable_output_fails_before_running() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, b"x").unwrap();
        let c = micro_config(&blocker.join("sub"));
        assert!(matches!(run_experiment(&c), Err(Error::Io(_))));
    }

    #[test]
    fn failing_cells_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = micro_config(dir.path());
        c.problem.family = ProblemFamily::SvmL1;
        c.problem.n = 10;
        c.solvers = vec![Method::Pga, Method::Asga2];
        let res = run_experiment(&c).unwrap();
        assert!(res.any_failed());
        assert!(res.cells[0].error.is_some());
        assert!(res.cells[1].error.is_none());
        let errors = fs::read_to_string(dir.path().join("errors.json")).unwrap();
        assert!(errors.contains("PGA"));
        assert!(res.summary_table().contains("failed"));
    }

    #[test]
    fn config_json_defaults() {
        let c: ExperimentConfig =
            serde_json::from_str(r#"{"problem": {"family": "svm-l22l1", "n": 30}, "budget": {"seconds": 1.0}}"#).unwrap();
        let r = c.resolved().unwrap();
        assert_eq!(r.solvers.len(), 6);
        assert_eq!(r.grid.len(), 2);
        assert!(ExperimentConfig::default().resolved().is_err());
        assert_eq!(ProblemFamily::parse("elastic-net-box").unwrap(), ProblemFamily::ElasticNetBox);
    }
}
