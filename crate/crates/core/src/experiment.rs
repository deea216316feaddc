//! JSON experiment configs and the two runs behind the command line:
//! hypothesis certification and basis-plus-projection approximation.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::conditions::{certify, ConditionReport};
use crate::error::{Error, Result};
use crate::measure::{BaseMeasure, Family, Tabulated, WeightDensity};
use crate::orthopoly::{build_basis, OrthonormalBasis, MAX_DEGREE_CAP};
use crate::projection::{counterexample_audit, project, TestFunction};
use crate::quadrature::{Interval, QuadraturePlan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

pub const DEFAULT_MAX_DEGREE: usize = 20;

pub const WITNESS_NOTE: &str = "residual decay for a finite set of test functions is a witness for polynomial \
density in L2(a), not a proof; density is a statement about every square-integrable function";

/// Weight as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Gaussian {
        mu: f64,
        sigma: f64,
    },
    DoubleExponential {
        scale: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    #[serde(rename = "lognormal")]
    LogNormal {
        mu: f64,
        sigma: f64,
    },
    /// CSV with header `x,a`; relative paths resolve against the config file.
    Tabulated {
        path: PathBuf,
    },
    /// Equal point masses on a grid.
    Counting {
        points: Vec<f64>,
    },
}

impl WeightSpec {
    pub fn build(&self, base_dir: &Path) -> Result<WeightDensity> {
        match self {
            WeightSpec::Gaussian { mu, sigma } => WeightDensity::gaussian(*mu, *sigma),
            WeightSpec::DoubleExponential { scale } => WeightDensity::double_exponential(*scale),
            WeightSpec::Uniform { lo, hi } => WeightDensity::uniform(*lo, *hi),
            WeightSpec::LogNormal { mu, sigma } => WeightDensity::lognormal(*mu, *sigma),
            WeightSpec::Tabulated { path } => {
                let table = Tabulated::from_csv(base_dir.join(path))?;
                WeightDensity::new(Family::Tabulated(table), BaseMeasure::Lebesgue(Interval::real_line()))
            }
            WeightSpec::Counting { points } => WeightDensity::equal_weights(points.clone()),
        }
    }
}

fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

fn default_test_functions() -> Vec<TestFunction> {
    TestFunction::COMPLETENESS_SET.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub weight: WeightSpec,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default = "default_test_functions")]
    pub test_functions: Vec<TestFunction>,
    #[serde(default)]
    pub quadrature: QuadraturePlan,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Tail-decay probe for `certify`; half the estimated δ when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_probe: Option<f64>,
}

/// A config that could not be parsed or failed validation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| ConfigError(format!("line {} column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        if !(1..=MAX_DEGREE_CAP).contains(&self.max_degree) {
            return Err(ConfigError(format!(
                "field `max_degree`: {} is outside [1, {MAX_DEGREE_CAP}]",
                self.max_degree
            )));
        }
        if self.test_functions.is_empty() {
            return Err(ConfigError("field `test_functions`: list is empty".into()));
        }
        if let Some(d) = self.delta_probe {
            if !(d > 0.0 && d.is_finite()) {
                return Err(ConfigError(format!("field `delta_probe`: must be positive, got {d}")));
            }
        }
        self.quadrature.validate().map_err(|e| ConfigError(format!("field `quadrature`: {e}")))
    }
}

/// Parsed config plus the directory that relative paths refer to.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> std::result::Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let config = ExperimentConfig::from_json(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(LoadedConfig { config, base_dir })
    }

    /// Builds the weight; a bad tabulated file or invalid parameters count
    /// as config errors.
    pub fn weight(&self) -> std::result::Result<WeightDensity, ConfigError> {
        self.config.weight.build(&self.base_dir).map_err(|e| ConfigError(format!("field `weight`: {e}")))
    }

    /// `--output-dir` wins over the config; relative config paths resolve
    /// against the config directory.
    pub fn output_dir(&self, cli_override: Option<&Path>) -> PathBuf {
        match (cli_override, &self.config.output_dir) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(p)) => self.base_dir.join(p),
            (None, None) => self.base_dir.join("output"),
        }
    }
}

/// Result of a run: exit code plus a one-line summary for the terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub exit_code: i32,
    pub lines: Vec<String>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct CertifyFile<'a> {
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    report: &'a ConditionReport,
}

/// Writes `certify.json`. `Err` means the output could not be written.
pub fn run_certify(loaded: &LoadedConfig, weight: &WeightDensity, out_dir: &Path) -> Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let cfg = &loaded.config;
    match certify(weight, &cfg.quadrature, cfg.delta_probe) {
        Ok(report) => {
            write_json(&out_dir.join("certify.json"), &CertifyFile { config: cfg, report: &report })?;
            let mut lines = vec![format!(
                "{}: positivity={} laplace={} tail_decay={} polynomial_tail={} delta_hat={}",
                report.weight,
                report.positivity_ok,
                report.laplace_ok,
                report.tail_decay_ok,
                report.polynomial_tail_ok,
                serde_json::to_string(&report.delta_hat).unwrap_or_default(),
            )];
            lines.extend(report.warnings.iter().map(|w| format!("warning: {w}")));
            Ok(RunSummary { exit_code: report.exit_code, lines })
        }
        Err(e) => {
            write_json(
                &out_dir.join("certify.json"),
                &json!({ "config": cfg, "status": "numeric_failure", "diagnostic": e.to_string() }),
            )?;
            Ok(RunSummary { exit_code: EXIT_NUMERIC, lines: vec![format!("error: {e}")] })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct FunctionSummary {
    name: &'static str,
    csv: String,
    f_norm_sq: f64,
    final_residual: f64,
    final_relative_residual: f64,
}

/// Builds the basis, writes `basis.json`, one `projection_<name>.csv` per test
/// function, and `report.json`.
pub fn run_approx(loaded: &LoadedConfig, weight: WeightDensity, out_dir: &Path) -> Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let cfg = &loaded.config;
    let plan = &cfg.quadrature;
    let label = weight.label();

    let failure = |diagnostic: String, basis: Option<&OrthonormalBasis>| -> Result<RunSummary> {
        let report = json!({
            "config": cfg,
            "note": WITNESS_NOTE,
            "weight": label,
            "status": "numeric_failure",
            "diagnostic": diagnostic,
            "orthogonality_drift": basis.map(|b| b.orthogonality_drift()),
            "functions": [],
        });
        write_json(&out_dir.join("report.json"), &report)?;
        Ok(RunSummary { exit_code: EXIT_NUMERIC, lines: vec![format!("error: {diagnostic}")] })
    };

    let basis = match build_basis(Arc::new(weight), cfg.max_degree, plan) {
        Ok(b) => b,
        Err(e) => return failure(format!("basis construction failed: {e}"), None),
    };
    write_json(&out_dir.join("basis.json"), &basis)?;
    if !basis.is_valid() {
        return failure(
            format!("orthogonality drift {:e} exceeds tolerance {:e}", basis.orthogonality_drift(), basis.drift_tol()),
            Some(&basis),
        );
    }

    let mut functions = Vec::new();
    let mut lines = Vec::new();
    for f in &cfg.test_functions {
        let p = match project(|x| f.eval(x), &basis, plan) {
            Ok(p) => p,
            Err(e) => return failure(format!("projection of {} failed: {e}", f.name()), Some(&basis)),
        };
        let csv_name = format!("projection_{}.csv", f.name());
        let mut file = fs::File::create(out_dir.join(&csv_name))?;
        p.write_csv(&mut file)?;
        lines.push(format!("{}: relative residual at N = {} is {:e}", f.name(), cfg.max_degree, p.relative_residual));
        functions.push(FunctionSummary {
            name: f.name(),
            csv: csv_name,
            f_norm_sq: p.f_norm_sq,
            final_residual: *p.residuals.last().expect("nonempty"),
            final_relative_residual: p.relative_residual,
        });
    }

    let counterexample = if matches!(basis.weight().family(), Family::LogNormal { .. }) {
        match counterexample_audit(&basis, plan) {
            Ok(a) => Some(json!({
                "max_abs_coefficient": a.max_abs_coefficient,
                "f_norm_sq": a.projection.f_norm_sq,
                "relative_residual": a.projection.relative_residual,
                "non_density": a.non_density,
            })),
            Err(e) => return failure(format!("counterexample audit failed: {e}"), Some(&basis)),
        }
    } else {
        None
    };

    let report = json!({
        "config": cfg,
        "note": WITNESS_NOTE,
        "weight": label,
        "status": "ok",
        "max_degree": basis.max_degree(),
        "orthogonality_drift": basis.orthogonality_drift(),
        "drift_tol": basis.drift_tol(),
        "functions": functions,
        "counterexample": counterexample,
    });
    write_json(&out_dir.join("report.json"), &report)?;
    lines.push(format!("orthogonality drift {:e}", basis.orthogonality_drift()));
    Ok(RunSummary { exit_code: EXIT_OK, lines })
}
