//! Orthogonal projection onto `span{e_0, …, e_N}`, Parseval residuals, and
//! the lognormal counterexample.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{BaseMeasure, Family, WeightDensity};
use crate::orthopoly::{build_basis, OrthonormalBasis};
use crate::quadrature::{CompensatedSum, QuadraturePlan};

/// Named functions available to experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    Sin,
    Cos,
    /// `e^{-x²}`
    GaussBump,
    /// `1 / (1 + x²)`
    CauchyBump,
    Abs,
    /// `sin(2π ln x)` on `x > 0`, zero elsewhere.
    LognormalAnnihilator,
}

impl TestFunction {
    pub const ALL: [TestFunction; 6] = [
        TestFunction::Sin,
        TestFunction::Cos,
        TestFunction::GaussBump,
        TestFunction::CauchyBump,
        TestFunction::Abs,
        TestFunction::LognormalAnnihilator,
    ];

    /// The smooth-plus-nonsmooth set used for completeness curves.
    pub const COMPLETENESS_SET: [TestFunction; 5] =
        [TestFunction::Sin, TestFunction::Cos, TestFunction::GaussBump, TestFunction::CauchyBump, TestFunction::Abs];

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::Sin => "sin",
            TestFunction::Cos => "cos",
            TestFunction::GaussBump => "gauss_bump",
            TestFunction::CauchyBump => "cauchy_bump",
            TestFunction::Abs => "abs",
            TestFunction::LognormalAnnihilator => "lognormal_annihilator",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Sin => x.sin(),
            TestFunction::Cos => x.cos(),
            TestFunction::GaussBump => (-x * x).exp(),
            TestFunction::CauchyBump => 1.0 / (1.0 + x * x),
            TestFunction::Abs => x.abs(),
            TestFunction::LognormalAnnihilator => {
                if x > 0.0 {
                    (2.0 * PI * x.ln()).sin()
                } else {
                    0.0
                }
            }
        }
    }
}

/// `⟨f, g⟩_a = ∫ f g a dλ`; anything short of convergence is an error.
pub fn inner_product<F, G>(f: F, g: G, d: &WeightDensity, plan: &QuadraturePlan) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    d.integrate(|x| f(x) * g(x), plan)?.converged_value("computing an inner product")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionResult {
    /// `c_k = ⟨f, e_k⟩_a` for `k = 0..=N`.
    pub coefficients: Vec<f64>,
    pub f_norm_sq: f64,
    /// `r_n = ‖f‖² - Σ_{k≤n} c_k²`.
    pub residuals: Vec<f64>,
    pub relative_residual: f64,
    /// Slack used for the Bessel clamp.
    pub tolerance: f64,
}

impl ProjectionResult {
    pub fn max_degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn relative_residuals(&self) -> Vec<f64> {
        self.residuals.iter().map(|r| relative(*r, self.f_norm_sq)).collect()
    }

    /// `Σ_{k≤n} c_k e_k(x)`.
    pub fn partial_sum(&self, b: &OrthonormalBasis, n: usize, x: f64) -> Result<f64> {
        if n > self.max_degree() || n > b.max_degree() {
            return Err(Error::DegreeOutOfRange { requested: n, max: self.max_degree().min(b.max_degree()) });
        }
        Ok(b.eval_series(&self.coefficients[..=n], x))
    }

    /// CSV with columns `n,c_n,r_n,rel_residual`, floats in shortest
    /// round-trip form.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["n", "c_n", "r_n", "rel_residual"]).map_err(io)?;
        for (n, (c, r)) in self.coefficients.iter().zip(&self.residuals).enumerate() {
            w.write_record([
                n.to_string(),
                format!("{c:?}"),
                format!("{r:?}"),
                format!("{:?}", relative(*r, self.f_norm_sq)),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

fn relative(r: f64, norm_sq: f64) -> f64 {
    if norm_sq > 0.0 {
        r / norm_sq
    } else {
        0.0
    }
}

/// Projects `f` onto the basis. Coefficients are computed in parallel; the
/// residual series is a sequential fold.
pub fn project<F>(f: F, b: &OrthonormalBasis, plan: &QuadraturePlan) -> Result<ProjectionResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let d = b.weight();
    let f_norm_sq = d
        .integrate(
            |x| {
                let v = f(x);
                v * v
            },
            plan,
        )?
        .converged_value("computing ||f||^2")?;
    if f_norm_sq.is_nan() || f_norm_sq < 0.0 {
        return Err(Error::Inconsistency(format!("negative squared norm {f_norm_sq}")));
    }
    let coeff_plan = plan.with_scale(f_norm_sq.sqrt());
    let coefficients = (0..=b.max_degree())
        .into_par_iter()
        .map(|k| {
            d.integrate(|x| f(x) * b.eval(k, x).unwrap_or(f64::NAN), &coeff_plan)?
                .converged_value(&format!("computing c_{k}"))
        })
        .collect::<Result<Vec<f64>>>()?;

    let tolerance = plan.abs_tol.max(plan.rel_tol * f_norm_sq);
    let residuals = parseval_residuals(f_norm_sq, &coefficients, tolerance)?;
    let relative_residual = relative(*residuals.last().expect("at least c_0"), f_norm_sq);
    Ok(ProjectionResult { coefficients, f_norm_sq, residuals, relative_residual, tolerance })
}

fn parseval_residuals(f_norm_sq: f64, coefficients: &[f64], tolerance: f64) -> Result<Vec<f64>> {
    let mut captured = CompensatedSum::default();
    let mut out = Vec::with_capacity(coefficients.len());
    for (n, c) in coefficients.iter().enumerate() {
        captured.add(c * c);
        let r = f_norm_sq - captured.value();
        if r < -10.0 * tolerance {
            return Err(Error::Inconsistency(format!(
                "Bessel inequality violated at n = {n}: r_n = {r:e} (tolerance {tolerance:e})"
            )));
        }
        out.push(r.max(0.0));
    }
    Ok(out)
}

/// Projection of the lognormal annihilator onto a lognormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleAudit {
    pub projection: ProjectionResult,
    pub max_abs_coefficient: f64,
    /// Every `|c_k| ≤ 1e-6` while `relative_residual ≥ 0.999`: a nonzero
    /// function orthogonal to all polynomials up to the basis degree.
    pub non_density: bool,
}

pub const ANNIHILATOR_COEFF_TOL: f64 = 1e-6;
pub const ANNIHILATOR_MIN_RESIDUAL: f64 = 0.999;

/// Projects `sin(2π (ln x - μ)/σ²)`, whose moments against lognormal(μ, σ)
/// all vanish, onto a basis built over that weight.
pub fn counterexample_audit(b: &OrthonormalBasis, plan: &QuadraturePlan) -> Result<CounterexampleAudit> {
    let d = b.weight();
    let (mu, sigma) = match (d.family(), d.base()) {
        (Family::LogNormal { mu, sigma }, BaseMeasure::Lebesgue(_)) => (*mu, *sigma),
        (family, _) => {
            return Err(Error::Domain(format!(
                "counterexample audit needs a lognormal basis on Lebesgue measure, got {}",
                family.label()
            )))
        }
    };
    let k = 2.0 * PI / (sigma * sigma);
    let projection = project(|x| if x > 0.0 { (k * (x.ln() - mu)).sin() } else { 0.0 }, b, plan)?;
    let max_abs_coefficient = projection.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let non_density =
        max_abs_coefficient <= ANNIHILATOR_COEFF_TOL && projection.relative_residual >= ANNIHILATOR_MIN_RESIDUAL;
    Ok(CounterexampleAudit { projection, max_abs_coefficient, non_density })
}

/// `(n, r_n)` for `n = 0..=max_degree`, building the basis on the way.
pub fn completeness_curve<F>(
    f: F,
    d: &WeightDensity,
    max_degree: usize,
    plan: &QuadraturePlan,
) -> Result<Vec<(usize, f64)>>
where
    F: Fn(f64) -> f64 + Sync,
{
    let b = build_basis(Arc::new(d.clone()), max_degree, plan)?;
    let p = project(f, &b, plan)?;
    Ok(p.residuals.into_iter().enumerate().collect())
}
