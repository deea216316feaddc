//! Hypothesis audit for polynomial density: positivity of the weight, a
//! finite Laplace transform near the origin, and the tail-decay sufficient
//! condition with its polynomial corollary.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laplace::{estimate_delta, laplace_transform, DeltaHat, LaplaceReport};
use crate::measure::{BaseMeasure, WeightDensity};
use crate::quadrature::{QuadraturePlan, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Positivity,
    Laplace,
    TailDecay,
    PolynomialTail,
    CrossCheck,
}

/// One probe behind a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceRow {
    pub check: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl EvidenceRow {
    fn at(check: CheckKind, x: f64, value: f64) -> Self {
        EvidenceRow { check, x: Some(x), s: None, k: None, value, verdict: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheck {
    pub passed: bool,
    pub rows: Vec<EvidenceRow>,
    /// First sequence that failed, identified by its last probe.
    pub failure: Option<EvidenceRow>,
}

/// Smallness required of the last probe, relative to the first.
pub const TAIL_SMALLNESS: f64 = 1e-12;

fn probe_points(x_start: f64, n_probes: usize) -> Result<Vec<f64>> {
    if !(x_start > 0.0 && x_start.is_finite()) {
        return Err(Error::Domain(format!("x_start must be positive, got {x_start}")));
    }
    if n_probes < 4 {
        return Err(Error::Domain(format!("need at least 4 probes, got {n_probes}")));
    }
    Ok((0..n_probes).map(|j| x_start * 2f64.powi(j as i32)).collect())
}

/// Eventually nonincreasing (over the second half) and finally small.
fn sequence_decays(values: &[f64]) -> bool {
    if values.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let tail = &values[values.len() / 2..];
    let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
    let last = *values.last().expect("nonempty");
    monotone && last <= TAIL_SMALLNESS * (values[0] + 1.0)
}

/// `exp(log_factor + ln a(x))`, zero where `a` vanishes.
fn scaled_density(d: &WeightDensity, x: f64, log_factor: f64) -> Result<f64> {
    let ln_a = d.ln_eval(x)?;
    if ln_a == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok((log_factor + ln_a).exp())
}

fn run_tail_sequences<P>(
    d: &WeightDensity,
    points: &[f64],
    params: &[P],
    log_factor: impl Fn(&P, f64) -> f64,
    row: impl Fn(&P, f64, f64) -> EvidenceRow,
) -> Result<TailCheck> {
    let mut rows = Vec::new();
    let mut failure = None;
    for p in params {
        for sign in [1.0, -1.0] {
            let mut values = Vec::with_capacity(points.len());
            for &t in points {
                let x = sign * t;
                let v = scaled_density(d, x, log_factor(p, x))?;
                values.push(v);
                rows.push(row(p, x, v));
            }
            if failure.is_none() && !sequence_decays(&values) {
                failure = rows.last().cloned();
            }
        }
    }
    Ok(TailCheck { passed: failure.is_none(), rows, failure })
}

/// Probes `e^{δx} a(x)` at `x = x_start·2^j` and `e^{-δx} a(x)` at
/// `x = -x_start·2^j`, `j < n_probes`. The exponential is folded into the
/// log-density, so growth shows up as an infinite probe value.
pub fn tail_decay_check(d: &WeightDensity, delta: f64, x_start: f64, n_probes: usize) -> Result<TailCheck> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let points = probe_points(x_start, n_probes)?;
    run_tail_sequences(
        d,
        &points,
        &[delta],
        |delta, x| delta * x.abs(),
        |delta, x, v| EvidenceRow { s: Some(delta * x.signum()), ..EvidenceRow::at(CheckKind::TailDecay, x, v) },
    )
}

/// Probes `|x|^k a(x)` on the same schedule for `k = 1..=k_max`.
pub fn polynomial_tail_check(d: &WeightDensity, k_max: u32, x_start: f64, n_probes: usize) -> Result<TailCheck> {
    if k_max < 1 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let points = probe_points(x_start, n_probes)?;
    let ks: Vec<u32> = (1..=k_max).collect();
    run_tail_sequences(
        d,
        &points,
        &ks,
        |k, x| f64::from(*k) * x.abs().ln(),
        |k, x, v| EvidenceRow { k: Some(*k), ..EvidenceRow::at(CheckKind::PolynomialTail, x, v) },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyConfig {
    pub s_max: f64,
    pub eps_s: f64,
    pub x_start: f64,
    pub n_probes: usize,
    pub k_max: u32,
    pub positivity_lo: f64,
    pub positivity_hi: f64,
    pub positivity_points: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            s_max: 4.0,
            eps_s: 0.05,
            x_start: 8.0,
            // Reaches x ≈ 1e15: lognormal-type tails need ln x well past 2k.
            n_probes: 48,
            k_max: 8,
            positivity_lo: -50.0,
            positivity_hi: 50.0,
            positivity_points: 1001,
        }
    }
}

pub const CONTINUITY_NOTE: &str =
    "continuity of the weight is assumed, not checked; named families are continuous and tabulated weights are piecewise linear";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub weight: String,
    pub positivity_ok: bool,
    pub laplace_ok: bool,
    pub tail_decay_ok: bool,
    pub polynomial_tail_ok: bool,
    pub delta_hat: DeltaHat,
    pub delta_resolution: f64,
    pub delta_probe: f64,
    pub inconclusive: bool,
    pub exit_code: i32,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub laplace: LaplaceReport,
    pub probes: Vec<EvidenceRow>,
}

impl ConditionReport {
    pub fn all_ok(&self) -> bool {
        self.positivity_ok && self.laplace_ok && self.tail_decay_ok && self.polynomial_tail_ok
    }

    /// 0 when every hypothesis holds, 3 when one fails, 4 when all hold but
    /// some probe was inconclusive. A failure outranks inconclusiveness.
    pub fn compute_exit_code(&self) -> i32 {
        if !self.all_ok() {
            3
        } else if self.inconclusive {
            4
        } else {
            0
        }
    }
}

pub fn certify(d: &WeightDensity, plan: &QuadraturePlan, delta_probe: Option<f64>) -> Result<ConditionReport> {
    certify_with(d, plan, delta_probe, &CertifyConfig::default())
}

/// Runs all checks and assembles the report. Failed hypotheses are verdicts;
/// errors are reserved for invalid inputs and evaluation faults.
pub fn certify_with(
    d: &WeightDensity,
    plan: &QuadraturePlan,
    delta_probe: Option<f64>,
    cfg: &CertifyConfig,
) -> Result<ConditionReport> {
    let mut probes = Vec::new();
    let mut warnings = Vec::new();

    let positivity_ok = check_positivity(d, cfg, &mut probes)?;

    let laplace = estimate_delta(d, cfg.s_max, cfg.eps_s, plan)?;
    let laplace_ok = laplace.delta_hat.exceeds(laplace.delta_resolution);
    for p in &laplace.values {
        probes.push(EvidenceRow {
            check: CheckKind::Laplace,
            x: None,
            s: Some(p.s),
            k: None,
            value: p.outcome.value,
            verdict: Some(p.outcome.verdict),
        });
    }
    let mut inconclusive = laplace.has_inconclusive();

    let delta_probe = match delta_probe {
        Some(v) if !(v > 0.0 && v.is_finite()) => {
            return Err(Error::Domain(format!("delta_probe must be positive, got {v}")))
        }
        Some(v) => v,
        None => default_probe(&laplace.delta_hat, cfg.eps_s),
    };

    let tail = tail_decay_check(d, delta_probe, cfg.x_start, cfg.n_probes)?;
    let poly = polynomial_tail_check(d, cfg.k_max, cfg.x_start, cfg.n_probes)?;
    probes.extend(tail.rows.iter().cloned());
    probes.extend(poly.rows.iter().cloned());

    if tail.passed {
        // Tail decay at δ forces a finite transform on |s| < δ and
        // polynomial tail decay for every k.
        let edge = delta_probe - cfg.eps_s;
        if edge > 0.0 {
            for s in [-edge, -0.5 * edge, 0.5 * edge, edge] {
                let out = laplace_transform(d, s, plan)?;
                probes.push(EvidenceRow {
                    check: CheckKind::CrossCheck,
                    x: None,
                    s: Some(s),
                    k: None,
                    value: out.value,
                    verdict: Some(out.verdict),
                });
                match out.verdict {
                    Verdict::Converged => {}
                    Verdict::Divergent => warnings.push(format!(
                        "numerical inconsistency: tails decay at delta = {delta_probe} but M({s}) was found divergent"
                    )),
                    Verdict::Inconclusive => {
                        inconclusive = true;
                        warnings.push(format!("tails decay at delta = {delta_probe} but M({s}) could not be resolved"));
                    }
                }
            }
        }
        if !poly.passed {
            warnings.push(format!(
                "numerical inconsistency: tails decay at delta = {delta_probe} but the polynomial tail check failed"
            ));
        }
        if let DeltaHat::Finite(dh) = laplace.delta_hat {
            if dh + laplace.delta_resolution < delta_probe - cfg.eps_s {
                warnings.push(format!(
                    "numerical inconsistency: tails decay at delta = {delta_probe} but delta_hat = {dh}"
                ));
            }
        }
    }

    let mut report = ConditionReport {
        weight: d.label(),
        positivity_ok,
        laplace_ok,
        tail_decay_ok: tail.passed,
        polynomial_tail_ok: poly.passed,
        delta_hat: laplace.delta_hat,
        delta_resolution: laplace.delta_resolution,
        delta_probe,
        inconclusive,
        exit_code: 0,
        warnings,
        notes: vec![CONTINUITY_NOTE.to_string()],
        laplace,
        probes,
    };
    report.exit_code = report.compute_exit_code();
    Ok(report)
}

fn default_probe(delta_hat: &DeltaHat, eps_s: f64) -> f64 {
    let half = 0.5 * delta_hat.capped();
    if half > 0.0 {
        half
    } else {
        eps_s
    }
}

/// Support inspection first; then `a > 0` sampled on the configured grid.
fn check_positivity(d: &WeightDensity, cfg: &CertifyConfig, probes: &mut Vec<EvidenceRow>) -> Result<bool> {
    let lebesgue_line = matches!(d.base(), BaseMeasure::Lebesgue(iv) if iv.lo.is_infinite() && iv.hi.is_infinite());
    let mut ok = lebesgue_line && d.support().is_real_line();
    let n = cfg.positivity_points.max(2);
    let step = (cfg.positivity_hi - cfg.positivity_lo) / (n - 1) as f64;
    for i in 0..n {
        let x = cfg.positivity_lo + step * i as f64;
        if d.ln_eval(x)? == f64::NEG_INFINITY {
            probes.push(EvidenceRow::at(CheckKind::Positivity, x, 0.0));
            ok = false;
            break;
        }
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_tails() {
        let g = WeightDensity::gaussian(0.0, 1.0).unwrap();
        assert!(tail_decay_check(&g, 10.0, 8.0, 6).unwrap().passed);
        assert!(polynomial_tail_check(&g, 8, 8.0, 6).unwrap().passed);
    }

    #[test]
    fn double_exponential_tails() {
        let d = WeightDensity::double_exponential(1.0).unwrap();
        let grow = tail_decay_check(&d, 2.0, 8.0, 8).unwrap();
        assert!(!grow.passed);
        assert!(grow.failure.is_some());
        assert!(tail_decay_check(&d, 0.5, 8.0, 8).unwrap().passed);
        assert!(polynomial_tail_check(&d, 8, 8.0, 8).unwrap().passed);
    }

    #[test]
    fn overflow_reads_as_growth() {
        let d = WeightDensity::double_exponential(1.0).unwrap();
        let c = tail_decay_check(&d, 2.0, 8.0, 48).unwrap();
        assert!(!c.passed);
        assert!(c.rows.iter().any(|r| r.value.is_infinite()));
    }

    #[test]
    fn compact_tabulated_tail_is_zero() {
        let t = WeightDensity::tabulated(vec![(-1.0, 0.0), (-0.5, 1.0), (0.5, 1.0), (1.0, 0.0)]).unwrap();
        let c = polynomial_tail_check(&t, 8, 8.0, 6).unwrap();
        assert!(c.passed);
        assert!(c.rows.iter().all(|r| r.value == 0.0));
    }

    #[test]
    fn probe_validation() {
        let g = WeightDensity::gaussian(0.0, 1.0).unwrap();
        assert!(tail_decay_check(&g, 0.0, 8.0, 6).is_err());
        assert!(tail_decay_check(&g, 1.0, 8.0, 3).is_err());
        assert!(polynomial_tail_check(&g, 0, 8.0, 6).is_err());
    }

    #[test]
    fn certify_gaussian() {
        let g = WeightDensity::gaussian(0.0, 1.0).unwrap();
        let r = certify(&g, &QuadraturePlan::default(), None).unwrap();
        assert!(r.all_ok(), "{r:#?}");
        assert!(matches!(r.delta_hat, DeltaHat::Unbounded { .. }));
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        assert_eq!(r.exit_code, 0);
    }

    #[test]
    fn certify_lognormal_fails() {
        let d = WeightDensity::lognormal(0.0, 1.0).unwrap();
        let r = certify(&d, &QuadraturePlan::default(), None).unwrap();
        assert!(!r.positivity_ok);
        assert!(!r.laplace_ok);
        assert_eq!(r.exit_code, 3);
        assert!(r.probes.iter().any(|p| p.check == CheckKind::Positivity));
    }

    #[test]
    fn certify_double_exponential() {
        let d = WeightDensity::double_exponential(1.0).unwrap();
        let r = certify(&d, &QuadraturePlan::default(), Some(0.5)).unwrap();
        assert!(r.all_ok(), "{r:#?}");
        let DeltaHat::Finite(dh) = r.delta_hat else { panic!("{:?}", r.delta_hat) };
        assert!((dh - 1.0).abs() <= 0.05);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        assert_eq!(r.exit_code, 0);
    }

    #[test]
    fn exit_precedence() {
        let d = WeightDensity::gaussian(0.0, 1.0).unwrap();
        let mut r = certify(&d, &QuadraturePlan::default(), None).unwrap();
        r.inconclusive = true;
        assert_eq!(r.compute_exit_code(), 4);
        r.positivity_ok = false;
        assert_eq!(r.compute_exit_code(), 3);
    }
}
