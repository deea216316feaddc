//! Laplace transform `M(s; f) = ∫ e^{sx} f(x) λ(dx)` of weights and signed
//! functions, the finiteness neighbourhood estimator, moments, and the
//! weighted-monomial finiteness check.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::WeightDensity;
use crate::quadrature::{IntegralOutcome, QuadraturePlan, Verdict};

/// `M(s; a)` for the weight itself.
pub fn laplace_transform(d: &WeightDensity, s: f64, plan: &QuadraturePlan) -> Result<IntegralOutcome> {
    if !s.is_finite() {
        return Err(Error::Domain(format!("transform argument must be finite, got {s}")));
    }
    d.integrate_tilted(s, |_| 1.0, plan)
}

/// A real function split into nonnegative parts `f = f⁺ - f⁻`.
pub struct SignedFunction<F> {
    f: F,
}

impl<F: Fn(f64) -> f64> SignedFunction<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn positive_part(&self, x: f64) -> f64 {
        (self.f)(x).max(0.0)
    }

    pub fn negative_part(&self, x: f64) -> f64 {
        (-(self.f)(x)).max(0.0)
    }
}

/// Value of `M(s; f⁺ a) - M(s; f⁻ a)` in the extended reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignedLaplace {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
    /// Both parts diverge: `∞ - ∞`.
    Undefined,
    /// At least one part could not be decided and the other does not settle it.
    Inconclusive,
}

impl SignedLaplace {
    pub fn finite(&self) -> Option<f64> {
        match self {
            SignedLaplace::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

pub fn signed_laplace<F>(
    f: &SignedFunction<F>,
    d: &WeightDensity,
    s: f64,
    plan: &QuadraturePlan,
) -> Result<SignedLaplace>
where
    F: Fn(f64) -> f64,
{
    if !s.is_finite() {
        return Err(Error::Domain(format!("transform argument must be finite, got {s}")));
    }
    let pos = d.integrate_tilted(s, |x| f.positive_part(x), plan)?;
    let neg = d.integrate_tilted(s, |x| f.negative_part(x), plan)?;
    use Verdict::*;
    Ok(match (pos.verdict, neg.verdict) {
        (Converged, Converged) => SignedLaplace::Finite(pos.value - neg.value),
        (Divergent, Converged) => SignedLaplace::PlusInfinity,
        (Converged, Divergent) => SignedLaplace::MinusInfinity,
        (Divergent, Divergent) => SignedLaplace::Undefined,
        _ => SignedLaplace::Inconclusive,
    })
}

/// Half-width of the finiteness neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaHat {
    Finite(f64),
    /// No divergence found up to the probe limit on either side.
    Unbounded {
        probe_limit: f64,
    },
}

impl DeltaHat {
    pub fn is_positive(&self) -> bool {
        match self {
            DeltaHat::Finite(d) => *d > 0.0,
            DeltaHat::Unbounded { .. } => true,
        }
    }

    /// Numeric value, with the unbounded case capped at its probe limit.
    pub fn capped(&self) -> f64 {
        match self {
            DeltaHat::Finite(d) => *d,
            DeltaHat::Unbounded { probe_limit } => *probe_limit,
        }
    }

    pub fn exceeds(&self, threshold: f64) -> bool {
        match self {
            DeltaHat::Finite(d) => *d > threshold,
            DeltaHat::Unbounded { .. } => true,
        }
    }
}

impl Serialize for DeltaHat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DeltaHat::Finite(d) => serializer.serialize_f64(*d),
            DeltaHat::Unbounded { .. } => serializer.serialize_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceProbe {
    pub s: f64,
    pub outcome: IntegralOutcome,
}

impl Serialize for LaplaceProbe {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LaplaceProbe", 4)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("value", &self.outcome.value)?;
        st.serialize_field("error", &self.outcome.error_estimate)?;
        st.serialize_field("verdict", &self.outcome.verdict)?;
        st.end()
    }
}

/// Bisection result on one side of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideBoundary {
    /// Largest |s| certified finite.
    pub finite_up_to: f64,
    /// Smallest |s| found divergent, if any.
    pub divergent_from: Option<f64>,
    /// Smallest |s| above `finite_up_to` whose verdict was inconclusive.
    pub inconclusive_from: Option<f64>,
}

impl SideBoundary {
    /// Upper end of the bracket: the divergent probe, or failing that the
    /// first undecided one.
    fn upper(&self) -> Option<f64> {
        self.divergent_from.or(self.inconclusive_from)
    }

    pub fn estimate(&self) -> Option<f64> {
        self.upper().map(|hi| 0.5 * (self.finite_up_to + hi))
    }

    pub fn width(&self) -> Option<f64> {
        self.upper().map(|hi| hi - self.finite_up_to)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceReport {
    pub s_grid: Vec<f64>,
    pub values: Vec<LaplaceProbe>,
    pub delta_hat: DeltaHat,
    pub delta_resolution: f64,
    pub probe_limit: f64,
    pub positive_side: SideBoundary,
    pub negative_side: SideBoundary,
}

impl LaplaceReport {
    pub fn has_inconclusive(&self) -> bool {
        self.values.iter().any(|p| p.outcome.verdict == Verdict::Inconclusive)
    }

    pub fn probe(&self, s: f64) -> Option<&LaplaceProbe> {
        self.values.iter().find(|p| p.s == s)
    }
}

/// Bisects each side of the origin for the smallest `|s|` at which `M(s; a)`
/// diverges, and reports the smaller of the two boundaries.
pub fn estimate_delta(d: &WeightDensity, s_max: f64, eps_s: f64, plan: &QuadraturePlan) -> Result<LaplaceReport> {
    if !(eps_s > 0.0 && s_max > eps_s && s_max.is_finite()) {
        return Err(Error::Domain(format!("need s_max > eps_s > 0, got s_max = {s_max}, eps_s = {eps_s}")));
    }
    let mut probes = Vec::new();
    let origin = laplace_transform(d, 0.0, plan)?;
    if !origin.is_converged() {
        return Err(Error::InfiniteMass(format!("M(0) for {} is {:?}", d.family().label(), origin.verdict)));
    }
    probes.push(LaplaceProbe { s: 0.0, outcome: origin });

    let positive_side = bisect_side(d, 1.0, s_max, eps_s, plan, &mut probes)?;
    let negative_side = bisect_side(d, -1.0, s_max, eps_s, plan, &mut probes)?;

    let sides = [positive_side, negative_side];
    let finite: Vec<(f64, f64)> = sides.iter().filter_map(|b| Some((b.estimate()?, b.width()?))).collect();
    let (delta_hat, delta_resolution) = if finite.is_empty() {
        (DeltaHat::Unbounded { probe_limit: s_max }, eps_s)
    } else {
        let delta = finite.iter().map(|f| f.0).fold(f64::INFINITY, f64::min);
        let res = finite.iter().map(|f| f.1).fold(0.0, f64::max);
        (DeltaHat::Finite(delta), res)
    };

    probes.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(LaplaceReport {
        s_grid: probes.iter().map(|p| p.s).collect(),
        values: probes,
        delta_hat,
        delta_resolution,
        probe_limit: s_max,
        positive_side,
        negative_side,
    })
}

fn bisect_side(
    d: &WeightDensity,
    sign: f64,
    s_max: f64,
    eps_s: f64,
    plan: &QuadraturePlan,
    probes: &mut Vec<LaplaceProbe>,
) -> Result<SideBoundary> {
    let mut probe = |t: f64| -> Result<Verdict> {
        let out = laplace_transform(d, sign * t, plan)?;
        let v = out.verdict;
        probes.push(LaplaceProbe { s: sign * t, outcome: out });
        Ok(v)
    };

    let mut lo = 0.0;
    let mut divergent: Option<f64> = None;
    let mut inconclusive: Option<f64> = None;
    match probe(s_max)? {
        Verdict::Converged => {
            return Ok(SideBoundary { finite_up_to: s_max, divergent_from: None, inconclusive_from: None })
        }
        Verdict::Divergent => divergent = Some(s_max),
        Verdict::Inconclusive => inconclusive = Some(s_max),
    }
    // `upper` moves down on divergent and inconclusive probes alike so the
    // search keeps narrowing; an inconclusive probe leaves the bracket to the
    // divergent side wider than `eps_s`.
    let mut upper = s_max;
    while upper - lo > eps_s {
        let mid = 0.5 * (lo + upper);
        match probe(mid)? {
            Verdict::Converged => lo = mid,
            Verdict::Divergent => divergent = Some(mid),
            Verdict::Inconclusive => inconclusive = Some(mid),
        }
        if mid > lo {
            upper = mid;
        }
    }
    // Only inconclusive probes above `lo` bound the bracket.
    let inconclusive_from = inconclusive.filter(|&t| t > lo);
    let divergent_from = divergent;
    Ok(SideBoundary { finite_up_to: lo, divergent_from, inconclusive_from })
}

/// `∫ x^k a(x) λ(dx)`, verdict included.
pub fn moment(d: &WeightDensity, k: u32, plan: &QuadraturePlan) -> Result<IntegralOutcome> {
    let k = i32::try_from(k).map_err(|_| Error::Domain(format!("moment order {k} too large")))?;
    d.integrate(|x| x.powi(k), plan)
}

/// Moment of a weight whose Laplace transform is known to be finite near the
/// origin; anything short of convergence is then a numerical inconsistency.
pub fn certified_moment(d: &WeightDensity, k: u32, report: &LaplaceReport, plan: &QuadraturePlan) -> Result<f64> {
    let out = moment(d, k, plan)?;
    match out.verdict {
        Verdict::Converged => Ok(out.value),
        v if report.delta_hat.is_positive() => Err(Error::Inconsistency(format!(
            "moment {k} of {} is {v:?} although the Laplace transform is finite near 0",
            d.family().label()
        ))),
        v => Err(Error::NotConverged { context: format!("moment {k}: {v:?}") }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialProbe {
    pub s: f64,
    pub value: f64,
    pub verdict: Verdict,
    pub passed: bool,
}

/// Finiteness of `M(s; xⁿ a)` at a set of probe points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialCheck {
    pub n: u32,
    pub delta: f64,
    pub probes: Vec<MonomialProbe>,
    pub passed: bool,
    /// First probe `(s, n)` that did not converge.
    pub failure: Option<(f64, u32)>,
}

/// Checks `M(s; xⁿ a) < ∞` at `s ∈ {0, ±δ/4, ±(δ/2 - eps_s)}`, i.e. strictly
/// inside `(-δ/2, δ/2)`.
pub fn check_weighted_monomial(
    d: &WeightDensity,
    n: u32,
    delta: f64,
    eps_s: f64,
    plan: &QuadraturePlan,
) -> Result<MonomialCheck> {
    if !(delta > 0.0 && delta.is_finite() && eps_s > 0.0) {
        return Err(Error::Domain(format!("need delta > 0 and eps_s > 0, got {delta}, {eps_s}")));
    }
    let edge = 0.5 * delta - eps_s;
    let mut points = vec![-0.25 * delta, 0.0, 0.25 * delta];
    if edge > 0.0 {
        points.insert(0, -edge);
        points.push(edge);
    }
    let mut check = check_weighted_monomial_at(d, n, &points, plan)?;
    check.delta = delta;
    Ok(check)
}

/// Same check at caller-chosen probe points.
pub fn check_weighted_monomial_at(
    d: &WeightDensity,
    n: u32,
    points: &[f64],
    plan: &QuadraturePlan,
) -> Result<MonomialCheck> {
    let power = i32::try_from(n).map_err(|_| Error::Domain(format!("monomial degree {n} too large")))?;
    let mut probes = Vec::with_capacity(points.len());
    let mut failure = None;
    for &s in points {
        if !s.is_finite() {
            return Err(Error::Domain(format!("probe s = {s} is not finite")));
        }
        let out = d.integrate_tilted(s, |x| x.powi(power), plan)?;
        let passed = out.is_converged();
        if !passed && failure.is_none() {
            failure = Some((s, n));
        }
        probes.push(MonomialProbe { s, value: out.value, verdict: out.verdict, passed });
    }
    Ok(MonomialCheck { n, delta: f64::NAN, passed: failure.is_none(), probes, failure })
}
