//! Weight densities `a(x) >= 0` with respect to a base measure on the line.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, IntegralOutcome, Interval, QuadraturePlan, TruncationHint, Verdict};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Piecewise-linear density given by its nodes; zero outside `[x_0, x_n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    xs: Vec<f64>,
    values: Vec<f64>,
}

impl Tabulated {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::Table(format!("need at least 4 points, got {}", points.len())));
        }
        for (i, &(x, a)) in points.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::Table(format!("row {i}: x is not finite")));
            }
            if !a.is_finite() || a < 0.0 {
                return Err(Error::Table(format!("row {i}: a = {a} is not a finite nonnegative value")));
            }
            if i > 0 && x <= points[i - 1].0 {
                return Err(Error::Table(format!("row {i}: x = {x} is not strictly increasing")));
            }
        }
        let (xs, values) = points.into_iter().unzip();
        Ok(Self { xs, values })
    }

    /// Reads a CSV file with header `x,a`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            x: f64,
            a: f64,
        }
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Table(e.to_string()))?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "a" {
            return Err(Error::Table(format!(
                "expected header `x,a`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut points = Vec::new();
        for (i, row) in rdr.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| Error::Table(format!("row {}: {e}", i + 1)))?;
            if row.x.is_nan() || row.a.is_nan() {
                return Err(Error::Table(format!("row {}: NaN value", i + 1)));
            }
            points.push((row.x, row.a));
        }
        Self::new(points)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.values.iter().copied())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&t| t <= x);
        if i == n {
            return self.values[n - 1];
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (a0, a1) = (self.values[i - 1], self.values[i]);
        a0 + (a1 - a0) * (x - x0) / (x1 - x0)
    }
}

/// Parametric family of a weight density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
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
    Tabulated(Tabulated),
}

impl Family {
    fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidWeight(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        let fin = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidWeight(format!("{name} must be finite, got {v}")))
            }
        };
        match self {
            Family::Gaussian { mu, sigma } | Family::LogNormal { mu, sigma } => {
                fin("mu", *mu)?;
                pos("sigma", *sigma)
            }
            Family::DoubleExponential { scale } => pos("scale", *scale),
            Family::Uniform { lo, hi } => {
                fin("lo", *lo)?;
                fin("hi", *hi)?;
                if lo < hi {
                    Ok(())
                } else {
                    Err(Error::InvalidWeight(format!("uniform needs lo < hi, got [{lo}, {hi}]")))
                }
            }
            Family::Tabulated(_) => Ok(()),
        }
    }

    /// Declared support of the density.
    pub fn support(&self) -> Support {
        match self {
            Family::Gaussian { .. } | Family::DoubleExponential { .. } => {
                Support::closed(f64::NEG_INFINITY, f64::INFINITY)
            }
            Family::Uniform { lo, hi } => Support::closed(*lo, *hi),
            Family::LogNormal { .. } => Support { lo: 0.0, hi: f64::INFINITY, lo_open: true, hi_open: true },
            Family::Tabulated(t) => Support::closed(t.xs[0], t.xs[t.xs.len() - 1]),
        }
    }

    /// Symmetric about the origin.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Family::Gaussian { mu, .. } => *mu == 0.0,
            Family::DoubleExponential { .. } => true,
            Family::Uniform { lo, hi } => *lo == -*hi,
            Family::LogNormal { .. } => false,
            Family::Tabulated(t) => {
                let n = t.xs.len();
                (0..n).all(|i| t.xs[i] == -t.xs[n - 1 - i] && t.values[i] == t.values[n - 1 - i])
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Family::Gaussian { mu, sigma } => format!("gaussian({mu}, {sigma})"),
            Family::DoubleExponential { scale } => format!("double_exponential({scale})"),
            Family::Uniform { lo, hi } => format!("uniform({lo}, {hi})"),
            Family::LogNormal { mu, sigma } => format!("lognormal({mu}, {sigma})"),
            Family::Tabulated(t) => format!("tabulated({} points)", t.xs.len()),
        }
    }
}

/// Interval of the line with explicit open/closed ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Support {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: false, hi_open: false }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    pub fn as_interval(&self) -> Interval {
        Interval { lo: self.lo, hi: self.hi }
    }
}

/// Finite, strictly increasing set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidWeight("counting grid is empty".into()));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidWeight("counting grid has a non-finite point".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidWeight("counting grid must be strictly increasing".into()));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Grid {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Grid::new(v)
    }
}

impl From<Grid> for Vec<f64> {
    fn from(g: Grid) -> Self {
        g.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMeasure {
    /// Lebesgue measure restricted to an interval (possibly the whole line).
    Lebesgue(Interval),
    /// Counting measure on a finite grid.
    Counting(Grid),
}

impl Default for BaseMeasure {
    fn default() -> Self {
        BaseMeasure::Lebesgue(Interval::real_line())
    }
}

/// A weight density together with its base measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightDensity {
    family: Family,
    base: BaseMeasure,
    #[serde(skip)]
    normalization: OnceLock<f64>,
}

impl PartialEq for WeightDensity {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.base == other.base
    }
}

impl WeightDensity {
    pub fn new(family: Family, base: BaseMeasure) -> Result<Self> {
        family.validate()?;
        if let BaseMeasure::Counting(grid) = &base {
            if !grid.points().iter().any(|&x| family_density(&family, x) > 0.0) {
                return Err(Error::InvalidWeight("density vanishes on every grid point".into()));
            }
        }
        if let (BaseMeasure::Lebesgue(iv), support) = (&base, family.support()) {
            if iv.intersect(&support.as_interval()).is_none() {
                return Err(Error::InvalidWeight("base interval misses the support".into()));
            }
        }
        Ok(Self { family, base, normalization: OnceLock::new() })
    }

    /// Density with respect to Lebesgue measure on the whole line.
    pub fn lebesgue(family: Family) -> Result<Self> {
        Self::new(family, BaseMeasure::default())
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        Self::lebesgue(Family::Gaussian { mu, sigma })
    }

    pub fn double_exponential(scale: f64) -> Result<Self> {
        Self::lebesgue(Family::DoubleExponential { scale })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::lebesgue(Family::Uniform { lo, hi })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::lebesgue(Family::LogNormal { mu, sigma })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::lebesgue(Family::Tabulated(Tabulated::new(points)?))
    }

    /// Equal weights on the grid points (counting measure, uniform family).
    pub fn equal_weights(points: Vec<f64>) -> Result<Self> {
        let grid = Grid::new(points)?;
        let (lo, hi) = (grid.0[0], grid.0[grid.0.len() - 1]);
        let (lo, hi) = if lo < hi { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Self::new(Family::Uniform { lo, hi }, BaseMeasure::Counting(grid))
    }

    /// Family label, with the grid size for counting measures.
    pub fn label(&self) -> String {
        match &self.base {
            BaseMeasure::Counting(g) => format!("{} on {} grid points", self.family.label(), g.0.len()),
            BaseMeasure::Lebesgue(_) => self.family.label(),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn base(&self) -> &BaseMeasure {
        &self.base
    }

    /// Points where `a > 0` may hold: the family support, cut by the base measure.
    pub fn support(&self) -> Support {
        let s = self.family.support();
        match &self.base {
            BaseMeasure::Lebesgue(iv) => {
                let mut out = s;
                if iv.lo > s.lo {
                    out.lo = iv.lo;
                    out.lo_open = false;
                }
                if iv.hi < s.hi {
                    out.hi = iv.hi;
                    out.hi_open = false;
                }
                out
            }
            BaseMeasure::Counting(g) => Support::closed(g.0[0], g.0[g.0.len() - 1]),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let base_sym = match &self.base {
            BaseMeasure::Lebesgue(iv) => iv.lo == -iv.hi,
            BaseMeasure::Counting(g) => {
                let p = &g.0;
                (0..p.len()).all(|i| p[i] == -p[p.len() - 1 - i])
            }
        };
        base_sym && self.family.is_symmetric()
    }

    /// `a(x)`; zero outside the support.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("density evaluated at non-finite x = {x}")));
        }
        if !self.support().contains(x) {
            return Ok(0.0);
        }
        Ok(family_density(&self.family, x))
    }

    /// `ln a(x)`, `-inf` where `a` vanishes. Avoids the underflow of `a` itself
    /// far in the tails.
    pub fn ln_eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("density evaluated at non-finite x = {x}")));
        }
        if !self.support().contains(x) {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(family_ln_density(&self.family, x))
    }

    /// `∫ g(x) a(x) λ(dx)`.
    ///
    /// Points where `a` vanishes contribute nothing even if `g` is not finite
    /// there. Lognormal weights are integrated in `y = ln x`.
    pub fn integrate<F>(&self, g: F, plan: &QuadraturePlan) -> Result<IntegralOutcome>
    where
        F: Fn(f64) -> f64,
    {
        match &self.base {
            BaseMeasure::Counting(grid) => {
                // Grid points are finite, so `family_density` is the density here.
                let value = quadrature::integrate_counting(
                    |x| {
                        let w = family_density(&self.family, x);
                        if w == 0.0 {
                            0.0
                        } else {
                            g(x) * w
                        }
                    },
                    grid.points(),
                )?;
                Ok(IntegralOutcome {
                    value,
                    error_estimate: 0.0,
                    verdict: Verdict::Converged,
                    truncations_used: Vec::new(),
                })
            }
            BaseMeasure::Lebesgue(iv) => {
                let domain = iv
                    .intersect(&self.family.support().as_interval())
                    .ok_or_else(|| Error::InvalidWeight("empty integration domain".into()))?;
                self.integrate_lebesgue(&g, &domain, plan)
            }
        }
    }

    /// `∫ g(x) e^{sx} a(x) λ(dx)`, with the exponential tilt folded into the
    /// log-density so that `e^{sx}` and `a(x)` cannot overflow and underflow
    /// separately.
    pub fn integrate_tilted<F>(&self, s: f64, g: F, plan: &QuadraturePlan) -> Result<IntegralOutcome>
    where
        F: Fn(f64) -> f64,
    {
        if !s.is_finite() {
            return Err(Error::Domain(format!("tilt must be finite, got {s}")));
        }
        match &self.base {
            BaseMeasure::Counting(_) => self.integrate(|x| g(x) * (s * x).exp(), plan),
            BaseMeasure::Lebesgue(iv) => {
                let domain = iv
                    .intersect(&self.family.support().as_interval())
                    .ok_or_else(|| Error::InvalidWeight("empty integration domain".into()))?;
                self.integrate_lebesgue_log(&g, s, &domain, plan)
            }
        }
    }

    fn integrate_lebesgue<F>(&self, g: &F, domain: &Interval, plan: &QuadraturePlan) -> Result<IntegralOutcome>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_lebesgue_log(g, 0.0, domain, plan)
    }

    /// Integrates `g(x) · exp(s x + ln a(x))`.
    fn integrate_lebesgue_log<F>(
        &self,
        g: &F,
        s: f64,
        domain: &Interval,
        plan: &QuadraturePlan,
    ) -> Result<IntegralOutcome>
    where
        F: Fn(f64) -> f64,
    {
        let weighted = |x: f64, log_w: f64| {
            let w = (s * x + log_w).exp();
            if w == 0.0 {
                0.0
            } else {
                g(x) * w
            }
        };
        match &self.family {
            Family::LogNormal { mu, sigma } => {
                let (mu, sigma) = (*mu, *sigma);
                let y_domain = Interval {
                    lo: if domain.lo <= 0.0 { f64::NEG_INFINITY } else { domain.lo.ln() },
                    hi: domain.hi.ln(),
                };
                let hint = TruncationHint { center: mu, scale: sigma, breakpoints: Vec::new() };
                // a(x) dx = φ((y - μ)/σ)/σ dy with x = e^y.
                let h = |y: f64| {
                    let z = (y - mu) / sigma;
                    weighted(y.exp(), -0.5 * z * z - LN_SQRT_2PI - sigma.ln())
                };
                quadrature::integrate_with(h, &y_domain, &hint, plan)
            }
            family => {
                let hint = match family {
                    Family::Gaussian { mu, sigma } => {
                        TruncationHint { center: *mu, scale: *sigma, breakpoints: Vec::new() }
                    }
                    Family::DoubleExponential { scale } => {
                        TruncationHint { center: 0.0, scale: *scale, breakpoints: vec![0.0] }
                    }
                    Family::Tabulated(t) => TruncationHint { breakpoints: t.xs.clone(), ..TruncationHint::default() },
                    _ => TruncationHint::default(),
                };
                let h = |x: f64| weighted(x, family_ln_density(family, x));
                quadrature::integrate_with(h, domain, &hint, plan)
            }
        }
    }

    /// `∫ a dλ`, computed once and cached.
    pub fn total_mass(&self, plan: &QuadraturePlan) -> Result<f64> {
        if let Some(m) = self.normalization.get() {
            return Ok(*m);
        }
        let out = self.integrate(|_| 1.0, plan)?;
        let mass = match out.verdict {
            Verdict::Converged => out.value,
            Verdict::Divergent => return Err(Error::InfiniteMass(format!("{} diverges", self.family.label()))),
            Verdict::Inconclusive => {
                return Err(Error::InfiniteMass(format!("{}: mass integral inconclusive", self.family.label())))
            }
        };
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidWeight(format!("total mass {mass} is not positive")));
        }
        // Concurrent callers compute the same value; whichever lands first wins.
        Ok(*self.normalization.get_or_init(|| mass))
    }

    /// Cached total mass, if already computed.
    pub fn normalization(&self) -> Option<f64> {
        self.normalization.get().copied()
    }
}

fn family_ln_density(family: &Family, x: f64) -> f64 {
    match family {
        Family::Gaussian { mu, sigma } => {
            let z = (x - mu) / sigma;
            -0.5 * z * z - sigma.ln() - LN_SQRT_2PI
        }
        Family::DoubleExponential { scale } => -x.abs() / scale - (2.0 * scale).ln(),
        Family::LogNormal { mu, sigma } => {
            if x <= 0.0 {
                f64::NEG_INFINITY
            } else {
                let z = (x.ln() - mu) / sigma;
                -0.5 * z * z - sigma.ln() - LN_SQRT_2PI - x.ln()
            }
        }
        other => family_density(other, x).ln(),
    }
}

fn family_density(family: &Family, x: f64) -> f64 {
    match family {
        Family::Gaussian { mu, sigma } => {
            let z = (x - mu) / sigma;
            (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
        }
        Family::DoubleExponential { scale } => 0.5 * (-x.abs() / scale).exp() / scale,
        Family::Uniform { lo, hi } => {
            if x >= *lo && x <= *hi {
                1.0 / (hi - lo)
            } else {
                0.0
            }
        }
        Family::LogNormal { mu, sigma } => {
            if x <= 0.0 {
                0.0
            } else {
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / (x * sigma * (2.0 * PI).sqrt())
            }
        }
        Family::Tabulated(t) => t.eval(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan() -> QuadraturePlan {
        QuadraturePlan::default()
    }

    #[test]
    fn point_values() {
        let g = WeightDensity::gaussian(0.0, 1.0).unwrap();
        assert!((g.eval(0.0).unwrap() - 0.398_942_280_401_432_7).abs() < 1e-15);
        let u = WeightDensity::uniform(-1.0, 1.0).unwrap();
        assert_eq!(u.eval(2.0).unwrap(), 0.0);
        let d = WeightDensity::double_exponential(1.0).unwrap();
        assert_eq!(d.eval(0.0).unwrap(), 0.5);
        assert!(g.eval(f64::NAN).is_err());
        assert!(g.eval(f64::INFINITY).is_err());
    }

    #[test]
    fn named_families_are_normalized() {
        for d in [
            WeightDensity::gaussian(0.0, 1.0).unwrap(),
            WeightDensity::gaussian(3.0, 0.25).unwrap(),
            WeightDensity::double_exponential(1.0).unwrap(),
            WeightDensity::double_exponential(2.5).unwrap(),
            WeightDensity::uniform(-1.0, 1.0).unwrap(),
            WeightDensity::lognormal(0.0, 1.0).unwrap(),
            WeightDensity::lognormal(0.5, 0.3).unwrap(),
        ] {
            let m = d.total_mass(&plan()).unwrap();
            assert!((m - 1.0).abs() <= 1e-9, "{}: {m}", d.family().label());
            assert_eq!(d.normalization(), Some(m));
        }
    }

    #[test]
    fn tabulated_trapezoid_mass() {
        let t = WeightDensity::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (3.0, 0.0)]).unwrap();
        assert!((t.total_mass(&plan()).unwrap() - 2.0).abs() <= 1e-9);
        assert_eq!(t.eval(0.5).unwrap(), 0.5);
        assert_eq!(t.eval(3.5).unwrap(), 0.0);
        assert_eq!(t.eval(-0.1).unwrap(), 0.0);
    }

    #[test]
    fn tabulated_validation() {
        assert!(Tabulated::new(vec![(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(Tabulated::new(vec![(0.0, 1.0), (1.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(Tabulated::new(vec![(0.0, 1.0), (1.0, -1.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn tabulated_csv() {
        let ok = "x,a\n0,0\n1,1\n2,1\n3,0\n";
        let t = Tabulated::from_reader(ok.as_bytes()).unwrap();
        assert_eq!(t.nodes(), &[0.0, 1.0, 2.0, 3.0]);
        assert!(Tabulated::from_reader("x,a\n0,0\n1,NaN\n2,1\n3,0\n".as_bytes()).is_err());
        assert!(Tabulated::from_reader("x,a\n0,0\n1,-1\n2,1\n3,0\n".as_bytes()).is_err());
        assert!(Tabulated::from_reader("x,b\n0,0\n1,1\n2,1\n3,0\n".as_bytes()).is_err());
        assert!(Tabulated::from_reader("x,a\n0,0\n2,1\n1,1\n3,0\n".as_bytes()).is_err());
    }

    #[test]
    fn counting_base() {
        let d = WeightDensity::equal_weights(vec![-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(d.total_mass(&plan()).unwrap(), 1.5);
        assert!(d.is_symmetric());
        assert!(Grid::new(vec![0.0, 0.0]).is_err());
        assert!(Grid::new(vec![]).is_err());
    }

    #[test]
    fn lognormal_support_excludes_nonpositive_axis() {
        let d = WeightDensity::lognormal(0.0, 1.0).unwrap();
        assert_eq!(d.eval(0.0).unwrap(), 0.0);
        assert_eq!(d.eval(-3.0).unwrap(), 0.0);
        assert_eq!(d.ln_eval(-3.0).unwrap(), f64::NEG_INFINITY);
        assert!(d.eval(1.0).unwrap() > 0.0);
    }

    #[test]
    fn log_density_survives_underflow() {
        let g = WeightDensity::gaussian(0.0, 1.0).unwrap();
        assert_eq!(g.eval(50.0).unwrap(), 0.0);
        assert!(g.ln_eval(50.0).unwrap().is_finite());
    }

    #[test]
    fn lebesgue_restriction() {
        let d = WeightDensity::new(
            Family::Gaussian { mu: 0.0, sigma: 1.0 },
            BaseMeasure::Lebesgue(Interval { lo: 0.0, hi: f64::INFINITY }),
        )
        .unwrap();
        assert!((d.total_mass(&plan()).unwrap() - 0.5).abs() < 1e-10);
        assert_eq!(d.eval(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(WeightDensity::gaussian(0.0, 0.0).is_err());
        assert!(WeightDensity::uniform(1.0, 1.0).is_err());
        assert!(WeightDensity::double_exponential(-1.0).is_err());
        assert!(WeightDensity::lognormal(f64::NAN, 1.0).is_err());
    }
}
