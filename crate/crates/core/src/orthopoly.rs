//! Orthonormal polynomials `e_0, e_1, …` of a weight, built with the Stieltjes
//! procedure.
//!
//! The sequence is the Gram-Schmidt orthonormalization of `1, x, x², …` in
//! `L²(a)`, but it is generated through the three-term recurrence
//!
//! ```text
//! x e_k = β_{k+1} e_{k+1} + α_k e_k + β_k e_{k-1}
//! ```
//!
//! with every coefficient obtained from an inner product computed by
//! quadrature against the weight. Moments are never formed, so the Hankel
//! matrix conditioning problem does not arise. Leading coefficients are
//! positive.

use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::WeightDensity;
use crate::quadrature::QuadraturePlan;

/// Hard cap on the degree of a basis.
pub const MAX_DEGREE_CAP: usize = 40;

/// Degeneracy threshold on `β`, in units of `f64::EPSILON` times the running
/// magnitude of the recurrence coefficients.
const DEGENERACY_ULPS: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisOptions {
    pub drift_tol: f64,
    pub max_degree_cap: usize,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self { drift_tol: 1e-8, max_degree_cap: MAX_DEGREE_CAP }
    }
}

#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    weight: Arc<WeightDensity>,
    max_degree: usize,
    /// `α_0 … α_{N-1}`.
    alpha: Vec<f64>,
    /// `β_1 … β_N`, stored at indices `0 … N-1`.
    beta: Vec<f64>,
    norm0: f64,
    orthogonality_drift: f64,
    drift_tol: f64,
}

impl OrthonormalBasis {
    /// Assembles a basis from known recurrence coefficients.
    ///
    /// `alpha` holds `α_0..α_{N-1}` and `beta` holds `β_1..β_N`. The drift is
    /// left at `NaN` until [`Self::orthogonality_audit`] is run.
    pub fn from_recurrence(weight: Arc<WeightDensity>, alpha: Vec<f64>, beta: Vec<f64>, norm0: f64) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::Domain(format!(
                "alpha and beta must have equal length, got {} and {}",
                alpha.len(),
                beta.len()
            )));
        }
        if !(norm0 > 0.0 && norm0.is_finite()) {
            return Err(Error::Domain(format!("norm0 must be positive, got {norm0}")));
        }
        if let Some(b) = beta.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(Error::Domain(format!("beta coefficients must be positive, got {b}")));
        }
        Ok(Self {
            weight,
            max_degree: alpha.len(),
            alpha,
            beta,
            norm0,
            orthogonality_drift: f64::NAN,
            drift_tol: BasisOptions::default().drift_tol,
        })
    }

    pub fn weight(&self) -> &WeightDensity {
        &self.weight
    }

    pub fn weight_arc(&self) -> &Arc<WeightDensity> {
        &self.weight
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `β_1 … β_N`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `β_k` for `k ≥ 1`.
    pub fn beta_k(&self, k: usize) -> f64 {
        self.beta[k - 1]
    }

    pub fn norm0(&self) -> f64 {
        self.norm0
    }

    pub fn orthogonality_drift(&self) -> f64 {
        self.orthogonality_drift
    }

    pub fn drift_tol(&self) -> f64 {
        self.drift_tol
    }

    /// Audited and within the drift tolerance.
    pub fn is_valid(&self) -> bool {
        self.orthogonality_drift <= self.drift_tol
    }

    /// `e_k(x)` by forward recurrence.
    pub fn eval(&self, k: usize, x: f64) -> Result<f64> {
        if k > self.max_degree {
            return Err(Error::DegreeOutOfRange { requested: k, max: self.max_degree });
        }
        Ok(self.eval_unchecked(k, x))
    }

    fn eval_unchecked(&self, k: usize, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = 1.0 / self.norm0;
        for j in 0..k {
            let b_prev = if j == 0 { 0.0 } else { self.beta[j - 1] };
            let next = ((x - self.alpha[j]) * cur - b_prev * prev) / self.beta[j];
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `[e_0(x), …, e_N(x)]`.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        self.eval_all_to(x, self.max_degree)
    }

    /// Sum `Σ c_k e_k(x)` over the given coefficients.
    pub fn eval_series(&self, coefficients: &[f64], x: f64) -> f64 {
        let n = coefficients.len().min(self.max_degree + 1);
        self.eval_all(x)[..n].iter().zip(coefficients).map(|(e, c)| e * c).sum()
    }

    /// Monomial coefficients of `e_k`, lowest power first.
    pub fn monomial_coefficients(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.max_degree {
            return Err(Error::DegreeOutOfRange { requested: k, max: self.max_degree });
        }
        let mut prev: Vec<f64> = Vec::new();
        let mut cur = vec![1.0 / self.norm0];
        for j in 0..k {
            let mut next = vec![0.0; cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= self.alpha[j] * c;
            }
            if j > 0 {
                for (i, p) in prev.iter().enumerate() {
                    next[i] -= self.beta[j - 1] * p;
                }
            }
            for c in &mut next {
                *c /= self.beta[j];
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }

    /// Leading coefficient of `e_k`: `1 / (norm0 · β_1 ⋯ β_k)`.
    pub fn leading_coefficient(&self, k: usize) -> Result<f64> {
        if k > self.max_degree {
            return Err(Error::DegreeOutOfRange { requested: k, max: self.max_degree });
        }
        Ok(1.0 / (self.norm0 * self.beta[..k].iter().product::<f64>()))
    }

    /// `⟨e_i, e_j⟩_a` for one pair.
    pub fn gram_entry(&self, i: usize, j: usize, plan: &QuadraturePlan) -> Result<f64> {
        if i.max(j) > self.max_degree {
            return Err(Error::DegreeOutOfRange { requested: i.max(j), max: self.max_degree });
        }
        let plan = plan.with_scale(1.0);
        let out = self.weight.integrate(
            |x| {
                let e = self.eval_all_to(x, i.max(j));
                e[i] * e[j]
            },
            &plan,
        )?;
        out.converged_value(&format!("auditing <e_{i}, e_{j}>"))
    }

    fn eval_all_to(&self, x: f64, k: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(1.0 / self.norm0);
        for j in 0..k {
            let b_prev = if j == 0 { 0.0 } else { self.beta[j - 1] };
            let prev = if j == 0 { 0.0 } else { out[j - 1] };
            out.push(((x - self.alpha[j]) * out[j] - b_prev * prev) / self.beta[j]);
        }
        out
    }

    /// Max over `0 ≤ i ≤ j ≤ N` of `|⟨e_i, e_j⟩ - δ_ij|`, stored on the basis.
    pub fn orthogonality_audit(&mut self, plan: &QuadraturePlan) -> Result<f64> {
        let drift = orthogonality_audit(self, plan)?;
        self.orthogonality_drift = drift;
        Ok(drift)
    }

    pub fn set_drift_tol(&mut self, tol: f64) {
        self.drift_tol = tol;
    }
}

/// Max over `0 ≤ i ≤ j ≤ N` of `|⟨e_i, e_j⟩ - δ_ij|`.
pub fn orthogonality_audit(b: &OrthonormalBasis, plan: &QuadraturePlan) -> Result<f64> {
    let n = b.max_degree;
    let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|j| (0..=j).map(move |i| (i, j))).collect();
    let drifts: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let g = b.gram_entry(i, j, plan)?;
            Ok((g - if i == j { 1.0 } else { 0.0 }).abs())
        })
        .collect();
    let mut worst: f64 = 0.0;
    for d in drifts {
        worst = worst.max(d?);
    }
    Ok(worst)
}

pub fn build_basis(d: Arc<WeightDensity>, max_degree: usize, plan: &QuadraturePlan) -> Result<OrthonormalBasis> {
    build_basis_with(d, max_degree, plan, &BasisOptions::default())
}

/// Stieltjes procedure to degree `max_degree`, followed by the orthogonality
/// audit.
///
/// A basis whose drift exceeds `opts.drift_tol` is still returned; check
/// [`OrthonormalBasis::is_valid`].
pub fn build_basis_with(
    d: Arc<WeightDensity>,
    max_degree: usize,
    plan: &QuadraturePlan,
    opts: &BasisOptions,
) -> Result<OrthonormalBasis> {
    if max_degree > opts.max_degree_cap {
        return Err(Error::DegreeOutOfRange { requested: max_degree, max: opts.max_degree_cap });
    }
    plan.validate()?;

    let mass = d.total_mass(plan)?;
    let norm0 = mass.sqrt();
    let mut basis = OrthonormalBasis {
        weight: d,
        max_degree: 0,
        alpha: Vec::with_capacity(max_degree),
        beta: Vec::with_capacity(max_degree),
        norm0,
        orthogonality_drift: f64::NAN,
        drift_tol: opts.drift_tol,
    };

    // Spread of the weight, the natural unit for the first coefficients.
    let second = basis.weight.integrate(|x| x * x, plan)?.converged_value("computing the second moment")?;
    let mut scale = (second / mass).sqrt().max(f64::MIN_POSITIVE);

    for k in 0..max_degree {
        // Current basis reaches degree k; e_{k-1} and e_k come from eval_all.
        let alpha = {
            let p = plan.with_scale(scale);
            basis
                .weight
                .integrate(
                    |x| {
                        let e = basis.eval_all_to(x, k);
                        x * e[k] * e[k]
                    },
                    &p,
                )?
                .converged_value(&format!("computing alpha_{k}"))?
        };
        let beta_k = if k == 0 { 0.0 } else { basis.beta[k - 1] };
        let norm_sq = {
            let p = plan.with_scale(scale * scale);
            basis
                .weight
                .integrate(
                    |x| {
                        let e = basis.eval_all_to(x, k);
                        let prev = if k == 0 { 0.0 } else { e[k - 1] };
                        let v = (x - alpha) * e[k] - beta_k * prev;
                        v * v
                    },
                    &p,
                )?
                .converged_value(&format!("computing beta_{}", k + 1))?
        };
        let beta = norm_sq.max(0.0).sqrt();
        scale = scale.max(alpha.abs()).max(beta);
        let threshold = DEGENERACY_ULPS * f64::EPSILON * scale;
        if beta.is_nan() || beta <= threshold {
            return Err(Error::Degenerate { degree: k + 1, beta, threshold });
        }
        basis.alpha.push(alpha);
        basis.beta.push(beta);
        basis.max_degree = k + 1;
    }

    basis.orthogonality_audit(plan)?;
    Ok(basis)
}

impl Serialize for OrthonormalBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("OrthonormalBasis", 8)?;
        st.serialize_field("family", self.weight.family())?;
        st.serialize_field("max_degree", &self.max_degree)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("norm0", &self.norm0)?;
        st.serialize_field("orthogonality_drift", &self.orthogonality_drift)?;
        st.serialize_field("drift_tol", &self.drift_tol)?;
        st.serialize_field("valid", &self.is_valid())?;
        st.end()
    }
}
