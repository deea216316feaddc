//! Randomized invariants across the pipeline.

use std::sync::Arc;

use proptest::prelude::*;

use polydense::conditions::{certify, polynomial_tail_check, tail_decay_check};
use polydense::laplace::{check_weighted_monomial, laplace_transform, moment};
use polydense::orthopoly::build_basis;
use polydense::projection::project;
use polydense::quadrature::integrate;
use polydense::{Interval, QuadraturePlan, WeightDensity};

fn plan() -> QuadraturePlan {
    QuadraturePlan::default()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn symmetric_weight() -> impl Strategy<Value = WeightDensity> {
    prop_oneof![
        (0.3..3.0f64).prop_map(|s| WeightDensity::gaussian(0.0, s).unwrap()),
        (0.3..3.0f64).prop_map(|b| WeightDensity::double_exponential(b).unwrap()),
        (0.5..4.0f64).prop_map(|c| WeightDensity::uniform(-c, c).unwrap()),
    ]
}

fn light_tailed_weight() -> impl Strategy<Value = WeightDensity> {
    prop_oneof![
        (-2.0..2.0f64, 0.3..2.0f64).prop_map(|(m, s)| WeightDensity::gaussian(m, s).unwrap()),
        (0.5..2.0f64).prop_map(|b| WeightDensity::double_exponential(b).unwrap()),
        (-3.0..0.0f64, 0.5..3.0f64).prop_map(|(lo, w)| WeightDensity::uniform(lo, lo + w).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn quadrature_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, w in 0.2..3.0f64, d in light_tailed_weight()) {
        let f = |x: f64| (w * x).sin() + 1.0;
        let g = |x: f64| x * x;
        let lhs = d.integrate(|x| a * f(x) + b * g(x), &plan()).unwrap().value;
        let rf = d.integrate(f, &plan()).unwrap().value;
        let rg = d.integrate(g, &plan()).unwrap().value;
        prop_assert!(close(lhs, a * rf + b * rg, 1e-9), "{lhs} vs {}", a * rf + b * rg);
    }

    #[test]
    fn quadrature_is_additive(lo in -5.0..0.0f64, mid in 0.0..1.0f64, hi in 1.0..6.0f64, w in 0.5..4.0f64) {
        let f = |x: f64| (w * x).cos() * (-0.1 * x * x).exp();
        let whole = integrate(f, &Interval::new(lo, hi).unwrap(), &plan()).unwrap().value;
        let left = integrate(f, &Interval::new(lo, mid).unwrap(), &plan()).unwrap().value;
        let right = integrate(f, &Interval::new(mid, hi).unwrap(), &plan()).unwrap().value;
        prop_assert!(close(whole, left + right, 1e-9));
    }

    #[test]
    fn laplace_even_for_symmetric_weights(d in symmetric_weight(), t in 0.0..1.0f64) {
        // Stay inside the finiteness region of every generated weight.
        let s = 0.3 * t;
        let plus = laplace_transform(&d, s, &plan()).unwrap();
        let minus = laplace_transform(&d, -s, &plan()).unwrap();
        prop_assert!(plus.is_converged() && minus.is_converged());
        prop_assert!(close(plus.value, minus.value, 1e-9));
    }

    #[test]
    fn laplace_is_convex(d in light_tailed_weight(), s1 in -0.4..0.4f64, s2 in -0.4..0.4f64) {
        let m = |s: f64| laplace_transform(&d, s, &plan()).unwrap().value;
        let mid = m(0.5 * (s1 + s2));
        prop_assert!(mid <= 0.5 * (m(s1) + m(s2)) * (1.0 + 1e-9));
    }

    #[test]
    fn moments_finite_when_transform_finite(d in light_tailed_weight()) {
        for k in 0..=20u32 {
            let out = moment(&d, k, &plan()).unwrap();
            prop_assert!(out.is_converged(), "k = {k}: {:?}", out.verdict);
        }
    }

    #[test]
    fn weighted_monomials_finite_inside_half_delta(b in 0.5..2.0f64, n in 0u32..=10) {
        let d = WeightDensity::double_exponential(b).unwrap();
        let c = check_weighted_monomial(&d, n, 1.0 / b, 0.05, &plan()).unwrap();
        prop_assert!(c.passed, "{:?}", c.failure);
    }

    #[test]
    fn symmetric_weights_have_zero_alpha(d in symmetric_weight()) {
        let b = build_basis(Arc::new(d), 12, &plan()).unwrap();
        for (k, a) in b.alpha().iter().enumerate() {
            prop_assert!(a.abs() <= 1e-8 * (1.0 + b.beta()[k]), "alpha_{k} = {a}");
        }
        for k in 0..=12 {
            let lc = b.leading_coefficient(k).unwrap();
            prop_assert!(lc > 0.0 && lc.is_finite());
        }
    }

    #[test]
    fn bessel_and_monotone_residuals(w in 0.2..3.0f64, c in -2.0..2.0f64, d in light_tailed_weight()) {
        let b = build_basis(Arc::new(d), 10, &plan()).unwrap();
        let p = project(|x| (w * x).sin() + c * (-x * x).exp(), &b, &plan()).unwrap();
        let slack = 10.0 * p.tolerance;
        let mut captured = 0.0;
        for (n, r) in p.residuals.iter().enumerate() {
            captured += p.coefficients[n].powi(2);
            prop_assert!(captured <= p.f_norm_sq + slack);
            prop_assert!(*r >= 0.0 && *r <= p.f_norm_sq + slack);
            if n > 0 {
                prop_assert!(*r <= p.residuals[n - 1] + slack);
            }
        }
    }

    #[test]
    fn polynomials_are_reproduced(coeffs in prop::collection::vec(-2.0..2.0f64, 1..=7), d in light_tailed_weight()) {
        let m = coeffs.len() - 1;
        let b = build_basis(Arc::new(d), 8, &plan()).unwrap();
        let f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let p = project(f, &b, &plan()).unwrap();
        prop_assert!(p.residuals[m] <= 1e-8 * p.f_norm_sq, "r_{m} = {}", p.residuals[m]);
    }

    #[test]
    fn projection_is_idempotent(w in 0.2..2.0f64, d in light_tailed_weight()) {
        let b = build_basis(Arc::new(d), 8, &plan()).unwrap();
        let p = project(|x| (w * x).cos() + x, &b, &plan()).unwrap();
        let q = project(|x| p.partial_sum(&b, 8, x).unwrap(), &b, &plan()).unwrap();
        for (a, c) in p.coefficients.iter().zip(&q.coefficients) {
            prop_assert!((a - c).abs() <= 1e-8, "{a} vs {c}");
        }
    }

    #[test]
    fn basis_members_project_to_unit_vectors(d in light_tailed_weight(), k in 0usize..=8) {
        let b = build_basis(Arc::new(d), 8, &plan()).unwrap();
        let p = project(|x| b.eval(k, x).unwrap(), &b, &plan()).unwrap();
        for (j, c) in p.coefficients.iter().enumerate() {
            let want = if j == k { 1.0 } else { 0.0 };
            prop_assert!((c - want).abs() <= 1e-8, "c_{j} = {c}");
        }
    }

    #[test]
    fn tail_decay_implies_finite_transform(b in 0.4..2.5f64, delta in 0.1..3.0f64) {
        let d = WeightDensity::double_exponential(b).unwrap();
        let tail = tail_decay_check(&d, delta, 8.0, 48).unwrap();
        prop_assert_eq!(tail.passed, delta < 1.0 / b);
        if tail.passed {
            let edge = delta - 0.05;
            if edge > 0.0 {
                for s in [-edge, -0.5 * edge, 0.5 * edge, edge] {
                    prop_assert!(laplace_transform(&d, s, &plan()).unwrap().is_converged());
                }
            }
            prop_assert!(polynomial_tail_check(&d, 8, 8.0, 48).unwrap().passed);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn certify_is_deterministic(m in -1.0..1.0f64, s in 0.5..2.0f64) {
        let d = WeightDensity::gaussian(m, s).unwrap();
        let a = serde_json::to_string(&certify(&d, &plan(), None).unwrap()).unwrap();
        let b = serde_json::to_string(&certify(&d, &plan(), None).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
