//! Residual decay on the smooth test set, and its failure for the lognormal
//! annihilator.

use std::sync::Arc;

use polydense::laplace::estimate_delta;
use polydense::orthopoly::build_basis;
use polydense::projection::{completeness_curve, counterexample_audit, project, TestFunction};
use polydense::{QuadraturePlan, WeightDensity};

const SMOOTH: [TestFunction; 4] =
    [TestFunction::Sin, TestFunction::Cos, TestFunction::GaussBump, TestFunction::CauchyBump];

fn plan() -> QuadraturePlan {
    QuadraturePlan::default()
}

#[test]
fn smooth_set_converges_fast_for_gaussian_and_uniform() {
    for d in [WeightDensity::gaussian(0.0, 1.0).unwrap(), WeightDensity::uniform(-1.0, 1.0).unwrap()] {
        assert!(estimate_delta(&d, 4.0, 0.05, &plan()).unwrap().delta_hat.is_positive());
        let b = build_basis(Arc::new(d.clone()), 30, &plan()).unwrap();
        assert!(b.is_valid());
        for f in SMOOTH {
            let p = project(|x| f.eval(x), &b, &plan()).unwrap();
            assert!(p.relative_residual <= 1e-4, "{} / {}: {}", d.label(), f.name(), p.relative_residual);
        }
    }
}

#[test]
fn double_exponential_converges_but_slowly() {
    // Residuals decay with N yet stay above 1e-4 at N = 30; the reference
    // values are pinned in the oracle tests.
    let d = WeightDensity::double_exponential(1.0).unwrap();
    let b = build_basis(Arc::new(d), 30, &plan()).unwrap();
    for f in SMOOTH {
        let p = project(|x| f.eval(x), &b, &plan()).unwrap();
        let rel = p.relative_residuals();
        assert!(rel[30] < rel[20] && rel[20] < rel[10], "{}", f.name());
        assert!(rel[30] > 1e-4, "{}", f.name());
    }
}

#[test]
fn abs_converges_slowly_everywhere() {
    let b = build_basis(Arc::new(WeightDensity::gaussian(0.0, 1.0).unwrap()), 30, &plan()).unwrap();
    let p = project(f64::abs, &b, &plan()).unwrap();
    let rel = p.relative_residuals();
    assert!(rel[30] < rel[10]);
    assert!(rel[30] > 1e-5);
}

#[test]
fn sin_curve_on_gaussian() {
    let curve = completeness_curve(f64::sin, &WeightDensity::gaussian(0.0, 1.0).unwrap(), 15, &plan()).unwrap();
    assert!(curve.windows(2).all(|w| w[1].1 <= w[0].1));
    assert!(curve[15].1 / curve[0].1 <= 1e-6);
}

#[test]
fn annihilator_curve_stays_flat() {
    let d = WeightDensity::lognormal(0.0, 1.0).unwrap();
    let curve = completeness_curve(|x| TestFunction::LognormalAnnihilator.eval(x), &d, 10, &plan()).unwrap();
    let r0 = curve[0].1;
    assert!(curve.iter().all(|(_, r)| r / r0 >= 0.999));
}

#[test]
fn shifted_lognormal_has_its_own_annihilator() {
    let d = WeightDensity::lognormal(0.5, 0.8).unwrap();
    let b = build_basis(Arc::new(d), 8, &plan()).unwrap();
    let audit = counterexample_audit(&b, &plan()).unwrap();
    assert!(audit.non_density, "{:?}", audit.projection.coefficients);
}
