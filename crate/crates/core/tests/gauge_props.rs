use num_complex::Complex64;
use proptest::prelude::*;
use xxz_core::gauge::{
    enumerate_gauge_branches, gauge_matrix, gauge_vector, verify_intertwining_with, GaugeKind, GaugeMatrixKind, Vec2,
};
use xxz_core::model::DrawSpec;
use xxz_core::numerics::ComplexMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn raw(kind: GaugeKind, m: Complex64, u: Complex64, a: Complex64, eta: Complex64) -> Vec2 {
    gauge_vector(kind, m, u, a, eta).unwrap()
}

fn generic_m(m: Complex64, eta: Complex64) -> bool {
    (-3..=3).all(|k| ((m + f64::from(k)) * eta).sinh().norm() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_matrices_are_inverted_by_their_rows(
        mr in 0.1f64..1.2, mi in -0.5f64..0.5,
        ur in -0.8f64..0.8, ui in -0.8f64..0.8,
        ar in -0.5f64..0.5, ai in -0.5f64..0.5,
        er in 0.3f64..0.9, ei in -0.3f64..0.3,
    ) {
        let (m, u, a, eta) = (c(mr, mi), c(ur, ui), c(ar, ai), c(er, ei));
        prop_assume!(generic_m(m, eta));
        for kind in [GaugeMatrixKind::Mbar, GaugeMatrixKind::Mtilde, GaugeMatrixKind::Mhat] {
            let g = gauge_matrix(kind, m, u, a, eta).unwrap();
            let prod = g.inverse.matmul(&g.matrix);
            let scale = g.inverse.max_abs() * g.matrix.max_abs();
            prop_assert!(prod.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn rescaled_vectors_match_their_definitions(
        mr in 0.1f64..1.2, mi in -0.5f64..0.5,
        ur in -0.8f64..0.8, ui in -0.8f64..0.8,
        er in 0.3f64..0.9, ei in -0.3f64..0.3,
    ) {
        let (m, u, a, eta) = (c(mr, mi), c(ur, ui), c(0.2, -0.1), c(er, ei));
        prop_assume!(generic_m(m, eta));
        let s = |k: f64| ((m + k) * eta).sinh();
        let xt = raw(GaugeKind::Xtilde, m, u, a, eta);
        let xb = raw(GaugeKind::Xbar, m, u, a, eta);
        let f = eta.exp() * s(0.0) / s(-1.0);
        let yh = raw(GaugeKind::Yhat, m, u, a, eta);
        let y = raw(GaugeKind::Y, m, u, a, eta);
        let h = (-eta).exp() * s(-2.0) / s(-1.0);
        for i in 0..2 {
            prop_assert!((xt[i] - f * xb[i]).norm() < 1e-12 * (f * xb[i]).norm().max(1.0));
            prop_assert!((yh[i] - h * y[i]).norm() < 1e-12 * (h * y[i]).norm().max(1.0));
        }
    }
}

#[test]
fn corrupted_gauge_vector_breaks_intertwining() {
    let eta = c(0.55, 0.12);
    let clean = verify_intertwining_with(eta, 9, 20, &|k, m, u, a, e| raw(k, m, u, a, e));
    assert!(clean.max_relative() < 1e-12);
    let corrupt = |k: GaugeKind, m: Complex64, u: Complex64, a: Complex64, e: Complex64| {
        let mut v = raw(k, m, u, a, e);
        if k == GaugeKind::X {
            v[0] *= 1.0 + 1e-6;
        }
        v
    };
    let broken = verify_intertwining_with(eta, 9, 20, &corrupt);
    assert!(broken.max_relative() > 1e-8, "{:e}", broken.max_relative());
}

#[test]
fn gauge_singularity_is_reported() {
    let eta = c(0.4, 0.0);
    let err = gauge_vector(GaugeKind::Xtilde, c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), eta).unwrap_err();
    assert!(err.to_string().contains("sinh"), "{err}");
}

#[test]
fn every_branch_solves_the_gauge_conditions() {
    for seed in 0..5 {
        let (p, _) = DrawSpec::new(3, 700 + seed).draw().unwrap();
        for b in enumerate_gauge_branches(&p) {
            let scale = (p.alpha_plus + p.beta_plus).sinh().norm().max(1.0);
            for r in b.left_condition_residuals(&p) {
                assert!(r < 1e-12 * scale);
            }
            assert!(b.right_condition_residual(&p) < 1e-12 * scale);
        }
    }
}
