use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use xxz_core::functional::{a_func, abar_func, c_const, d_func, lambda_tq, q_func, q_func_x};
use xxz_core::model::DrawSpec;
use xxz_core::solver::{canonicalize_roots, fit_q_from_lambda, newton_refine, roundtrip_points, solve_all, spectrum_ed};
use xxz_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn root() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, -3.0f64..3.0).prop_map(|(r, i)| c(r, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_ignores_orbit_representative(
        roots in prop::collection::vec(root(), 1..5),
        flips in prop::collection::vec(any::<bool>(), 5),
        shifts in prop::collection::vec(-2i32..3, 5),
        er in 0.2f64..1.0, ei in -0.4f64..0.4,
    ) {
        let eta = c(er, ei);
        let moved: Vec<Complex64> = roots
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let l = if flips[i] { -l - eta } else { l };
                l + c(0.0, PI * f64::from(shifts[i]))
            })
            .collect();
        let a = canonicalize_roots(&roots, eta);
        let b = canonicalize_roots(&moved, eta);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-9);
        }
        let again = canonicalize_roots(&a, eta);
        for (x, y) in a.iter().zip(&again) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        for x in &a {
            prop_assert!(x.im > -PI / 2.0 - 1e-12 && x.im <= PI / 2.0 + 1e-12);
            prop_assert!((*x * 2.0 + eta).re >= -1e-12);
        }
    }

    #[test]
    fn q_is_invariant_under_canonicalization(
        roots in prop::collection::vec(root(), 1..5),
        ur in -0.7f64..0.7, ui in -0.7f64..0.7,
    ) {
        let eta = c(0.45, 0.2);
        let u = c(ur, ui);
        let q0 = q_func(u, &roots, eta);
        let q1 = q_func(u, &canonicalize_roots(&roots, eta), eta);
        prop_assert!((q0 - q1).norm() <= 1e-12 * q0.norm());
        let qx = q_func_x(u, &roots, eta);
        prop_assert!((q0 - qx).norm() <= 1e-10 * q0.norm().max(qx.norm()));
    }
}

#[test]
fn fitted_relation_reproduces_lambda() {
    let (p, _) = DrawSpec::new(2, 801).draw().unwrap();
    for e in spectrum_ed(&p).unwrap() {
        let tq = fit_q_from_lambda(&e, &p).unwrap();
        assert!(tq.max_bae_residual() < 1e-8);
        for &u in roundtrip_points().iter().take(10) {
            let exact = e.lambda(u, &p).unwrap();
            let fitted = lambda_tq(u, &tq, &p).unwrap();
            assert!((exact - fitted).norm() < 1e-7 * exact.norm());
        }
    }
}

#[test]
fn wrong_roots_violate_the_relation() {
    let (p, _) = DrawSpec::new(2, 802).draw().unwrap();
    let spec = spectrum_ed(&p).unwrap();
    let other = fit_q_from_lambda(&spec[1], &p).unwrap();
    let (cc, eta) = (c_const(&p), p.eta);
    let mut worst: f64 = 0.0;
    for &u in &roundtrip_points()[..5] {
        let lam = spec[0].lambda(u, &p).unwrap();
        let terms = [
            lam * q_func(u, &other.roots, eta),
            -a_func(u, &p).unwrap() * q_func(u - eta, &other.roots, eta),
            -d_func(u, &p).unwrap() * q_func(u + eta, &other.roots, eta),
            -cc * 2.0 * (u * 2.0).sinh() * (u * 2.0 + eta * 2.0).sinh() * abar_func(u, &p) * abar_func(-u - eta, &p),
        ];
        let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sum: Complex64 = terms.iter().sum();
        worst = worst.max(sum.norm() / scale);
    }
    assert!(worst > 1e-3, "{worst:e}");
}

#[test]
fn newton_leaves_converged_roots_alone() {
    let (p, _) = DrawSpec::new(2, 803).draw().unwrap();
    let e = &spectrum_ed(&p).unwrap()[2];
    let tq = fit_q_from_lambda(e, &p).unwrap();
    assert_eq!(newton_refine(&tq.roots, &p).unwrap(), tq.roots);
    let far: Vec<Complex64> = tq.roots.iter().map(|r| r + c(0.4, 0.3)).collect();
    assert!(newton_refine(&far, &p).is_err());
}

#[test]
fn three_site_spectrum_is_complete() {
    let (p, _) = DrawSpec::new(3, 804).draw().unwrap();
    let out = solve_all(&p).unwrap();
    assert_eq!(out.solutions().len(), 8);
    assert!(out.is_complete());
    assert!(out.bijection.min_multiset_distance > 1e-6);
    assert!(out.max_roundtrip() < 1e-7);
}

#[test]
fn spectrum_traces_the_transfer_matrix() {
    let (p, _) = DrawSpec::new(3, 805).draw().unwrap();
    let spec = spectrum_ed(&p).unwrap();
    for &u in &roundtrip_points()[..5] {
        let t = xxz_core::model::transfer_matrix(u, &p).unwrap();
        let sum: Complex64 = spec.iter().map(|e| e.lambda_from_transfer(&t)).sum();
        assert!((sum - t.trace()).norm() < 1e-9 * t.max_abs() * 8.0);
    }
    for e in &spec {
        assert!(e.eigen_residual < 1e-10);
        let v = &e.eigenvector.amplitudes;
        let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(v[e.anchor_index].norm() >= 0.5 * big);
    }
}

#[test]
fn degenerate_boundary_constant_is_refused() {
    let (mut p, _) = DrawSpec::new(2, 806).draw().unwrap();
    let n = p.n_sites as f64;
    let s = p.alpha_minus + p.beta_minus + p.alpha_plus + p.beta_plus + p.eta * (1.0 + n);
    p.theta_plus = p.theta_minus - s;
    assert!(c_const(&p).norm() < 1e-10);
    assert!(matches!(solve_all(&p), Err(Error::DegenerateCase(_))));
}

#[test]
fn oversized_chain_is_refused() {
    let (p, _) = DrawSpec::new(9, 807).draw().unwrap();
    assert!(matches!(spectrum_ed(&p), Err(Error::Size(_))));
    let (p, _) = DrawSpec::new(5, 808).draw().unwrap();
    assert!(matches!(solve_all(&p), Err(Error::Size(_))));
}
