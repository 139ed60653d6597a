use num_complex::Complex64;
use xxz_core::bethe::{
    bethe_state_from_roots, eigen_residual, left_basis_state, left_vacuum, right_vacuum, scalar_product_check,
    subsets, StateVector,
};
use xxz_core::gauge::{gauged_double_row_left, gauged_double_row_right, select_gauge_left, select_gauge_right};
use xxz_core::model::DrawSpec;
use xxz_core::numerics::{determinant, vec_norm, ComplexMatrix};
use xxz_core::solver::{homogeneous_ladder, solve_all, spectrum_ed, LAMBDA_PROBES};
use xxz_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn swapping_roots_gives_a_collinear_state() {
    let (p, _) = DrawSpec::new(2, 901).draw().unwrap();
    let roots = [c(0.23, 0.31), c(-0.42, 0.17)];
    let a = bethe_state_from_roots(&roots, &p).unwrap();
    let b = bethe_state_from_roots(&[roots[1], roots[0]], &p).unwrap();
    assert!(a.collinearity_defect(&b) < 1e-9);
}

#[test]
fn single_site_bethe_state_is_an_eigenvector() {
    let (p, _) = DrawSpec::new(1, 902).draw().unwrap();
    let out = solve_all(&p).unwrap();
    for e in &out.entries {
        let tq = e.tq.as_ref().unwrap();
        let psi = bethe_state_from_roots(&tq.roots, &p).unwrap();
        let probes = [c(0.11, 0.52), c(-0.61, 0.07), c(0.33, -0.44), c(0.72, 0.29), c(-0.18, -0.66)];
        let r = eigen_residual(&psi, &|u| xxz_core::functional::lambda_tq(u, tq, &p), &p, &probes).unwrap();
        assert!(r < 1e-8, "{r:e}");
    }
}

#[test]
fn eigen_residual_separates_eigenvectors_from_noise() {
    let (p, _) = DrawSpec::new(2, 903).draw().unwrap();
    let e = &spectrum_ed(&p).unwrap()[0];
    let own = eigen_residual(&e.eigenvector, &|u| e.lambda(u, &p), &p, &LAMBDA_PROBES).unwrap();
    assert!(own < 1e-10);
    let noise = StateVector::new((0..4).map(|k| c(0.3 + 0.17 * k as f64, 0.5 - 0.41 * k as f64)).collect());
    let r = eigen_residual(&noise, &|u| e.lambda(u, &p), &p, &LAMBDA_PROBES).unwrap();
    assert!(r > 1e-3, "{r:e}");
}

#[test]
fn reference_state_is_annihilated_and_independent_of_split() {
    let (p, _) = DrawSpec::new(2, 904).draw().unwrap();
    let (sum, g) = select_gauge_right(&p).unwrap();
    let omega = right_vacuum(g.alpha, g.m, &p);
    for u in [c(0.19, 0.37), c(-0.44, 0.12)] {
        let ops = gauged_double_row_right(&g, u, &p).unwrap();
        let v = ops.block(1, 0).mul_vec(&omega.amplitudes);
        assert!(vec_norm(&v) < 1e-12 * ops.block(1, 0).max_abs() * omega.norm() * 4.0);
    }
    let d = c(0.3, -0.2);
    let other = right_vacuum(g.alpha + d, sum / p.eta - g.alpha - d, &p);
    assert!(omega.collinearity_defect(&other) < 1e-12);
}

#[test]
fn left_basis_has_full_rank_at_three_sites() {
    let (p, _) = DrawSpec::new(3, 905).draw().unwrap();
    let g = select_gauge_left(&p).unwrap();
    let rows: Vec<Vec<Complex64>> = subsets(3)
        .iter()
        .map(|s| {
            let v = left_basis_state(&g, s, &p).unwrap().amplitudes;
            let n = vec_norm(&v);
            v.into_iter().map(|z| z / n).collect()
        })
        .collect();
    let m = ComplexMatrix::from_vec(8, 8, rows.concat()).unwrap();
    assert!(determinant(&m).unwrap().norm() > 1e-8);
}

#[test]
fn basis_covector_survives_creation_at_its_own_point() {
    // C̄_m(−θ_j) annihilates <α,m;S| only for j outside S.
    let (p, _) = DrawSpec::new(2, 906).draw().unwrap();
    let g = select_gauge_left(&p).unwrap();
    let th = p.inhomogeneities[0];
    let op = gauged_double_row_left(&g, -th, &p).unwrap();
    let inside = left_basis_state(&g, &[1], &p).unwrap();
    let (v, scale) = inside.apply_scaled(op.block(1, 0));
    assert!(v.max_abs() > 1e-6 * scale);
    let outside = left_basis_state(&g, &[2], &p).unwrap();
    let (w, scale) = outside.apply_scaled(op.block(1, 0));
    assert!(w.max_abs() < 1e-12 * scale);
}

#[test]
fn scalar_products_detect_a_wrong_eigenvalue() {
    let (p, _) = DrawSpec::new(2, 907).draw().unwrap();
    let spec = spectrum_ed(&p).unwrap();
    let e = &spec[1];
    let good = scalar_product_check(&e.eigenvector, &|u| e.lambda(u, &p), &p).unwrap();
    assert_eq!(good.len(), 4 + 4);
    assert!(good.max_relative() < 1e-8);
    let other = &spec[2];
    let bad = scalar_product_check(&e.eigenvector, &|u| other.lambda(u, &p), &p).unwrap();
    assert!(bad.max_relative() > 1e-3);
}

#[test]
fn orthogonal_state_has_uninformative_overlap() {
    let (p, _) = DrawSpec::new(1, 908).draw().unwrap();
    let g = select_gauge_left(&p).unwrap();
    let vac = left_vacuum(g.alpha, g.m, &p).unwrap().amplitudes;
    let psi = StateVector::new(vec![vac[1], -vac[0]]);
    let err = scalar_product_check(&psi, &|_| Ok(c(1.0, 0.0)), &p).unwrap_err();
    assert!(matches!(err, Error::UninformativeOverlap(_)));
}

#[test]
fn homogeneous_ladder_is_cauchy() {
    let (p, _) = DrawSpec::new(2, 909).draw().unwrap();
    let l = homogeneous_ladder(&p).unwrap();
    assert_eq!(l.rungs.len(), 4);
    assert!(l.is_cauchy());
    assert!(l.last_step_defect() < 1e-9);
}
