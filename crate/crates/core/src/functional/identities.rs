use num_complex::Complex64;

use super::tq::{a_func, asymptotic_leading, d_func, t_half_period_scalar, t_zero_scalar};
use crate::error::{Error, Result};
use crate::model::{k_plus_array, transfer_matrix_with, Mat2, ModelParams};
use crate::numerics::{lstsq, ComplexMatrix};
use crate::report::Report;

/// Largest chain length for which the operator-identity suite runs.
pub const IDENTITY_SUITE_MAX_SITES: usize = 4;

/// Generic spectral points at which the symmetry identities are probed.
pub const IDENTITY_PROBES: [Complex64; 3] = [
    Complex64::new(0.37, 0.21),
    Complex64::new(-0.52, 0.33),
    Complex64::new(0.18, -0.64),
];

/// Real part of the spectral parameter used for the asymptotic check.
pub const ASYMPTOTIC_PROBE: f64 = 20.0;

fn scalar_residual(m: &ComplexMatrix, value: Complex64) -> (f64, f64) {
    (m.distance_from_scalar(value), m.max_abs().max(value.norm()))
}

/// Evaluates the functional identities of the transfer matrix: the fusion
/// identity at each inhomogeneity, crossing, `i pi` periodicity, the values at
/// `0` and `i pi / 2`, and the leading asymptotics.
pub fn verify_operator_identities(p: &ModelParams) -> Result<Report> {
    verify_operator_identities_with(p, &|u| k_plus_array(u, p))
}

/// As [`verify_operator_identities`], with `K^+` supplied by the caller (used
/// for fault injection).
pub fn verify_operator_identities_with(p: &ModelParams, kplus: &dyn Fn(Complex64) -> Mat2) -> Result<Report> {
    p.validate()?;
    if p.n_sites > IDENTITY_SUITE_MAX_SITES {
        return Err(Error::Size(format!(
            "identity suite limited to N <= {IDENTITY_SUITE_MAX_SITES}"
        )));
    }
    let t = |u: Complex64| transfer_matrix_with(u, p, &kplus(u));
    let mut report = Report::new();
    let eta = p.eta;

    for (j, &th) in p.inhomogeneities.iter().enumerate() {
        let lhs = t(th)?.matmul(&t(th - eta)?);
        let rhs = a_func(th, p)? * d_func(th - eta, p)?;
        let (r, s) = scalar_residual(&lhs, rhs);
        report.add(
            format!("fusion[{}]", j + 1),
            "t(θ_j) t(θ_j − η) = a(θ_j) d(θ_j − η) · id",
            r,
            s,
        );
    }
    for (k, &u) in IDENTITY_PROBES.iter().enumerate() {
        let tu = t(u)?;
        let cross = t(-u - eta)?;
        report.add(
            format!("crossing[{k}]"),
            "t(−u − η) = t(u)",
            cross.max_abs_diff(&tu),
            tu.max_abs().max(cross.max_abs()),
        );
        let shifted = t(u + Complex64::new(0.0, std::f64::consts::PI))?;
        report.add(
            format!("periodicity[{k}]"),
            "t(u + iπ) = t(u)",
            shifted.max_abs_diff(&tu),
            tu.max_abs().max(shifted.max_abs()),
        );
    }
    let (r, s) = scalar_residual(&t(Complex64::new(0.0, 0.0))?, t_zero_scalar(p));
    report.add(
        "t(0)",
        "t(0) = −8 sinh α₋ cosh β₋ sinh α₊ cosh β₊ cosh η ∏ sinh(η − θ_l) sinh(η + θ_l)/sinh²η · id",
        r,
        s,
    );
    let half = Complex64::new(0.0, std::f64::consts::FRAC_PI_2);
    let (r, s) = scalar_residual(&t(half)?, t_half_period_scalar(p));
    report.add(
        "t(iπ/2)",
        "t(iπ/2) = −8 cosh α₋ sinh β₋ cosh α₊ sinh β₊ cosh η ∏ sinh(iπ/2 + θ_l + η) sinh(iπ/2 + θ_l − η)/sinh²η · id",
        r,
        s,
    );
    for (label, sign) in [("+", 1.0), ("-", -1.0)] {
        let u = Complex64::new(sign * ASYMPTOTIC_PROBE, 0.13);
        let lead = asymptotic_leading(u, p, sign);
        let (r, s) = scalar_residual(&t(u)?, lead);
        report.add(
            format!("asymptotics[{label}]"),
            "t(u) → −cosh(θ₋ − θ₊) e^{±[(2N+4)u + (N+2)η]} / (2^{2N+1} sinh^{2N} η) · id",
            r,
            s,
        );
    }
    Ok(report)
}

/// Fits `f` by `sum_{k=-(N+2)}^{N+2} c_k e^{2ku}` on `2N + 6` sample points and
/// returns the largest relative misfit at `fresh` points. A small value means
/// `f` is a trigonometric polynomial of degree `2N + 4` with period `i pi`.
pub fn trig_polynomial_misfit(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    n_sites: usize,
    fresh: &[Complex64],
) -> Result<f64> {
    let half = n_sites as i32 + 2;
    let n_basis = (2 * half + 1) as usize;
    let n_samples = 2 * n_sites + 6;
    // samples on the unit-height strip, moderately spread in Re u
    let samples: Vec<Complex64> = (0..n_samples)
        .map(|s| {
            let t = s as f64 / n_samples as f64;
            Complex64::new(0.35 * (t - 0.5), std::f64::consts::PI * t + 0.1)
        })
        .collect();
    let basis = |u: Complex64| -> Vec<Complex64> { (-half..=half).map(|k| (u * (2.0 * k as f64)).exp()).collect() };
    let mut a = ComplexMatrix::zeros(n_samples, n_basis);
    let mut b = Vec::with_capacity(n_samples);
    for (i, &u) in samples.iter().enumerate() {
        for (k, v) in basis(u).into_iter().enumerate() {
            a[(i, k)] = v;
        }
        b.push(f(u)?);
    }
    let coef = lstsq(&a, &b)?.x;
    let mut worst: f64 = 0.0;
    for &u in fresh {
        let direct = f(u)?;
        let fit: Complex64 = basis(u).iter().zip(&coef).map(|(x, c)| x * c).sum();
        let scale = direct
            .norm()
            .max(basis(u).iter().zip(&coef).map(|(x, c)| (x * c).norm()).fold(0.0, f64::max));
        worst = worst.max((direct - fit).norm() / scale);
    }
    Ok(worst)
}
