use num_complex::Complex64;

use super::local::{apply_one_site_left, Mat2, SIGMA_X, SIGMA_Y, SIGMA_Z};
use super::monodromy::{transfer_matrix, transfer_matrix_with_derivative};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

fn site_product(ops: &[(usize, &Mat2)], n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1 << n);
    for &(site, op) in ops {
        apply_one_site_left(&mut m, n, site, op);
    }
    m
}

fn scaled(m: &Mat2, s: Complex64) -> Mat2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

fn sum2(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

/// One-site boundary field `hx sx + hy sy + hz sz`.
fn field(hx: Complex64, hy: Complex64, hz: Complex64) -> Mat2 {
    sum2(&sum2(&scaled(&SIGMA_X, hx), &scaled(&SIGMA_Y, hy)), &scaled(&SIGMA_Z, hz))
}

/// Boundary fields `(h_1, h_N)` as `(x, y, z)` components.
pub fn boundary_fields(p: &ModelParams) -> ([Complex64; 3], [Complex64; 3]) {
    let i = Complex64::new(0.0, 1.0);
    let se = p.eta.sinh();
    let lm = se / (p.alpha_minus.sinh() * p.beta_minus.cosh());
    let lp = se / (p.alpha_plus.sinh() * p.beta_plus.cosh());
    let h1 = [
        lm * p.theta_minus.cosh(),
        lm * i * p.theta_minus.sinh(),
        lm * p.alpha_minus.cosh() * p.beta_minus.sinh(),
    ];
    let hn = [
        lp * p.theta_plus.cosh(),
        lp * i * p.theta_plus.sinh(),
        -lp * p.alpha_plus.cosh() * p.beta_plus.sinh(),
    ];
    (h1, hn)
}

/// Nearest-neighbour XXZ couplings plus the two boundary fields, assembled
/// from embedded Pauli matrices. The inhomogeneities play no role.
pub fn hamiltonian_direct(p: &ModelParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let n = p.n_sites;
    let dim = 1 << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    let one = Complex64::new(1.0, 0.0);
    for j in 0..n.saturating_sub(1) {
        h.add_scaled(one, &site_product(&[(j, &SIGMA_X), (j + 1, &SIGMA_X)], n));
        h.add_scaled(one, &site_product(&[(j, &SIGMA_Y), (j + 1, &SIGMA_Y)], n));
        h.add_scaled(p.eta.cosh(), &site_product(&[(j, &SIGMA_Z), (j + 1, &SIGMA_Z)], n));
    }
    let (h1, hn) = boundary_fields(p);
    h.add_scaled(one, &site_product(&[(0, &field(h1[0], h1[1], h1[2]))], n));
    h.add_scaled(one, &site_product(&[(n - 1, &field(hn[0], hn[1], hn[2]))], n));
    Ok(h)
}

fn check_homogeneous(p: &ModelParams) -> Result<()> {
    if !p.is_homogeneous() {
        return Err(Error::Precondition(
            "the Hamiltonian is the logarithmic derivative at zero inhomogeneities".into(),
        ));
    }
    Ok(())
}

fn from_derivative(p: &ModelParams, t0: &ComplexMatrix, dt0: &ComplexMatrix) -> Result<ComplexMatrix> {
    let scalar = t0[(0, 0)];
    if scalar.norm() < 1e-10 {
        return Err(Error::Singularity("t(0) normalization vanishes".into()));
    }
    let n = p.n_sites as f64;
    let shift = p.eta.cosh() * n + p.eta.tanh() * p.eta.sinh();
    let mut h = dt0.scale(p.eta.sinh() / scalar);
    for i in 0..h.rows() {
        h[(i, i)] -= shift;
    }
    Ok(h)
}

/// `H = sinh(eta) t'(0) t(0)^-1 - (N cosh eta + tanh eta sinh eta)`, with `t'(0)`
/// from the analytic product rule. `t(0)` is a multiple of the identity.
pub fn hamiltonian_from_transfer(p: &ModelParams) -> Result<ComplexMatrix> {
    check_homogeneous(p)?;
    let (t0, dt0) = transfer_matrix_with_derivative(Complex64::new(0.0, 0.0), p)?;
    from_derivative(p, &t0, &dt0)
}

/// Same as [`hamiltonian_from_transfer`] with a central difference of width
/// `2 step` in place of the analytic derivative.
pub fn hamiltonian_from_transfer_fd(p: &ModelParams, step: f64) -> Result<ComplexMatrix> {
    check_homogeneous(p)?;
    let h = Complex64::new(step, 0.0);
    let t0 = transfer_matrix(Complex64::new(0.0, 0.0), p)?;
    let dt0 = (&transfer_matrix(h, p)? - &transfer_matrix(-h, p)?).scale(Complex64::new(0.5 / step, 0.0));
    from_derivative(p, &t0, &dt0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DrawSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_sites_by_hand() {
        // fields along z only: cosh(theta) and sinh(theta) terms set to zero by hand
        let mut p = DrawSpec::new(2, 1).draw().unwrap().0;
        p.eta = c(0.6, 0.0);
        let mut h = hamiltonian_direct(&p).unwrap();
        let (h1, hn) = boundary_fields(&p);
        // strip the x, y boundary pieces
        let strip = site_product(&[(0, &field(h1[0], h1[1], c(0.0, 0.0)))], 2);
        h = &h - &strip;
        let strip = site_product(&[(1, &field(hn[0], hn[1], c(0.0, 0.0)))], 2);
        h = &h - &strip;
        let ch = p.eta.cosh();
        let (a, b) = (h1[2], hn[2]);
        let expect = ComplexMatrix::from_rows(&[
            [ch + a + b, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), -ch + a - b, c(2.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(2.0, 0.0), -ch - a + b, c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), ch - a - b],
        ]);
        assert!(h.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn hermitian_regime() {
        let mut p = DrawSpec::new(3, 2).draw().unwrap().0;
        p.eta = c(0.7, 0.0);
        p.beta_minus = c(0.0, 0.0);
        p.beta_plus = c(0.0, 0.0);
        p.theta_minus = c(0.0, 0.0);
        p.theta_plus = c(0.0, 0.0);
        p.alpha_minus = c(0.9, 0.0);
        p.alpha_plus = c(-0.4, 0.0);
        let h = hamiltonian_direct(&p).unwrap();
        assert!(h.max_abs_diff(&h.adjoint()) < 1e-14);
    }

    #[test]
    fn requires_homogeneous_point() {
        let p = DrawSpec::new(2, 3).draw().unwrap().0;
        assert!(matches!(hamiltonian_from_transfer(&p), Err(Error::Precondition(_))));
    }
}
