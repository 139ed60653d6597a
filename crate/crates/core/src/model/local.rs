//! Local building blocks: R-matrix, reflection matrices, Pauli matrices and
//! their embeddings into tensor products of two-dimensional spaces.

use num_complex::Complex64;

use super::params::{ModelParams, ETA_GUARD};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub const SIGMA_X: [[Complex64; 2]; 2] = [[ZERO, ONE], [ONE, ZERO]];
pub const SIGMA_Y: [[Complex64; 2]; 2] = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub const SIGMA_Z: [[Complex64; 2]; 2] = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

pub fn mat2(m: &Mat2) -> ComplexMatrix {
    ComplexMatrix::from_rows(m)
}

pub fn mat4(m: &Mat4) -> ComplexMatrix {
    ComplexMatrix::from_rows(m)
}

fn r_from(a: Complex64, b: Complex64, c: Complex64) -> Mat4 {
    [
        [a, ZERO, ZERO, ZERO],
        [ZERO, b, c, ZERO],
        [ZERO, c, b, ZERO],
        [ZERO, ZERO, ZERO, a],
    ]
}

/// `R(u)` as a fixed-size array; `eta` is assumed admissible.
pub(crate) fn r_array(u: Complex64, eta: Complex64) -> Mat4 {
    let s = eta.sinh();
    r_from((u + eta).sinh() / s, u.sinh() / s, ONE)
}

pub(crate) fn r_derivative_array(u: Complex64, eta: Complex64) -> Mat4 {
    let s = eta.sinh();
    r_from((u + eta).cosh() / s, u.cosh() / s, ZERO)
}

fn check_eta(eta: Complex64) -> Result<()> {
    if eta.sinh().norm() <= ETA_GUARD {
        return Err(Error::Singularity("sinh(eta) vanishes".into()));
    }
    Ok(())
}

/// The six-vertex R-matrix in the basis `|00>, |01>, |10>, |11>`.
pub fn r_matrix(u: Complex64, eta: Complex64) -> Result<ComplexMatrix> {
    check_eta(eta)?;
    Ok(mat4(&r_array(u, eta)))
}

pub fn r_matrix_derivative(u: Complex64, eta: Complex64) -> Result<ComplexMatrix> {
    check_eta(eta)?;
    Ok(mat4(&r_derivative_array(u, eta)))
}

/// `K^-(u)` for an explicit boundary triple.
pub fn k_matrix(u: Complex64, alpha: Complex64, beta: Complex64, theta: Complex64) -> Mat2 {
    let p = alpha.sinh() * beta.cosh() * u.cosh();
    let q = alpha.cosh() * beta.sinh() * u.sinh();
    let s2 = (u * 2.0).sinh();
    [
        [(p + q) * 2.0, theta.exp() * s2],
        [(-theta).exp() * s2, (p - q) * 2.0],
    ]
}

pub fn k_matrix_derivative(u: Complex64, alpha: Complex64, beta: Complex64, theta: Complex64) -> Mat2 {
    let p = alpha.sinh() * beta.cosh() * u.sinh();
    let q = alpha.cosh() * beta.sinh() * u.cosh();
    let c2 = (u * 2.0).cosh() * 2.0;
    [
        [(p + q) * 2.0, theta.exp() * c2],
        [(-theta).exp() * c2, (p - q) * 2.0],
    ]
}

pub fn k_minus_array(u: Complex64, p: &ModelParams) -> Mat2 {
    k_matrix(u, p.alpha_minus, p.beta_minus, p.theta_minus)
}

pub fn k_plus_array(u: Complex64, p: &ModelParams) -> Mat2 {
    let (a, b, t) = p.plus_as_minus();
    k_matrix(-u - p.eta, a, b, t)
}

pub fn k_minus_derivative_array(u: Complex64, p: &ModelParams) -> Mat2 {
    k_matrix_derivative(u, p.alpha_minus, p.beta_minus, p.theta_minus)
}

pub fn k_plus_derivative_array(u: Complex64, p: &ModelParams) -> Mat2 {
    let (a, b, t) = p.plus_as_minus();
    let d = k_matrix_derivative(-u - p.eta, a, b, t);
    [[-d[0][0], -d[0][1]], [-d[1][0], -d[1][1]]]
}

pub fn k_minus(u: Complex64, p: &ModelParams) -> ComplexMatrix {
    mat2(&k_minus_array(u, p))
}

pub fn k_plus(u: Complex64, p: &ModelParams) -> ComplexMatrix {
    mat2(&k_plus_array(u, p))
}

/// Bit mask of tensor factor `space` among `n_spaces`; factor 0 is the most
/// significant bit.
#[inline]
pub(crate) fn space_bit(space: usize, n_spaces: usize) -> usize {
    1 << (n_spaces - 1 - space)
}

/// `m <- O_{ab} m` where `O` acts on factors `a` (first index) and `b` of a
/// `2^n_spaces` dimensional product space.
pub(crate) fn apply_two_site_left(m: &mut ComplexMatrix, n_spaces: usize, a: usize, b: usize, op: &Mat4) {
    debug_assert_ne!(a, b);
    let ba = space_bit(a, n_spaces);
    let bb = space_bit(b, n_spaces);
    let dim = 1usize << n_spaces;
    let cols = m.cols();
    let mut old = [ZERO; 4];
    for base in 0..dim {
        if base & (ba | bb) != 0 {
            continue;
        }
        let idx = [base, base | bb, base | ba, base | ba | bb];
        for col in 0..cols {
            for k in 0..4 {
                old[k] = m[(idx[k], col)];
            }
            for i in 0..4 {
                let mut s = ZERO;
                for k in 0..4 {
                    s += op[i][k] * old[k];
                }
                m[(idx[i], col)] = s;
            }
        }
    }
}

/// `m <- O_a m` for a one-site operator.
pub(crate) fn apply_one_site_left(m: &mut ComplexMatrix, n_spaces: usize, a: usize, op: &Mat2) {
    let ba = space_bit(a, n_spaces);
    let dim = 1usize << n_spaces;
    let cols = m.cols();
    for base in 0..dim {
        if base & ba != 0 {
            continue;
        }
        for col in 0..cols {
            let x0 = m[(base, col)];
            let x1 = m[(base | ba, col)];
            m[(base, col)] = op[0][0] * x0 + op[0][1] * x1;
            m[(base | ba, col)] = op[1][0] * x0 + op[1][1] * x1;
        }
    }
}

/// Dense embedding of a two-site operator acting on factors `a`, `b`.
pub fn embed_two_site(op: &Mat4, a: usize, b: usize, n_spaces: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1 << n_spaces);
    apply_two_site_left(&mut m, n_spaces, a, b, op);
    m
}

pub fn embed_one_site(op: &Mat2, a: usize, n_spaces: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1 << n_spaces);
    apply_one_site_left(&mut m, n_spaces, a, op);
    m
}
