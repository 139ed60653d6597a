//! Residuals of the Yang-Baxter and reflection equations.

use num_complex::Complex64;

use super::local::{embed_one_site, embed_two_site, k_minus_array, k_plus_array, r_array};
use super::monodromy::{double_row_monodromy, AuxMonodromy};
use super::params::ModelParams;
use crate::numerics::ComplexMatrix;

/// `(||LHS - RHS||_max, max(||LHS||_max, ||RHS||_max))`.
fn compare(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> (f64, f64) {
    (lhs.max_abs_diff(rhs), lhs.max_abs().max(rhs.max_abs()))
}

/// `R12(u1-u2) R13(u1-u3) R23(u2-u3) = R23(u2-u3) R13(u1-u3) R12(u1-u2)`.
pub fn qybe_residual(u1: Complex64, u2: Complex64, u3: Complex64, eta: Complex64) -> (f64, f64) {
    let r12 = embed_two_site(&r_array(u1 - u2, eta), 0, 1, 3);
    let r13 = embed_two_site(&r_array(u1 - u3, eta), 0, 2, 3);
    let r23 = embed_two_site(&r_array(u2 - u3, eta), 1, 2, 3);
    compare(&r12.matmul(&r13).matmul(&r23), &r23.matmul(&r13).matmul(&r12))
}

/// `R12(u1-u2) K1(u1) R21(u1+u2) K2(u2) = K2(u2) R12(u1+u2) K1(u1) R21(u1-u2)`
/// for `K = K^-`.
pub fn reflection_residual(u1: Complex64, u2: Complex64, p: &ModelParams) -> (f64, f64) {
    let eta = p.eta;
    let r12 = |u| embed_two_site(&r_array(u, eta), 0, 1, 2);
    let r21 = |u| embed_two_site(&r_array(u, eta), 1, 0, 2);
    let k1 = embed_one_site(&k_minus_array(u1, p), 0, 2);
    let k2 = embed_one_site(&k_minus_array(u2, p), 1, 2);
    let lhs = r12(u1 - u2).matmul(&k1).matmul(&r21(u1 + u2)).matmul(&k2);
    let rhs = k2.matmul(&r12(u1 + u2)).matmul(&k1).matmul(&r21(u1 - u2));
    compare(&lhs, &rhs)
}

/// Dual reflection equation for `K^+`:
/// `R12(u2-u1) K1(u1) R21(-u1-u2-2eta) K2(u2) = K2(u2) R12(-u1-u2-2eta) K1(u1) R21(u2-u1)`.
pub fn dual_reflection_residual(u1: Complex64, u2: Complex64, p: &ModelParams) -> (f64, f64) {
    let eta = p.eta;
    let r12 = |u| embed_two_site(&r_array(u, eta), 0, 1, 2);
    let r21 = |u| embed_two_site(&r_array(u, eta), 1, 0, 2);
    let k1 = embed_one_site(&k_plus_array(u1, p), 0, 2);
    let k2 = embed_one_site(&k_plus_array(u2, p), 1, 2);
    let s = -u1 - u2 - eta * 2.0;
    let lhs = r12(u2 - u1).matmul(&k1).matmul(&r21(s)).matmul(&k2);
    let rhs = k2.matmul(&r12(s)).matmul(&k1).matmul(&r21(u2 - u1));
    compare(&lhs, &rhs)
}

/// Embeds an auxiliary monodromy into aux space `slot` (0 or 1) of two aux
/// spaces followed by the quantum space.
fn embed_aux(m: &AuxMonodromy, slot: usize) -> ComplexMatrix {
    let d = m.dim();
    let mut out = ComplexMatrix::zeros(4 * d, 4 * d);
    for a in 0..2 {
        for b in 0..2 {
            for other in 0..2 {
                let (row_hi, col_hi) = if slot == 0 {
                    (a * 2 + other, b * 2 + other)
                } else {
                    (other * 2 + a, other * 2 + b)
                };
                let blk = m.block(a, b);
                for i in 0..d {
                    for j in 0..d {
                        out[(row_hi * d + i, col_hi * d + j)] = blk[(i, j)];
                    }
                }
            }
        }
    }
    out
}

/// `R12(u1-u2) U1(u1) R21(u1+u2) U2(u2) = U2(u2) R12(u1+u2) U1(u1) R21(u1-u2)`
/// for the double-row monodromy.
pub fn double_row_reflection_residual(u1: Complex64, u2: Complex64, p: &ModelParams) -> crate::error::Result<(f64, f64)> {
    let eta = p.eta;
    let n = p.n_sites + 2;
    let r12 = |u| embed_two_site(&r_array(u, eta), 0, 1, n);
    let r21 = |u| embed_two_site(&r_array(u, eta), 1, 0, n);
    let uu1 = embed_aux(&double_row_monodromy(u1, p)?, 0);
    let uu2 = embed_aux(&double_row_monodromy(u2, p)?, 1);
    let lhs = r12(u1 - u2).matmul(&uu1).matmul(&r21(u1 + u2)).matmul(&uu2);
    let rhs = uu2.matmul(&r12(u1 + u2)).matmul(&uu1).matmul(&r21(u1 - u2));
    Ok(compare(&lhs, &rhs))
}

/// `R12(u) R21(-u) = sinh(eta+u) sinh(eta-u) / sinh^2 eta`.
pub fn unitarity_residual(u: Complex64, eta: Complex64) -> (f64, f64) {
    let lhs = embed_two_site(&r_array(u, eta), 0, 1, 2).matmul(&embed_two_site(&r_array(-u, eta), 1, 0, 2));
    let s = (eta + u).sinh() * (eta - u).sinh() / (eta.sinh() * eta.sinh());
    compare(&lhs, &ComplexMatrix::scalar(4, s))
}
