use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::vectors::{gauge_vector, sandwich2, GaugeIndex, GaugeKind, Vec2};
use crate::error::Result;
use crate::model::{double_row_monodromy, k_minus_array, k_plus_array, one_row_monodromy, AuxMonodromy, Mat2, ModelParams};
use crate::numerics::ComplexMatrix;

use GaugeKind::{Xbar, Xhat, Xtilde, Ybar, Yhat, Ytilde, X, Y};

/// Which one-row gauged operator to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OneRowSide {
    /// `B̄_m(u) = Ȳ_{m−N+1}(−u) T̂(u) Ŷ_{m+1}(−u)`.
    LeftBar,
    /// `B_m(u) = Ỹ_{m−1}(u) T(u) Y_{m+N−1}(u)`.
    Right,
}

/// Row and column vectors of the four entries of a gauged 2x2 object, in the
/// order `[[11, 12], [21, 22]]`.
type Frame = [[(Vec2, Vec2); 2]; 2];

fn vector(kind: GaugeKind, m: Complex64, shift: f64, u: Complex64, alpha: Complex64, eta: Complex64) -> Result<Vec2> {
    gauge_vector(kind, m + shift, u, alpha, eta)
}

/// `Ā = Ȳ_m(u) · X̂_{m−2}(−u)`, `B̄ = Ȳ_m(u) · Ŷ_m(−u)`,
/// `C̄ = X̄_m(u) · X̂_m(−u)`, `D̄ = X̄_m(u) · Ŷ_{m+2}(−u)`.
fn left_frame(m: Complex64, alpha: Complex64, u: Complex64, eta: Complex64) -> Result<Frame> {
    let yb = vector(Ybar, m, 0.0, u, alpha, eta)?;
    let xb = vector(Xbar, m, 0.0, u, alpha, eta)?;
    Ok([
        [
            (yb, vector(Xhat, m, -2.0, -u, alpha, eta)?),
            (yb, vector(Yhat, m, 0.0, -u, alpha, eta)?),
        ],
        [
            (xb, vector(Xhat, m, 0.0, -u, alpha, eta)?),
            (xb, vector(Yhat, m, 2.0, -u, alpha, eta)?),
        ],
    ])
}

/// `A = Ỹ_{m−2}(u) · X_m(−u)`, `B = Ỹ_m(u) · Y_m(−u)`,
/// `C = X̃_m(u) · X_m(−u)`, `D = X̃_{m+2}(u) · Y_m(−u)`.
fn right_frame(m: Complex64, alpha: Complex64, u: Complex64, eta: Complex64) -> Result<Frame> {
    let x = vector(X, m, 0.0, -u, alpha, eta)?;
    let y = vector(Y, m, 0.0, -u, alpha, eta)?;
    Ok([
        [(vector(Ytilde, m, -2.0, u, alpha, eta)?, x), (vector(Ytilde, m, 0.0, u, alpha, eta)?, y)],
        [(vector(Xtilde, m, 0.0, u, alpha, eta)?, x), (vector(Xtilde, m, 2.0, u, alpha, eta)?, y)],
    ])
}

fn sandwich_frame(uu: &AuxMonodromy, frame: &Frame) -> AuxMonodromy {
    let e = |a: usize, b: usize| uu.sandwich(&frame[a][b].0, &frame[a][b].1);
    AuxMonodromy {
        blocks: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
    }
}

fn numeric_frame(k: &Mat2, frame: &Frame) -> [[(Complex64, f64); 2]; 2] {
    let e = |a: usize, b: usize| sandwich2(&frame[a][b].0, k, &frame[a][b].1);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn values(entries: &[[(Complex64, f64); 2]; 2]) -> Mat2 {
    [[entries[0][0].0, entries[0][1].0], [entries[1][0].0, entries[1][1].0]]
}

/// Left-gauged double-row operators `[[Ā, B̄], [C̄, D̄]]_m(u|α)` from a
/// precomputed `U(u)`.
pub fn gauged_left_from(uu: &AuxMonodromy, g: &GaugeIndex, u: Complex64, eta: Complex64) -> Result<AuxMonodromy> {
    Ok(sandwich_frame(uu, &left_frame(g.m, g.alpha, u, eta)?))
}

pub fn gauged_double_row_left(g: &GaugeIndex, u: Complex64, p: &ModelParams) -> Result<AuxMonodromy> {
    gauged_left_from(&double_row_monodromy(u, p)?, g, u, p.eta)
}

/// Right-gauged double-row operators `[[A, B], [C, D]]_m(u|α)` from a
/// precomputed `U(u)`.
pub fn gauged_right_from(uu: &AuxMonodromy, g: &GaugeIndex, u: Complex64, eta: Complex64) -> Result<AuxMonodromy> {
    Ok(sandwich_frame(uu, &right_frame(g.m, g.alpha, u, eta)?))
}

pub fn gauged_double_row_right(g: &GaugeIndex, u: Complex64, p: &ModelParams) -> Result<AuxMonodromy> {
    gauged_right_from(&double_row_monodromy(u, p)?, g, u, p.eta)
}

/// Entries of `K̄^+_m(u|α)` with the largest summand of each sandwich.
pub(crate) fn kplus_left_entries(g: &GaugeIndex, u: Complex64, p: &ModelParams) -> Result<[[(Complex64, f64); 2]; 2]> {
    let (m, a, eta) = (g.m, g.alpha, p.eta);
    let x = vector(X, m, 0.0, u, a, eta)?;
    let y = vector(Y, m, 0.0, u, a, eta)?;
    let frame = [
        [(vector(Ybar, m, 0.0, -u, a, eta)?, x), (vector(Ybar, m, 2.0, -u, a, eta)?, y)],
        [(vector(Xbar, m, -2.0, -u, a, eta)?, x), (vector(Xbar, m, 0.0, -u, a, eta)?, y)],
    ];
    Ok(numeric_frame(&k_plus_array(u, p), &frame))
}

/// `K̄^+_m(u|α)`: sandwiches of `K^+(u)` between `Ȳ/X̄(−u)` rows and
/// `X_m(u)`, `Y_m(u)` columns.
pub fn gauged_kplus_left(g: &GaugeIndex, u: Complex64, p: &ModelParams) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::from_rows(&values(&kplus_left_entries(g, u, p)?)))
}

pub(crate) fn kminus_left_entries(
    l_prime: Complex64,
    alpha: Complex64,
    u: Complex64,
    p: &ModelParams,
) -> Result<[[(Complex64, f64); 2]; 2]> {
    Ok(numeric_frame(&k_minus_array(u, p), &left_frame(l_prime, alpha, u, p.eta)?))
}

/// `K̄^-(l'|u)` with the same sandwich pattern as the left-gauged operators.
pub fn gauged_kminus_left(l_prime: Complex64, alpha: Complex64, u: Complex64, p: &ModelParams) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::from_rows(&values(&kminus_left_entries(l_prime, alpha, u, p)?)))
}

pub(crate) fn kminus_right_entries(
    l: Complex64,
    alpha: Complex64,
    u: Complex64,
    p: &ModelParams,
) -> Result<[[(Complex64, f64); 2]; 2]> {
    Ok(numeric_frame(&k_minus_array(u, p), &right_frame(l, alpha, u, p.eta)?))
}

/// `K^-(l|u)` with the same sandwich pattern as the right-gauged operators.
pub fn gauged_kminus_right(l: Complex64, alpha: Complex64, u: Complex64, p: &ModelParams) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::from_rows(&values(&kminus_right_entries(l, alpha, u, p)?)))
}

/// One-row gauged operators `B̄_m(u|α)` and `B_m(u|α)`.
pub fn gauged_one_row(side: OneRowSide, m: Complex64, alpha: Complex64, u: Complex64, p: &ModelParams) -> Result<ComplexMatrix> {
    let n = p.n_sites as f64;
    let eta = p.eta;
    match side {
        OneRowSide::LeftBar => {
            let row = vector(Ybar, m, 1.0 - n, -u, alpha, eta)?;
            let col = vector(Yhat, m, 1.0, -u, alpha, eta)?;
            Ok(one_row_monodromy(u, p, true)?.sandwich(&row, &col))
        }
        OneRowSide::Right => {
            let row = vector(Ytilde, m, -1.0, u, alpha, eta)?;
            let col = vector(Y, m, n - 1.0, u, alpha, eta)?;
            Ok(one_row_monodromy(u, p, false)?.sandwich(&row, &col))
        }
    }
}
