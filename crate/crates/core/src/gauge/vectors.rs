use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

pub type Vec2 = [Complex64; 2];

/// Smallest admissible `|sinh(k eta)|` in a gauge-vector normalization.
pub const GAUGE_GUARD: f64 = 1e-8;

/// The eight gauge vector families. `X`, `Y` and the hatted ones are columns,
/// the barred and tilded ones are rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaugeKind {
    X,
    Y,
    Xbar,
    Ybar,
    Xtilde,
    Ytilde,
    Xhat,
    Yhat,
}

impl GaugeKind {
    pub const ALL: [GaugeKind; 8] = [
        GaugeKind::X,
        GaugeKind::Y,
        GaugeKind::Xbar,
        GaugeKind::Ybar,
        GaugeKind::Xtilde,
        GaugeKind::Ytilde,
        GaugeKind::Xhat,
        GaugeKind::Yhat,
    ];

    pub fn is_row(self) -> bool {
        matches!(
            self,
            GaugeKind::Xbar | GaugeKind::Ybar | GaugeKind::Xtilde | GaugeKind::Ytilde
        )
    }

    pub fn symbol(self) -> &'static str {
        match self {
            GaugeKind::X => "X",
            GaugeKind::Y => "Y",
            GaugeKind::Xbar => "X̄",
            GaugeKind::Ybar => "Ȳ",
            GaugeKind::Xtilde => "X̃",
            GaugeKind::Ytilde => "Ỹ",
            GaugeKind::Xhat => "X̂",
            GaugeKind::Yhat => "Ŷ",
        }
    }

    /// Integer offsets `k` of the factors `sinh((m+k) eta)` dividing this family.
    fn denominators(self) -> &'static [i32] {
        match self {
            GaugeKind::X | GaugeKind::Y => &[],
            GaugeKind::Xbar | GaugeKind::Ybar => &[0],
            GaugeKind::Xtilde => &[0, -1],
            GaugeKind::Ytilde => &[0, 1],
            GaugeKind::Xhat => &[1],
            GaugeKind::Yhat => &[-1],
        }
    }
}

/// Gauge parameters `(alpha, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeIndex {
    pub alpha: Complex64,
    pub m: Complex64,
}

impl GaugeIndex {
    pub fn new(alpha: Complex64, m: Complex64) -> Self {
        GaugeIndex { alpha, m }
    }

    /// Same `alpha`, `m` shifted by an integer.
    pub fn shifted(&self, k: i32) -> Self {
        GaugeIndex {
            alpha: self.alpha,
            m: self.m + f64::from(k),
        }
    }

    /// `|sinh((m+k) eta)| > GAUGE_GUARD` for `k = -2..=2`.
    pub fn validate(&self, eta: Complex64) -> Result<()> {
        self.validate_range(eta, -2, 2)
    }

    pub fn validate_range(&self, eta: Complex64, lo: i32, hi: i32) -> Result<()> {
        for k in lo..=hi {
            guard(self.m, k, eta)?;
        }
        Ok(())
    }
}

fn factor_name(k: i32) -> String {
    match k {
        0 => "sinh(m η)".to_string(),
        k if k > 0 => format!("sinh((m+{k}) η)"),
        k => format!("sinh((m{k}) η)"),
    }
}

fn guard(m: Complex64, k: i32, eta: Complex64) -> Result<()> {
    let s = ((m + f64::from(k)) * eta).sinh();
    if !(s.norm() > GAUGE_GUARD) {
        return Err(Error::GaugeSingularity {
            factor: format!("{} at m = {m}", factor_name(k)),
        });
    }
    Ok(())
}

/// Closed form of a gauge vector without the denominator guard.
pub(crate) fn gv(kind: GaugeKind, m: Complex64, u: Complex64, alpha: Complex64, eta: Complex64) -> Vec2 {
    let one = Complex64::new(1.0, 0.0);
    let ex = (-(u + (alpha + m) * eta)).exp();
    let ey = (-(u + (alpha - m) * eta)).exp();
    let bar_pre = || (u + alpha * eta).exp() / (2.0 * (m * eta).sinh());
    match kind {
        GaugeKind::X => [ex, one],
        GaugeKind::Y => [ey, one],
        GaugeKind::Xbar => {
            let s = bar_pre();
            [s, -s * ex]
        }
        GaugeKind::Ybar => {
            let s = bar_pre();
            [-s, s * ey]
        }
        GaugeKind::Xtilde => {
            let f = eta.exp() * (m * eta).sinh() / ((m - 1.0) * eta).sinh();
            let v = gv(GaugeKind::Xbar, m, u, alpha, eta);
            [f * v[0], f * v[1]]
        }
        GaugeKind::Ytilde => {
            let f = eta.exp() * (m * eta).sinh() / ((m + 1.0) * eta).sinh();
            let v = gv(GaugeKind::Ybar, m, u, alpha, eta);
            [f * v[0], f * v[1]]
        }
        GaugeKind::Xhat => {
            let f = (-eta).exp() * ((m + 2.0) * eta).sinh() / ((m + 1.0) * eta).sinh();
            [f * ex, f]
        }
        GaugeKind::Yhat => {
            let f = (-eta).exp() * ((m - 2.0) * eta).sinh() / ((m - 1.0) * eta).sinh();
            [f * ey, f]
        }
    }
}

/// Evaluates one member of a gauge vector family at `(m, u | alpha)`.
pub fn gauge_vector(kind: GaugeKind, m: Complex64, u: Complex64, alpha: Complex64, eta: Complex64) -> Result<Vec2> {
    for &k in kind.denominators() {
        guard(m, k, eta)?;
    }
    Ok(gv(kind, m, u, alpha, eta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeMatrixKind {
    Mbar,
    Mtilde,
    Mhat,
}

/// A gauge matrix together with its inverse, the latter assembled from the
/// row vectors rather than by numerical inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeMatrix {
    pub matrix: ComplexMatrix,
    pub inverse: ComplexMatrix,
}

pub fn gauge_matrix(
    kind: GaugeMatrixKind,
    m: Complex64,
    u: Complex64,
    alpha: Complex64,
    eta: Complex64,
) -> Result<GaugeMatrix> {
    use GaugeKind::*;
    let v = |k: GaugeKind, shift: f64| gauge_vector(k, m + shift, u, alpha, eta);
    let (c1, c2, r1, r2) = match kind {
        GaugeMatrixKind::Mbar => (v(X, 0.0)?, v(Y, 0.0)?, v(Ybar, 0.0)?, v(Xbar, 0.0)?),
        GaugeMatrixKind::Mtilde => (v(X, 1.0)?, v(Y, -1.0)?, v(Ytilde, -1.0)?, v(Xtilde, 1.0)?),
        GaugeMatrixKind::Mhat => (v(Xhat, -1.0)?, v(Yhat, 1.0)?, v(Ybar, 1.0)?, v(Xbar, -1.0)?),
    };
    Ok(GaugeMatrix {
        matrix: ComplexMatrix::from_rows(&[[c1[0], c2[0]], [c1[1], c2[1]]]),
        inverse: ComplexMatrix::from_rows(&[r1, r2]),
    })
}

/// `row . col` without conjugation.
pub(crate) fn dot(row: &Vec2, col: &Vec2) -> Complex64 {
    row[0] * col[0] + row[1] * col[1]
}

/// `row K col` for a numeric 2x2 `K`, returned with the magnitude of the
/// largest summand.
pub(crate) fn sandwich2(row: &Vec2, k: &[[Complex64; 2]; 2], col: &Vec2) -> (Complex64, f64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let term = row[a] * k[a][b] * col[b];
            value += term;
            scale = scale.max(term.norm());
        }
    }
    (value, scale)
}
