use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::vectors::GaugeIndex;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Representative of `z` modulo `2 i pi` with imaginary part in `(-pi, pi]`.
pub fn canonical_mod_2ipi(z: Complex64) -> Complex64 {
    let k = ((z.im - PI) / (2.0 * PI)).ceil();
    Complex64::new(z.re, z.im - 2.0 * PI * k)
}

fn generic(m: Complex64, eta: Complex64, what: &str) -> Result<()> {
    GaugeIndex::new(Complex64::new(0.0, 0.0), m)
        .validate(eta)
        .map_err(|e| Error::NonGeneric(format!("{what}: {e}")))
}

fn left_with_sign(p: &ModelParams, sign: f64) -> GaugeIndex {
    let i_half_pi = Complex64::new(0.0, PI / 2.0);
    let alpha_eta = canonical_mod_2ipi(p.eta - p.theta_plus + i_half_pi);
    let m_eta = canonical_mod_2ipi((p.alpha_plus + p.beta_plus) * sign - i_half_pi * sign);
    GaugeIndex::new(alpha_eta / p.eta, m_eta / p.eta)
}

fn right_sum_with_sign(p: &ModelParams, sign: f64) -> Complex64 {
    let n = p.n_sites as f64;
    let shift = if sign > 0.0 {
        Complex64::new(0.0, PI)
    } else {
        Complex64::new(0.0, 0.0)
    };
    canonical_mod_2ipi(-p.theta_minus + (p.alpha_minus + p.beta_minus) * sign - p.eta * n + shift)
}

/// Left gauge making `K̄^+` diagonal:
/// `alpha eta = eta - theta_+ + i pi/2`, `m eta = alpha_+ + beta_+ - i pi/2`.
pub fn select_gauge_left(p: &ModelParams) -> Result<GaugeIndex> {
    let g = left_with_sign(p, 1.0);
    generic(g.m, p.eta, "left gauge index")?;
    Ok(g)
}

/// Right gauge sum `(m + alpha) eta = -theta_- + alpha_- + beta_- - N eta + i pi`
/// making `K^-(m+N)` upper triangular, with the realization `alpha = 0`.
pub fn select_gauge_right(p: &ModelParams) -> Result<(Complex64, GaugeIndex)> {
    let sum = right_sum_with_sign(p, 1.0);
    let g = right_realization(sum, p.eta);
    check_right(&g, p)?;
    Ok((sum, g))
}

/// `alpha = 0`, `m = sum / eta`.
pub fn right_realization(sum: Complex64, eta: Complex64) -> GaugeIndex {
    GaugeIndex::new(Complex64::new(0.0, 0.0), sum / eta)
}

fn check_right(g: &GaugeIndex, p: &ModelParams) -> Result<()> {
    generic(g.m, p.eta, "right gauge index")?;
    generic(g.m + p.n_sites as f64, p.eta, "right gauge index shifted by N")
}

/// Sign applied to `(alpha_±, beta_±)` in the T-Q relation of a branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSigns {
    pub plus: i8,
    pub minus: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeChoice {
    pub left: GaugeIndex,
    pub right_sum: Complex64,
    pub branch: u8,
    pub signs: BranchSigns,
}

impl GaugeChoice {
    /// Residuals of the two left conditions
    /// `sinh(alpha_+ + beta_+) = sinh(theta_+ + (alpha - 1) eta ± m eta)`.
    pub fn left_condition_residuals(&self, p: &ModelParams) -> [f64; 2] {
        let target = (p.alpha_plus + p.beta_plus).sinh();
        let base = p.theta_plus + (self.left.alpha - 1.0) * p.eta;
        let me = self.left.m * p.eta;
        [(target - (base + me).sinh()).norm(), (target - (base - me).sinh()).norm()]
    }

    /// Residual of `sinh(alpha_- + beta_-) + sinh(theta_- + right_sum + N eta) = 0`;
    /// both right signs solve it.
    pub fn right_condition_residual(&self, p: &ModelParams) -> f64 {
        let n = p.n_sites as f64;
        ((p.alpha_minus + p.beta_minus).sinh() + (p.theta_minus + self.right_sum + p.eta * n).sinh()).norm()
    }

    pub fn right_index(&self, eta: Complex64) -> GaugeIndex {
        right_realization(self.right_sum, eta)
    }
}

/// The four solutions of the gauge conditions. Branch 1 is the principal
/// choice of [`select_gauge_left`] / [`select_gauge_right`]; branch 2 flips
/// `m eta -> -(alpha_+ + beta_+) + i pi/2`, branch 3 flips the right sum to
/// `-theta_- - (alpha_- + beta_-) - N eta`, branch 4 flips both.
pub fn enumerate_gauge_branches(p: &ModelParams) -> Vec<GaugeChoice> {
    let mut out = Vec::with_capacity(4);
    for (branch, (sp, sm)) in [(1i8, 1i8), (-1, 1), (1, -1), (-1, -1)].into_iter().enumerate() {
        out.push(GaugeChoice {
            left: left_with_sign(p, f64::from(sp)),
            right_sum: right_sum_with_sign(p, f64::from(sm)),
            branch: branch as u8 + 1,
            signs: BranchSigns { plus: sp, minus: sm },
        });
    }
    out
}
