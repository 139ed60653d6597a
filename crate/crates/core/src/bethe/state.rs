use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{transfer_matrix, ModelParams};
use crate::numerics::{bilinear, collinearity_defect, vec_norm, ComplexMatrix};

/// A ket on the `2^N` dimensional quantum space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
}

/// A bra paired with kets by the unconjugated bilinear form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoStateVector {
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `op |self>`.
    pub fn apply(&self, op: &ComplexMatrix) -> StateVector {
        StateVector::new(op.mul_vec(&self.amplitudes))
    }

    pub fn scale(&self, s: Complex64) -> StateVector {
        StateVector::new(self.amplitudes.iter().map(|&z| z * s).collect())
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    pub fn collinearity_defect(&self, other: &StateVector) -> f64 {
        collinearity_defect(&self.amplitudes, &other.amplitudes)
    }
}

impl CoStateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        CoStateVector { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `<self| op`.
    pub fn apply(&self, op: &ComplexMatrix) -> CoStateVector {
        CoStateVector::new(op.vec_mul(&self.amplitudes))
    }

    /// `<self| op` together with the largest `sum_i |v_i| |op_ij|`, the natural
    /// scale of rounding errors in the product.
    pub fn apply_scaled(&self, op: &ComplexMatrix) -> (CoStateVector, f64) {
        let mut scale: f64 = 0.0;
        for j in 0..op.cols() {
            let s: f64 = (0..op.rows()).map(|i| self.amplitudes[i].norm() * op[(i, j)].norm()).sum();
            scale = scale.max(s);
        }
        (self.apply(op), scale)
    }

    pub fn scale(&self, s: Complex64) -> CoStateVector {
        CoStateVector::new(self.amplitudes.iter().map(|&z| z * s).collect())
    }

    /// `<self|psi>` without conjugation.
    pub fn pair(&self, psi: &StateVector) -> Complex64 {
        bilinear(&self.amplitudes, &psi.amplitudes)
    }

    /// `<self|psi>` with the sum of the magnitudes of its terms.
    pub fn pair_scaled(&self, psi: &StateVector) -> (Complex64, f64) {
        let s = self.amplitudes.iter().zip(&psi.amplitudes).map(|(a, b)| a.norm() * b.norm()).sum();
        (self.pair(psi), s)
    }

    /// Largest entry of `|self - other|`.
    pub fn max_abs_diff(&self, other: &CoStateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn collinearity_defect(&self, other: &CoStateVector) -> f64 {
        collinearity_defect(&self.amplitudes, &other.amplitudes)
    }
}

/// Spectral norm.
pub(crate) fn operator_norm(m: &ComplexMatrix) -> f64 {
    m.spectral_norm()
}

/// `max_u ||t(u) v - Lambda(u) v|| / (||v|| ||t(u)||)` over `probes`.
pub fn eigen_residual(
    state: &StateVector,
    lam: &dyn Fn(Complex64) -> Result<Complex64>,
    p: &ModelParams,
    probes: &[Complex64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &u in probes {
        let t = transfer_matrix(u, p)?;
        worst = worst.max(eigen_residual_with(state, &t, lam(u)?));
    }
    Ok(worst)
}

pub(crate) fn eigen_residual_with(state: &StateVector, t: &ComplexMatrix, lambda: Complex64) -> f64 {
    let tv = t.mul_vec(&state.amplitudes);
    let diff: Vec<Complex64> = tv.iter().zip(&state.amplitudes).map(|(a, b)| a - lambda * b).collect();
    vec_norm(&diff) / (state.norm() * operator_norm(t))
}
