use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bethe::{eigen_residual_with, StateVector};
use crate::error::{Error, Result};
use crate::functional::TQSolution;
use crate::model::{transfer_matrix, ModelParams};
use crate::numerics::{eig_general, lu_solve, vec_norm, ComplexMatrix};

/// Largest chain for exact diagonalization.
pub const ED_MAX_SITES: usize = 8;

/// Points at which every eigenvalue function is tabulated. The first one is
/// the diagonalization point, the second the fallback.
pub const LAMBDA_PROBES: [Complex64; 5] = [
    Complex64::new(0.37, 0.21),
    Complex64::new(-0.23, 0.44),
    Complex64::new(0.51, -0.17),
    Complex64::new(-0.41, -0.29),
    Complex64::new(0.13, 0.62),
];

/// One eigenvector of the commuting family `t(u)` with its eigenvalue function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub eigenvector: StateVector,
    /// `Lambda` at [`LAMBDA_PROBES`].
    pub lambda_probe_values: Vec<Complex64>,
    /// Component used to read off `Lambda(u) = (t(u) v)_k / v_k`.
    pub anchor_index: usize,
    /// Worst `||t v - Lambda v|| / (||v|| ||t||)` over the probes.
    pub eigen_residual: f64,
    pub tq: Option<TQSolution>,
}

impl SpectrumEntry {
    fn from_vector(v: Vec<Complex64>) -> Self {
        let anchor_index = (0..v.len())
            .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
            .unwrap_or(0);
        SpectrumEntry {
            eigenvector: StateVector::new(v),
            lambda_probe_values: Vec::new(),
            anchor_index,
            eigen_residual: 0.0,
            tq: None,
        }
    }

    /// `Lambda` read off a precomputed `t(u)`.
    pub fn lambda_from_transfer(&self, t: &ComplexMatrix) -> Complex64 {
        let k = self.anchor_index;
        let v = &self.eigenvector.amplitudes;
        let row: Complex64 = t.row(k).iter().zip(v).map(|(a, b)| a * b).sum();
        row / v[k]
    }

    pub fn lambda(&self, u: Complex64, p: &ModelParams) -> Result<Complex64> {
        Ok(self.lambda_from_transfer(&transfer_matrix(u, p)?))
    }
}

/// One step of inverse iteration with a slightly displaced shift.
fn refine(t: &ComplexMatrix, lambda: Complex64, v: &[Complex64], scale: f64) -> Vec<Complex64> {
    let shift = lambda + Complex64::new(1.0, 1.0) * (1e-10 * scale.max(1.0));
    let mut a = t.clone();
    for i in 0..a.rows() {
        a[(i, i)] -= shift;
    }
    match lu_solve(&a, v) {
        Ok(x) if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
            let n = vec_norm(&x);
            x.into_iter().map(|z| z / n).collect()
        }
        _ => v.to_vec(),
    }
}

/// Diagonalizes `t(u0)` and tabulates the eigenvalue functions of all `2^N`
/// eigenvectors, sorted by `Lambda(u0)`.
pub fn spectrum_ed(p: &ModelParams) -> Result<Vec<SpectrumEntry>> {
    p.validate()?;
    if p.n_sites > ED_MAX_SITES {
        return Err(Error::Size(format!("exact diagonalization limited to N <= {ED_MAX_SITES}")));
    }
    let transfers: Vec<ComplexMatrix> = LAMBDA_PROBES
        .iter()
        .map(|&u| transfer_matrix(u, p))
        .collect::<Result<_>>()?;
    let mut chosen = None;
    for t in transfers.iter().take(2) {
        let eig = eig_general(t)?;
        if !eig.has_clusters() {
            chosen = Some((t, eig));
            break;
        }
    }
    let (t0, eig) = chosen.ok_or_else(|| {
        Error::NonGeneric("transfer-matrix spectrum is degenerate at both diagonalization points".into())
    })?;
    let mut entries: Vec<SpectrumEntry> = (0..eig.values.len())
        .map(|i| SpectrumEntry::from_vector(refine(t0, eig.values[i], &eig.vector(i), eig.matrix_norm)))
        .collect();
    for e in &mut entries {
        e.lambda_probe_values = transfers.iter().map(|t| e.lambda_from_transfer(t)).collect();
        e.eigen_residual = transfers
            .iter()
            .zip(&e.lambda_probe_values)
            .map(|(t, &l)| eigen_residual_with(&e.eigenvector, t, l))
            .fold(0.0, f64::max);
    }
    let key = |e: &SpectrumEntry| e.lambda_probe_values[0];
    entries.sort_by(|a, b| key(a).re.total_cmp(&key(b).re).then(key(a).im.total_cmp(&key(b).im)));
    Ok(entries)
}
