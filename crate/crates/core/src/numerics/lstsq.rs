use num_complex::Complex64;

use super::eigen::householder;
use super::matrix::{vec_norm, ComplexMatrix};
use super::NumericSettings;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LstsqSolution {
    pub x: Vec<Complex64>,
    /// `||a x - b||` at the minimizer.
    pub residual_norm: f64,
    /// Ratio of the largest to the smallest diagonal entry of `R`.
    pub condition_estimate: f64,
}

/// Least-squares solution of `a x = b` by Householder QR.
pub fn lstsq(a: &ComplexMatrix, b: &[Complex64]) -> Result<LstsqSolution> {
    lstsq_with(a, b, &NumericSettings::default())
}

pub fn lstsq_with(a: &ComplexMatrix, b: &[Complex64], settings: &NumericSettings) -> Result<LstsqSolution> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::Dimension(format!("underdetermined system {m}x{n}")));
    }
    if b.len() != m {
        return Err(Error::Dimension(format!("rhs has {} entries, expected {m}", b.len())));
    }
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    for k in 0..n {
        let x: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
        let Some((v, beta)) = householder(&x) else {
            continue;
        };
        for j in k..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(idx, vi)| vi.conj() * r[(k + idx, j)])
                .sum::<Complex64>()
                * beta;
            for (idx, vi) in v.iter().enumerate() {
                r[(k + idx, j)] -= vi * s;
            }
        }
        let s: Complex64 = v
            .iter()
            .enumerate()
            .map(|(idx, vi)| vi.conj() * qtb[k + idx])
            .sum::<Complex64>()
            * beta;
        for (idx, vi) in v.iter().enumerate() {
            qtb[k + idx] -= vi * s;
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| r[(i, i)].norm()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if dmax == 0.0 || dmin <= settings.rank_tolerance * dmax {
        return Err(Error::Conditioning(format!(
            "rank deficient: smallest pivot {dmin:e} against largest {dmax:e}"
        )));
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = qtb[i];
        for j in i + 1..n {
            s -= r[(i, j)] * x[j];
        }
        x[i] = s / r[(i, i)];
    }
    Ok(LstsqSolution {
        x,
        residual_norm: vec_norm(&qtb[n..]),
        condition_estimate: dmax / dmin,
    })
}

/// LU factorization with partial pivoting: `(lu, perm, sign)`.
fn lu(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<usize>, f64)> {
    if !a.is_square() {
        return Err(Error::Dimension("LU needs a square matrix".into()));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap();
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let piv = lu[(k, k)];
        if piv.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / piv;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
        }
    }
    Ok((lu, perm, sign))
}

pub fn determinant(a: &ComplexMatrix) -> Result<Complex64> {
    let (lu, _, sign) = lu(a)?;
    let mut d = Complex64::new(sign, 0.0);
    for i in 0..a.rows() {
        d *= lu[(i, i)];
    }
    Ok(d)
}

/// Solves the square system `a x = b`.
pub fn lu_solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let (lu, perm, _) = lu(a)?;
    let n = a.rows();
    if b.len() != n {
        return Err(Error::Dimension("rhs length differs from matrix order".into()));
    }
    let scale = a.max_abs();
    if (0..n).any(|i| lu[(i, i)].norm() <= f64::EPSILON * scale) {
        return Err(Error::Conditioning("singular matrix".into()));
    }
    let mut y: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let t = y[j];
            y[i] -= lu[(i, j)] * t;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let t = y[j];
            y[i] -= lu[(i, j)] * t;
        }
        y[i] /= lu[(i, i)];
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_system() {
        let a = ComplexMatrix::identity(3);
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0)];
        let s = lstsq(&a, &b).unwrap();
        assert_eq!(s.x, b);
        assert_eq!(s.residual_norm, 0.0);
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let a = ComplexMatrix::from_rows(&[[c(1.0, 0.0), c(2.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)], [c(3.0, 0.0), c(6.0, 0.0)]]);
        let b = vec![c(1.0, 0.0); 3];
        assert!(matches!(lstsq(&a, &b), Err(Error::Conditioning(_))));
    }

    #[test]
    fn lu_solve_and_det() {
        let a = ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(2.0, 1.0)], [c(1.0, 0.0), c(3.0, 0.0)]]);
        assert!((determinant(&a).unwrap() - c(-2.0, -1.0)).norm() < 1e-15);
        let x = lu_solve(&a, &[c(2.0, 1.0), c(4.0, 0.0)]).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-14 && (x[1] - c(1.0, 0.0)).norm() < 1e-14);
    }
}
