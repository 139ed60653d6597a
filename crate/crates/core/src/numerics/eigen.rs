//! General complex eigensolver.
//!
//! The matrix is balanced, reduced to upper Hessenberg form with Householder
//! reflections and driven to complex Schur form `A = Z T Z^H` by single-shift
//! QR sweeps (Wilkinson shift, Givens rotations). Eigenvectors are read off the
//! triangular factor by back substitution and mapped back through `Z` and the
//! balancing scale.

use num_complex::Complex64;

use super::matrix::{vec_norm, ComplexMatrix};
use super::NumericSettings;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MAX_DIM: usize = 4096;

/// Eigenvalues, unit right eigenvectors (as columns) and per-pair backward errors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    pub vectors: ComplexMatrix,
    /// `|A v_i - lambda_i v_i|` for each pair.
    pub residuals: Vec<f64>,
    /// Frobenius norm of the input, the natural scale of the residuals.
    pub matrix_norm: f64,
    /// Index pairs `(i, j)`, `i < j`, of eigenvalues closer than the cluster tolerance.
    pub clusters: Vec<(usize, usize)>,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }

    pub fn max_relative_residual(&self) -> f64 {
        let scale = self.matrix_norm.max(f64::MIN_POSITIVE);
        self.residuals.iter().fold(0.0_f64, |a, &r| a.max(r / scale))
    }

    pub fn has_clusters(&self) -> bool {
        !self.clusters.is_empty()
    }
}

/// Eigendecomposition with the default settings.
pub fn eig_general(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    eig_general_with(a, &NumericSettings::default())
}

pub fn eig_general_with(a: &ComplexMatrix, settings: &NumericSettings) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > MAX_DIM {
        return Err(Error::Size(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    if !a.is_finite() {
        return Err(Error::Domain("matrix entries must be finite".into()));
    }

    let (mut h, scale) = balance(a);
    let mut z = hessenberg(&mut h);
    schur(&mut h, &mut z, settings.qr_iterations_per_eigenvalue)?;

    let values: Vec<Complex64> = (0..n).map(|i| h[(i, i)]).collect();
    let tri_vecs = triangular_eigenvectors(&h);
    let mut vectors = z.matmul(&tri_vecs);
    for i in 0..n {
        for j in 0..n {
            vectors[(i, j)] *= scale[i];
        }
    }
    for j in 0..n {
        let col = vectors.column(j);
        let nrm = vec_norm(&col);
        if nrm > 0.0 {
            let inv = Complex64::new(1.0 / nrm, 0.0);
            let normed: Vec<Complex64> = col.iter().map(|&x| x * inv).collect();
            vectors.set_column(j, &normed);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .re
            .total_cmp(&values[j].re)
            .then(values[i].im.total_cmp(&values[j].im))
    });
    let sorted_values: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let mut sorted_vectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        sorted_vectors.set_column(new, &vectors.column(old));
    }

    let matrix_norm = a.frobenius_norm();
    let residuals = (0..n)
        .map(|k| {
            let v = sorted_vectors.column(k);
            let av = a.mul_vec(&v);
            let diff: Vec<Complex64> = av
                .iter()
                .zip(&v)
                .map(|(x, y)| x - sorted_values[k] * y)
                .collect();
            vec_norm(&diff)
        })
        .collect();

    let cluster_tol = settings.cluster_tolerance * matrix_norm;
    let mut clusters = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (sorted_values[i] - sorted_values[j]).norm() < cluster_tol {
                clusters.push((i, j));
            }
        }
    }

    Ok(EigenDecomposition {
        values: sorted_values,
        vectors: sorted_vectors,
        residuals,
        matrix_norm,
        clusters,
    })
}

/// Parlett-Reinsch balancing with powers of two. Returns `D^-1 A D` and `D`.
fn balance(a: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut scale = vec![1.0_f64; n];
    let radix = 2.0_f64;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[(j, i)].l1_norm();
                    r += h[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                scale[i] *= f;
                for j in 0..n {
                    h[(i, j)] /= f;
                    h[(j, i)] *= f;
                }
            }
        }
    }
    (h, scale)
}

/// Reduces `h` to upper Hessenberg form in place, returning the accumulated
/// unitary factor.
fn hessenberg(h: &mut ComplexMatrix) -> ComplexMatrix {
    let n = h.rows();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return q;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let Some((v, beta)) = householder(&x) else {
            continue;
        };
        // h <- P h P with P = I - beta v v^H acting on indices k+1..n
        for j in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(idx, vi)| vi.conj() * h[(k + 1 + idx, j)])
                .sum();
            let s = s * beta;
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= vi * s;
            }
        }
        for i in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(idx, vi)| h[(i, k + 1 + idx)] * vi)
                .sum();
            let s = s * beta;
            for (idx, vi) in v.iter().enumerate() {
                h[(i, k + 1 + idx)] -= s * vi.conj();
            }
        }
        for i in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(idx, vi)| q[(i, k + 1 + idx)] * vi)
                .sum();
            let s = s * beta;
            for (idx, vi) in v.iter().enumerate() {
                q[(i, k + 1 + idx)] -= s * vi.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    q
}

/// Householder vector `v` and factor `beta` such that `(I - beta v v^H) x`
/// is a multiple of the first unit vector.
pub(crate) fn householder(x: &[Complex64]) -> Option<(Vec<Complex64>, f64)> {
    let norm = vec_norm(x);
    if norm == 0.0 {
        return None;
    }
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let phase = if x[0].norm() > 0.0 {
        x[0] / x[0].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    Some((v, 2.0 / vnorm2))
}

/// Givens rotation `[c, s; -conj(s), c]` (c real) mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, (b / bn).conj());
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// Drives an upper Hessenberg matrix to upper triangular (Schur) form.
fn schur(h: &mut ComplexMatrix, z: &mut ComplexMatrix, iters_per_value: usize) -> Result<()> {
    let n = h.rows();
    if n == 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut ihi = n - 1;
    let mut iter = 0usize;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    while ihi > 0 {
        // locate the start of the active unreduced block
        let mut l = ihi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].l1_norm() + h[(l, l)].l1_norm();
            if diag == 0.0 {
                diag = h.max_abs();
            }
            if sub <= eps * diag {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > iters_per_value {
            return Err(Error::Convergence { index: ihi });
        }

        let shift = if iter % 10 == 0 {
            // exceptional shift
            let s = h[(ihi, ihi - 1)].re.abs() + if ihi >= 2 { h[(ihi - 1, ihi - 2)].re.abs() } else { 0.0 };
            h[(ihi, ihi)] + Complex64::new(0.75 * s, 0.0)
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };

        for i in l..=ihi {
            h[(i, i)] -= shift;
        }
        rotations.clear();
        for k in l..ihi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = l + idx;
            let top = (k + 1).min(ihi);
            for i in 0..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in l..=ihi {
            h[(i, i)] += shift;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(())
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let diff = (a - d) * 0.5;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Right eigenvectors of an upper triangular matrix by back substitution.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let tnorm = t.max_abs().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let mut out = ComplexMatrix::zeros(n, n);
    let mut x = vec![ZERO; n];
    for k in 0..n {
        x.iter_mut().for_each(|v| *v = ZERO);
        x[k] = Complex64::new(1.0, 0.0);
        let lambda = t[(k, k)];
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in i + 1..=k {
                s += t[(i, j)] * x[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            x[i] = -s / denom;
            // keep the growing vector representable
            let big = x[i].norm();
            if big > 1e100 {
                let inv = 1.0 / big;
                for v in x.iter_mut().take(k + 1) {
                    *v *= inv;
                }
            }
        }
        for i in 0..=k {
            out[(i, k)] = x[i];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..n * n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::from_vec(n, n, data).unwrap()
    }

    #[test]
    fn diagonal_matrix() {
        let a = ComplexMatrix::from_diagonal(&[c(3.0, 0.0), c(2.0, 0.0)]);
        let e = eig_general(&a).unwrap();
        assert_eq!(e.values, vec![c(2.0, 0.0), c(3.0, 0.0)]);
        assert!(e.max_relative_residual() < 1e-15);
    }

    #[test]
    fn pauli_x() {
        let a = ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        let e = eig_general(&a).unwrap();
        assert!((e.values[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((e.values[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn random_16_backward_error() {
        let a = random_matrix(16, 11);
        let e = eig_general(&a).unwrap();
        assert!(e.max_relative_residual() < 1e-9, "{}", e.max_relative_residual());
        for k in 0..16 {
            assert!((vec_norm(&e.vector(k)) - 1.0).abs() < 1e-12);
        }
        for w in e.values.windows(2) {
            assert!(w[0].re <= w[1].re);
        }
    }

    #[test]
    fn non_square_is_rejected() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig_general(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn jordan_like_block_is_flagged_as_cluster() {
        let a = ComplexMatrix::from_rows(&[
            [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)],
        ]);
        let e = eig_general(&a).unwrap();
        assert!(e.has_clusters());
        assert_eq!(e.clusters, vec![(0, 1)]);
    }

    #[test]
    fn larger_random_matrix_converges() {
        let a = random_matrix(96, 5);
        let e = eig_general(&a).unwrap();
        assert!(e.max_relative_residual() < 1e-10);
        let tr = a.trace();
        let sum: Complex64 = e.values.iter().sum();
        assert!((tr - sum).norm() < 1e-9 * e.matrix_norm);
    }

    #[test]
    fn badly_scaled_matrix_is_balanced() {
        let mut a = random_matrix(8, 3);
        for j in 0..8 {
            a[(0, j)] *= 1e6;
            a[(j, 0)] *= 1e-6;
        }
        let e = eig_general(&a).unwrap();
        assert!(e.max_relative_residual() < 1e-10);
    }
}
