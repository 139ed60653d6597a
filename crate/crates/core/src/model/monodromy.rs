use num_complex::Complex64;

use super::local::{
    apply_two_site_left, k_minus_array, k_minus_derivative_array, k_plus_array, k_plus_derivative_array, r_array,
    r_derivative_array, Mat2,
};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

pub const MAX_SITES: usize = 12;

/// A 2x2 matrix over the auxiliary space whose entries are operators on the
/// `2^N` dimensional quantum space.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxMonodromy {
    pub blocks: [[ComplexMatrix; 2]; 2],
}

impl AuxMonodromy {
    /// Splits an operator on aux (x) quantum space, aux being the leading factor.
    pub fn from_full(full: &ComplexMatrix) -> Self {
        let d = full.rows() / 2;
        let block = |a: usize, b: usize| {
            let mut m = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = full[(a * d + i, b * d + j)];
                }
            }
            m
        };
        AuxMonodromy {
            blocks: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]],
        }
    }

    pub fn dim(&self) -> usize {
        self.blocks[0][0].rows()
    }

    pub fn block(&self, a: usize, b: usize) -> &ComplexMatrix {
        &self.blocks[a][b]
    }

    /// `sum_ab row_a X_ab col_b`.
    pub fn sandwich(&self, row: &[Complex64; 2], col: &[Complex64; 2]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for a in 0..2 {
            for b in 0..2 {
                let w = row[a] * col[b];
                if w != Complex64::new(0.0, 0.0) {
                    out.add_scaled(w, &self.blocks[a][b]);
                }
            }
        }
        out
    }

    /// Product in the auxiliary space with operator-valued entries.
    pub fn mul(&self, other: &AuxMonodromy) -> AuxMonodromy {
        let entry = |a: usize, b: usize| {
            let mut m = self.blocks[a][0].matmul(&other.blocks[0][b]);
            m.add_scaled(Complex64::new(1.0, 0.0), &self.blocks[a][1].matmul(&other.blocks[1][b]));
            m
        };
        AuxMonodromy {
            blocks: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
        }
    }

    /// `K X` with a numeric 2x2 `K` acting on the auxiliary index.
    pub fn left_scalar(&self, k: &Mat2) -> AuxMonodromy {
        let entry = |a: usize, b: usize| {
            let mut m = self.blocks[0][b].scale(k[a][0]);
            m.add_scaled(k[a][1], &self.blocks[1][b]);
            m
        };
        AuxMonodromy {
            blocks: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
        }
    }

    /// `tr_0(K X) = sum_ab K_ab X_ba`.
    pub fn trace_with(&self, k: &Mat2) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for a in 0..2 {
            for b in 0..2 {
                out.add_scaled(k[a][b], &self.blocks[b][a]);
            }
        }
        out
    }

    pub fn add(&self, other: &AuxMonodromy) -> AuxMonodromy {
        let e = |a: usize, b: usize| &self.blocks[a][b] + &other.blocks[a][b];
        AuxMonodromy {
            blocks: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flatten().map(|b| b.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &AuxMonodromy) -> f64 {
        (0..2)
            .flat_map(|a| (0..2).map(move |b| (a, b)))
            .map(|(a, b)| self.blocks[a][b].max_abs_diff(&other.blocks[a][b]))
            .fold(0.0, f64::max)
    }
}

fn check_size(p: &ModelParams) -> Result<()> {
    if p.n_sites > MAX_SITES {
        return Err(Error::Size(format!(
            "{} sites exceed the dense limit of {MAX_SITES}",
            p.n_sites
        )));
    }
    p.validate()
}

/// Full aux (x) quantum matrix of the one-row monodromy and optionally its
/// derivative in `u`.
fn one_row_full(u: Complex64, p: &ModelParams, hatted: bool, derivative: bool) -> (ComplexMatrix, Option<ComplexMatrix>) {
    let n = p.n_sites + 1;
    let mut m = ComplexMatrix::identity(1 << n);
    let mut dm = derivative.then(|| ComplexMatrix::zeros(1 << n, 1 << n));
    // T = R_0N ... R_01: R_01 acts first.  T^ = R_10 ... R_N0: R_N0 acts first.
    let order: Vec<usize> = if hatted {
        (1..=p.n_sites).rev().collect()
    } else {
        (1..=p.n_sites).collect()
    };
    for j in order {
        let theta = p.inhomogeneities[j - 1];
        let arg = if hatted { u + theta } else { u - theta };
        let r = r_array(arg, p.eta);
        let (first, second) = if hatted { (j, 0) } else { (0, j) };
        if let Some(dm) = dm.as_mut() {
            // d(R M) = R dM + R' M
            apply_two_site_left(dm, n, first, second, &r);
            let mut rm = m.clone();
            apply_two_site_left(&mut rm, n, first, second, &r_derivative_array(arg, p.eta));
            dm.add_scaled(Complex64::new(1.0, 0.0), &rm);
        }
        apply_two_site_left(&mut m, n, first, second, &r);
    }
    (m, dm)
}

/// `T(u) = R_0N(u - theta_N) ... R_01(u - theta_1)` or, when `hatted`,
/// `T^(u) = R_10(u + theta_1) ... R_N0(u + theta_N)`.
pub fn one_row_monodromy(u: Complex64, p: &ModelParams, hatted: bool) -> Result<AuxMonodromy> {
    check_size(p)?;
    Ok(AuxMonodromy::from_full(&one_row_full(u, p, hatted, false).0))
}

/// One-row monodromy together with its derivative in `u`.
pub fn one_row_monodromy_with_derivative(
    u: Complex64,
    p: &ModelParams,
    hatted: bool,
) -> Result<(AuxMonodromy, AuxMonodromy)> {
    check_size(p)?;
    let (m, dm) = one_row_full(u, p, hatted, true);
    Ok((AuxMonodromy::from_full(&m), AuxMonodromy::from_full(&dm.unwrap())))
}

/// Double-row monodromy with an explicit `K^-`.
pub fn double_row_monodromy_with(u: Complex64, p: &ModelParams, kminus: &Mat2) -> Result<AuxMonodromy> {
    let t = one_row_monodromy(u, p, false)?;
    let th = one_row_monodromy(u, p, true)?;
    Ok(t.mul(&th.left_scalar(kminus)))
}

/// `U(u) = T(u) K^-(u) T^(u)`.
pub fn double_row_monodromy(u: Complex64, p: &ModelParams) -> Result<AuxMonodromy> {
    double_row_monodromy_with(u, p, &k_minus_array(u, p))
}

/// `t(u) = tr_0 K^+(u) U(u)`.
pub fn transfer_matrix(u: Complex64, p: &ModelParams) -> Result<ComplexMatrix> {
    transfer_matrix_with(u, p, &k_plus_array(u, p))
}

/// Transfer matrix with a caller-supplied `K^+(u)`.
pub fn transfer_matrix_with(u: Complex64, p: &ModelParams, kplus: &Mat2) -> Result<ComplexMatrix> {
    Ok(double_row_monodromy(u, p)?.trace_with(kplus))
}

/// `t(u)` and `dt/du`, assembled by the product rule over every factor.
pub fn transfer_matrix_with_derivative(u: Complex64, p: &ModelParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (t, dt) = one_row_monodromy_with_derivative(u, p, false)?;
    let (th, dth) = one_row_monodromy_with_derivative(u, p, true)?;
    let km = k_minus_array(u, p);
    let dkm = k_minus_derivative_array(u, p);
    let kp = k_plus_array(u, p);
    let dkp = k_plus_derivative_array(u, p);
    let k_th = th.left_scalar(&km);
    let uu = t.mul(&k_th);
    let du = dt
        .mul(&k_th)
        .add(&t.mul(&th.left_scalar(&dkm)))
        .add(&t.mul(&dth.left_scalar(&km)));
    let value = uu.trace_with(&kp);
    let mut deriv = uu.trace_with(&dkp);
    deriv.add_scaled(Complex64::new(1.0, 0.0), &du.trace_with(&kp));
    Ok((value, deriv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::local::{embed_two_site, k_minus};
    use crate::model::DrawSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Naive oracle: dense embedded products, aux index tracked explicitly.
    fn naive_monodromy(u: Complex64, p: &ModelParams, hatted: bool) -> ComplexMatrix {
        let n = p.n_sites + 1;
        let mut m = ComplexMatrix::identity(1 << n);
        for j in 1..=p.n_sites {
            let th = p.inhomogeneities[j - 1];
            let f = if hatted {
                embed_two_site(&r_array(u + th, p.eta), j, 0, n)
            } else {
                embed_two_site(&r_array(u - th, p.eta), 0, j, n)
            };
            // T = R_0N...R_01 ; T^ = R_10...R_N0
            m = if hatted { m.matmul(&f) } else { f.matmul(&m) };
        }
        m
    }

    #[test]
    fn single_site_at_shift_zero_is_permutation() {
        let mut p = DrawSpec::new(1, 4).draw().unwrap().0;
        p.inhomogeneities[0] = c(0.2, -0.1);
        let t = one_row_monodromy(p.inhomogeneities[0], &p, false).unwrap();
        let full = naive_monodromy(p.inhomogeneities[0], &p, false);
        assert_eq!(t.block(0, 0)[(0, 0)], c(1.0, 0.0));
        assert_eq!(t.block(0, 1)[(1, 0)], c(1.0, 0.0));
        assert_eq!(t.block(1, 0)[(0, 1)], c(1.0, 0.0));
        assert!(full[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn matches_naive_product() {
        let p = DrawSpec::new(3, 9).draw().unwrap().0;
        let u = c(0.3, 0.4);
        for hatted in [false, true] {
            let fast = one_row_monodromy(u, &p, hatted).unwrap();
            let naive = AuxMonodromy::from_full(&naive_monodromy(u, &p, hatted));
            assert!(fast.max_abs_diff(&naive) < 1e-13);
        }
    }

    #[test]
    fn hatted_is_reversed_unhatted_with_negated_inhomogeneities() {
        // T^(u; theta) equals T(u; -theta reversed) up to the site reversal on
        // the quantum space.
        let p = DrawSpec::new(3, 2).draw().unwrap().0;
        let u = c(-0.2, 0.5);
        let th = one_row_monodromy(u, &p, true).unwrap();
        let q = p.with_inhomogeneities(p.inhomogeneities.iter().rev().map(|t| -t).collect());
        let t = one_row_monodromy(u, &q, false).unwrap();
        let n = p.n_sites;
        let d = 1usize << n;
        let rev = |x: usize| (0..n).fold(0, |acc, k| acc | (((x >> k) & 1) << (n - 1 - k)));
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..d {
                    for j in 0..d {
                        let x = th.block(a, b)[(i, j)];
                        let y = t.block(a, b)[(rev(i), rev(j))];
                        assert!((x - y).norm() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = DrawSpec::new(2, 5).draw().unwrap().0;
        let u = c(0.1, 0.2);
        let (_, dt) = transfer_matrix_with_derivative(u, &p).unwrap();
        let h = 1e-5;
        let fd = (&transfer_matrix(u + h, &p).unwrap() - &transfer_matrix(u - h, &p).unwrap()).scale(c(0.5 / h, 0.0));
        assert!(dt.max_abs_diff(&fd) < 1e-7 * dt.max_abs());
    }

    #[test]
    fn identity_k_minus_homogeneous() {
        let mut p = DrawSpec::new(2, 6).draw().unwrap().0;
        p.inhomogeneities = vec![c(0.0, 0.0); 2];
        let u = c(0.4, -0.3);
        let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let uu = double_row_monodromy_with(u, &p, &id).unwrap();
        let prod = one_row_monodromy(u, &p, false)
            .unwrap()
            .mul(&one_row_monodromy(u, &p, true).unwrap());
        assert!(uu.max_abs_diff(&prod) < 1e-13);
        let _ = k_minus(u, &p);
    }

    #[test]
    fn single_site_double_row_by_hand() {
        let p = DrawSpec::new(1, 8).draw().unwrap().0;
        let u = c(0.25, 0.15);
        let uu = double_row_monodromy(u, &p).unwrap();
        // hand composition on the 4-dim aux (x) site space
        let t = embed_two_site(&r_array(u - p.inhomogeneities[0], p.eta), 0, 1, 2);
        let th = embed_two_site(&r_array(u + p.inhomogeneities[0], p.eta), 1, 0, 2);
        let k = k_minus(u, &p).kron(&ComplexMatrix::identity(2));
        let full = t.matmul(&k).matmul(&th);
        assert!(uu.max_abs_diff(&AuxMonodromy::from_full(&full)) < 1e-14);
    }
}
