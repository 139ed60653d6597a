use num_complex::Complex64;

use super::eigen::eig_general_with;
use super::matrix::ComplexMatrix;
use super::NumericSettings;
use crate::error::{Error, Result};

/// Horner evaluation; `coeffs` in ascending degree.
pub fn poly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Monic polynomial with the given roots, ascending degree.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= r * ck;
        }
        c = next;
    }
    c
}

/// All roots of `sum_k coeffs[k] x^k`, from the companion matrix.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    poly_roots_with(coeffs, &NumericSettings::default())
}

pub fn poly_roots_with(coeffs: &[Complex64], settings: &NumericSettings) -> Result<Vec<Complex64>> {
    if coeffs.len() < 2 {
        return Err(Error::Domain("polynomial degree must be at least 1".into()));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Domain("coefficients must be finite".into()));
    }
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if lead.norm() == 0.0 || lead.norm() <= f64::EPSILON * scale {
        return Err(Error::Degeneracy("leading coefficient is zero".into()));
    }
    if n == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let mut comp = ComplexMatrix::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i] / lead;
    }
    let roots = eig_general_with(&comp, settings)?.values;
    Ok(merge_multiple_roots(coeffs, roots))
}

/// Relative radius within which companion eigenvalues may belong to one
/// multiple root; a k-fold root is only resolved to about `eps^(1/k)`.
const CLUSTER_RADIUS: f64 = 1e-4;
/// Taylor coefficients below this fraction of their evaluation scale count as zero.
const MULTIPLICITY_TOL: f64 = 1e-12;

/// Replaces each cluster of eigenvalues that is consistent with a single
/// multiple root by the cluster mean, which is accurate to working precision
/// while the individual members are not.
fn merge_multiple_roots(coeffs: &[Complex64], mut roots: Vec<Complex64>) -> Vec<Complex64> {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let radius = CLUSTER_RADIUS * roots[i].norm().max(1.0);
        let group: Vec<usize> = (i..n)
            .filter(|&j| !used[j] && (roots[j] - roots[i]).norm() < radius)
            .collect();
        if group.len() < 2 {
            continue;
        }
        let mean = group.iter().map(|&j| roots[j]).sum::<Complex64>() / group.len() as f64;
        let taylor = taylor_shift(coeffs, mean);
        let magnitudes: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
        let scales = taylor_shift(&magnitudes, Complex64::new(mean.norm(), 0.0));
        if taylor[..group.len()]
            .iter()
            .zip(&scales)
            .all(|(t, s)| t.norm() <= MULTIPLICITY_TOL * s.re)
        {
            for &j in &group {
                roots[j] = mean;
                used[j] = true;
            }
        }
    }
    roots
}

/// Coefficients of `p(x0 + y)` in ascending powers of `y`.
fn taylor_shift(coeffs: &[Complex64], x0: Complex64) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let t = c[j + 1];
            c[j] += x0 * t;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn quadratic() {
        let r = poly_roots(&[c(-1.0), c(0.0), c(1.0)]).unwrap();
        assert!((r[0] - c(-1.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn triple_root_within_cluster_tolerance() {
        // (x - 2)^3
        let r = poly_roots(&[c(-8.0), c(12.0), c(-6.0), c(1.0)]).unwrap();
        assert_eq!(r.len(), 3);
        for z in &r {
            assert!((z - c(2.0)).norm() < 1e-5, "{z}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(poly_roots(&[c(1.0)]), Err(Error::Domain(_))));
        assert!(matches!(poly_roots(&[c(1.0), c(2.0), c(0.0)]), Err(Error::Degeneracy(_))));
    }

    #[test]
    fn close_but_distinct_roots_are_kept_apart() {
        let p = poly_from_roots(&[c(2.0), c(2.0 + 1e-4), c(-1.0)]);
        let mut r = poly_roots(&p).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[1] - c(2.0)).norm() < 1e-9, "{}", r[1]);
        assert!((r[2] - c(2.0 + 1e-4)).norm() < 1e-9, "{}", r[2]);
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        // p(x) = x^2 at x0 = 3: 9 + 6y + y^2
        let t = taylor_shift(&[c(0.0), c(0.0), c(1.0)], c(3.0));
        assert_eq!(t, vec![c(9.0), c(6.0), c(1.0)]);
    }

    #[test]
    fn reconstruction() {
        let roots = [c(1.0), Complex64::new(0.5, -2.0), c(-3.0)];
        let p = poly_from_roots(&roots);
        for r in roots {
            assert!(poly_eval(&p, r).norm() < 1e-12);
        }
    }
}
