use num_complex::Complex64;

use super::state::{CoStateVector, StateVector};
use crate::error::{Error, Result};
use crate::gauge::{gauged_double_row_left, gv, GaugeIndex, GaugeKind, GAUGE_GUARD};
use crate::model::ModelParams;
use crate::numerics::kron_vec;

/// `P(m) = prod_{l=1..N} sinh((m - l) eta)`, the zero-prone part of the
/// left-vacuum prefactor.
pub fn vacuum_prefactor_product(m: Complex64, p: &ModelParams) -> Complex64 {
    (1..=p.n_sites).map(|l| ((m - l as f64) * p.eta).sinh()).product()
}

/// `|alpha + m> = X_{m+N}(theta_1) ⊗ X_{m+N-1}(theta_2) ⊗ ... ⊗ X_{m+1}(theta_N)`.
pub fn right_vacuum(alpha: Complex64, m: Complex64, p: &ModelParams) -> StateVector {
    let n = p.n_sites;
    let mut v = vec![Complex64::new(1.0, 0.0)];
    for (i, &th) in p.inhomogeneities.iter().enumerate() {
        let k = (n - i) as f64;
        v = kron_vec(&v, &gv(GaugeKind::X, m + k, th, alpha, p.eta));
    }
    StateVector::new(v)
}

/// `<alpha + m| = 2^N e^{-sum theta - alpha N eta} P(m) Xbar_{m-N}(theta_1) ⊗ ... ⊗ Xbar_{m-1}(theta_N)`.
pub fn left_vacuum(alpha: Complex64, m: Complex64, p: &ModelParams) -> Result<CoStateVector> {
    let n = p.n_sites;
    for l in 1..=n {
        let s = ((m - l as f64) * p.eta).sinh();
        if s.norm() <= GAUGE_GUARD {
            return Err(Error::NonGeneric(format!(
                "left vacuum prefactor sinh((m - {l}) eta) = {:.3e} at m = {m}",
                s.norm()
            )));
        }
    }
    let theta_sum: Complex64 = p.inhomogeneities.iter().sum();
    let pref = (-theta_sum - alpha * p.eta * n as f64).exp() * 2f64.powi(n as i32) * vacuum_prefactor_product(m, p);
    let mut v = vec![pref];
    for (i, &th) in p.inhomogeneities.iter().enumerate() {
        let k = (i + 1) as f64 - n as f64 - 1.0;
        v = kron_vec(&v, &gv(GaugeKind::Xbar, m + k, th, alpha, p.eta));
    }
    Ok(CoStateVector::new(v))
}

fn check_subset(subset: &[usize], n: usize) -> Result<()> {
    let ok = subset.iter().all(|&j| (1..=n).contains(&j)) && subset.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "subset {subset:?} must be strictly increasing within 1..={n}"
        )))
    }
}

/// `<alpha, m; theta_{p_1} ... theta_{p_n}| = <alpha + m| Dbar_m(-theta_{p_1}) ... Dbar_m(-theta_{p_n})`
/// for a 1-based increasing subset.
pub fn left_basis_state(g: &GaugeIndex, subset: &[usize], p: &ModelParams) -> Result<CoStateVector> {
    check_subset(subset, p.n_sites)?;
    let mut cov = left_vacuum(g.alpha, g.m, p)?;
    for &j in subset {
        let ops = gauged_double_row_left(g, -p.inhomogeneities[j - 1], p)?;
        cov = cov.apply(ops.block(1, 1));
    }
    Ok(cov)
}

/// All `2^N` increasing subsets of `1..=n`, ordered by bitmask.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (1..=n).filter(|j| mask & (1 << (j - 1)) != 0).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DrawSpec;
    use crate::numerics::{collinearity_defect, ComplexMatrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_site_vacua() {
        let (p, _) = DrawSpec::new(1, 3).draw().unwrap();
        let (a, m) = (c(0.2, -0.1), c(0.7, 0.4));
        let th = p.inhomogeneities[0];
        let r = right_vacuum(a, m, &p);
        let expect = (-(th + (a + m + 1.0) * p.eta)).exp();
        assert!((r.amplitudes[0] - expect).norm() < 1e-14 * expect.norm());
        assert_eq!(r.amplitudes[1], c(1.0, 0.0));
        let l = left_vacuum(a, m, &p).unwrap();
        let pref = (-th - a * p.eta).exp() * 2.0 * ((m - 1.0) * p.eta).sinh();
        let xb = gv(GaugeKind::Xbar, m - 1.0, th, a, p.eta);
        for i in 0..2 {
            assert!((l.amplitudes[i] - pref * xb[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn vacua_depend_on_sum_only() {
        let (p, _) = DrawSpec::new(3, 12).draw().unwrap();
        let (a, m, d) = (c(0.3, 0.2), c(0.8, -0.3), c(0.45, 0.15));
        let l1 = left_vacuum(a, m, &p).unwrap();
        let l2 = left_vacuum(a + d, m - d, &p).unwrap();
        assert!(l1.max_abs_diff(&l2) < 1e-12 * l1.max_abs());
        let r1 = right_vacuum(a, m, &p);
        let r2 = right_vacuum(a + d, m - d, &p);
        assert!(r1.collinearity_defect(&r2) < 1e-12);
    }

    #[test]
    fn basis_spans_dual_space() {
        let (p, _) = DrawSpec::new(2, 14).draw().unwrap();
        let g = GaugeIndex::new(c(0.1, 0.3), c(0.6, -0.2));
        let rows: Vec<Vec<Complex64>> = subsets(2)
            .iter()
            .map(|s| left_basis_state(&g, s, &p).unwrap().amplitudes)
            .collect();
        assert_eq!(rows[0], left_vacuum(g.alpha, g.m, &p).unwrap().amplitudes);
        let m = ComplexMatrix::from_vec(4, 4, rows.concat()).unwrap();
        let det = crate::numerics::determinant(&m).unwrap();
        let scale: f64 = rows.iter().map(|r| crate::numerics::vec_norm(r)).product();
        assert!(det.norm() > 1e-6 * scale);
        assert!(collinearity_defect(&rows[1], &rows[2]) > 1e-3);
    }

    #[test]
    fn bad_subset_and_zero_prefactor() {
        let (p, _) = DrawSpec::new(2, 15).draw().unwrap();
        let g = GaugeIndex::new(c(0.1, 0.3), c(0.6, -0.2));
        assert!(left_basis_state(&g, &[2, 1], &p).is_err());
        assert!(left_basis_state(&g, &[3], &p).is_err());
        assert!(matches!(left_vacuum(g.alpha, c(2.0, 0.0), &p), Err(Error::NonGeneric(_))));
    }
}
