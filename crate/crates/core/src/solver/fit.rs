use std::f64::consts::PI;

use num_complex::Complex64;

use super::spectrum::SpectrumEntry;
use crate::error::{Error, Result};
use crate::functional::{
    a_func, bae_residual_scaled, bae_terms_g, c_const, d_func, q_func, q_func_x, Dual, Field, TQSolution, TqSource,
};
use crate::model::ModelParams;
use crate::numerics::{lstsq, lu_solve, poly_roots, ComplexMatrix};

const NEWTON_ITERATIONS: usize = 50;
const NEWTON_TOLERANCE: f64 = 1e-10;
const NEWTON_ENTRY_LIMIT: f64 = 1e-2;
const FIT_TOLERANCE: f64 = 1e-6;
const C_GUARD: f64 = 1e-10;

/// Sample points `u_s = 0.31 s + 0.17 i s`, `s = 1..=4N+8`.
pub fn fit_sample_points(n_sites: usize) -> Vec<Complex64> {
    (1..=4 * n_sites + 8)
        .map(|s| Complex64::new(0.31 * s as f64, 0.17 * s as f64))
        .collect()
}

/// Confirms that the product form of `Q` and its polynomial form in
/// `x = cosh(2u + eta)` agree before the latter is used as the fit ansatz.
fn check_x_form(p: &ModelParams) -> Result<()> {
    let roots: Vec<Complex64> = (0..p.n_sites)
        .map(|j| Complex64::new(0.13 + 0.21 * j as f64, -0.17 + 0.11 * j as f64))
        .collect();
    for u in [Complex64::new(0.29, 0.47), Complex64::new(-0.61, 0.08), Complex64::new(0.05, -0.83)] {
        let a = q_func(u, &roots, p.eta);
        let b = q_func_x(u, &roots, p.eta);
        if (a - b).norm() > 1e-10 * a.norm().max(b.norm()) {
            return Err(Error::FitFailure(format!("x-polynomial form of Q disagrees at u = {u}")));
        }
    }
    Ok(())
}

/// Fits `Q` to tabulated values `Lambda(u_s)` by linear least squares in the
/// coefficients of `Q` as a polynomial in `x = cosh(2u + eta)`, then extracts
/// and refines the roots.
pub fn fit_q_from_samples(samples: &[(Complex64, Complex64)], p: &ModelParams) -> Result<TQSolution> {
    let c = c_const(p);
    if c.norm() <= C_GUARD {
        return Err(Error::DegenerateCase(c.norm()));
    }
    let n = p.n_sites;
    if samples.len() < n + 1 {
        return Err(Error::Dimension(format!("{} samples for {n} unknowns", samples.len())));
    }
    check_x_form(p)?;
    let eta = p.eta;
    let x = |w: Complex64| (w * 2.0 + eta).cosh();
    let q_top = (eta.sinh() * eta.sinh() * 2.0).powi(-(n as i32));
    let mut a = ComplexMatrix::zeros(samples.len(), n.max(1));
    let mut b = vec![Complex64::new(0.0, 0.0); samples.len()];
    for (s, &(u, lam)) in samples.iter().enumerate() {
        let (au, du) = (a_func(u, p)?, d_func(u, p)?);
        let (x0, xm, xp) = (x(u), x(u - eta), x(u + eta));
        let column = |k: i32| lam * x0.powi(k) - au * xm.powi(k) - du * xp.powi(k);
        let inh = Complex64::new(2.0, 0.0)
            * c
            * (u * 2.0).sinh()
            * (u * 2.0 + eta * 2.0).sinh()
            * crate::functional::abar_func(u, p)
            * crate::functional::abar_func(-u - eta, p);
        let row: Vec<Complex64> = (0..n as i32).map(column).collect();
        let rhs = inh - column(n as i32) * q_top;
        let scale = row.iter().map(|z| z.norm()).fold(rhs.norm(), f64::max);
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::FitFailure(format!("sample row at u = {u} is not finite")));
        }
        for (k, z) in row.iter().enumerate() {
            a[(s, k)] = z / scale;
        }
        b[s] = rhs / scale;
    }
    let coeffs: Vec<Complex64> = if n == 0 {
        vec![Complex64::new(1.0, 0.0)]
    } else {
        let sol = lstsq(&a, &b)?;
        let b_norm = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let misfit = sol.residual_norm / b_norm.max(f64::MIN_POSITIVE);
        if misfit > FIT_TOLERANCE {
            return Err(Error::FitFailure(format!("least-squares misfit {misfit:e}")));
        }
        let mut c = sol.x;
        c.push(q_top);
        c
    };
    let xs = if n == 0 { Vec::new() } else { poly_roots(&coeffs)? };
    let roots: Vec<Complex64> = xs.iter().map(|&xj| (xj.acosh() - eta) / 2.0).collect();
    let refined = newton_refine(&canonicalize_roots(&roots, eta), p)?;
    Ok(TQSolution::from_roots(canonicalize_roots(&refined, eta), p, TqSource::EdFit))
}

/// Samples the entry's eigenvalue at the fit points and fits `Q`.
pub fn fit_q_from_lambda(entry: &SpectrumEntry, p: &ModelParams) -> Result<TQSolution> {
    let samples = fit_sample_points(p.n_sites)
        .into_iter()
        .map(|u| Ok((u, entry.lambda(u, p)?)))
        .collect::<Result<Vec<_>>>()?;
    fit_q_from_samples(&samples, p)
}

fn merit(roots: &[Complex64], p: &ModelParams) -> (Vec<Complex64>, f64) {
    let scaled = bae_residual_scaled(roots, p);
    let worst = scaled
        .iter()
        .map(|(r, s)| if *s > 0.0 { r.norm() / s } else { r.norm() })
        .fold(0.0, f64::max);
    (scaled.into_iter().map(|(r, _)| r).collect(), if worst.is_finite() { worst } else { f64::INFINITY })
}

/// `d BAE_j / d lambda_k` by forward-mode differentiation of every summand.
fn jacobian(roots: &[Complex64], p: &ModelParams) -> ComplexMatrix {
    let n = roots.len();
    let mut jac = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let duals: Vec<Dual> = roots
            .iter()
            .enumerate()
            .map(|(i, &r)| if i == k { Dual::variable(r) } else { Dual::constant(r) })
            .collect();
        for j in 0..n {
            let terms = bae_terms_g(j, &duals, p);
            jac[(j, k)] = terms.iter().map(|t| t.d).sum();
        }
    }
    jac
}

/// Damped Newton iteration on the Bethe equations with a backtracking line
/// search that never accepts a step increasing the worst relative residual.
pub fn newton_refine(roots: &[Complex64], p: &ModelParams) -> Result<Vec<Complex64>> {
    let mut current = roots.to_vec();
    let (mut f, mut best) = merit(&current, p);
    if best <= NEWTON_TOLERANCE {
        return Ok(current);
    }
    if best > NEWTON_ENTRY_LIMIT {
        return Err(Error::Precondition(format!(
            "initial Bethe-equation residual {best:e} is too large for refinement"
        )));
    }
    for _ in 0..NEWTON_ITERATIONS {
        let rhs: Vec<Complex64> = f.iter().map(|z| -z).collect();
        let step = match lu_solve(&jacobian(&current, p), &rhs) {
            Ok(s) => s,
            Err(_) => break,
        };
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-6 {
            let trial: Vec<Complex64> = current.iter().zip(&step).map(|(r, s)| r + s * t).collect();
            let (ft, mt) = merit(&trial, p);
            if mt < best {
                current = trial;
                f = ft;
                best = mt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if best <= NEWTON_TOLERANCE {
            return Ok(current);
        }
        if !accepted {
            break;
        }
    }
    Err(Error::RefineFailure {
        best: current,
        residual: best,
    })
}

fn reduce_imaginary(z: Complex64) -> Complex64 {
    let k = ((z.im - PI / 2.0) / PI).ceil();
    Complex64::new(z.re, z.im - PI * k)
}

/// Canonical representative of the orbit `{lambda, -lambda - eta}` modulo
/// `i pi`: imaginary part in `(-pi/2, pi/2]` and `Re(2 lambda + eta) >= 0`
/// (ties broken towards the larger imaginary part); sorted by `(Re, Im)`.
pub fn canonicalize_roots(roots: &[Complex64], eta: Complex64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = roots
        .iter()
        .map(|&l| {
            let a = reduce_imaginary(l);
            let b = reduce_imaginary(-l - eta);
            let ra = (a * 2.0 + eta).re;
            if ra.abs() <= 1e-12 {
                if a.im >= b.im {
                    a
                } else {
                    b
                }
            } else if ra > 0.0 {
                a
            } else {
                b
            }
        })
        .collect();
    out.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DrawSpec;
    use crate::solver::spectrum_ed;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let eta = c(0.5, 0.1);
        let (l, m) = (c(0.3, 1.2), c(-0.7, -0.4));
        let a = canonicalize_roots(&[l, m], eta);
        let b = canonicalize_roots(&[-l - eta, m + c(0.0, PI)], eta);
        assert!((a[0] - b[0]).norm() < 1e-12 && (a[1] - b[1]).norm() < 1e-12);
        assert_eq!(canonicalize_roots(&a, eta), a);
        for u in [c(0.1, 0.2), c(-0.4, 0.9), c(1.1, -0.3)] {
            let q0 = q_func(u, &[l, m], eta);
            let q1 = q_func(u, &a, eta);
            assert!((q0 - q1).norm() < 1e-12 * q0.norm().max(1.0));
        }
    }

    #[test]
    fn single_site_fit() {
        let (p, _) = DrawSpec::new(1, 41).draw().unwrap();
        let spec = spectrum_ed(&p).unwrap();
        for e in &spec {
            let tq = fit_q_from_lambda(e, &p).unwrap();
            assert_eq!(tq.roots.len(), 1);
            assert!(tq.max_bae_residual() < 1e-8);
        }
    }

    #[test]
    fn newton_recovers_perturbed_roots() {
        let (p, _) = DrawSpec::new(2, 42).draw().unwrap();
        let spec = spectrum_ed(&p).unwrap();
        let tq = fit_q_from_lambda(&spec[1], &p).unwrap();
        let same = newton_refine(&tq.roots, &p).unwrap();
        assert_eq!(same, tq.roots);
        let perturbed: Vec<Complex64> = tq.roots.iter().map(|r| r + c(1e-4, -1e-4)).collect();
        let back = canonicalize_roots(&newton_refine(&perturbed, &p).unwrap(), p.eta);
        for (a, b) in back.iter().zip(&tq.roots) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn degenerate_c_is_rejected() {
        let (mut p, _) = DrawSpec::new(1, 43).draw().unwrap();
        // choose theta_+ so that cosh(theta_- - theta_+) matches the first cosh
        let s = p.alpha_minus + p.beta_minus + p.alpha_plus + p.beta_plus + p.eta * 2.0;
        p.theta_plus = p.theta_minus - s;
        let err = fit_q_from_samples(&[(c(0.3, 0.1), c(1.0, 0.0)); 12], &p).unwrap_err();
        assert!(matches!(err, Error::DegenerateCase(_)));
    }
}
