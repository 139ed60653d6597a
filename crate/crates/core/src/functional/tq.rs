use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};
use crate::model::ModelParams;

const TWO: Complex64 = Complex64::new(2.0, 0.0);

/// Where a set of Bethe roots came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TqSource {
    EdFit,
    Newton,
    External,
}

/// Bethe roots parameterizing one eigenvalue through the T-Q relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TQSolution {
    pub roots: Vec<Complex64>,
    pub c_value: Complex64,
    /// `|BAE_j| / scale_j` for the stored roots.
    pub bae_residuals: Vec<f64>,
    pub source: TqSource,
}

impl TQSolution {
    /// Wraps externally supplied roots, computing their BAE residuals.
    pub fn from_roots(roots: Vec<Complex64>, p: &ModelParams, source: TqSource) -> TQSolution {
        let bae_residuals = bae_residual_relative(&roots, p);
        TQSolution {
            roots,
            c_value: c_const(p),
            bae_residuals,
            source,
        }
    }

    pub fn max_bae_residual(&self) -> f64 {
        self.bae_residuals.iter().cloned().fold(0.0, f64::max)
    }
}

pub(crate) fn abar_g<F: Field>(u: F, p: &ModelParams) -> F {
    let eta = F::constant(p.eta);
    let s2 = F::constant(p.eta.sinh() * p.eta.sinh());
    p.inhomogeneities.iter().fold(F::constant(Complex64::new(1.0, 0.0)), |acc, &th| {
        let th = F::constant(th);
        acc * (u - th + eta).sinh() * (u + th + eta).sinh() / s2
    })
}

pub(crate) fn a_g<F: Field>(u: F, p: &ModelParams) -> F {
    let eta = F::constant(p.eta);
    let two = F::constant(TWO);
    F::constant(Complex64::new(-4.0, 0.0)) * (two * u + two * eta).sinh() / (two * u + eta).sinh()
        * (u - F::constant(p.alpha_minus)).sinh()
        * (u - F::constant(p.beta_minus)).cosh()
        * (u - F::constant(p.alpha_plus)).sinh()
        * (u - F::constant(p.beta_plus)).cosh()
        * abar_g(u, p)
}

pub(crate) fn d_g<F: Field>(u: F, p: &ModelParams) -> F {
    a_g(-u - F::constant(p.eta), p)
}

pub(crate) fn q_g<F: Field>(u: F, roots: &[F], eta: Complex64) -> F {
    let e = F::constant(eta);
    let s2 = F::constant(eta.sinh() * eta.sinh());
    roots
        .iter()
        .fold(F::constant(Complex64::new(1.0, 0.0)), |acc, &l| acc * (u - l).sinh() * (u + l + e).sinh() / s2)
}

/// `2 c sinh(2u) sinh(2u + 2 eta) Abar(u) Abar(-u - eta)`.
pub(crate) fn inhomogeneous_term_g<F: Field>(u: F, p: &ModelParams) -> F {
    let eta = F::constant(p.eta);
    let two = F::constant(TWO);
    two * F::constant(c_const(p)) * (two * u).sinh() * (two * u + two * eta).sinh() * abar_g(u, p) * abar_g(-u - eta, p)
}

/// `Abar(u) = prod_l sinh(u - theta_l + eta) sinh(u + theta_l + eta) / sinh^2 eta`.
pub fn abar_func(u: Complex64, p: &ModelParams) -> Complex64 {
    abar_g(u, p)
}

const DENOMINATOR_GUARD: f64 = 1e-12;

/// `a(u) = -4 sinh(2u+2eta)/sinh(2u+eta) sinh(u-alpha_-) cosh(u-beta_-) sinh(u-alpha_+) cosh(u-beta_+) Abar(u)`.
pub fn a_func(u: Complex64, p: &ModelParams) -> Result<Complex64> {
    if (u * 2.0 + p.eta).sinh().norm() <= DENOMINATOR_GUARD {
        return Err(Error::Singularity("sinh(2u + eta) vanishes in a(u)".into()));
    }
    Ok(a_g(u, p))
}

/// `d(u) = a(-u - eta)`.
pub fn d_func(u: Complex64, p: &ModelParams) -> Result<Complex64> {
    a_func(-u - p.eta, p)
}

/// `c = cosh(alpha_- + beta_- + alpha_+ + beta_+ + (1 + N) eta) - cosh(theta_- - theta_+)`.
pub fn c_const(p: &ModelParams) -> Complex64 {
    let n = p.n_sites as f64;
    (p.alpha_minus + p.beta_minus + p.alpha_plus + p.beta_plus + p.eta * (1.0 + n)).cosh()
        - (p.theta_minus - p.theta_plus).cosh()
}

/// `Q(u) = prod_j sinh(u - lambda_j) sinh(u + lambda_j + eta) / sinh^2 eta`.
pub fn q_func(u: Complex64, roots: &[Complex64], eta: Complex64) -> Complex64 {
    q_g(u, roots, eta)
}

/// The same Q written as a polynomial in `x = cosh(2u + eta)`:
/// `prod_j (cosh(2u+eta) - cosh(2 lambda_j + eta)) / (2 sinh^2 eta)`.
pub fn q_func_x(u: Complex64, roots: &[Complex64], eta: Complex64) -> Complex64 {
    let x = (u * 2.0 + eta).cosh();
    let s = eta.sinh() * eta.sinh() * 2.0;
    roots
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &l| acc * (x - (l * 2.0 + eta).cosh()) / s)
}

/// The three terms of the T-Q relation multiplied through by `Q(u)`.
pub fn tq_terms(u: Complex64, roots: &[Complex64], p: &ModelParams) -> [Complex64; 3] {
    [
        a_g(u, p) * q_g(u - p.eta, roots, p.eta),
        d_g(u, p) * q_g(u + p.eta, roots, p.eta),
        inhomogeneous_term_g(u, p),
    ]
}

/// `Lambda(u) = a Q(u-eta)/Q + d Q(u+eta)/Q + 2c sinh 2u sinh(2u+2eta) Abar(u) Abar(-u-eta)/Q`.
pub fn lambda_tq(u: Complex64, tq: &TQSolution, p: &ModelParams) -> Result<Complex64> {
    let q = q_func(u, &tq.roots, p.eta);
    if q.norm() <= DENOMINATOR_GUARD {
        return Err(Error::Pole);
    }
    if (u * 2.0 + p.eta).sinh().norm() <= DENOMINATOR_GUARD {
        return Err(Error::Singularity("sinh(2u + eta) vanishes".into()));
    }
    let [t1, t2, _] = tq_terms(u, &tq.roots, p);
    let t3 = Complex64::new(2.0, 0.0)
        * tq.c_value
        * (u * 2.0).sinh()
        * (u * 2.0 + p.eta * 2.0).sinh()
        * abar_func(u, p)
        * abar_func(-u - p.eta, p);
    Ok((t1 + t2 + t3) / q)
}

/// Generic form of the Bethe equation for root `j`; returns the three summands.
pub(crate) fn bae_terms_g<F: Field>(j: usize, roots: &[F], p: &ModelParams) -> [F; 3] {
    let l = roots[j];
    let e = F::constant(p.eta);
    [
        a_g(l, p) * q_g(l - e, roots, p.eta),
        d_g(l, p) * q_g(l + e, roots, p.eta),
        inhomogeneous_term_g(l, p),
    ]
}

/// `a(l_j) Q(l_j - eta) + d(l_j) Q(l_j + eta) + 2c sinh 2l_j sinh(2l_j + 2eta) Abar(l_j) Abar(-l_j - eta)`.
pub fn bae_residual(roots: &[Complex64], p: &ModelParams) -> Vec<Complex64> {
    (0..roots.len())
        .map(|j| bae_terms_g(j, roots, p).iter().sum())
        .collect()
}

/// Residual of each Bethe equation together with its scale, the largest of
/// the three summands.
pub fn bae_residual_scaled(roots: &[Complex64], p: &ModelParams) -> Vec<(Complex64, f64)> {
    (0..roots.len())
        .map(|j| {
            let t = bae_terms_g(j, roots, p);
            let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
            (t.iter().sum(), scale)
        })
        .collect()
}

pub fn bae_residual_relative(roots: &[Complex64], p: &ModelParams) -> Vec<f64> {
    bae_residual_scaled(roots, p)
        .into_iter()
        .map(|(r, s)| if s > 0.0 { r.norm() / s } else { r.norm() })
        .collect()
}

/// Closed scalar value of `t(0)`.
pub fn t_zero_scalar(p: &ModelParams) -> Complex64 {
    let se2 = p.eta.sinh() * p.eta.sinh();
    let prod = p
        .inhomogeneities
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &th| acc * (p.eta - th).sinh() * (p.eta + th).sinh() / se2);
    Complex64::new(-8.0, 0.0)
        * p.alpha_minus.sinh()
        * p.beta_minus.cosh()
        * p.alpha_plus.sinh()
        * p.beta_plus.cosh()
        * p.eta.cosh()
        * prod
}

/// Closed scalar value of `t(i pi / 2)`.
pub fn t_half_period_scalar(p: &ModelParams) -> Complex64 {
    let ip2 = Complex64::new(0.0, std::f64::consts::FRAC_PI_2);
    let se2 = p.eta.sinh() * p.eta.sinh();
    let prod = p.inhomogeneities.iter().fold(Complex64::new(1.0, 0.0), |acc, &th| {
        acc * (ip2 + th + p.eta).sinh() * (ip2 + th - p.eta).sinh() / se2
    });
    Complex64::new(-8.0, 0.0)
        * p.alpha_minus.cosh()
        * p.beta_minus.sinh()
        * p.alpha_plus.cosh()
        * p.beta_plus.sinh()
        * p.eta.cosh()
        * prod
}

/// Leading asymptotic term `-cosh(theta_- - theta_+) e^{s[(2N+4)u + (N+2)eta]} / (2^{2N+1} sinh^{2N} eta)`
/// with `s = +1` for `Re u -> +inf` and `-1` for `Re u -> -inf`.
pub fn asymptotic_leading(u: Complex64, p: &ModelParams, sign: f64) -> Complex64 {
    let n = p.n_sites as i32;
    let exponent = (u * (2.0 * n as f64 + 4.0) + p.eta * (n as f64 + 2.0)) * sign;
    -(p.theta_minus - p.theta_plus).cosh() * exponent.exp() / (2f64.powi(2 * n + 1) * p.eta.sinh().powi(2 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DrawSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn a_and_d() {
        let p = DrawSpec::new(2, 1).draw().unwrap().0;
        let u = c(0.3, -0.2);
        assert_eq!(d_func(u, &p).unwrap(), a_func(-u - p.eta, &p).unwrap());
        assert!(a_func(p.alpha_plus, &p).unwrap().norm() < 1e-14);
        let z = p.beta_plus + c(0.0, std::f64::consts::FRAC_PI_2);
        assert!(a_func(z, &p).unwrap().norm() < 1e-13);
    }

    #[test]
    fn abar_properties() {
        let p = DrawSpec::new(3, 2).draw().unwrap().0;
        assert!(abar_func(p.inhomogeneities[1] - p.eta, &p).norm() < 1e-14);
        let u = c(0.4, 0.1);
        assert!((abar_func(u, &p) - abar_func(-u - p.eta * 2.0, &p)).norm() < 1e-13);
        let q = p.with_inhomogeneities(vec![c(0.0, 0.0)]);
        let expect = (u + p.eta).sinh().powi(2) / p.eta.sinh().powi(2);
        assert!((abar_func(u, &q) - expect).norm() < 1e-14);
    }

    #[test]
    fn c_constant() {
        let mut p = DrawSpec::new(2, 3).draw().unwrap().0;
        let c0 = c_const(&p);
        p.theta_minus += c(0.3, 0.2);
        p.theta_plus += c(0.3, 0.2);
        assert!((c_const(&p) - c0).norm() < 1e-14);
        p.theta_minus = p.theta_plus + p.alpha_minus + p.beta_minus + p.alpha_plus + p.beta_plus + p.eta * 3.0;
        assert!(c_const(&p).norm() < 1e-13);
    }

    #[test]
    fn q_forms_agree() {
        let eta = c(0.5, 0.1);
        let roots = [c(0.2, 0.3), c(-0.4, 0.1)];
        assert!(q_func(roots[0], &roots, eta).norm() < 1e-15);
        for u in [c(0.1, 0.7), c(-1.2, 0.3)] {
            assert!((q_func(-u - eta, &roots, eta) - q_func(u, &roots, eta)).norm() < 1e-13);
            assert!((q_func_x(u, &roots, eta) - q_func(u, &roots, eta)).norm() < 1e-13);
        }
    }

    #[test]
    fn pole_is_reported() {
        let p = DrawSpec::new(1, 1).draw().unwrap().0;
        let tq = TQSolution::from_roots(vec![c(0.1, 0.2)], &p, TqSource::External);
        assert!(matches!(lambda_tq(c(0.1, 0.2), &tq, &p), Err(Error::Pole)));
    }

    #[test]
    fn bae_invariant_under_root_reflection() {
        let p = DrawSpec::new(2, 4).draw().unwrap().0;
        let roots = vec![c(0.3, 0.2), c(-0.1, 0.5)];
        let mut flipped = roots.clone();
        flipped[0] = -roots[0] - p.eta;
        let a = bae_residual(&roots, &p);
        let b = bae_residual(&flipped, &p);
        assert!((a[1] - b[1]).norm() < 1e-12 * a[1].norm().max(1.0));
        // the reflected equation is the original one evaluated at the mirror point
        assert!((a[0] - b[0]).norm() < 1e-12 * a[0].norm().max(1.0));
    }
}
