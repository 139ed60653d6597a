use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the open chain.
///
/// `alpha/beta/theta_minus` enter `K^-`, the `_plus` triple enters `K^+`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub eta: Complex64,
    pub alpha_minus: Complex64,
    pub beta_minus: Complex64,
    pub theta_minus: Complex64,
    pub alpha_plus: Complex64,
    pub beta_plus: Complex64,
    pub theta_plus: Complex64,
    pub n_sites: usize,
    pub inhomogeneities: Vec<Complex64>,
}

pub const ETA_GUARD: f64 = 1e-6;
pub const BOUNDARY_GUARD: f64 = 1e-8;
pub const INHOMOGENEITY_GUARD: f64 = 1e-8;

impl ModelParams {
    /// Checks the invariants every construction relies on: `sinh(eta)` and the
    /// boundary denominators of the Hamiltonian are nonzero, and the number of
    /// inhomogeneities matches `n_sites`.
    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::Domain("n_sites must be positive".into()));
        }
        if self.inhomogeneities.len() != self.n_sites {
            return Err(Error::Dimension(format!(
                "{} inhomogeneities for {} sites",
                self.inhomogeneities.len(),
                self.n_sites
            )));
        }
        let all = [
            self.eta,
            self.alpha_minus,
            self.beta_minus,
            self.theta_minus,
            self.alpha_plus,
            self.beta_plus,
            self.theta_plus,
        ];
        if all
            .iter()
            .chain(self.inhomogeneities.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if self.eta.sinh().norm() <= ETA_GUARD {
            return Err(Error::Singularity("sinh(eta) vanishes".into()));
        }
        if (self.alpha_minus.sinh() * self.beta_minus.cosh()).norm() <= BOUNDARY_GUARD {
            return Err(Error::NonGeneric("sinh(alpha_minus) cosh(beta_minus) vanishes".into()));
        }
        if (self.alpha_plus.sinh() * self.beta_plus.cosh()).norm() <= BOUNDARY_GUARD {
            return Err(Error::NonGeneric("sinh(alpha_plus) cosh(beta_plus) vanishes".into()));
        }
        Ok(())
    }

    /// Inhomogeneities pairwise distinct, and distinct under `theta_i -> -theta_j`
    /// and `theta_i -> theta_j +- eta`.
    pub fn check_genericity(&self) -> Result<()> {
        let th = &self.inhomogeneities;
        for i in 0..th.len() {
            for j in 0..th.len() {
                if i != j && (th[i] - th[j]).norm() <= INHOMOGENEITY_GUARD {
                    return Err(Error::NonGeneric(format!("theta_{} = theta_{}", i + 1, j + 1)));
                }
                if i != j && (th[i] + th[j]).norm() <= INHOMOGENEITY_GUARD {
                    return Err(Error::NonGeneric(format!("theta_{} = -theta_{}", i + 1, j + 1)));
                }
                if (th[i] - th[j] - self.eta).norm() <= INHOMOGENEITY_GUARD
                    || (th[i] - th[j] + self.eta).norm() <= INHOMOGENEITY_GUARD
                {
                    return Err(Error::NonGeneric(format!(
                        "theta_{} = theta_{} +- eta",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.inhomogeneities.iter().all(|t| *t == Complex64::new(0.0, 0.0))
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    /// Same boundary data with new inhomogeneities.
    pub fn with_inhomogeneities(&self, theta: Vec<Complex64>) -> ModelParams {
        ModelParams {
            n_sites: theta.len(),
            inhomogeneities: theta,
            ..self.clone()
        }
    }

    /// Parameters of the `K^-` matrix that `K^+` is obtained from:
    /// `(alpha_minus, beta_minus, theta_minus) -> (-alpha_plus, -beta_plus, theta_plus)`.
    pub fn plus_as_minus(&self) -> (Complex64, Complex64, Complex64) {
        (-self.alpha_plus, -self.beta_plus, self.theta_plus)
    }
}

/// Ranges for a seeded random draw. Real and imaginary parts are drawn
/// uniformly; boundary parameters are `center + spread * (U(-1,1) + i U(-1,1))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DrawSpec {
    pub n_sites: usize,
    pub seed: u64,
    pub eta_re: (f64, f64),
    pub eta_im: (f64, f64),
    pub boundary_center: f64,
    pub boundary_spread: f64,
    pub inhomogeneity_spread: f64,
    /// Draw all inhomogeneities as zero.
    pub homogeneous: bool,
}

impl Default for DrawSpec {
    fn default() -> Self {
        DrawSpec {
            n_sites: 2,
            seed: 0,
            eta_re: (0.3, 0.8),
            eta_im: (-0.3, 0.3),
            boundary_center: 0.3,
            boundary_spread: 0.5,
            inhomogeneity_spread: 0.5,
            homogeneous: false,
        }
    }
}

/// Minimal separation demanded of a random draw, well above the hard guards
/// so that downstream conditioning stays reasonable.
const DRAW_MARGIN: f64 = 0.05;
const MAX_REJECTIONS: usize = 10_000;

impl DrawSpec {
    pub fn new(n_sites: usize, seed: u64) -> Self {
        DrawSpec {
            n_sites,
            seed,
            ..DrawSpec::default()
        }
    }

    /// Draws parameters, rejecting candidates that come near any genericity
    /// guard. Returns the parameters and the number of rejected candidates.
    pub fn draw(&self) -> Result<(ModelParams, usize)> {
        if self.eta_re.0 > self.eta_re.1 || self.eta_im.0 > self.eta_im.1 {
            return Err(Error::Domain("empty eta range".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for rejected in 0..MAX_REJECTIONS {
            let p = self.candidate(&mut rng);
            if p.validate().is_ok() && self.comfortably_generic(&p) {
                return Ok((p, rejected));
            }
        }
        Err(Error::NonGeneric(format!(
            "no admissible draw after {MAX_REJECTIONS} attempts"
        )))
    }

    fn candidate(&self, rng: &mut ChaCha8Rng) -> ModelParams {
        let uni = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| {
            if lo == hi {
                lo
            } else {
                rng.gen_range(lo..hi)
            }
        };
        let eta = Complex64::new(uni(rng, self.eta_re), uni(rng, self.eta_im));
        let mut boundary = [Complex64::new(0.0, 0.0); 6];
        for b in boundary.iter_mut() {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            *b = Complex64::new(self.boundary_center, 0.0) + Complex64::new(re, im) * self.boundary_spread;
        }
        let inhomogeneities = (0..self.n_sites)
            .map(|_| {
                let re: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                if self.homogeneous {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(re, im) * self.inhomogeneity_spread
                }
            })
            .collect();
        ModelParams {
            eta,
            alpha_minus: boundary[0],
            beta_minus: boundary[1],
            theta_minus: boundary[2],
            alpha_plus: boundary[3],
            beta_plus: boundary[4],
            theta_plus: boundary[5],
            n_sites: self.n_sites,
            inhomogeneities,
        }
    }

    fn comfortably_generic(&self, p: &ModelParams) -> bool {
        if (p.alpha_minus.sinh() * p.beta_minus.cosh()).norm() < DRAW_MARGIN
            || (p.alpha_plus.sinh() * p.beta_plus.cosh()).norm() < DRAW_MARGIN
        {
            return false;
        }
        if self.homogeneous {
            return true;
        }
        let th = &p.inhomogeneities;
        for i in 0..th.len() {
            if th[i].norm() < DRAW_MARGIN {
                return false;
            }
            for j in 0..th.len() {
                let gaps = [th[i] - th[j] - p.eta, th[i] - th[j] + p.eta, th[i] + th[j] - p.eta];
                if gaps.iter().any(|g| g.norm() < DRAW_MARGIN) {
                    return false;
                }
                if i != j && ((th[i] - th[j]).norm() < DRAW_MARGIN || (th[i] + th[j]).norm() < DRAW_MARGIN) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draw_is_reproducible() {
        let a = DrawSpec::new(3, 42).draw().unwrap().0;
        let b = DrawSpec::new(3, 42).draw().unwrap().0;
        assert_eq!(a, b);
        assert!(a.validate().is_ok());
        assert!(a.check_genericity().is_ok());
    }

    #[test]
    fn guards() {
        let mut p = DrawSpec::new(2, 1).draw().unwrap().0;
        p.inhomogeneities[1] = p.inhomogeneities[0];
        assert!(matches!(p.check_genericity(), Err(Error::NonGeneric(_))));
        p.inhomogeneities[1] = p.inhomogeneities[0] + p.eta;
        assert!(p.check_genericity().is_err());
        p.eta = Complex64::new(0.0, 0.0);
        assert!(matches!(p.validate(), Err(Error::Singularity(_))));
    }

    #[test]
    fn complex_values_serialize_as_pairs() {
        let p = DrawSpec::new(1, 3).draw().unwrap().0;
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["eta"][0].as_f64().unwrap(), p.eta.re);
        assert_eq!(json["eta"][1].as_f64().unwrap(), p.eta.im);
        let back: ModelParams = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
    }
}
