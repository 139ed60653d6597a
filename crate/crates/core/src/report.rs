//! Named residuals produced by the verification suites.

use serde::{Deserialize, Serialize};

/// One identity evaluated numerically: `residual` is the size of
/// `LHS - RHS`, `scale` the magnitude it should be compared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    /// Formula the residual checks, written out.
    pub anchor: String,
    pub residual: f64,
    pub scale: f64,
}

impl Residual {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, residual: f64, scale: f64) -> Self {
        Residual {
            name: name.into(),
            anchor: anchor.into(),
            residual,
            scale,
        }
    }

    /// `residual / scale`, with a zero scale treated as 1.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.residual.is_finite() && self.relative() <= tolerance
    }

    pub fn check(&self, tolerance: f64) -> Check {
        Check {
            name: self.name.clone(),
            anchor: self.anchor.clone(),
            residual: self.residual,
            scale: self.scale,
            tolerance,
            pass: self.passes(tolerance),
        }
    }
}

/// A residual judged against a tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Ordered collection of residuals from one suite.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub residuals: Vec<Residual>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, r: Residual) {
        self.residuals.push(r);
    }

    pub fn add(&mut self, name: impl Into<String>, anchor: impl Into<String>, residual: f64, scale: f64) {
        self.residuals.push(Residual::new(name, anchor, residual, scale));
    }

    pub fn extend(&mut self, other: Report) {
        self.residuals.extend(other.residuals);
    }

    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }

    /// Largest relative residual, or 0 for an empty report.
    pub fn max_relative(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| if r.residual.is_finite() { r.relative() } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&Residual> {
        self.residuals
            .iter()
            .max_by(|a, b| a.relative().total_cmp(&b.relative()))
    }

    pub fn all_pass(&self, tolerance: f64) -> bool {
        self.residuals.iter().all(|r| r.passes(tolerance))
    }

    pub fn checks(&self, tolerance: f64) -> Vec<Check> {
        self.residuals.iter().map(|r| r.check(tolerance)).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }
}
