//! Scalar abstraction so the same formulas evaluate on plain complex numbers
//! and on forward-mode dual numbers (for the Newton Jacobian).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub trait Field:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(c: Complex64) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn value(self) -> Complex64;
}

impl Field for Complex64 {
    #[inline]
    fn constant(c: Complex64) -> Self {
        c
    }
    #[inline]
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        Complex64::cosh(self)
    }
    #[inline]
    fn value(self) -> Complex64 {
        self
    }
}

/// `v + d epsilon` with `epsilon^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: Complex64,
    pub d: Complex64,
}

impl Dual {
    pub fn variable(v: Complex64) -> Self {
        Dual {
            v,
            d: Complex64::new(1.0, 0.0),
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            v: self.v + o.v,
            d: self.d + o.d,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            v: self.v - o.v,
            d: self.d - o.d,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual {
            v: self.v / o.v,
            d: (self.d * o.v - self.v * o.d) / (o.v * o.v),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { v: -self.v, d: -self.d }
    }
}

impl Field for Dual {
    fn constant(c: Complex64) -> Self {
        Dual {
            v: c,
            d: Complex64::new(0.0, 0.0),
        }
    }
    fn sinh(self) -> Self {
        Dual {
            v: self.v.sinh(),
            d: self.v.cosh() * self.d,
        }
    }
    fn cosh(self) -> Self {
        Dual {
            v: self.v.cosh(),
            d: self.v.sinh() * self.d,
        }
    }
    fn value(self) -> Complex64 {
        self.v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_derivative_of_composite() {
        let x = Complex64::new(0.3, -0.7);
        let f = |z: Dual| (z * z).sinh() / z.cosh();
        let d = f(Dual::variable(x)).d;
        let h = 1e-6;
        let g = |z: Complex64| (z * z).sinh() / z.cosh();
        let fd = (g(x + h) - g(x - h)) / (2.0 * h);
        assert!((d - fd).norm() < 1e-8);
    }
}
