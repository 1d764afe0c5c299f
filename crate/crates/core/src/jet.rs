//! Second-order forward-mode dual numbers.
//!
//! A [`Jet2`] carries a value together with its first and second derivative
//! with respect to a single scalar parameter. All warping-function
//! derivatives in this crate are obtained by propagating jets through
//! closed-form expressions; finite differences appear only in tests.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

/// Value, first and second derivative of a scalar function at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn constant(c: f64) -> Self {
        Jet2 { value: c, d1: 0.0, d2: 0.0 }
    }

    /// The seed jet of the independent variable itself.
    pub const fn variable(r: f64) -> Self {
        Jet2 { value: r, d1: 1.0, d2: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Chain rule for a unary function with derivatives `g1 = g'(u)` and
    /// `g2 = g''(u)` at `u = self.value`.
    fn unary(self, g: f64, g1: f64, g2: f64) -> Self {
        Jet2 {
            value: g,
            d1: g1 * self.d1,
            d2: g2 * self.d1 * self.d1 + g1 * self.d2,
        }
    }

    pub fn recip(self) -> Self {
        let v = self.value;
        self.unary(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn ln(self) -> Self {
        let v = self.value;
        self.unary(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.unary(e, e, e)
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.unary(s, 0.5 / s, -0.25 / (s * s * s))
    }

    /// `self` raised to a constant exponent.
    pub fn powf(self, c: f64) -> Self {
        let v = self.value;
        self.unary(v.powf(c), c * v.powf(c - 1.0), c * (c - 1.0) * v.powf(c - 2.0))
    }

    /// General power with a jet exponent, via `exp(w ln u)`.
    pub fn pow(self, w: Jet2) -> Self {
        if w.d1 == 0.0 && w.d2 == 0.0 {
            return self.powf(w.value);
        }
        (w * self.ln()).exp()
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.unary(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.unary(c, -s, -c)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 { value: self.value + o.value, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 { value: self.value - o.value, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    // quotient rule via the reciprocal jet
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 { value: -self.value, d1: -self.d1, d2: -self.d2 }
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        Jet2 { value: self.value + c, ..self }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: f64) -> Jet2 {
        Jet2 { value: self.value * c, d1: self.d1 * c, d2: self.d2 * c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())), "{a} vs {b}");
    }

    #[test]
    fn product_rule() {
        // d/dr [r^2 * ln r] at r = 3
        let r = Jet2::variable(3.0);
        let j = r * r * r.ln();
        close(j.value, 9.0 * 3.0f64.ln());
        close(j.d1, 2.0 * 3.0 * 3.0f64.ln() + 3.0);
        close(j.d2, 2.0 * 3.0f64.ln() + 2.0 + 1.0);
    }

    #[test]
    fn pow_matches_closed_form() {
        let r = Jet2::variable(2.0);
        let u = (r * r + 1.0).powf(-1.5);
        let v = 5.0f64;
        close(u.value, v.powf(-1.5));
        close(u.d1, -1.5 * v.powf(-2.5) * 4.0);
        close(u.d2, -1.5 * (-2.5 * v.powf(-3.5) * 16.0 + v.powf(-2.5) * 2.0));
    }

    #[test]
    fn general_pow_reduces_to_constant_pow() {
        let r = Jet2::variable(1.7);
        let a = r.powf(2.5);
        let b = r.pow(Jet2::constant(2.5));
        close(a.value, b.value);
        close(a.d1, b.d1);
        close(a.d2, b.d2);
    }

    #[test]
    fn trig_second_derivatives() {
        let r = Jet2::variable(0.6);
        let c = r.cos();
        close(c.value, 0.6f64.cos());
        close(c.d1, -0.6f64.sin());
        close(c.d2, -0.6f64.cos());
    }
}
