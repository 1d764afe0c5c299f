//! Warping-function families for doubly warped products
//! `[0,∞) ×_f S^{p−1} ×_h S¹` and their exact 2-jets.
//!
//! The base circle is normalized to unit length, so the fiber circle at
//! radius `r` has length `δ(r) = h(r)`.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::Jet2;

/// A scalar warping function of `r ≥ 0` with exact first and second
/// derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum WarpingFunction {
    /// `f(r) = r`.
    LinearCone,
    /// `h(r) = (1 + r²)^{−α}`, `α > 0`.
    PolyDecay { alpha: f64 },
    /// `h(r) = ln^{−α}(2 + r²)`, `α > 0`.
    LogDecay { alpha: f64 },
    /// `h(r) = c + ε(r)` with `ε` strictly decreasing to 0 and `c > 0`.
    PositiveLimit { c: f64, decay: Box<WarpingFunction> },
    /// `f(r) = r (1 + r²)^{−1/4}`.
    WeiF,
    /// `f(r) = √(ln 2) · r · ln^{−1/2}(2 + r²)`.
    SqrtLogF,
    /// `h(r) = c`.
    Constant { c: f64 },
    /// `h(r) = cos r` on `[0, π/2)`; the profile of the round sphere,
    /// used as a closed-form cross-check for the geodesic solver.
    CosBell,
    /// A closed-form expression tree over `{+, −, ×, ÷, pow, ln, exp, sqrt}`.
    Custom { expr: Expr },
}

impl WarpingFunction {
    pub fn poly_decay(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("poly_decay needs alpha > 0, got {alpha}")));
        }
        Ok(WarpingFunction::PolyDecay { alpha })
    }

    pub fn log_decay(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("log_decay needs alpha > 0, got {alpha}")));
        }
        Ok(WarpingFunction::LogDecay { alpha })
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!("constant warp needs c > 0, got {c}")));
        }
        Ok(WarpingFunction::Constant { c })
    }

    pub fn custom(src: &str) -> Result<Self> {
        Ok(WarpingFunction::Custom { expr: Expr::parse(src)? })
    }

    /// Upper end of the declared domain, if the family is not defined on
    /// the whole half-line.
    pub fn domain_end(&self) -> Option<f64> {
        match self {
            WarpingFunction::CosBell => Some(std::f64::consts::FRAC_PI_2),
            _ => None,
        }
    }

    /// Whether the family is strictly decreasing on `(0, ∞)` by
    /// construction.
    pub fn is_strictly_decreasing(&self) -> bool {
        matches!(
            self,
            WarpingFunction::PolyDecay { .. }
                | WarpingFunction::LogDecay { .. }
                | WarpingFunction::PositiveLimit { .. }
        )
    }

    /// Greatest lower bound of the family on `[0, ∞)`, when known in
    /// closed form. Decaying families go to 0, positive-limit ones to `c`.
    pub fn known_infimum(&self) -> Option<f64> {
        match self {
            WarpingFunction::PolyDecay { .. } | WarpingFunction::LogDecay { .. } => Some(0.0),
            WarpingFunction::PositiveLimit { c, .. } => Some(*c),
            WarpingFunction::Constant { c } => Some(*c),
            WarpingFunction::CosBell => Some(0.0),
            _ => None,
        }
    }
}

/// Evaluates `(w(r), w'(r), w''(r))`.
pub fn eval_jet2(w: &WarpingFunction, r: f64) -> Result<Jet2> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("warping functions are defined for r >= 0, got r = {r}")));
    }
    if let Some(end) = w.domain_end() {
        if r >= end {
            return Err(Error::Domain(format!("r = {r} outside domain [0, {end})")));
        }
    }
    let x = Jet2::variable(r);
    let jet = match w {
        WarpingFunction::LinearCone => x,
        WarpingFunction::PolyDecay { alpha } => (x * x + 1.0).powf(-alpha),
        WarpingFunction::LogDecay { alpha } => (x * x + 2.0).ln().powf(-alpha),
        WarpingFunction::PositiveLimit { c, decay } => eval_jet2(decay, r)? + *c,
        WarpingFunction::WeiF => x * (x * x + 1.0).powf(-0.25),
        WarpingFunction::SqrtLogF => {
            x * (x * x + 2.0).ln().powf(-0.5) * 2.0f64.ln().sqrt()
        }
        WarpingFunction::Constant { c } => Jet2::constant(*c),
        WarpingFunction::CosBell => x.cos(),
        WarpingFunction::Custom { expr } => expr.eval(x),
    };
    if !jet.is_finite() {
        return Err(Error::Domain(format!("non-finite jet at r = {r}")));
    }
    Ok(jet)
}

/// Builds the positive-limit family `c + ε(r)` from a decay profile.
pub fn make_positive_limit(c: f64, decay: WarpingFunction) -> Result<WarpingFunction> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("positive limit needs c > 0, got {c}")));
    }
    // The decay must be strictly decreasing on the sampled grid.
    let mut prev = eval_jet2(&decay, 0.0)?.value;
    for i in 1..=64 {
        let r = 1e-3 * (1e6f64).powf(i as f64 / 64.0);
        let j = eval_jet2(&decay, r)?;
        if !(j.value < prev) || j.d1 >= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "decay profile is not strictly decreasing near r = {r}"
            )));
        }
        prev = j.value;
    }
    Ok(WarpingFunction::PositiveLimit { c, decay: Box::new(decay) })
}

/// The triple `(p, f, h)` defining `M = [0,∞) ×_f S^{p−1} ×_h S¹`.
#[derive(Clone, Debug)]
pub struct ManifoldSpec {
    /// Sphere factor dimension plus one; `p ≥ 2`.
    pub p: u32,
    pub f: WarpingFunction,
    pub h: WarpingFunction,
}

impl ManifoldSpec {
    pub fn new(p: u32, f: WarpingFunction, h: WarpingFunction) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!("need p >= 2, got {p}")));
        }
        Ok(ManifoldSpec { p, f, h })
    }
}

/// Report of violated smoothness/positivity conditions; empty means valid.
#[derive(Clone, Debug, Default)]
pub struct BoundaryReport {
    pub violations: Vec<String>,
}

impl BoundaryReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the boundary conditions `f(0)=0, f'(0)=1, f''(0)=0, h(0)>0,
/// h'(0)=0` at `r = 0` within `tol`, plus positivity of `f` and `h` on a
/// log-spaced sample grid.
pub fn validate_boundary(spec: &ManifoldSpec, tol: f64) -> BoundaryReport {
    let mut violations = Vec::new();
    match eval_jet2(&spec.f, 0.0) {
        Ok(f0) => {
            if f0.value.abs() > tol {
                violations.push(format!("f(0)=0 violated: f(0) = {}", f0.value));
            }
            if (f0.d1 - 1.0).abs() > tol {
                violations.push(format!("f'(0)=1 violated: f'(0) = {}", f0.d1));
            }
            if f0.d2.abs() > tol {
                violations.push(format!("f''(0)=0 violated: f''(0) = {}", f0.d2));
            }
        }
        Err(e) => violations.push(format!("f not evaluable at 0: {e}")),
    }
    match eval_jet2(&spec.h, 0.0) {
        Ok(h0) => {
            if h0.value <= 0.0 {
                violations.push(format!("h(0)>0 violated: h(0) = {}", h0.value));
            }
            if h0.d1.abs() > tol {
                violations.push(format!("h'(0)=0 violated: h'(0) = {}", h0.d1));
            }
        }
        Err(e) => violations.push(format!("h not evaluable at 0: {e}")),
    }
    // Positivity sample grid on (0, 1e3], clipped to the declared domain.
    for (w, name) in [(&spec.f, "f"), (&spec.h, "h")] {
        let hi = w.domain_end().map_or(1e3, |end| end * (1.0 - 1e-9));
        for i in 1..=64 {
            let r = 1e-3 * (hi / 1e-3f64).powf(i as f64 / 64.0);
            match eval_jet2(w, r) {
                Ok(j) if j.value > 0.0 => {}
                Ok(j) => {
                    violations.push(format!("{name}(r)>0 violated at r = {r}: {}", j.value));
                    break;
                }
                Err(e) => {
                    violations.push(format!("{name} not evaluable at r = {r}: {e}"));
                    break;
                }
            }
        }
    }
    BoundaryReport { violations }
}
