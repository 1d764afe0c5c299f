//! Full 3D geodesic shooting in `(r, θ, φ)` coordinates, used as an
//! independent cross-check of the Clairaut slice reduction.
//!
//! For the metric `dr² + f(r)² dθ² + h(r)² dφ²` (θ a great-circle angle
//! of the sphere factor) the geodesic equations are
//!   r''  =  f f' θ'² + h h' φ'²
//!   θ'' = −2 (f'/f) r' θ'
//!   φ'' = −2 (h'/h) r' φ'
//! with conserved angular momenta `a = f² θ'` and `b = h² φ'`. The radial
//! coordinate is extended through the pole with `f` odd and `h` even,
//! which is smooth only for trajectories with `a = 0`; a trajectory with
//! `a ≠ 0` approaching `r = 0` hits the angular-momentum barrier and is
//! reported as a step failure rather than integrated across.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::warp::{eval_jet2, ManifoldSpec};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PathSample {
    pub s: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShootResult {
    pub samples: Vec<PathSample>,
    /// Max |f²θ' − a| along the path.
    pub drift_a: f64,
    /// Max |h²φ' − b| along the path.
    pub drift_b: f64,
    /// Radial coordinate at sign changes of r' (turning events).
    pub turning_radii: Vec<f64>,
}

/// Signed extension through the pole: `f` odd, `h` even.
fn extended_jets(spec: &ManifoldSpec, t: f64) -> Result<(Jet2, Jet2)> {
    let f = eval_jet2(&spec.f, t.abs())?;
    let h = eval_jet2(&spec.h, t.abs())?;
    if t < 0.0 {
        Ok((
            Jet2 { value: -f.value, d1: f.d1, d2: -f.d2 },
            Jet2 { value: h.value, d1: -h.d1, d2: h.d2 },
        ))
    } else {
        Ok((f, h))
    }
}

type State = [f64; 6]; // (r, theta, phi, r', theta', phi')

fn derivative(spec: &ManifoldSpec, y: &State, a_nonzero: bool) -> Result<State> {
    let (f, h) = extended_jets(spec, y[0])?;
    if a_nonzero && f.value.abs() < 1e-8 {
        return Err(Error::StepFailure {
            s: f64::NAN,
            reason: format!(
                "angular-momentum barrier: f(r) = {} near the pole with a != 0",
                f.value
            ),
        });
    }
    let (vt, vth, vph) = (y[3], y[4], y[5]);
    let ftheta = if vth == 0.0 { 0.0 } else { f.value * f.d1 * vth * vth };
    let hphi = if vph == 0.0 { 0.0 } else { h.value * h.d1 * vph * vph };
    let dvth = if vth == 0.0 { 0.0 } else { -2.0 * (f.d1 / f.value) * vt * vth };
    let dvph = if vph == 0.0 { 0.0 } else { -2.0 * (h.d1 / h.value) * vt * vph };
    Ok([vt, vth, vph, ftheta + hphi, dvth, dvph])
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Integrates the geodesic with initial angular momenta `(a, b)` from
/// radius `t0` up to arc length `T` (local tolerance 1e−10). The initial
/// radial velocity is the outward branch of the unit-speed condition.
pub fn shoot_3d(spec: &ManifoldSpec, a: f64, b: f64, t0: f64, total: f64) -> Result<ShootResult> {
    shoot_from(spec, a, b, t0, total, true)
}

/// As [`shoot_3d`] but starting on the inward radial branch.
pub fn shoot_3d_inward(
    spec: &ManifoldSpec,
    a: f64,
    b: f64,
    t0: f64,
    total: f64,
) -> Result<ShootResult> {
    shoot_from(spec, a, b, t0, total, false)
}

fn shoot_from(
    spec: &ManifoldSpec,
    a: f64,
    b: f64,
    t0: f64,
    total: f64,
    outward: bool,
) -> Result<ShootResult> {
    if !(t0 > 0.0) {
        return Err(Error::InvalidParameter(format!("t0 must be positive, got {t0}")));
    }
    if !(total > 0.0) {
        return Err(Error::InvalidParameter(format!("arc length must be positive, got {total}")));
    }
    let f0 = eval_jet2(&spec.f, t0)?.value;
    let h0 = eval_jet2(&spec.h, t0)?.value;
    let vt2 = 1.0 - (a / f0).powi(2) - (b / h0).powi(2);
    if vt2 < -1e-12 {
        return Err(Error::InvalidParameter(format!(
            "initial data not unit-speed consistent: 1 - a²/f² - b²/h² = {vt2}"
        )));
    }
    let a_nonzero = a != 0.0;
    let vt0 = if outward { vt2.max(0.0).sqrt() } else { -vt2.max(0.0).sqrt() };
    let mut y: State = [t0, 0.0, 0.0, vt0, a / (f0 * f0), b / (h0 * h0)];
    let mut s = 0.0f64;
    let mut hstep = (total / 1000.0).min(1e-2);
    let tol = 1e-10;

    let mut result = ShootResult {
        samples: vec![PathSample { s, r: y[0], theta: y[1], phi: y[2] }],
        drift_a: 0.0,
        drift_b: 0.0,
        turning_radii: Vec::new(),
    };
    let mut k0 = derivative(spec, &y, a_nonzero).map_err(|e| at_s(e, s))?;
    let mut rejected_in_a_row = 0u32;
    let sample_stride = (total / 512.0).max(1e-6);
    let mut next_sample = sample_stride;

    while s < total {
        hstep = hstep.min(total - s);
        let mut k = [[0.0f64; 6]; 7];
        k[0] = k0;
        for stage in 0..6 {
            let mut ys = y;
            for (j, yj) in ys.iter_mut().enumerate() {
                for (i, ki) in k.iter().enumerate().take(stage + 1) {
                    *yj += hstep * DP_A[stage][i] * ki[j];
                }
                let _ = DP_C; // abscissae unused: the system is autonomous
            }
            k[stage + 1] = derivative(spec, &ys, a_nonzero).map_err(|e| at_s(e, s))?;
        }
        // 5th-order solution is the last stage input (FSAL)
        let mut y5 = y;
        for (j, yj) in y5.iter_mut().enumerate() {
            for (i, ki) in k.iter().enumerate().take(6) {
                *yj += hstep * DP_A[5][i] * ki[j];
            }
        }
        let mut err = 0.0f64;
        for j in 0..6 {
            let mut e = 0.0;
            for (i, ki) in k.iter().enumerate() {
                e += DP_E[i] * ki[j];
            }
            e *= hstep;
            let sc = tol + tol * y[j].abs().max(y5[j].abs());
            err = err.max((e / sc).abs());
        }
        if err <= 1.0 {
            let prev_vt = y[3];
            s += hstep;
            y = y5;
            k0 = k[6];
            rejected_in_a_row = 0;
            if prev_vt.signum() != y[3].signum() && y[3] != 0.0 {
                result.turning_radii.push(y[0]);
            }
            let (f, h) = extended_jets(spec, y[0]).map_err(|e| at_s(e, s))?;
            result.drift_a = result.drift_a.max((f.value * f.value * y[4] - a).abs());
            result.drift_b = result.drift_b.max((h.value * h.value * y[5] - b).abs());
            if s >= next_sample || s >= total {
                result.samples.push(PathSample { s, r: y[0], theta: y[1], phi: y[2] });
                next_sample = s + sample_stride;
            }
        } else {
            rejected_in_a_row += 1;
            if rejected_in_a_row > 60 {
                return Err(Error::StepFailure {
                    s,
                    reason: "step size underflow in adaptive integration".into(),
                });
            }
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        hstep *= fac;
        if hstep < 1e-14 {
            return Err(Error::StepFailure { s, reason: "step size underflow".into() });
        }
    }
    Ok(result)
}

fn at_s(e: Error, s: f64) -> Error {
    match e {
        Error::StepFailure { reason, .. } => Error::StepFailure { s, reason },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warp::WarpingFunction;

    fn flat() -> ManifoldSpec {
        ManifoldSpec::new(3, WarpingFunction::LinearCone, WarpingFunction::constant(1.0).unwrap())
            .unwrap()
    }

    #[test]
    fn flat_cylinder_straight_line() {
        let res = shoot_3d(&flat(), 0.0, 0.6, 1.0, 50.0).unwrap();
        assert!(res.drift_a < 1e-8 && res.drift_b < 1e-8, "{} {}", res.drift_a, res.drift_b);
        // in cover coordinates (r, phi) the path is the straight line
        // r(s) = 1 + 0.8 s, phi(s) = 0.6 s
        let last = res.samples.last().unwrap();
        assert!((last.r - (1.0 + 0.8 * last.s)).abs() < 1e-7);
        assert!((last.phi - 0.6 * last.s).abs() < 1e-7);
        assert!(res.turning_radii.is_empty());
    }

    #[test]
    fn poly_decay_turning_radius_matches_clairaut() {
        let spec = ManifoldSpec::new(
            3,
            WarpingFunction::LinearCone,
            WarpingFunction::poly_decay(1.0).unwrap(),
        )
        .unwrap();
        let res = shoot_3d(&spec, 0.0, 0.5, 0.1, 20.0).unwrap();
        assert!(res.drift_b < 1e-8, "drift {}", res.drift_b);
        assert!(!res.turning_radii.is_empty());
        // turning radii are recorded at step ends, so only step-size close
        for &t in &res.turning_radii {
            assert!((t.abs() - 1.0).abs() < 1e-2, "turning at {t}");
        }
    }

    #[test]
    fn sphere_factor_only() {
        let res = shoot_3d(&flat(), 0.3, 0.0, 1.0, 10.0).unwrap();
        assert!(res.drift_a < 1e-8);
        let last = res.samples.last().unwrap();
        assert!(last.theta > 0.0);
        assert_eq!(last.phi, 0.0);
    }

    #[test]
    fn barrier_is_an_error() {
        // inward geodesic with tiny sphere angular momentum reaches the
        // pole neighborhood where f²θ' forces a blow-up: must error, not
        // silently cross
        let res = shoot_3d_inward(&flat(), 1e-9, 0.0, 1.0, 10.0);
        assert!(matches!(res, Err(Error::StepFailure { .. })), "{res:?}");
    }

    #[test]
    fn inward_with_a_zero_crosses_the_pole() {
        let res = shoot_3d_inward(&flat(), 0.0, 0.3, 1.0, 10.0).unwrap();
        let last = res.samples.last().unwrap();
        assert!(last.r < 0.0, "pole not crossed: r = {}", last.r);
        assert!(res.drift_b < 1e-8);
    }
}
