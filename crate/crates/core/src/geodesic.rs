//! Minimal geodesic loops at the pole of `[0,∞) ×_f S^{p−1} ×_h S¹` via
//! Clairaut reduction.
//!
//! Loops based at the pole `x = (0, y)` lie in the totally geodesic
//! surface of revolution `ℝ × S¹` obtained by even extension of `h`
//! (the fixed-point set of the isotropy action; geodesics through the
//! pole have vanishing sphere angular momentum). In the universal cover
//! the class-`l` minimizer is a geodesic from `(0, 0)` to `(0, l·period)`:
//! either the waist line `t ≡ 0`, or a concatenation of `k` arches, each
//! rising from the waist to the turning radius `t*` with `h(t*) = b` and
//! advancing `φ` by the same `Δφ(b)` with `k·Δφ(b) = l·period`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::numeric::{adaptive_simpson, bisect, log_grid};
use crate::warp::{eval_jet2, ManifoldSpec, WarpingFunction};

/// Even profile `t ↦ h(|t|)` of the surface of revolution, together with
/// the `φ`-period of the base circle.
#[derive(Clone, Debug)]
pub struct RevolutionProfile {
    h: WarpingFunction,
    period: f64,
    h0: f64,
}

impl RevolutionProfile {
    pub fn new(h: WarpingFunction, period: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
        }
        let j0 = eval_jet2(&h, 0.0)?;
        if !(j0.value > 0.0) {
            return Err(Error::DegenerateSpec(format!("h(0) must be positive, got {}", j0.value)));
        }
        if j0.d1.abs() > 1e-9 {
            return Err(Error::DegenerateSpec(format!(
                "even extension needs h'(0) = 0, got {}",
                j0.d1
            )));
        }
        Ok(RevolutionProfile { h, period, h0: j0.value })
    }

    /// Profile of the slice surface of a manifold spec; base circle of
    /// unit length, so the fiber length at radius `t` is `h(|t|)`.
    pub fn from_spec(spec: &ManifoldSpec) -> Result<Self> {
        RevolutionProfile::new(spec.h.clone(), 1.0)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn waist_height(&self) -> f64 {
        self.h0
    }

    pub fn warping(&self) -> &WarpingFunction {
        &self.h
    }

    /// Jet of the even extension `h(|t|)`.
    pub fn h_hat(&self, t: f64) -> Result<Jet2> {
        let j = eval_jet2(&self.h, t.abs())?;
        if t < 0.0 {
            Ok(Jet2 { value: j.value, d1: -j.d1, d2: j.d2 })
        } else {
            Ok(j)
        }
    }

    fn h_value(&self, t: f64) -> Result<f64> {
        Ok(self.h_hat(t)?.value)
    }

    fn domain_end(&self) -> Option<f64> {
        self.h.domain_end()
    }
}

/// One arch of a Clairaut geodesic: waist to turning radius and back.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GeodesicArc {
    /// Clairaut constant `b = h(t)² dφ/ds`.
    pub b: f64,
    /// Turning radius, `h(t*) = b`.
    pub t_star: f64,
    /// `φ` advance of the arch.
    pub delta_phi: f64,
    /// Arc length of the arch.
    pub length: f64,
}

/// Computes one arch for Clairaut constant `b` to the default tolerance.
pub fn half_oscillation(profile: &RevolutionProfile, b: f64) -> Result<GeodesicArc> {
    half_oscillation_with(profile, b, 1e-9)
}

/// Computes one arch with an explicit relative quadrature tolerance.
pub fn half_oscillation_with(
    profile: &RevolutionProfile,
    b: f64,
    rel_tol: f64,
) -> Result<GeodesicArc> {
    let h0 = profile.h0;
    if !(b > 0.0 && b < h0) {
        return Err(Error::NoTurningPoint { b });
    }
    if let Some(inf) = profile.h.known_infimum() {
        if b <= inf {
            return Err(Error::NoTurningPoint { b });
        }
    }
    let mut t_star = find_turning_radius(profile, b)?;
    // Newton polish: bisection leaves |h(t*) - b| up to ~1e-13 absolute,
    // which for small b would push h - b negative near the turning point
    for _ in 0..3 {
        let j = profile.h_hat(t_star)?;
        if j.d1 == 0.0 {
            break;
        }
        let step = (j.value - b) / j.d1;
        let next = t_star - step;
        if !(next > 0.0) || profile.domain_end().is_some_and(|end| next >= end) {
            break;
        }
        t_star = next;
        if step.abs() <= 1e-15 * t_star {
            break;
        }
    }
    let jet = profile.h_hat(t_star)?;
    let slope = jet.d1;
    if slope >= -1e-10 {
        return Err(Error::DegenerateTurning { t_star, slope: slope.abs() });
    }
    let a = -slope;
    let h2 = jet.d2;

    // Arch integrals on [0, t*):
    //   length: h / sqrt(h^2 - b^2),  phi: b / (h sqrt(h^2 - b^2)),
    // with an integrable (t* - t)^{-1/2} singularity. Substituting
    // t = t* - u^2 makes both integrands smooth on [0, sqrt(t*)]: the
    // Jacobian 2u cancels the singularity. Near u = 0 the difference
    // h - b is lost to cancellation, so below s_cut the 2-jet at t* is
    // used instead: h(t* - s) - b = a s + (h''(t*)/2) s^2 + O(s^3).
    // the cutoff must also cover the absolute evaluation noise of h,
    // which dominates b-relative noise when b << h(0)
    let s_cut = (1e-8 * b / a)
        .max(1e3 * f64::EPSILON * h0 / a)
        .max(1e-12 * t_star)
        .min(0.5 * t_star);
    let u_max = t_star.sqrt();
    let integrand = |u: f64, phi_weight: bool| -> f64 {
        if u == 0.0 {
            let lim = 2.0 / (2.0 * a * b).sqrt();
            return if phi_weight { lim } else { lim * b };
        }
        let s = u * u;
        let hv = match profile.h_value(t_star - s) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let diff = if s > s_cut { hv - b } else { s * (a + 0.5 * h2 * s) };
        let root = (diff * (hv + b)).sqrt();
        if phi_weight {
            2.0 * u * b / (hv * root)
        } else {
            2.0 * u * hv / root
        }
    };
    // crude pass to scale the absolute tolerance, then the real pass
    let mut len_f = |u: f64| integrand(u, false);
    let len_rough = adaptive_simpson(&mut len_f, 0.0, u_max, 1e-2 * (t_star + b))?;
    let length = adaptive_simpson(&mut len_f, 0.0, u_max, rel_tol * len_rough.abs().max(1e-12))?;
    let mut phi_f = |u: f64| integrand(u, true);
    let phi_rough = adaptive_simpson(&mut phi_f, 0.0, u_max, 1e-2 * (t_star / b + 1.0))?;
    let delta_phi = adaptive_simpson(&mut phi_f, 0.0, u_max, rel_tol * phi_rough.abs().max(1e-12))?;
    if !(length.is_finite() && delta_phi.is_finite() && length > 0.0 && delta_phi > 0.0) {
        return Err(Error::QuadratureFailure(format!("non-finite arch integral at b = {b}")));
    }
    Ok(GeodesicArc { b, t_star, delta_phi: 2.0 * delta_phi, length: 2.0 * length })
}

fn find_turning_radius(profile: &RevolutionProfile, b: f64) -> Result<f64> {
    let mut lo = 0.0f64;
    let mut hi;
    if let Some(end) = profile.domain_end() {
        let mut k = 1;
        loop {
            hi = end * (1.0 - 0.5f64.powi(k));
            if profile.h_value(hi)? < b {
                break;
            }
            lo = hi;
            k += 1;
            if k > 52 {
                return Err(Error::NoTurningPoint { b });
            }
        }
    } else {
        hi = 1.0;
        while profile.h_value(hi)? >= b {
            lo = hi;
            hi *= 2.0;
            if hi > 1e14 {
                return Err(Error::NoTurningPoint { b });
            }
        }
    }
    let f = |t: f64| profile.h_value(t).unwrap_or(f64::NAN) - b;
    bisect(lo.max(1e-300), hi, f, 1e-13)
}

/// Search controls for [`minimal_loop`].
#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    /// Number of points of the log-spaced Clairaut-constant scan grid.
    pub b_grid: usize,
    /// Relative quadrature tolerance for refined candidates.
    pub quad_rel_tol: f64,
    /// Relative quadrature tolerance for the scan cache.
    pub cache_rel_tol: f64,
    /// Relative tolerance on the Clairaut constant in root refinement.
    pub root_rel_tol: f64,
    /// Candidates within this relative length window are ties.
    pub tie_rel_tol: f64,
    /// Flat-root detection window on `|Δφ − target| / target`.
    pub flat_rel_tol: f64,
    /// Hard cap on arches per winding, `k ≤ k_cap_factor · l`.
    pub k_cap_factor: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            b_grid: 512,
            quad_rel_tol: 1e-10,
            cache_rel_tol: 1e-6,
            root_rel_tol: 1e-12,
            tie_rel_tol: 1e-9,
            flat_rel_tol: 3e-5,
            k_cap_factor: 64,
        }
    }
}

/// The computed class-`l` minimizer.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MinimalLoop {
    /// Winding number of the class.
    pub l: u64,
    /// Loop length, equal to the displacement `|γ^l|` in the cover.
    pub length: f64,
    /// Maximal radial excursion `d_H(x, c)`.
    pub max_radius: f64,
    /// Clairaut constant of the reported candidate; absent for the waist.
    pub b: Option<f64>,
    /// Number of arches; absent for the waist.
    pub k: Option<u64>,
    /// `φ` advance per arch of the reported candidate.
    pub delta_phi: Option<f64>,
    /// Number of candidate loops examined (including pruned ones).
    pub candidates_examined: usize,
    /// Whether several distinct candidates tied for the minimum.
    pub tie: bool,
}

impl MinimalLoop {
    pub fn ratio(&self) -> f64 {
        self.max_radius / self.length
    }
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    length: f64,
    max_radius: f64,
    b: f64,
    k: u64,
    delta_phi: f64,
}

/// Computes the minimal representing loop of winding class `l` for a
/// manifold spec (unit base circle).
pub fn minimal_loop(spec: &ManifoldSpec, l: u64, params: &SearchParams) -> Result<MinimalLoop> {
    let report = crate::warp::validate_boundary(spec, 1e-9);
    if !report.is_empty() {
        return Err(Error::BoundaryViolation(report.violations));
    }
    let profile = RevolutionProfile::from_spec(spec)?;
    minimal_loop_on_profile(&profile, l, params)
}

/// Computes the minimal representing loop on an explicit revolution
/// profile.
pub fn minimal_loop_on_profile(
    profile: &RevolutionProfile,
    l: u64,
    params: &SearchParams,
) -> Result<MinimalLoop> {
    if l < 1 {
        return Err(Error::InvalidParameter("winding number must be >= 1".into()));
    }
    let period = profile.period;
    let h0 = profile.h0;
    let waist_length = l as f64 * h0 * period;

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut examined = 1usize; // the waist
    let mut best = waist_length;

    if let Some(cache) = build_arc_cache(profile, l, waist_length, params)? {
        let min_dphi = cache
            .arcs
            .iter()
            .flatten()
            .map(|a| a.delta_phi)
            .fold(f64::INFINITY, f64::min);
        let k_cap = params.k_cap_factor.saturating_mul(l);
        for k in 1..=k_cap {
            let target = l as f64 * period / k as f64;
            if target < min_dphi * (1.0 - 1e-9) {
                break;
            }
            for root in find_roots(&cache, target, params) {
                examined += 1;
                // rigorous lower bounds on the candidate total length:
                // ds >= b dphi along an arch gives k·length >= b·l·period,
                // and each arch is at least 2 t* long; t* shrinks with b
                let (i_lo, i_hi) = match root {
                    RootBracket::Sign(i) => (i, i + 1),
                    RootBracket::Flat(i) => (i, i),
                };
                let floor_phi = cache.bs[i_lo] * l as f64 * period;
                let floor_rad = cache.arcs[i_hi]
                    .as_ref()
                    .map_or(0.0, |a| 2.0 * k as f64 * a.t_star);
                if floor_phi.max(floor_rad) * (1.0 - 1e-9) > best * (1.0 + params.tie_rel_tol) {
                    continue;
                }
                let arc = match refine_root(profile, &cache, root, target, params)? {
                    Some(arc) => arc,
                    None => continue,
                };
                let cand = Candidate {
                    length: k as f64 * arc.length,
                    max_radius: arc.t_star,
                    b: arc.b,
                    k,
                    delta_phi: arc.delta_phi,
                };
                if cand.length < best {
                    best = cand.length;
                }
                candidates.push(cand);
            }
            // prune whole k generations that cannot beat the incumbent:
            // every arch costs at least 2 t*(b_ceil)
            if let Some(min_t) = cache.min_t_star {
                if (k + 1) as f64 * 2.0 * min_t > best * (1.0 + params.tie_rel_tol) {
                    break;
                }
            }
        }
        // re-derive best including pruning margin
        for c in &candidates {
            if c.length < best {
                best = c.length;
            }
        }
    }

    // Tie resolution: infimum of the excursion over the tie set, with the
    // oscillating representative of largest b (smallest excursion).
    let tie_window = best * (1.0 + params.tie_rel_tol) + 1e-300;
    let waist_in_tie = waist_length <= tie_window;
    let mut tie: Vec<&Candidate> =
        candidates.iter().filter(|c| c.length <= tie_window).collect();
    tie.sort_by(|a, b| a.b.partial_cmp(&b.b).unwrap());
    let tie_count = tie.len() + usize::from(waist_in_tie);

    if let Some(rep) = tie.last() {
        let mut max_radius = tie.iter().map(|c| c.max_radius).fold(f64::INFINITY, f64::min);
        if waist_in_tie {
            max_radius = 0.0;
        }
        Ok(MinimalLoop {
            l,
            length: rep.length.min(waist_length),
            max_radius,
            b: Some(rep.b),
            k: Some(rep.k),
            delta_phi: Some(rep.delta_phi),
            candidates_examined: examined,
            tie: tie_count > 1,
        })
    } else if waist_in_tie {
        Ok(MinimalLoop {
            l,
            length: waist_length,
            max_radius: 0.0,
            b: None,
            k: None,
            delta_phi: None,
            candidates_examined: examined,
            tie: false,
        })
    } else {
        Err(Error::SearchExhausted)
    }
}

struct ArcCache {
    bs: Vec<f64>,
    arcs: Vec<Option<GeodesicArc>>,
    min_t_star: Option<f64>,
}

/// Scans the admissible Clairaut range with coarse tolerances. Arches
/// with turning radius beyond half the waist length cannot beat the
/// waist, which bounds the scan from below by `h(waist/2)`.
fn build_arc_cache(
    profile: &RevolutionProfile,
    l: u64,
    waist_length: f64,
    params: &SearchParams,
) -> Result<Option<ArcCache>> {
    let _ = l;
    let h0 = profile.h0;
    let mut r_cap = waist_length / 2.0;
    if let Some(end) = profile.domain_end() {
        r_cap = r_cap.min(end * (1.0 - 1e-9));
    }
    let mut b_floor = profile.h_value(r_cap)?;
    if let Some(inf) = profile.h.known_infimum() {
        b_floor = b_floor.max(inf * (1.0 + 1e-9) + 1e-300);
    }
    // stay a safe factor above the FP cancellation floor of h^2 - b^2
    let b_ceil = h0 * (1.0 - 1e-5);
    if !(b_floor > 0.0 && b_floor < b_ceil) {
        return Ok(None); // no oscillating candidates (e.g. constant h)
    }
    let bs = log_grid(b_floor, b_ceil, params.b_grid.max(2));
    let arcs: Vec<Option<GeodesicArc>> = bs
        .par_iter()
        .map(|&b| {
            half_oscillation_with(profile, b, params.cache_rel_tol).ok()
        })
        .collect();
    if arcs.iter().all(|a| a.is_none()) {
        return Ok(None);
    }
    let min_t_star = arcs.iter().flatten().map(|a| a.t_star).fold(f64::INFINITY, f64::min);
    Ok(Some(ArcCache { bs, arcs, min_t_star: Some(min_t_star) }))
}

enum RootBracket {
    /// Sign change of `Δφ − target` between grid indices `i` and `i+1`.
    Sign(usize),
    /// `Δφ` flat-equal to the target at grid index `i`.
    Flat(usize),
}

fn find_roots(cache: &ArcCache, target: f64, params: &SearchParams) -> Vec<RootBracket> {
    let n = cache.bs.len();
    let g = |i: usize| cache.arcs[i].as_ref().map(|a| a.delta_phi - target);
    let mut roots = Vec::new();
    let mut flat_run_best: Option<usize> = None;
    for i in 0..n {
        let gi = match g(i) {
            Some(v) => v,
            None => continue,
        };
        let flat = gi.abs() <= params.flat_rel_tol * target;
        if flat {
            flat_run_best = Some(i); // keep the largest-b point of the run
        } else if let Some(j) = flat_run_best.take() {
            roots.push(RootBracket::Flat(j));
        }
        if !flat {
            if let Some(gn) = (i + 1 < n).then(|| g(i + 1)).flatten() {
                if gn.abs() > params.flat_rel_tol * target && gi.signum() != gn.signum() {
                    roots.push(RootBracket::Sign(i));
                }
            }
        }
    }
    if let Some(j) = flat_run_best {
        roots.push(RootBracket::Flat(j));
    }
    roots
}

fn refine_root(
    profile: &RevolutionProfile,
    cache: &ArcCache,
    root: RootBracket,
    target: f64,
    params: &SearchParams,
) -> Result<Option<GeodesicArc>> {
    match root {
        RootBracket::Flat(i) => {
            let arc = half_oscillation_with(profile, cache.bs[i], params.quad_rel_tol)?;
            // the coarse cache may over-report flatness; re-check
            if (arc.delta_phi - target).abs() <= 10.0 * params.flat_rel_tol * target {
                Ok(Some(arc))
            } else {
                Ok(None)
            }
        }
        RootBracket::Sign(i) => {
            // Stage 1: narrow the bracket with cache-grade arches.
            let coarse = |b: f64| {
                half_oscillation_with(profile, b, params.cache_rel_tol)
                    .map(|a| a.delta_phi - target)
                    .unwrap_or(f64::NAN)
            };
            let b_mid = bisect(cache.bs[i], cache.bs[i + 1], coarse, 1e-7)?;
            // Stage 2: finish with full-accuracy arches.
            let lo = b_mid * (1.0 - 1e-6);
            let hi = (b_mid * (1.0 + 1e-6)).min(profile.h0 * (1.0 - 1e-5));
            let fine = |b: f64| {
                half_oscillation_with(profile, b, params.quad_rel_tol)
                    .map(|a| a.delta_phi - target)
                    .unwrap_or(f64::NAN)
            };
            let b_root = match bisect(lo, hi, fine, params.root_rel_tol) {
                Ok(b) => b,
                // fall back to the wide bracket if the narrowed one lost
                // the sign change to quadrature noise
                Err(Error::NoSignChange { .. }) => {
                    bisect(cache.bs[i], cache.bs[i + 1], fine, params.root_rel_tol)?
                }
                Err(e) => return Err(e),
            };
            let arc = half_oscillation_with(profile, b_root, params.quad_rel_tol)?;
            Ok(Some(arc))
        }
    }
}

/// A row of [`loop_table`]: failures are recorded without aborting the
/// table.
#[derive(Debug)]
pub struct LoopRow {
    pub l: u64,
    pub result: Result<MinimalLoop>,
}

/// Computes one minimal loop per winding number; rows are independent.
pub fn loop_table(spec: &ManifoldSpec, ladder: &[u64], params: &SearchParams) -> Vec<LoopRow> {
    ladder
        .par_iter()
        .map(|&l| LoopRow { l, result: minimal_loop(spec, l, params) })
        .collect()
}

/// As [`loop_table`] but on an explicit profile.
pub fn loop_table_on_profile(
    profile: &RevolutionProfile,
    ladder: &[u64],
    params: &SearchParams,
) -> Vec<LoopRow> {
    ladder
        .par_iter()
        .map(|&l| LoopRow { l, result: minimal_loop_on_profile(profile, l, params) })
        .collect()
}

/// Geometric winding ladder `l_j = ceil(l0 · ratio^j)`, deduplicated.
pub fn geometric_ladder(l0: u64, ratio: f64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut x = l0 as f64;
    for _ in 0..count {
        let l = x.ceil() as u64;
        if out.last() != Some(&l) {
            out.push(l);
        }
        x *= ratio;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_profile() -> RevolutionProfile {
        RevolutionProfile::new(WarpingFunction::CosBell, 2.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn great_circle_half_oscillation() {
        // geodesics on the round sphere cross the equator at antipodes
        let arc = half_oscillation(&sphere_profile(), 0.5).unwrap();
        assert!((arc.t_star - 0.5f64.acos()).abs() < 1e-10, "t* = {}", arc.t_star);
        assert!((arc.delta_phi - std::f64::consts::PI).abs() < 1e-7, "dphi = {}", arc.delta_phi);
        assert!((arc.length - std::f64::consts::PI).abs() < 1e-7, "len = {}", arc.length);
    }

    #[test]
    fn constant_profile_has_no_turning_point() {
        let p = RevolutionProfile::new(WarpingFunction::constant(1.0).unwrap(), 1.0).unwrap();
        assert!(matches!(half_oscillation(&p, 0.5), Err(Error::NoTurningPoint { .. })));
    }

    #[test]
    fn poly_decay_turning_radius_exact() {
        // (1 + t^2)^{-1} = 0.5  =>  t* = 1
        let p = RevolutionProfile::new(WarpingFunction::poly_decay(1.0).unwrap(), 1.0).unwrap();
        let arc = half_oscillation(&p, 0.5).unwrap();
        assert!((arc.t_star - 1.0).abs() < 1e-11, "t* = {}", arc.t_star);
        assert!(arc.length >= 2.0 * arc.t_star);
        assert!(arc.delta_phi > 0.0);
    }

    #[test]
    fn flat_cylinder_loops_are_waists() {
        let spec = ManifoldSpec::new(
            3,
            WarpingFunction::LinearCone,
            WarpingFunction::constant(1.0).unwrap(),
        )
        .unwrap();
        let params = SearchParams::default();
        for l in [1u64, 2, 4] {
            let row = minimal_loop(&spec, l, &params).unwrap();
            assert!((row.length - l as f64).abs() < 1e-12);
            assert_eq!(row.max_radius, 0.0);
            assert!(row.k.is_none());
        }
    }

    #[test]
    fn sphere_equator_is_minimal() {
        let row =
            minimal_loop_on_profile(&sphere_profile(), 1, &SearchParams::default()).unwrap();
        assert!(
            (row.length - 2.0 * std::f64::consts::PI).abs() < 1e-6,
            "length = {}",
            row.length
        );
        assert_eq!(row.k, Some(2));
        assert!((row.delta_phi.unwrap() - std::f64::consts::PI).abs() < 1e-6);
        assert!(row.max_radius < 1e-2);
    }

    #[test]
    fn loop_invariants_poly_decay() {
        let spec = ManifoldSpec::new(
            3,
            WarpingFunction::LinearCone,
            WarpingFunction::poly_decay(1.0).unwrap(),
        )
        .unwrap();
        let params = SearchParams::default();
        let rows = loop_table(&spec, &[10, 20, 100], &params);
        let mut lengths = Vec::new();
        for row in &rows {
            let m = row.result.as_ref().unwrap();
            assert!(m.length > 0.0);
            assert!(m.max_radius >= 0.0 && m.max_radius <= m.length / 2.0);
            if let (Some(k), Some(dphi)) = (m.k, m.delta_phi) {
                let residual = (k as f64 * dphi - m.l as f64).abs() / m.l as f64;
                assert!(residual < 1e-6, "clairaut residual {residual}");
            }
            lengths.push(m.length);
        }
        assert!(lengths[0] < lengths[1] && lengths[1] < lengths[2]);
        // subadditivity |γ^{a+b}| <= |γ^a| + |γ^b| with a = b = 10
        assert!(lengths[1] <= 2.0 * lengths[0] + 1e-9);
    }

    #[test]
    fn geometric_ladder_dedupes() {
        assert_eq!(geometric_ladder(1, 2.0, 4), vec![1, 2, 4, 8]);
        assert_eq!(geometric_ladder(1, 1.0, 3), vec![1]);
    }
}
