//! Ricci curvature of `g = dr² + f(r)² ds² + h(r)² g₀` on the three
//! distinguished unit directions, positivity scans over radius grids,
//! minimal sphere-dimension search, and the multi-factor nilmanifold
//! obstruction analysis.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::numeric::log_grid;
use crate::warp::{eval_jet2, ManifoldSpec, WarpingFunction};

/// Which of the three Ricci expressions is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RicciTerm {
    /// Radial direction `H = ∂/∂r`.
    H,
    /// Unit vector tangent to the sphere factor.
    U,
    /// Unit vector tangent to the circle factor.
    X,
}

/// Ricci values at one radius.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RicciReport {
    pub r: f64,
    pub ric_h: f64,
    pub ric_u: f64,
    pub ric_x: f64,
}

impl RicciReport {
    pub fn min_value(&self) -> f64 {
        self.ric_h.min(self.ric_u).min(self.ric_x)
    }
}

fn ricci_from_jets(p: u32, f: Jet2, h: Jet2, r: f64) -> Result<RicciReport> {
    if f.value == 0.0 || h.value == 0.0 {
        return Err(Error::DegenerateSpec(format!(
            "warping function vanishes at r = {r} (f = {}, h = {})",
            f.value, h.value
        )));
    }
    let pm1 = (p - 1) as f64;
    let pm2 = (p - 2) as f64;
    let ric_h = -h.d2 / h.value - pm1 * f.d2 / f.value;
    let ric_u = -f.d2 / f.value + pm2 / (f.value * f.value) * (1.0 - f.d1 * f.d1)
        - f.d1 * h.d1 / (f.value * h.value);
    let ric_x = -h.d2 / h.value - pm1 * f.d1 * h.d1 / (f.value * h.value);
    Ok(RicciReport { r, ric_h, ric_u, ric_x })
}

/// Evaluates the three Ricci expressions at `r > 0`.
pub fn ricci_at(spec: &ManifoldSpec, r: f64) -> Result<RicciReport> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("ricci formulas need r > 0, got {r}")));
    }
    let f = eval_jet2(&spec.f, r)?;
    let h = eval_jet2(&spec.h, r)?;
    ricci_from_jets(spec.p, f, h, r)
}

/// Result of a positivity scan over a log-spaced radius grid.
#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    /// Minimum over the grid of `(ric_H, ric_U, ric_X)`.
    pub min_values: [f64; 3],
    pub positive: bool,
    /// Smallest radius at which some expression fails to be positive.
    pub first_failure: Option<(f64, RicciTerm)>,
}

/// Scans the three Ricci expressions on a log-spaced grid.
pub fn scan_positivity(
    spec: &ManifoldSpec,
    r_min: f64,
    r_max: f64,
    n_points: usize,
) -> Result<PositivityReport> {
    if !(r_min > 0.0 && r_max > r_min) {
        return Err(Error::InvalidParameter(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
    }
    if n_points < 2 {
        return Err(Error::InvalidParameter("need n_points >= 2".into()));
    }
    let grid = log_grid(r_min, r_max, n_points);
    let reports: Vec<RicciReport> = grid
        .par_iter()
        .map(|&r| ricci_at(spec, r))
        .collect::<Result<_>>()?;
    Ok(summarize(&grid, &reports))
}

fn summarize(grid: &[f64], reports: &[RicciReport]) -> PositivityReport {
    let mut min_values = [f64::INFINITY; 3];
    let mut first_failure = None;
    // Ascending radius order; ties resolved toward the smallest r.
    for rep in reports {
        for (k, (v, term)) in [
            (rep.ric_h, RicciTerm::H),
            (rep.ric_u, RicciTerm::U),
            (rep.ric_x, RicciTerm::X),
        ]
        .into_iter()
        .enumerate()
        {
            if v < min_values[k] {
                min_values[k] = v;
            }
            if v <= 0.0 && first_failure.is_none() {
                first_failure = Some((rep.r, term));
            }
        }
    }
    PositivityReport {
        r_min: grid[0],
        r_max: grid[grid.len() - 1],
        n_points: grid.len(),
        min_values,
        positive: min_values.iter().all(|&v| v > 0.0),
        first_failure,
    }
}

/// Smallest `p` in `[2, p_max]` for which the scan is positive, or `None`.
/// Every candidate `p` is checked; no monotonicity in `p` is assumed.
pub fn minimal_dimension_search(
    f: &WarpingFunction,
    h: &WarpingFunction,
    r_min: f64,
    r_max: f64,
    n_points: usize,
    p_max: u32,
) -> Result<Option<u32>> {
    if p_max < 2 {
        return Err(Error::InvalidParameter(format!("need p_max >= 2, got {p_max}")));
    }
    let grid = log_grid(r_min, r_max, n_points);
    // Jets do not depend on p; evaluate them once.
    let jets: Vec<(f64, Jet2, Jet2)> = grid
        .par_iter()
        .map(|&r| Ok((r, eval_jet2(f, r)?, eval_jet2(h, r)?)))
        .collect::<Result<_>>()?;
    let found = (2..=p_max).into_par_iter().find_first(|&p| {
        jets.iter().all(|&(r, fj, hj)| {
            ricci_from_jets(p, fj, hj, r).is_ok_and(|rep| rep.min_value() > 0.0)
        })
    });
    Ok(found)
}

/// Kind of a decay chain or nil-factor curvature model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecayKind {
    Polynomial,
    Logarithmic,
}

/// Exponents `(α_1, …, α_n)` of the fiber-direction norms
/// `h_i(r) = (1+r²)^{−α_i}` or `ln^{−α_i}(2+r²)`.
#[derive(Clone, Debug)]
pub struct WeiDecayChain {
    pub alphas: Vec<f64>,
    pub kind: DecayKind,
}

impl WeiDecayChain {
    pub fn new(alphas: Vec<f64>, kind: DecayKind) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidParameter("decay chain must be nonempty".into()));
        }
        if alphas.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::InvalidParameter("decay exponents must be positive".into()));
        }
        Ok(WeiDecayChain { alphas, kind })
    }

    fn factor(&self, i: usize) -> WarpingFunction {
        match self.kind {
            DecayKind::Polynomial => WarpingFunction::PolyDecay { alpha: self.alphas[i] },
            DecayKind::Logarithmic => WarpingFunction::LogDecay { alpha: self.alphas[i] },
        }
    }
}

/// Checks the chain constraints `2α_i − 4α_{i+1} = 1` for consecutive
/// exponents (polynomial kind; vacuous for a singleton).
pub fn validate_wei_chain(chain: &WeiDecayChain) -> bool {
    chain
        .alphas
        .windows(2)
        .all(|w| (2.0 * w[0] - 4.0 * w[1] - 1.0).abs() <= 1e-12)
}

/// Model lower bound for the intrinsic fiber curvature `Ric(g_r)(X_i)`:
/// `−c/(1+r²)` or `−c/ln(2+r²)`.
#[derive(Clone, Copy, Debug)]
pub struct NilFactorModel {
    pub kind: DecayKind,
    pub c: f64,
}

impl NilFactorModel {
    pub fn new(kind: DecayKind, c: f64) -> Result<Self> {
        if c < 0.0 {
            return Err(Error::InvalidParameter(format!("model constant must be >= 0, got {c}")));
        }
        Ok(NilFactorModel { kind, c })
    }

    pub fn bound_at(&self, r: f64) -> f64 {
        match self.kind {
            DecayKind::Polynomial => -self.c / (1.0 + r * r),
            DecayKind::Logarithmic => -self.c / (2.0 + r * r).ln(),
        }
    }
}

/// Conservative per-factor lower bounds on `Ric(X_i, X_i)` for the
/// multi-factor fiber: geometric terms computed exactly, intrinsic fiber
/// curvature replaced by the model bound.
pub fn multi_factor_bound(
    chain: &WeiDecayChain,
    nil: &NilFactorModel,
    f: &WarpingFunction,
    p: u32,
    r: f64,
) -> Result<Vec<f64>> {
    if chain.kind != nil.kind {
        return Err(Error::KindMismatch);
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("need r > 0, got {r}")));
    }
    let fj = eval_jet2(f, r)?;
    let hs: Vec<Jet2> = (0..chain.alphas.len())
        .map(|i| eval_jet2(&chain.factor(i), r))
        .collect::<Result<_>>()?;
    Ok(per_factor_bounds(&hs, fj, p, nil.bound_at(r)))
}

fn per_factor_bounds(hs: &[Jet2], fj: Jet2, p: u32, model: f64) -> Vec<f64> {
    let pm1 = (p - 1) as f64;
    let logd: Vec<f64> = hs.iter().map(|h| h.d1 / h.value).collect();
    let logd_sum: f64 = logd.iter().sum();
    hs.iter()
        .enumerate()
        .map(|(i, h)| {
            let cross = logd[i] * (logd_sum - logd[i]);
            -h.d2 / h.value - pm1 * fj.d1 * logd[i] / fj.value + model - cross
        })
        .collect()
}

/// Searches `[1, p_max]` radius grid `[r_lo, r_hi]` for the smallest `p`
/// with all per-factor bounds positive on the whole grid.
pub fn multi_factor_positive_dimension(
    chain: &WeiDecayChain,
    nil: &NilFactorModel,
    f: &WarpingFunction,
    p_max: u32,
    r_lo: f64,
    r_hi: f64,
    n_points: usize,
) -> Result<Option<u32>> {
    if chain.kind != nil.kind {
        return Err(Error::KindMismatch);
    }
    let grid = log_grid(r_lo, r_hi, n_points);
    let data: Vec<(f64, Jet2, Vec<Jet2>)> = grid
        .par_iter()
        .map(|&r| {
            let fj = eval_jet2(f, r)?;
            let hs = (0..chain.alphas.len())
                .map(|i| eval_jet2(&chain.factor(i), r))
                .collect::<Result<Vec<_>>>()?;
            Ok((r, fj, hs))
        })
        .collect::<Result<_>>()?;
    let found = (2..=p_max).into_par_iter().find_first(|&p| {
        data.iter().all(|(r, fj, hs)| {
            per_factor_bounds(hs, *fj, p, nil.bound_at(*r)).iter().all(|&b| b > 0.0)
        })
    });
    Ok(found)
}

/// For a given `p`, finds a radius in `[r_lo, r_hi]` (log grid, scanned
/// from large radii downward) where some factor bound is negative.
pub fn multi_factor_first_negative(
    chain: &WeiDecayChain,
    nil: &NilFactorModel,
    f: &WarpingFunction,
    p: u32,
    r_lo: f64,
    r_hi: f64,
    n_points: usize,
) -> Result<Option<f64>> {
    let grid = log_grid(r_lo, r_hi, n_points);
    for &r in grid.iter().rev() {
        let bounds = multi_factor_bound(chain, nil, f, p, r)?;
        if bounds.iter().any(|&b| b < 0.0) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Which term group dominates the last factor's curvature bound at large
/// radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dominance {
    ModelTerm,
    Comparable,
    GeometricTerms,
}

/// Magnitudes and empirical log-log decay slopes of the four term groups
/// in the last factor's bound.
#[derive(Clone, Debug, Serialize)]
pub struct DominanceTable {
    pub r_probe: f64,
    /// `(name, |term| at r, |term| at 10r, d log|term| / d log r)` for the
    /// geometric `−h''/h` term, the `f` coupling `f'h'/(fh)` (per unit
    /// `p−1`), the model term, and the cross-term sum.
    pub terms: Vec<(String, f64, f64, f64)>,
    pub flag: Dominance,
}

/// Two-point log-slope analysis of the last factor's term groups at
/// `r_probe` and `10·r_probe`.
pub fn dominance_analysis(
    chain: &WeiDecayChain,
    nil: &NilFactorModel,
    f: &WarpingFunction,
    r_probe: f64,
) -> Result<DominanceTable> {
    if chain.kind != nil.kind {
        return Err(Error::KindMismatch);
    }
    if !(r_probe >= 10.0) {
        return Err(Error::Domain(format!("need r_probe >= 10, got {r_probe}")));
    }
    let n = chain.alphas.len();
    let groups = |r: f64| -> Result<[f64; 4]> {
        let fj = eval_jet2(f, r)?;
        let hs: Vec<Jet2> = (0..n).map(|i| eval_jet2(&chain.factor(i), r)).collect::<Result<_>>()?;
        let logd: Vec<f64> = hs.iter().map(|h| h.d1 / h.value).collect();
        let last = n - 1;
        let geometric = -hs[last].d2 / hs[last].value;
        let coupling = fj.d1 * logd[last] / fj.value;
        let model = nil.bound_at(r);
        let cross: f64 = logd[last] * (logd.iter().sum::<f64>() - logd[last]);
        Ok([geometric, coupling, model, cross])
    };
    let at_r = groups(r_probe)?;
    let at_10r = groups(10.0 * r_probe)?;
    let names = ["geometric", "coupling", "model", "cross"];
    let mut terms = Vec::with_capacity(4);
    let mut exponents = [0.0f64; 4];
    for k in 0..4 {
        let (a, b) = (at_r[k].abs(), at_10r[k].abs());
        let slope = if a > 0.0 && b > 0.0 { (b / a).log10() } else { f64::NEG_INFINITY };
        exponents[k] = slope;
        terms.push((names[k].to_string(), a, b, slope));
    }
    let flag = if at_r[2] == 0.0 {
        Dominance::GeometricTerms
    } else {
        let others = exponents[0].max(exponents[1]).max(exponents[3]);
        // "dominating" means the model decays at least an order slower
        if exponents[2] >= others + 1.0 && at_10r[2].abs() > at_10r[0].abs().max(at_10r[1].abs()).max(at_10r[3].abs()) {
            Dominance::ModelTerm
        } else {
            Dominance::Comparable
        }
    };
    Ok(DominanceTable { r_probe, terms, flag })
}
