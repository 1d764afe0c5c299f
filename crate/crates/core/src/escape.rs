//! Escape-rate estimates and the analytic upper/lower bounds, plus orbit
//! diagnostics (D(R), s(ε,R), almost-translation ratios).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic::MinimalLoop;
use crate::numeric::{bisect, golden_min, linear_fit, log_grid};
use crate::warp::{eval_jet2, WarpingFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Trend {
    DecreasingToZero,
    BoundedAway,
    Inconclusive,
}

/// Log-log power fit `ratio ~ exp(intercept) · l^slope` over the tail.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RatioFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EscapeEstimate {
    /// Sup of max_radius/length over the tail window.
    pub tail_sup: f64,
    /// Sup over the whole table.
    pub full_sup: f64,
    pub trend: Trend,
    /// Winding-number range of the tail window.
    pub tail_window: (u64, u64),
    pub fit: Option<RatioFit>,
}

/// Trend-classifier thresholds; defaults as documented.
#[derive(Clone, Copy, Debug)]
pub struct TrendThresholds {
    /// Log-log slope at or below which a strictly decreasing tail counts
    /// as decreasing to zero.
    pub slope: f64,
    /// Tail minimum at or above which the ratio counts as bounded away
    /// from zero.
    pub floor: f64,
}

impl Default for TrendThresholds {
    fn default() -> Self {
        TrendThresholds { slope: -0.05, floor: 0.05 }
    }
}

/// Finite-ladder stand-in for `limsup ratio`: sup and trend over the last
/// `ceil(tail_fraction · n)` rows.
pub fn estimate_escape_rate(table: &[MinimalLoop], tail_fraction: f64) -> Result<EscapeEstimate> {
    estimate_escape_rate_with(table, tail_fraction, TrendThresholds::default())
}

pub fn estimate_escape_rate_with(
    table: &[MinimalLoop],
    tail_fraction: f64,
    thresholds: TrendThresholds,
) -> Result<EscapeEstimate> {
    if table.len() < 8 {
        return Err(Error::TableTooShort { need: 8, got: table.len() });
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail_fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    if !table.windows(2).all(|w| w[0].l < w[1].l) {
        return Err(Error::InvalidParameter("table rows must have increasing l".into()));
    }
    let n = table.len();
    let tail_len = ((tail_fraction * n as f64).ceil() as usize).clamp(2, n);
    let tail = &table[n - tail_len..];

    let ratios: Vec<f64> = tail.iter().map(|m| m.ratio()).collect();
    let tail_sup = ratios.iter().copied().fold(0.0, f64::max);
    let full_sup = table.iter().map(|m| m.ratio()).fold(0.0, f64::max);
    let tail_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);

    let fit = {
        let pts: Vec<(f64, f64)> = tail
            .iter()
            .filter(|m| m.ratio() > 0.0)
            .map(|m| ((m.l as f64).ln(), m.ratio().ln()))
            .collect();
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        linear_fit(&xs, &ys).map(|(a, b, r2)| RatioFit { slope: b, intercept: a, r_squared: r2 })
    };

    let strictly_decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let decaying =
        strictly_decreasing && fit.is_some_and(|f| f.slope <= thresholds.slope);
    let trend = if tail_sup == 0.0 || decaying {
        Trend::DecreasingToZero
    } else if tail_min >= thresholds.floor {
        Trend::BoundedAway
    } else {
        Trend::Inconclusive
    };

    Ok(EscapeEstimate {
        tail_sup,
        full_sup,
        trend,
        tail_window: (tail[0].l, tail[tail_len - 1].l),
        fit,
    })
}

/// The two analytic lower bounds for `h = (1 + r²)^{-α}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PolyLowerBound {
    pub basic: f64,
    pub improved: f64,
}

pub fn poly_lower_bound(alpha: f64) -> Result<PolyLowerBound> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    Ok(PolyLowerBound {
        basic: 0.5f64.powf(2.0 + 1.0 / (2.0 * alpha)),
        improved: 1.0 / (alpha.powf(1.0 / alpha) * (2.0 + 1.0 / alpha)),
    })
}

/// Global minimum of `F(r) = 2r + l·h(r)`: the length of the over-and-back
/// loop through radius r. Returns `(bound, argmin)`.
pub fn sigma_upper_bound(h: &WarpingFunction, l: u64) -> Result<(f64, f64)> {
    if l < 1 {
        return Err(Error::InvalidParameter("winding number must be >= 1".into()));
    }
    let h0 = eval_jet2(h, 0.0)?.value;
    // F(r) >= 2r, so no r beyond l·h(0)/2 can beat F(0) = l·h(0)
    let mut r_max = l as f64 * h0 / 2.0 + 1.0;
    if let Some(end) = h.domain_end() {
        r_max = r_max.min(end * (1.0 - 1e-9));
    }
    let f = |r: f64| 2.0 * r + l as f64 * eval_jet2(h, r).map(|j| j.value).unwrap_or(f64::INFINITY);
    let mut grid = vec![0.0];
    grid.extend(log_grid(r_max * 1e-9, r_max, 512));
    let (mut best_i, mut best_v) = (0usize, f(0.0));
    for (i, &r) in grid.iter().enumerate().skip(1) {
        let v = f(r);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 { 0.0 } else { grid[best_i - 1] };
    let hi = if best_i + 1 < grid.len() { grid[best_i + 1] } else { r_max };
    let (r_l, bound) = golden_min(lo, hi, f);
    if bound <= best_v {
        Ok((bound, r_l))
    } else {
        Ok((best_v, grid[best_i]))
    }
}

/// Projection lower bound `2·sqrt(R² + h(R)²·l²/4)` for a loop reaching
/// radius `R`; requires `h` nonincreasing on `[0, R]` (sampled check).
pub fn cylinder_lower_bound(radius: f64, l: u64, h: &WarpingFunction) -> Result<f64> {
    if !(radius >= 0.0) {
        return Err(Error::InvalidParameter(format!("R must be nonnegative, got {radius}")));
    }
    if radius > 0.0 {
        let mut prev = eval_jet2(h, 0.0)?.value;
        for i in 1..=64 {
            let r = radius * i as f64 / 64.0;
            let v = eval_jet2(h, r)?.value;
            if v > prev * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "h must be nonincreasing on [0, R]; increases near r = {r}"
                )));
            }
            prev = v;
        }
    }
    let hr = eval_jet2(h, radius)?.value;
    Ok(2.0 * (radius * radius + hr * hr * (l as f64) * (l as f64) / 4.0).sqrt())
}

/// Balance radius: the unique root of `2r = l·h(r)` for strictly
/// decreasing `h`.
pub fn wei_r_l(h: &WarpingFunction, l: u64) -> Result<f64> {
    if l < 1 {
        return Err(Error::InvalidParameter("winding number must be >= 1".into()));
    }
    if !h.is_strictly_decreasing() {
        return Err(Error::InvalidParameter(
            "balance radius requires a strictly decreasing profile".into(),
        ));
    }
    let g = |r: f64| 2.0 * r - l as f64 * eval_jet2(h, r).map(|j| j.value).unwrap_or(0.0);
    let mut hi = 1.0;
    let mut guard = 0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NoSignChange { lo: 0.0, hi });
        }
    }
    let r = bisect(0.0, hi, g, 1e-12)?;
    Ok(r)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlmostTranslation {
    pub l: u64,
    /// length(2l) / length(l).
    pub ratio: f64,
    /// Whether the ratio meets the almost-translation threshold.
    pub flag: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitDiagnostics {
    /// (R, D(R)) with D(R) = max excursion among loops of length ≤ R.
    pub d_curve: Vec<(f64, f64)>,
    /// (R, s(ε,R)) with s = 2(ε⁻¹ + 1)·D(R).
    pub s_curve: Vec<(f64, f64)>,
    /// (R, R/s); infinite where D = 0.
    pub ratio_r_over_s: Vec<(f64, f64)>,
    pub almost_translation: Vec<AlmostTranslation>,
}

pub const ALMOST_TRANSLATION_THRESHOLD: f64 = 1.9;

pub fn orbit_diagnostics(table: &[MinimalLoop], epsilon: f64) -> Result<OrbitDiagnostics> {
    orbit_diagnostics_with(table, epsilon, ALMOST_TRANSLATION_THRESHOLD)
}

pub fn orbit_diagnostics_with(
    table: &[MinimalLoop],
    epsilon: f64,
    threshold: f64,
) -> Result<OrbitDiagnostics> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if table.is_empty() {
        return Err(Error::TableTooShort { need: 1, got: 0 });
    }
    let mut rows: Vec<&MinimalLoop> = table.iter().collect();
    rows.sort_by(|a, b| a.length.total_cmp(&b.length));

    let s_factor = 2.0 * (1.0 / epsilon + 1.0);
    let mut d_curve = Vec::with_capacity(rows.len());
    let mut s_curve = Vec::with_capacity(rows.len());
    let mut ratio_r_over_s = Vec::with_capacity(rows.len());
    let mut d = 0.0f64;
    for m in &rows {
        d = d.max(m.max_radius);
        let s = s_factor * d;
        d_curve.push((m.length, d));
        s_curve.push((m.length, s));
        ratio_r_over_s.push((m.length, if s > 0.0 { m.length / s } else { f64::INFINITY }));
    }

    let mut almost_translation = Vec::new();
    for m in table {
        if let Some(double) = table.iter().find(|n| n.l == 2 * m.l) {
            let ratio = double.length / m.length;
            almost_translation.push(AlmostTranslation {
                l: m.l,
                ratio,
                flag: ratio >= threshold,
            });
        }
    }
    if almost_translation.is_empty() {
        return Err(Error::InsufficientPairs);
    }

    Ok(OrbitDiagnostics { d_curve, s_curve, ratio_r_over_s, almost_translation })
}

/// Affine fit of the ratio column against `1/ln r_l` with `r_l` the
/// balance radius; returns `(c, intercept, r_squared)`. Log-decay ratios
/// decay like `c / ln r_l`; at reachable winding numbers the relation is
/// affine in `1/ln r_l` (the intercept shrinks only asymptotically, so a
/// fit through the origin would be biased on any finite ladder).
pub fn log_decay_fit(table: &[MinimalLoop], h: &WarpingFunction) -> Result<(f64, f64, f64)> {
    if table.len() < 3 {
        return Err(Error::TableTooShort { need: 3, got: table.len() });
    }
    let mut xs = Vec::with_capacity(table.len());
    let mut ys = Vec::with_capacity(table.len());
    for m in table {
        let r_l = wei_r_l(h, m.l)?;
        if r_l > 1.0 {
            xs.push(1.0 / r_l.ln());
            ys.push(m.ratio());
        }
    }
    linear_fit(&xs, &ys)
        .map(|(intercept, slope, r2)| (slope, intercept, r2))
        .ok_or(Error::InsufficientPairs)
}
