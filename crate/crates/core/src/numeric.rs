//! Small numerical kernels: bracketed bisection, golden-section
//! minimization, adaptive Simpson quadrature, grids, and least squares.

use crate::error::{Error, Result};

/// Bracketed bisection for a continuous `f` with a sign change on `[lo, hi]`.
/// Converges to relative tolerance `rel_tol` on the abscissa.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    mut f: F,
    rel_tol: f64,
) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
pub fn golden_min<F: FnMut(f64) -> f64>(lo: f64, hi: f64, f: F) -> (f64, f64) {
    golden_min_iters(lo, hi, f, 120)
}

/// As [`golden_min`] with an iteration budget, for inner loops where a
/// coarse abscissa is enough.
pub fn golden_min_iters<F: FnMut(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    mut f: F,
    iters: u32,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..iters {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
        if (hi - lo).abs() <= 1e-13 * (lo.abs() + hi.abs() + 1e-300) {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance
/// `tol`.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    // intervals below this width are accepted outright: integrands with
    // FP-level jumps (e.g. a series/direct switchover) would otherwise
    // recurse forever for a negligible contribution
    let min_width = 1e-12 * (b - a).abs();
    // seed the recursion with several panels: a single panel can pass the
    // Richardson test by accident on deceptively sampled integrands
    const PANELS: usize = 8;
    let step = (b - a) / PANELS as f64;
    let panel_tol = (tol / PANELS as f64).max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for i in 0..PANELS {
        let (pa, pb) = (a + i as f64 * step, a + (i + 1) as f64 * step);
        let fa = f(pa);
        let fm = f(0.5 * (pa + pb));
        let fb = f(pb);
        let whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, pa, pb, fa, fm, fb, whole, panel_tol, 56, min_width)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    min_width: f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = f(0.5 * (a + m));
    let rm = f(0.5 * (m + b));
    let left = (m - a) / 6.0 * (fa + 4.0 * lm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * rm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a).abs() <= min_width {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure(format!(
            "max recursion depth on [{a}, {b}], residual {delta:e}"
        )));
    }
    let half_tol = (0.5 * tol).max(f64::MIN_POSITIVE);
    let l = simpson_rec(f, a, m, fa, lm, fm, left, half_tol, depth - 1, min_width)?;
    let r = simpson_rec(f, m, b, fm, rm, fb, right, half_tol, depth - 1, min_width)?;
    Ok(l + r)
}

/// `n` log-spaced points on `[lo, hi]`, inclusive. Requires `0 < lo < hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                let t = i as f64 / (n - 1) as f64;
                (llo + t * (lhi - llo)).exp()
            }
        })
        .collect()
}

/// Ordinary least squares fit `y = a + b x`; returns `(a, b, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some((a, b, r2))
}
