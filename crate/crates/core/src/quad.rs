//! Adaptive Simpson quadrature over piecewise-smooth integrands.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;
/// Upper bound on interval bisections per call.
const MAX_SPLITS: usize = 1 << 20;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::QuadratureNonConvergence { a, b, tol });
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut budget = MAX_SPLITS;
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut budget).ok_or(Error::QuadratureNonConvergence { a, b, tol })
}

/// Integrates over `[breaks[0], breaks[last]]`, treating each interval between
/// consecutive break points as a separate smooth piece. The tolerance is split
/// across pieces in proportion to their length.
pub fn piecewise_simpson<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: f64) -> Result<f64> {
    let (Some(&first), Some(&last)) = (breaks.first(), breaks.last()) else {
        return Ok(0.0);
    };
    let span = last - first;
    if span <= 0.0 {
        return Ok(0.0);
    }
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| adaptive_simpson(f, w[0], w[1], tol * (w[1] - w[0]) / span))
        .sum()
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut usize,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Below this the difference is round-off, not truncation error.
    let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= 15.0 * tol || delta.abs() <= floor {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 || *budget == 0 {
        return None;
    }
    *budget -= 1;
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)?;
    Some(l + r)
}
