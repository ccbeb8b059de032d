//! One-dimensional adaptive quadrature.

use crate::{Error, Result};

/// Adaptive Simpson rule on `[a, b]` with absolute tolerance `tol`.
///
/// Fails with [`Error::QuadratureNotConverged`] when the recursion depth is exhausted
/// before every panel meets its share of the tolerance.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut worst = 0.0f64;
    let value = simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50, &mut worst);
    if worst > 0.0 {
        Err(Error::QuadratureNotConverged(worst))
    } else {
        Ok(value)
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    worst: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        let rel = delta.abs() / (left + right).abs().max(f64::MIN_POSITIVE);
        *worst = worst.max(rel);
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, worst)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, worst)
}

/// Composite trapezoid weights for `count` equispaced nodes on `[a, b]`.
pub fn trapezoid_nodes(a: f64, b: f64, count: usize) -> Vec<(f64, f64)> {
    assert!(count >= 2, "trapezoid rule needs at least two nodes");
    let h = (b - a) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let w = if i == 0 || i + 1 == count { h / 2.0 } else { h };
            (a + i as f64 * h, w)
        })
        .collect()
}
