#![allow(dead_code)]

use besov_lab::dyadic::{psi, FilterKind};
use besov_lab::kernel::{kernel_eval, LocalBranch, LocalWeight};

/// Raw trapezoid sum of the three-fold kernel integral
/// `int e^{i(x-w) xi + i(T(w)-T(y)) eta} G(w) psi_n(xi) psi~_l(eta) dw dxi deta`,
/// with the step in every variable halved until the value settles to `tol` relative.
pub fn brute_force_kernel(
    branch: &LocalBranch,
    weight: &LocalWeight,
    n: u32,
    l: u32,
    x: f64,
    y: f64,
    tol: f64,
) -> f64 {
    let mut dxi = 0.5;
    let mut w_count = 257usize;
    let mut prev = raw_sum(branch, weight, n, l, x, y, dxi, w_count);
    for _ in 0..8 {
        dxi *= 0.5;
        w_count = 2 * w_count - 1;
        let next = raw_sum(branch, weight, n, l, x, y, dxi, w_count);
        if (next - prev).abs() <= tol * next.abs() {
            return next;
        }
        prev = next;
    }
    panic!("oracle did not settle at x={x} y={y}");
}

/// Frequency samples of an even profile on `[-top, top]` with trapezoid weights,
/// folded onto `xi >= 0`: returns `(xi, weight)` with weight doubled for `xi > 0`.
fn folded_nodes(profile: impl Fn(f64) -> f64, top: f64, step: f64) -> Vec<(f64, f64)> {
    let count = (top / step).ceil() as usize;
    (0..=count)
        .map(|i| {
            let xi = i as f64 * step;
            let mult = if i == 0 { 1.0 } else { 2.0 };
            (xi, mult * step * profile(xi))
        })
        .filter(|(_, w)| *w != 0.0)
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn raw_sum(
    branch: &LocalBranch,
    weight: &LocalWeight,
    n: u32,
    l: u32,
    x: f64,
    y: f64,
    dxi: f64,
    w_count: usize,
) -> f64 {
    let Some((lo, hi)) = weight.support() else {
        return 0.0;
    };
    let xi_nodes = folded_nodes(|t| psi(n, FilterKind::Standard, t), 2f64.powi(n as i32 + 1), dxi);
    let eta_nodes = folded_nodes(|t| psi(l, FilterKind::Wide, t), 2f64.powi(l as i32 + 2), dxi);
    let h = (hi - lo) / (w_count - 1) as f64;
    let ty = branch.eval(y);
    let mut total = 0.0;
    for k in 1..w_count - 1 {
        let w = lo + k as f64 * h;
        let g = weight.eval(w);
        if g == 0.0 {
            continue;
        }
        // imaginary parts cancel by evenness of both profiles
        let a: f64 = xi_nodes.iter().map(|(xi, c)| c * ((x - w) * xi).cos()).sum();
        let z = branch.eval(w) - ty;
        let b: f64 = eta_nodes.iter().map(|(eta, c)| c * (z * eta).cos()).sum();
        total += h * g * a * b;
    }
    total
}

pub fn linspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
        .collect()
}

/// Worst relative error of `kernel_eval` against the raw quadrature over the `picks`
/// largest cells of a 13 x 13 grid on `[-0.9, 0.9]^2`.
pub fn spot_check(branch: LocalBranch, weight: LocalWeight, n: u32, l: u32, picks: usize) -> f64 {
    let xs = linspace(-0.9, 0.9, 13);
    let grid = kernel_eval(&branch, &weight, n, l, &xs, &xs).unwrap();
    let mut cells: Vec<(usize, usize)> = (0..13).flat_map(|i| (0..13).map(move |j| (i, j))).collect();
    cells.sort_by(|a, b| grid.get(b.0, b.1).abs().total_cmp(&grid.get(a.0, a.1).abs()));
    let mut worst = 0.0f64;
    for &(i, j) in cells.iter().take(picks) {
        let exact = brute_force_kernel(&branch, &weight, n, l, xs[i], xs[j], 1e-7);
        worst = worst.max((grid.get(i, j) - exact).abs() / exact.abs());
    }
    worst
}
