use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::filter_kernel::filter_kernel;
use super::local::{LocalBranch, LocalWeight};
use crate::dyadic::FilterKind;
use crate::quad::adaptive_simpson;
use crate::spectral::separated;
use crate::{Error, Result};

/// Relative change between successive w-refinements at which a kernel grid is accepted.
pub const KERNEL_REL_TOL: f64 = 1e-6;
const MAX_DOUBLINGS: u32 = 10;
const W_CHUNK: usize = 4096;
const ROUNDOFF: f64 = 1e-16;

/// Samples `V_n^l(x_i, y_j)` of the local kernel, row `i` for `x_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    pub n: u32,
    pub l: u32,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    /// `max |T'|` on the support of the weight.
    pub big_lambda: f64,
    pub separated: bool,
    /// Number of w-nodes of the accepted quadrature.
    pub w_nodes: usize,
    /// Relative change of the last refinement.
    pub last_change: f64,
    /// Set when refinement stopped at the absolute roundoff floor instead of the relative tolerance.
    pub roundoff_limited: bool,
}

impl KernelGrid {
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// Long-format CSV: `x,y,value`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "y", "value"])?;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                w.write_record([
                    format!("{:.16e}", self.x[i]),
                    format!("{:.16e}", self.y[j]),
                    format!("{v:.16e}"),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// gnuplot `splot ... with pm3d` data: `x y |V|`, blank line between x rows.
    pub fn write_heat(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "# n={} l={} |V| heat data", self.n, self.l)?;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                writeln!(out, "{:.16e} {:.16e} {:.16e}", self.x[i], self.y[j], v.abs())?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `Lambda = max |T'|` over the support of `weight` (1 for the zero weight).
pub fn big_lambda(branch: &LocalBranch, weight: &LocalWeight) -> f64 {
    match weight.support() {
        Some((lo, hi)) => branch.max_derivative_on(lo, hi),
        None => 1.0,
    }
}

fn quadrature(
    branch: &LocalBranch,
    weight: &LocalWeight,
    n: u32,
    l: u32,
    xs: &[f64],
    ys: &[f64],
    (lo, hi): (f64, f64),
    count: usize,
) -> DMatrix<f64> {
    let h = (hi - lo) / (count - 1) as f64;
    let ty: Vec<f64> = ys.iter().map(|&y| branch.eval(y)).collect();
    let mut acc = DMatrix::<f64>::zeros(xs.len(), ys.len());
    // endpoints carry weight h/2; the weight vanishes there anyway
    let mut start = 0;
    while start < count {
        let end = (start + W_CHUNK).min(count);
        let width = end - start;
        let mut a = DMatrix::<f64>::zeros(xs.len(), width);
        let mut b = DMatrix::<f64>::zeros(width, ys.len());
        for c in 0..width {
            let k = start + c;
            let w = lo + k as f64 * h;
            let trap = if k == 0 || k == count - 1 { 0.5 } else { 1.0 };
            let g = weight.eval(w) * trap * h;
            if g == 0.0 {
                continue;
            }
            for (i, &x) in xs.iter().enumerate() {
                a[(i, c)] = g * filter_kernel(n, FilterKind::Standard, x - w);
            }
            let tw = branch.eval(w);
            for (j, &t) in ty.iter().enumerate() {
                b[(c, j)] = filter_kernel(l, FilterKind::Wide, tw - t);
            }
        }
        acc += a * b;
        start = end;
    }
    acc * (4.0 * PI * PI)
}

/// `V_n^l(x,y) = (2 pi)^2 int k_n(x-w) G(w) k~_l(T(w)-T(y)) dw`, refined by doubling the
/// number of w-nodes until the relative change drops below [`KERNEL_REL_TOL`].
pub fn kernel_eval(
    branch: &LocalBranch,
    weight: &LocalWeight,
    n: u32,
    l: u32,
    xs: &[f64],
    ys: &[f64],
) -> Result<KernelGrid> {
    branch.validate()?;
    weight.validate()?;
    let lam = big_lambda(branch, weight);
    if !separated(n, l, lam) {
        return Err(Error::NotSeparated { n, l, lambda: lam });
    }
    let mut grid = KernelGrid {
        n,
        l,
        x: xs.to_vec(),
        y: ys.to_vec(),
        values: vec![vec![0.0; ys.len()]; xs.len()],
        big_lambda: lam,
        separated: true,
        w_nodes: 0,
        last_change: 0.0,
        roundoff_limited: false,
    };
    let Some(support) = weight.support() else {
        return Ok(grid);
    };
    let width = support.1 - support.0;
    let mut count = (width * 2f64.powi(n as i32 + 2)).ceil() as usize + 1;
    // table noise of the filter kernels, integrated over the support
    let floor = ROUNDOFF * 4.0 * PI * PI * 2f64.powi((n + l) as i32) * width;
    let mut prev = quadrature(branch, weight, n, l, xs, ys, support, count);
    for _ in 0..MAX_DOUBLINGS {
        count = 2 * count - 1;
        let next = quadrature(branch, weight, n, l, xs, ys, support, count);
        let scale = next.amax();
        let change = (&next - &prev).amax();
        let rel = if scale > 0.0 { change / scale } else { 0.0 };
        prev = next;
        if rel < KERNEL_REL_TOL || change <= floor {
            grid.roundoff_limited = rel >= KERNEL_REL_TOL;
            grid.values = prev.row_iter().map(|r| r.iter().copied().collect()).collect();
            grid.w_nodes = count;
            grid.last_change = rel;
            return Ok(grid);
        }
    }
    let scale = prev.amax();
    Err(Error::QuadratureNotConverged(if scale > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }))
}

/// `b(x) = 1` for `|x| <= 1`, `|x|^{-2}` otherwise.
pub fn b_eval(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        1.0
    } else {
        1.0 / (a * a)
    }
}

/// `b_m(x) = 2^m b(2^m x)`.
pub fn b_m_eval(m: u32, x: f64) -> f64 {
    let s = 2f64.powi(m as i32);
    s * b_eval(s * x)
}

/// `||b_m||_{L^1}` by adaptive quadrature after mapping the half-line with `x = tan(theta)`.
pub fn b_l1_norm(m: u32) -> Result<f64> {
    let f = |theta: f64| {
        let c = theta.cos();
        if c <= 0.0 {
            return 2f64.powi(-(m as i32));
        }
        b_m_eval(m, theta.tan()) / (c * c)
    };
    let kink = 2f64.powi(-(m as i32)).atan();
    let half = adaptive_simpson(f, 0.0, kink, 1e-13)?
        + adaptive_simpson(f, kink, 0.5 * PI, 1e-13)?;
    Ok(2.0 * half)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
        (0..m)
            .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
            .collect()
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_eval(0.5), 1.0);
        assert_eq!(b_eval(2.0), 0.25);
        assert_eq!(b_m_eval(2, 1.0), 0.25);
        for m in 0..8 {
            assert!((b_l1_norm(m).unwrap() - 4.0).abs() < 1e-8, "m={m}");
        }
    }

    #[test]
    fn zero_weight_gives_zero_kernel() {
        let t = LocalBranch::Affine { a: 2.0, b: 0.0 };
        let xs = grid(-1.0, 1.0, 5);
        let g = kernel_eval(&t, &LocalWeight::zero(), 7, 1, &xs, &xs).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn hook_pairs_rejected() {
        let t = LocalBranch::Affine { a: 2.0, b: 0.0 };
        let w = LocalWeight::bump(0.0, 0.5);
        let xs = grid(-1.0, 1.0, 5);
        assert!(matches!(
            kernel_eval(&t, &w, 5, 1, &xs, &xs),
            Err(Error::NotSeparated { .. })
        ));
    }

    #[test]
    fn reflection_symmetry() {
        let w = LocalWeight::bump(0.0, 0.5);
        let xs = grid(-0.8, 0.8, 9);
        for t in [
            LocalBranch::Affine { a: 2.0, b: 0.0 },
            LocalBranch::Nonlinear { a: 2.5, beta: 0.5 },
        ] {
            let g = kernel_eval(&t, &w, 8, 1, &xs, &xs).unwrap();
            let scale = g.max_abs();
            assert!(scale > 0.0);
            for i in 0..9 {
                for j in 0..9 {
                    assert!((g.get(i, j) - g.get(8 - i, 8 - j)).abs() < 1e-9 * scale);
                }
            }
        }
    }
}
