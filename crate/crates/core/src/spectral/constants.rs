use serde::{Deserialize, Serialize};

use crate::dyadic::{build_filter, top_block, BesovParams, Exponent, FilterKind};
use crate::dynamics::{chi_min, r_n};
use crate::fourier;
use crate::transfer::TransferOp;
use crate::Result;

/// `l -> n` (low transfer): `2^n <= lambda^{-1} 2^{l+4}`.
pub fn hook(n: u32, l: u32, lambda: f64) -> bool {
    2f64.powi(n as i32) * lambda <= 2f64.powi(l as i32 + 4)
}

/// Separation used for local kernels: `2^n > Lambda 2^{l+4}`.
pub fn separated(n: u32, l: u32, big_lambda: f64) -> bool {
    2f64.powi(n as i32) > big_lambda * 2f64.powi(l as i32 + 4)
}

/// Constants entering the low-part Lasota-Yorke estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LYConstants {
    /// Minimal expansion `inf |(f^m)'|`.
    pub lambda: f64,
    /// `L^p` operator-norm bound of the transfer operator.
    pub alpha: f64,
    /// Bound on the `L^p` operator norm of every block projector on the working grid.
    pub c1: f64,
    /// Largest ratio `||Delta_n u||_p / ||u||_p` seen on a corpus, when measured.
    pub c1_measured: Option<f64>,
    /// Norm of the cut-off multiplier; 1 for the global chart of the circle.
    pub c_tilde: f64,
    pub gamma_tilde: f64,
    pub gamma: f64,
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub sigma: f64,
    /// Power `m` of the operator the constants refer to.
    pub power: u32,
    pub grid: usize,
}

/// `C_1 2^{5s} / (1 - 2^{-s})`.
pub fn gamma_tilde(c1: f64, s: f64) -> f64 {
    c1 * 2f64.powf(5.0 * s) / (1.0 - 2f64.powf(-s))
}

/// `max_n (1/N) sum_j |K_n(x_j)|` with `K_n` the periodic kernel of block `n`.
///
/// This is the exact `L^1` and `L^inf` operator norm of the block projector on the
/// grid and an upper bound for every other `p`.
pub fn block_projector_bound(n: usize) -> Result<f64> {
    crate::dyadic::check_grid_size(n)?;
    let mut best = 0.0f64;
    for b in 0..=top_block(n) {
        let filter = build_filter(b as i64, FilterKind::Standard, n / 2)?;
        let spectrum: Vec<_> = (0..n)
            .map(|i| num_complex::Complex64::new(filter.at(fourier::frequency(i, n)), 0.0))
            .collect();
        let kernel = fourier::inverse(&spectrum);
        let l1 = kernel.iter().map(|v| v.norm()).sum::<f64>() / n as f64;
        best = best.max(l1);
    }
    Ok(best)
}

/// Supremum over a grid of `x` of `sum_{f^m(y) = x} 1/|(f^m)'(y)|`.
fn preimage_density_sup(op: &TransferOp) -> Result<f64> {
    if op.map().is_linear() {
        return Ok(1.0);
    }
    let m = 1 << 13;
    let mut best = 0.0f64;
    for i in 0..m {
        let x = i as f64 / m as f64;
        let total: f64 = op
            .preimages(x)?
            .iter()
            .map(|(y, _)| 1.0 / op.map().iterate_deriv(op.exponent(), *y).abs())
            .sum();
        best = best.max(total);
    }
    Ok(best)
}

impl LYConstants {
    pub fn compute(op: &TransferOp, params: &BesovParams, grid: usize) -> Result<Self> {
        let m = op.exponent();
        let chi = chi_min(op.map(), m);
        let lambda = (chi.sequence[m as usize - 1] * m as f64).exp();
        let sup_gf = r_n(op.weight(), op.map(), m).value;
        let alpha = match params.p {
            Exponent::Finite(p) if p == 1.0 => sup_gf,
            p => preimage_density_sup(op)?.powf(1.0 - p.reciprocal()) * sup_gf,
        };
        let c1 = block_projector_bound(grid)?;
        let gt = gamma_tilde(c1, params.s);
        Ok(Self {
            lambda,
            alpha,
            c1,
            c1_measured: None,
            c_tilde: 1.0,
            gamma_tilde: gt,
            gamma: gt,
            s: params.s,
            p: params.p,
            q: params.q,
            sigma: params.sigma,
            power: m,
            grid,
        })
    }

    /// `gamma~_s alpha lambda^{-s}`, the low-part contraction factor.
    pub fn low_factor(&self) -> f64 {
        self.gamma_tilde * self.alpha * self.lambda.powf(-self.s)
    }

    /// Column names matching [`LYConstants::table_row`].
    pub fn table_header() -> [&'static str; 11] {
        [
            "power", "s", "p", "q", "sigma", "lambda", "alpha", "c1", "c_tilde", "gamma_tilde", "gamma",
        ]
    }

    pub fn table_row(&self) -> Vec<String> {
        vec![
            self.power.to_string(),
            format!("{:.16e}", self.s),
            self.p.to_string(),
            self.q.to_string(),
            format!("{:.16e}", self.sigma),
            format!("{:.16e}", self.lambda),
            format!("{:.16e}", self.alpha),
            format!("{:.16e}", self.c1),
            format!("{:.16e}", self.c_tilde),
            format!("{:.16e}", self.gamma_tilde),
            format!("{:.16e}", self.gamma),
        ]
    }
}
