use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::constants::hook;
use crate::dyadic::{lp_norm_samples, psi, top_block, Exponent, FilterKind, GridFunction};
use crate::fourier;
use crate::transfer::GridOperator;
use crate::{Error, Result};

/// Energy fraction of `L u` above `N/4` that marks it as under-resolved.
pub const RESOLUTION_THRESHOLD: f64 = 1e-8;

/// Per-block norms of the low and high transfer pieces of `Delta_n L u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockNorms {
    /// `|| sum_{l -> n} Delta_n L Delta_l u ||_p` for `n = 0..=J`.
    pub low: Vec<f64>,
    /// `|| sum_{l -/-> n} Delta_n L Delta_l u ||_p`.
    pub high: Vec<f64>,
    /// Largest `||Delta_n (low + high - L u)||_2`, relative to `||L u||_2`.
    pub consistency: f64,
    /// Set when `L u` has non-negligible energy near the grid Nyquist frequency.
    pub resolution_flag: bool,
}

fn filtered(coeffs: &[Complex64], n: u32) -> Vec<Complex64> {
    let len = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * psi(n, FilterKind::Standard, fourier::frequency(i, len).unsigned_abs() as f64))
        .collect()
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Splits every block `Delta_n L u`, `n <= log2(N/2)`, according to the hook relation
/// with expansion `lambda`.
pub fn block_operator_norms(
    gop: &GridOperator,
    u: &GridFunction,
    lambda: f64,
    p: Exponent,
) -> Result<BlockNorms> {
    let n = gop.grid();
    if u.len() != n {
        return Err(Error::GridMismatch {
            expected: n,
            found: u.len(),
        });
    }
    let top = top_block(n);
    let coeffs = u.coefficients();
    let pieces: Vec<Vec<Complex64>> = (0..=top)
        .map(|l| gop.apply_spectral(&filtered(&coeffs, l)))
        .collect();
    let total = gop.apply_spectral(&coeffs);
    let total_norm = l2(&total);
    let top_energy: f64 = total
        .iter()
        .enumerate()
        .filter(|(i, _)| fourier::frequency(*i, n).unsigned_abs() as usize > n / 4)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    let resolution_flag = total_norm > 0.0 && top_energy > RESOLUTION_THRESHOLD * total_norm * total_norm;

    let h = 1.0 / n as f64;
    let mut low = Vec::with_capacity(top as usize + 1);
    let mut high = Vec::with_capacity(top as usize + 1);
    let mut consistency = 0.0f64;
    for b in 0..=top {
        let mut lo = vec![Complex64::new(0.0, 0.0); n];
        let mut hi = vec![Complex64::new(0.0, 0.0); n];
        for (l, piece) in pieces.iter().enumerate() {
            let target = if hook(b, l as u32, lambda) { &mut lo } else { &mut hi };
            for (t, v) in target.iter_mut().zip(piece) {
                *t += v;
            }
        }
        let lo = filtered(&lo, b);
        let hi = filtered(&hi, b);
        let whole = filtered(&total, b);
        if total_norm > 0.0 {
            let diff: Vec<Complex64> = lo
                .iter()
                .zip(&hi)
                .zip(&whole)
                .map(|((a, c), w)| a + c - w)
                .collect();
            consistency = consistency.max(l2(&diff) / total_norm);
        }
        low.push(lp_norm_samples(&fourier::inverse(&lo), p, h));
        high.push(lp_norm_samples(&fourier::inverse(&hi), p, h));
    }
    Ok(BlockNorms {
        low,
        high,
        consistency,
        resolution_flag,
    })
}
