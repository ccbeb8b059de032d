use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::{b_l1_norm, b_m_eval, kernel_eval, KernelGrid};
use super::local::{LocalBranch, LocalWeight};
use crate::dyadic::Exponent;
use crate::{Error, Result};

/// Largest block index accepted by [`decay_check`].
pub const PAIR_BUDGET: u32 = 10;

/// Which kernel bound is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Prefactor `2^{-r max(n,l)}`, for weights of regularity `r <= r_T - 1`.
    FiniteLoss,
    /// Prefactor `2^{min(n,l) - r max(n,l)}`, for weights of regularity `r >= 1`.
    Gain,
}

impl Regime {
    /// Whether the regime applies to a weight of regularity `weight_r` and a branch of
    /// regularity `branch_r`.
    pub fn applicable(self, weight_r: f64, branch_r: f64) -> bool {
        match self {
            Regime::FiniteLoss => weight_r <= branch_r - 1.0,
            Regime::Gain => weight_r >= 1.0,
        }
    }

    pub fn prefactor(self, weight_r: f64, n: u32, l: u32) -> f64 {
        let hi = n.max(l) as f64;
        let lo = n.min(l) as f64;
        match self {
            Regime::FiniteLoss => 2f64.powf(-weight_r * hi),
            Regime::Gain => 2f64.powf(lo - weight_r * hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: u32,
    pub l: u32,
    pub max_abs: f64,
    pub prefactor: f64,
    /// `max |V(x,y)| / (prefactor b_min(x-y))` over the grid.
    pub constant: f64,
    pub w_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub regime: Regime,
    pub regularity: f64,
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `ln C` against `max(n,l)` (pairs with `C = 0` left out).
    pub slope: f64,
    pub fitted_constant: f64,
    pub pass: bool,
}

pub const SLOPE_LIMIT: f64 = 0.1;

impl DecayReport {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["n", "l", "max_abs", "prefactor", "constant", "w_nodes"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.l.to_string(),
                format!("{:.16e}", r.max_abs),
                format!("{:.16e}", r.prefactor),
                format!("{:.16e}", r.constant),
                r.w_nodes.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pointwise constant of one grid against the regime bound.
pub fn grid_constant(grid: &KernelGrid, regime: Regime, weight_r: f64) -> f64 {
    let pref = regime.prefactor(weight_r, grid.n, grid.l);
    let m = grid.n.min(grid.l);
    let mut c = 0.0f64;
    for (i, row) in grid.values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            c = c.max(v.abs() / (pref * b_m_eval(m, grid.x[i] - grid.y[j])));
        }
    }
    c
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx
}

fn check_regime(weight: &LocalWeight, regime: Regime) -> Result<f64> {
    let r = weight.regularity;
    if !r.is_finite() && !weight.is_zero() {
        return Err(Error::param(
            "decay checks need a finite regularity tag on the weight",
        ));
    }
    // local branches are analytic
    if !weight.is_zero() && !regime.applicable(r, f64::INFINITY) {
        return Err(Error::param(format!(
            "regime {regime:?} does not apply to regularity {r}"
        )));
    }
    Ok(r)
}

/// Fits `C(n,l)` for every pair and tests that it shows no growth in `max(n,l)`.
pub fn decay_check(
    branch: &LocalBranch,
    weight: &LocalWeight,
    pairs: &[(u32, u32)],
    regime: Regime,
    xs: &[f64],
    ys: &[f64],
) -> Result<DecayReport> {
    let r = check_regime(weight, regime)?;
    if pairs.is_empty() {
        return Err(Error::param("decay check needs at least one pair"));
    }
    if let Some(&(n, l)) = pairs.iter().find(|(n, l)| (*n).max(*l) > PAIR_BUDGET) {
        return Err(Error::param(format!(
            "pair ({n},{l}) exceeds the budget max(n,l) <= {PAIR_BUDGET}"
        )));
    }
    let rows = pairs
        .par_iter()
        .map(|&(n, l)| {
            let g = kernel_eval(branch, weight, n, l, xs, ys)?;
            let r_eff = if weight.is_zero() { 0.0 } else { r };
            Ok(DecayRow {
                n,
                l,
                max_abs: g.max_abs(),
                prefactor: regime.prefactor(r_eff, n, l),
                constant: grid_constant(&g, regime, r_eff),
                w_nodes: g.w_nodes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row.constant > 0.0)
        .map(|row| (row.n.max(row.l) as f64, row.constant.ln()))
        .collect();
    let slope = least_squares_slope(&points);
    let fitted_constant = rows.iter().map(|row| row.constant).fold(0.0, f64::max);
    Ok(DecayReport {
        regime,
        regularity: r,
        pass: slope <= SLOPE_LIMIT && fitted_constant.is_finite(),
        rows,
        slope,
        fitted_constant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YoungReport {
    /// `||H Phi||_p` on the x grid.
    pub measured: f64,
    /// `C ||b||_1 prefactor ||Phi||_p`.
    pub bound: f64,
    pub phi_norm: f64,
    pub pass: bool,
}

fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let m = xs.len();
    (0..m)
        .map(|i| {
            let left = if i > 0 { xs[i] - xs[i - 1] } else { 0.0 };
            let right = if i + 1 < m { xs[i + 1] - xs[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

fn grid_lp(values: &[f64], weights: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => values.iter().map(|v| v.abs()).fold(0.0, f64::max),
        Exponent::Finite(p) => values
            .iter()
            .zip(weights)
            .map(|(v, w)| w * v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// Applies `H Phi(x) = int V(x,y) Phi(y) dy` on a kernel grid and compares `||H Phi||_p`
/// with the convolution bound built from `constant`.
pub fn young_chain_check(
    grid: &KernelGrid,
    weight: &LocalWeight,
    phi: impl Fn(f64) -> f64,
    p: Exponent,
    constant: f64,
    regime: Regime,
) -> Result<YoungReport> {
    let r = check_regime(weight, regime)?;
    let ys = &grid.y;
    let phi_vals: Vec<f64> = ys.iter().map(|&y| phi(y)).collect();
    if ys.len() < 2 || phi_vals[0] != 0.0 || phi_vals[ys.len() - 1] != 0.0 {
        return Err(Error::param("test function must vanish at both ends of the y grid"));
    }
    let wy = trapezoid_weights(ys);
    let wx = trapezoid_weights(&grid.x);
    let h_phi: Vec<f64> = grid
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&phi_vals)
                .zip(&wy)
                .map(|((v, f), w)| v * f * w)
                .sum()
        })
        .collect();
    let measured = grid_lp(&h_phi, &wx, p);
    let phi_norm = grid_lp(&phi_vals, &wy, p);
    let r_eff = if weight.is_zero() { 0.0 } else { r };
    let pref = regime.prefactor(r_eff, grid.n, grid.l);
    let bound = constant * b_l1_norm(grid.n.min(grid.l))? * pref * phi_norm;
    Ok(YoungReport {
        measured,
        bound,
        phi_norm,
        pass: measured <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactors() {
        assert_eq!(Regime::FiniteLoss.prefactor(2.0, 7, 1), 2f64.powi(-14));
        assert_eq!(Regime::Gain.prefactor(2.0, 7, 1), 2f64.powi(-13));
        assert!(Regime::Gain.applicable(1.0, 3.0));
        assert!(!Regime::FiniteLoss.applicable(2.5, 3.0));
    }

    #[test]
    fn slope_of_line() {
        let pts: Vec<_> = (0..5).map(|i| (i as f64, 3.0 - 0.5 * i as f64)).collect();
        assert!((least_squares_slope(&pts) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_weight_constants_vanish() {
        let t = LocalBranch::Affine { a: 2.0, b: 0.0 };
        let xs: Vec<f64> = (0..5).map(|i| -1.0 + 0.5 * i as f64).collect();
        let rep = decay_check(&t, &LocalWeight::zero(), &[(7, 1), (8, 1)], Regime::Gain, &xs, &xs)
            .unwrap();
        assert!(rep.rows.iter().all(|r| r.constant == 0.0));
        assert!(rep.pass);
    }

    #[test]
    fn budget_enforced() {
        let t = LocalBranch::Affine { a: 2.0, b: 0.0 };
        let w = LocalWeight::polynomial(0.0, 0.5, 3);
        let xs = [0.0, 0.1];
        assert!(decay_check(&t, &w, &[(11, 1)], Regime::Gain, &xs, &xs).is_err());
    }
}
