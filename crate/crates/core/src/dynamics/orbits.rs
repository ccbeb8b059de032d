use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::map::CircleMap;
use super::weight::Weight;
use crate::{Error, Result};

/// Default cap on the number `k^n` of symbolic words enumerated.
pub const DEFAULT_ORBIT_BUDGET: u128 = 1 << 20;

const CONTRACTION_TOL: f64 = 1e-13;
const CONTRACTION_ITERS: usize = 200;
const DEDUP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub x: f64,
    /// `(f^n)'(x)`.
    pub multiplier: f64,
    /// Number of symbolic words whose contraction lands on this point (1, or 2 for
    /// the fixed point that the all-`0` and all-`(k-1)` words share).
    pub codings: u32,
}

/// Fixed points of `f^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSet {
    pub period: u32,
    pub points: Vec<PeriodicPoint>,
}

impl OrbitSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Birkhoff sum `S_n phi(x) = sum_{j<n} phi(f^j x)`.
    pub fn birkhoff_sum(&self, map: &CircleMap, x: f64, phi: &(dyn Fn(f64) -> f64 + Sync)) -> f64 {
        let mut y = x;
        let mut acc = 0.0;
        for _ in 0..self.period {
            acc += phi(y);
            y = map.eval(y);
        }
        acc
    }

    /// Largest `|f^n(x) - x|` measured on the circle.
    pub fn max_residual(&self, map: &CircleMap) -> f64 {
        self.points
            .iter()
            .map(|p| {
                let d = (map.iterate(self.period, p.x) - p.x).rem_euclid(1.0);
                d.min(1.0 - d)
            })
            .fold(0.0, f64::max)
    }
}

/// The contraction `h_{w_0} o ... o h_{w_{n-1}}` applied to `x`.
fn compose_branches(map: &CircleMap, word: &[u8], x: f64) -> Result<f64> {
    word.iter()
        .rev()
        .try_fold(x, |y, &j| map.inverse_branch(j as usize, y))
}

fn word_of(index: u64, k: u64, n: u32) -> Vec<u8> {
    let mut w = vec![0u8; n as usize];
    let mut r = index;
    for slot in w.iter_mut().rev() {
        *slot = (r % k) as u8;
        r /= k;
    }
    w
}

/// One fixed point of `f^n` per symbolic word, with duplicates merged.
pub fn periodic_points(map: &CircleMap, n: u32) -> Result<OrbitSet> {
    periodic_points_with_budget(map, n, DEFAULT_ORBIT_BUDGET)
}

pub fn periodic_points_with_budget(map: &CircleMap, n: u32, budget: u128) -> Result<OrbitSet> {
    if n == 0 {
        return Err(Error::param("period must be positive"));
    }
    let k = map.degree() as u64;
    let needed = (k as u128).checked_pow(n).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::OrbitBudgetExceeded { needed, budget });
    }
    let kf = k as f64;
    let raw: Vec<f64> = (0..needed as u64)
        .into_par_iter()
        .map(|idx| {
            let word = word_of(idx, k, n);
            // exact fixed point of the linear model as the seed
            let digits = word
                .iter()
                .enumerate()
                .fold(0.0, |acc, (i, &d)| acc + d as f64 * kf.powi(-(i as i32) - 1));
            let mut x = (digits / (1.0 - kf.powi(-(n as i32)))).clamp(0.0, 1.0);
            for _ in 0..CONTRACTION_ITERS {
                let next = compose_branches(map, &word, x)?;
                if (next - x).abs() < CONTRACTION_TOL {
                    return Ok(next);
                }
                x = next;
            }
            Err(Error::ContractionNotConverged(word))
        })
        .collect::<Result<_>>()?;

    let mut xs: Vec<f64> = raw
        .into_iter()
        .map(|x| if x >= 1.0 - DEDUP_TOL { x - 1.0 } else { x })
        .map(|x| x.max(0.0))
        .collect();
    xs.sort_by(|a, b| a.total_cmp(b));
    let mut points: Vec<PeriodicPoint> = Vec::with_capacity(xs.len());
    for x in xs {
        match points.last_mut() {
            Some(p) if (x - p.x).abs() < DEDUP_TOL => p.codings += 1,
            _ => points.push(PeriodicPoint {
                x,
                multiplier: map.iterate_deriv(n, x),
                codings: 1,
            }),
        }
    }
    Ok(OrbitSet { period: n, points })
}

/// Potential `phi = constant + a log|g| + b log|f'|`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Potential {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub log_weight: f64,
    #[serde(default)]
    pub log_jacobian: f64,
}

impl Potential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            ..Self::default()
        }
    }

    /// `log|g| - s log|f'|`.
    pub fn weighted_jacobian(s: f64) -> Self {
        Self {
            constant: 0.0,
            log_weight: 1.0,
            log_jacobian: -s,
        }
    }

    pub fn eval(&self, map: &CircleMap, weight: Option<&Weight>, x: f64) -> f64 {
        let mut v = self.constant;
        if self.log_jacobian != 0.0 {
            v += self.log_jacobian * map.deriv(x).abs().ln();
        }
        if self.log_weight != 0.0 {
            let g = weight.map(|g| g.eval(map, x).norm()).unwrap_or(1.0);
            v += self.log_weight * g.ln();
        }
        v
    }
}

/// Pressure estimates for `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureEstimate {
    /// `(1/n) log sum_{x in Fix f^n} exp S_n phi(x)`.
    pub fixed_point: Vec<f64>,
    /// Same sum over all `k^n` symbolic words.
    pub symbolic: Vec<f64>,
}

impl PressureEstimate {
    pub fn last(&self) -> f64 {
        *self.fixed_point.last().unwrap()
    }

    pub fn last_symbolic(&self) -> f64 {
        *self.symbolic.last().unwrap()
    }

    /// `|P_n - P_{n-1}|` of the fixed-point sequence at the last step.
    pub fn last_delta(&self) -> f64 {
        match self.fixed_point.len() {
            0 | 1 => f64::INFINITY,
            l => (self.fixed_point[l - 1] - self.fixed_point[l - 2]).abs(),
        }
    }
}

fn log_sum_exp(terms: impl Iterator<Item = (f64, f64)>) -> f64 {
    let terms: Vec<(f64, f64)> = terms.collect();
    let top = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    let s: f64 = terms.iter().map(|(m, v)| m * (v - top).exp()).sum();
    top + s.ln()
}

/// Periodic-orbit pressure of `phi` for `n = 1..=n_max`.
pub fn pressure(
    map: &CircleMap,
    phi: &(dyn Fn(f64) -> f64 + Sync),
    n_max: u32,
) -> Result<PressureEstimate> {
    let mut fixed_point = Vec::with_capacity(n_max as usize);
    let mut symbolic = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let orbits = periodic_points(map, n)?;
        let sums: Vec<(u32, f64)> = orbits
            .points
            .par_iter()
            .map(|p| (p.codings, orbits.birkhoff_sum(map, p.x, phi)))
            .collect();
        let nf = n as f64;
        fixed_point.push(log_sum_exp(sums.iter().map(|&(_, s)| (1.0, s))) / nf);
        symbolic.push(log_sum_exp(sums.iter().map(|&(c, s)| (c as f64, s))) / nf);
    }
    Ok(PressureEstimate {
        fixed_point,
        symbolic,
    })
}

/// Pressure of a structured potential.
pub fn potential_pressure(
    map: &CircleMap,
    weight: Option<&Weight>,
    potential: &Potential,
    n_max: u32,
) -> Result<PressureEstimate> {
    let phi = |x: f64| potential.eval(map, weight, x);
    pressure(map, &phi, n_max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlBound {
    /// `exp` of the symbolic pressure at the last step.
    pub value: f64,
    /// `exp` of the fixed-point pressure at the last step.
    pub fixed_point_value: f64,
    pub pressure: PressureEstimate,
}

/// `exp P(log|g| - s log|f'|)` from periodic orbits of period `n`.
pub fn gl_bound(map: &CircleMap, g: &Weight, s: f64, n: u32) -> Result<GlBound> {
    let floor = (0..4096)
        .map(|i| g.eval(map, i as f64 / 4096.0).norm())
        .fold(f64::INFINITY, f64::min);
    if !(floor > 1e-12) {
        return Err(Error::WeightHasZeros(floor));
    }
    let p = potential_pressure(map, Some(g), &Potential::weighted_jacobian(s), n)?;
    Ok(GlBound {
        value: p.last_symbolic().exp(),
        fixed_point_value: p.last().exp(),
        pressure: p,
    })
}
