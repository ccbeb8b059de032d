use num_complex::Complex64;
use rayon::prelude::*;

use crate::dyadic::{eval_coefficients, exponential, GridFunction};
use crate::dynamics::{CircleMap, Weight};
use crate::fourier;
use crate::{Error, Result};

/// Energy fraction above `N/4` beyond which trigonometric interpolation at
/// preimages is flagged as degraded.
pub const DEGRADATION_THRESHOLD: f64 = 1e-8;

/// The operator `(L u)(x) = sum_{f^m(y) = x} g^{(m)}(y) u(y)`, `m` the power
/// (1 unless built with [`TransferOp::power`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferOp {
    map: CircleMap,
    weight: Weight,
    power: u32,
}

impl TransferOp {
    pub fn new(map: CircleMap, weight: Weight) -> Result<Self> {
        weight.validate()?;
        Ok(Self {
            map,
            weight,
            power: 1,
        })
    }

    /// The iterate `L^m = L_{f^m, g^{(m)}}`.
    pub fn power(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("operator power must be positive"));
        }
        let total = (self.map.degree() as u128).checked_pow(self.power * m);
        if total.is_none_or(|t| t > 1 << 16) {
            return Err(Error::param(format!("power {m} has too many inverse branches")));
        }
        Ok(Self {
            power: self.power * m,
            ..*self
        })
    }

    pub fn map(&self) -> &CircleMap {
        &self.map
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn exponent(&self) -> u32 {
        self.power
    }

    /// Number of preimages `k^m` of a point.
    pub fn branch_count(&self) -> usize {
        (self.map.degree() as usize).pow(self.power)
    }

    /// Preimages `y` of `x` under `f^m`, paired with `g^{(m)}(y)`.
    pub fn preimages(&self, x: f64) -> Result<Vec<(f64, Complex64)>> {
        let mut level = vec![(x.rem_euclid(1.0), Complex64::new(1.0, 0.0))];
        for _ in 0..self.power {
            let mut next = Vec::with_capacity(level.len() * self.map.degree() as usize);
            for (z, acc) in level {
                for y in self.map.inverse_branches(z)? {
                    next.push((y, acc * self.weight.eval(&self.map, y)));
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// `f^m(x)`.
    pub fn forward(&self, x: f64) -> f64 {
        self.map.iterate(self.power, x)
    }

    /// `g^{(m)}(x) |(f^m)'(x)|`.
    pub fn jacobian_weight(&self, x: f64) -> Complex64 {
        let mut y = x;
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..self.power {
            acc *= self.weight.eval(&self.map, y) * self.map.deriv(y).abs();
            y = self.map.eval(y);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub function: GridFunction,
    /// Set when `u` carries more than [`DEGRADATION_THRESHOLD`] of its energy above `N/4`.
    pub degraded: bool,
}

/// `L u` sampled on the grid of `u`, evaluating `u` at preimages by its
/// trigonometric interpolant.
pub fn apply(op: &TransferOp, u: &GridFunction) -> Result<Applied> {
    let coeffs = u.coefficients();
    let n = u.len();
    let samples = (0..n)
        .into_par_iter()
        .map(|i| {
            let pre = op.preimages(i as f64 / n as f64)?;
            Ok(pre
                .iter()
                .map(|(y, g)| g * eval_coefficients(&coeffs, *y))
                .sum())
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(Applied {
        function: GridFunction::new(samples)?,
        degraded: u.top_octave_energy() > DEGRADATION_THRESHOLD,
    })
}

/// `L u` for `u` given pointwise; exact at the grid points of the output.
pub fn apply_fn(op: &TransferOp, n: usize, u: impl Fn(f64) -> Complex64 + Sync) -> Result<GridFunction> {
    crate::dyadic::check_grid_size(n)?;
    let samples = (0..n)
        .into_par_iter()
        .map(|i| {
            let pre = op.preimages(i as f64 / n as f64)?;
            Ok(pre.iter().map(|(y, g)| g * u(*y)).sum())
        })
        .collect::<Result<Vec<Complex64>>>()?;
    GridFunction::new(samples)
}

/// `|int (L u) phi - int u (phi o f) g |f'||`, both sides by trapezoid quadrature on a
/// grid `8 k^m` times finer than the inputs.
pub fn duality_residual(op: &TransferOp, u: &GridFunction, phi: &GridFunction) -> Result<f64> {
    let cu = u.coefficients();
    let cphi = phi.coefficients();
    let n = u.len().max(phi.len());
    let m = 8 * op.branch_count() * n;
    let (lhs, rhs) = (0..m)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / m as f64;
            let lu: Complex64 = op
                .preimages(x)?
                .iter()
                .map(|(y, g)| g * eval_coefficients(&cu, *y))
                .sum();
            let left = lu * eval_coefficients(&cphi, x);
            let right = eval_coefficients(&cu, x)
                * eval_coefficients(&cphi, op.forward(x))
                * op.jacobian_weight(x);
            Ok((left, right))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(((lhs - rhs) / m as f64).norm())
}

/// Dense realisation of `L` on band-limited functions of a fixed grid:
/// samples of `L u` equal `B` applied to the FFT coefficients of `u`.
#[derive(Debug, Clone)]
pub struct GridOperator {
    n: usize,
    /// Column `s` holds the samples of `L` applied to the basis function of FFT slot `s`.
    columns: Vec<Vec<Complex64>>,
}

impl GridOperator {
    pub fn new(op: &TransferOp, n: usize) -> Result<Self> {
        crate::dyadic::check_grid_size(n)?;
        let half = n / 2;
        let rows = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![Complex64::new(0.0, 0.0); n];
                for (y, g) in op.preimages(i as f64 / n as f64)? {
                    let step = exponential(1, y);
                    let mut rot = Complex64::new(1.0, 0.0);
                    for k in 0..half {
                        if k % 64 == 0 {
                            rot = exponential(k as i64, y);
                        }
                        row[k] += g * rot;
                        if k > 0 {
                            row[n - k] += g * rot.conj();
                        }
                        rot *= step;
                    }
                    let nyq = (half as f64 * y).rem_euclid(1.0);
                    row[half] += g * (2.0 * std::f64::consts::PI * nyq).cos();
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        let columns = (0..n)
            .map(|s| rows.iter().map(|r| r[s]).collect())
            .collect();
        Ok(Self { n, columns })
    }

    pub fn grid(&self) -> usize {
        self.n
    }

    /// Samples of `L u` from the FFT coefficients of `u`; zero coefficients are skipped.
    pub fn apply_coefficients(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (c, col) in coeffs.iter().zip(&self.columns) {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(col) {
                *o += c * v;
            }
        }
        out
    }

    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        if u.len() != self.n {
            return Err(Error::GridMismatch {
                expected: self.n,
                found: u.len(),
            });
        }
        GridFunction::new(self.apply_coefficients(&u.coefficients()))
    }

    /// FFT coefficients of `L u`.
    pub fn apply_spectral(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        fourier::forward(&self.apply_coefficients(coeffs))
    }
}
