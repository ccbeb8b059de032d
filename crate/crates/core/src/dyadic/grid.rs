use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fourier;
use crate::{Error, Result};

/// Complex samples of a 1-periodic function at `x_j = j/N`, `N` a power of two.
///
/// Fourier coefficients are indexed by `k in [-N/2, N/2)`. Off-grid evaluation uses
/// the symmetric trigonometric interpolant, which splits the Nyquist coefficient
/// evenly between `+N/2` and `-N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    samples: Vec<Complex64>,
}

pub fn check_grid_size(n: usize) -> Result<()> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidGridSize(n))
    }
}

impl GridFunction {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        check_grid_size(samples.len())?;
        Ok(Self { samples })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn constant(n: usize, c: Complex64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_grid_size(n)?;
        Ok(Self {
            samples: (0..n).map(|j| f(j as f64 / n as f64)).collect(),
        })
    }

    pub fn from_real_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(n, |x| Complex64::new(f(x), 0.0))
    }

    /// The exponential `e_k(x) = exp(2 pi i k x)`.
    pub fn exponential(n: usize, k: i64) -> Result<Self> {
        Self::from_fn(n, |x| exponential(k, x))
    }

    /// Builds a function from `(frequency, coefficient)` pairs.
    pub fn from_modes(n: usize, modes: &[(i64, Complex64)]) -> Result<Self> {
        check_grid_size(n)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for &(k, c) in modes {
            let slot = fourier::slot(k, n).ok_or_else(|| {
                Error::param(format!("frequency {k} not representable on a grid of {n}"))
            })?;
            coeffs[slot] += c;
        }
        Ok(Self::from_coefficients(coeffs))
    }

    /// Inverse of [`GridFunction::coefficients`]. The length must already be valid.
    pub(crate) fn from_coefficients(coeffs: Vec<Complex64>) -> Self {
        Self {
            samples: fourier::inverse(&coeffs),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Grid point `x_j = j/N`.
    pub fn point(&self, j: usize) -> f64 {
        j as f64 / self.len() as f64
    }

    /// Fourier coefficients in FFT slot order; slot `i` holds frequency
    /// [`GridFunction::frequency_of`]`(i)`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        fourier::forward(&self.samples)
    }

    pub fn frequency_of(&self, slot: usize) -> i64 {
        fourier::frequency(slot, self.len())
    }

    /// Coefficient of frequency `k`, zero when `k` is not representable.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        match fourier::slot(k, self.len()) {
            Some(i) => self.coefficients()[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Trigonometric interpolant evaluated at an arbitrary point.
    pub fn eval(&self, x: f64) -> Complex64 {
        eval_coefficients(&self.coefficients(), x)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v * a).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected: self.len(),
                found: other.len(),
            })
        }
    }

    /// Root-mean-square of the samples.
    pub fn l2(&self) -> f64 {
        (self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.len() as f64).sqrt()
    }

    /// Fraction of spectral energy carried by `|k| > N/4`.
    pub fn top_octave_energy(&self) -> f64 {
        let coeffs = self.coefficients();
        let n = self.len();
        let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let top: f64 = coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| fourier::frequency(*i, n).unsigned_abs() as usize > n / 4)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        top / total
    }
}

pub fn exponential(k: i64, x: f64) -> Complex64 {
    // reduce k*x mod 1 before scaling by 2 pi
    let phase = (k as f64 * x).rem_euclid(1.0);
    Complex64::from_polar(1.0, 2.0 * PI * phase)
}

/// Evaluates the symmetric trigonometric interpolant with FFT-ordered coefficients.
pub(crate) fn eval_coefficients(coeffs: &[Complex64], x: f64) -> Complex64 {
    let n = coeffs.len();
    let half = n / 2;
    let mut acc = Complex64::new(0.0, 0.0);
    // positive frequencies 0..half-1 and negative -(half-1)..-1 via rotation recurrences
    let step = exponential(1, x);
    let mut rot = Complex64::new(1.0, 0.0);
    for (k, c) in coeffs.iter().take(half).enumerate() {
        if k % 64 == 0 {
            rot = exponential(k as i64, x);
        }
        acc += c * rot;
        rot *= step;
    }
    let step_neg = step.conj();
    let mut rot = step_neg;
    for k in 1..half {
        if k % 64 == 0 {
            rot = exponential(-(k as i64), x);
        }
        acc += coeffs[n - k] * rot;
        rot *= step_neg;
    }
    let nyquist = (half as f64 * x).rem_euclid(1.0);
    acc + coeffs[half] * (2.0 * PI * nyquist).cos()
}
