use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward DFT normalised by `1/N`, so that `c[k] = (1/N) sum_j u_j e^{-2 pi i k j / N}`.
pub(crate) fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Inverse of [`forward`]: `u_j = sum_k c[k] e^{2 pi i k j / N}`.
pub(crate) fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
    buf
}

/// Signed frequency of FFT slot `index` on a grid of size `n`.
pub(crate) fn frequency(index: usize, n: usize) -> i64 {
    if index < n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

/// FFT slot of signed frequency `k`, if representable on a grid of size `n`.
pub(crate) fn slot(k: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if k >= -half && k < half {
        Some(k.rem_euclid(n as i64) as usize)
    } else {
        None
    }
}
