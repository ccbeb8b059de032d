use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dyadic::{psi, rho, FilterKind};
use crate::fourier;

/// FFT length and frequency step used to tabulate the kernel of `rho`.
const TABLE_LEN: usize = 1 << 21;
const TABLE_DXI: f64 = 2.0 / 2048.0;
const STENCIL: usize = 8;

struct RhoTable {
    step: f64,
    values: Vec<f64>,
    imag_residual: f64,
}

fn table() -> &'static RhoTable {
    static TABLE: OnceLock<RhoTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let spectrum: Vec<Complex64> = (0..TABLE_LEN)
            .map(|j| {
                let xi = fourier::frequency(j, TABLE_LEN) as f64 * TABLE_DXI;
                Complex64::new(rho(xi.abs()), 0.0)
            })
            .collect();
        let raw = fourier::inverse(&spectrum);
        let scale = TABLE_DXI / (2.0 * PI);
        let keep = TABLE_LEN / 2 - STENCIL;
        let imag_residual = raw[..keep].iter().map(|v| (v.im * scale).abs()).fold(0.0, f64::max);
        RhoTable {
            step: 2.0 * PI / (TABLE_LEN as f64 * TABLE_DXI),
            values: raw[..keep].iter().map(|v| v.re * scale).collect(),
            imag_residual,
        }
    })
}

impl RhoTable {
    fn node(&self, j: i64) -> f64 {
        self.values.get(j.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    fn eval(&self, z: f64) -> f64 {
        let t = z.abs() / self.step;
        if t >= (self.values.len() - STENCIL) as f64 {
            return 0.0;
        }
        let base = t.floor() as i64;
        let u = t - base as f64;
        // 8-point Lagrange stencil on nodes base-3 ..= base+4
        let mut acc = 0.0;
        for i in -3i64..=4 {
            let mut w = 1.0;
            for k in -3i64..=4 {
                if k != i {
                    w *= (u - k as f64) / (i - k) as f64;
                }
            }
            acc += w * self.node(base + i);
        }
        acc
    }
}

/// `k_rho(z) = (1/2 pi) int rho(|xi|) e^{i z xi} d xi`.
pub fn rho_kernel(z: f64) -> f64 {
    table().eval(z)
}

/// Largest imaginary part produced while tabulating [`rho_kernel`].
pub fn rho_kernel_imag_residual() -> f64 {
    table().imag_residual
}

/// Real-line kernel of block `n`: `k_n(z) = (1/2 pi) int psi_n(xi) e^{i z xi} d xi`.
pub fn filter_kernel(n: u32, kind: FilterKind, z: f64) -> f64 {
    let t = table();
    let p = |e: i32| 2f64.powi(e);
    let n = n as i32;
    match (kind, n) {
        (FilterKind::Standard, 0) => t.eval(z),
        (FilterKind::Standard, _) => p(n) * t.eval(p(n) * z) - p(n - 1) * t.eval(p(n - 1) * z),
        (FilterKind::Wide, 0) => 2.0 * t.eval(2.0 * z),
        (FilterKind::Wide, _) => p(n + 1) * t.eval(p(n + 1) * z) - p(n - 2) * t.eval(p(n - 2) * z),
    }
}

/// Samples of a filter kernel on `[-half_width, half_width]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterKernel {
    pub n: u32,
    pub kind: FilterKind,
    pub z: Vec<f64>,
    pub values: Vec<f64>,
    /// Trapezoid integral of the samples; approximates `psi_n(0)`.
    pub integral: f64,
    /// Set when the sample step misses the top frequency or the window truncates the kernel.
    pub under_resolved: bool,
}

pub fn inv_filter_kernel(n: u32, kind: FilterKind, half_width: f64, samples: usize) -> FilterKernel {
    let samples = samples.max(3) | 1;
    let dz = 2.0 * half_width / (samples - 1) as f64;
    let z: Vec<f64> = (0..samples).map(|i| -half_width + i as f64 * dz).collect();
    let values: Vec<f64> = z.iter().map(|&x| filter_kernel(n, kind, x)).collect();
    let integral = dz * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[samples - 1]));
    let (_, top) = crate::dyadic::support(n, kind);
    let peak = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let edge = values[0].abs().max(values[samples - 1].abs());
    FilterKernel {
        n,
        kind,
        under_resolved: dz >= PI / top || edge > 1e-8 * peak,
        z,
        values,
        integral,
    }
}

/// `psi_n(0)`, the exact integral of the kernel.
pub fn kernel_mass(n: u32, kind: FilterKind) -> f64 {
    psi(n, kind, 0.0)
}
