use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::map::CircleMap;
use super::weight::Weight;

/// Value of a grid sup or inf after local polishing, with the change observed when
/// the grid is doubled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridExtremum {
    pub value: f64,
    pub argument: f64,
    pub refinement_delta: f64,
}

/// Per-`n` estimates `n = 1..=n_max`; `value` is the last one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sequence {
    pub value: f64,
    pub sequence: Vec<f64>,
    /// Largest grid-doubling change over the sequence.
    pub refinement_delta: f64,
}

/// Grid size used for orbit extrema up to step `n`: 256 points per branch of `f^n`.
pub fn extremum_grid(degree: u32, n: u32) -> usize {
    let want = 256f64 * (degree as f64).powi(n as i32);
    (want.min((1u64 << 20) as f64) as usize).clamp(1 << 12, 1 << 20)
}

/// Running sums of `log |f'|` (and optionally `log |g|`) along the orbit of `x`.
fn log_profile(map: &CircleMap, weight: Option<&Weight>, n_max: u32, x: f64, out: &mut [f64]) {
    let mut y = x;
    let mut acc = 0.0;
    for slot in out.iter_mut().take(n_max as usize) {
        acc += map.deriv(y).abs().ln();
        if let Some(g) = weight {
            acc += g.eval(map, y).norm().ln();
        }
        *slot = acc;
        y = map.eval(y);
    }
}

fn log_value(map: &CircleMap, weight: Option<&Weight>, n: u32, x: f64) -> f64 {
    let mut buf = vec![0.0; n as usize];
    log_profile(map, weight, n, x, &mut buf);
    buf[n as usize - 1]
}

/// For every `n <= n_max`, the grid extremum of the `n`-th log profile, polished
/// by golden-section search around the best grid point.
fn scan(map: &CircleMap, weight: Option<&Weight>, n_max: u32, m: usize, maximize: bool) -> Vec<(f64, f64)> {
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let worst = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    let chunk = 4096;
    let partial: Vec<Vec<(f64, usize)>> = (0..m.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut best = vec![(worst, 0usize); n_max as usize];
            let mut buf = vec![0.0; n_max as usize];
            for i in c * chunk..((c + 1) * chunk).min(m) {
                log_profile(map, weight, n_max, i as f64 / m as f64, &mut buf);
                for (b, v) in best.iter_mut().zip(&buf) {
                    if better(*v, b.0) {
                        *b = (*v, i);
                    }
                }
            }
            best
        })
        .collect();
    (0..n_max as usize)
        .map(|n| {
            let (mut v, i) = partial
                .iter()
                .map(|p| p[n])
                .fold((worst, 0), |acc, x| if better(x.0, acc.0) { x } else { acc });
            let h = 1.0 / m as f64;
            let x0 = i as f64 * h;
            let sign = if maximize { -1.0 } else { 1.0 };
            let (x, fx) = golden_section(
                |x| sign * log_value(map, weight, n as u32 + 1, x),
                x0 - h,
                x0 + h,
            );
            let polished = sign * fx;
            let mut arg = x0;
            if better(polished, v) {
                v = polished;
                arg = x;
            }
            (v, arg.rem_euclid(1.0))
        })
        .collect()
}

/// Minimizes `f` on `[a, b]`.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn refined_scan(map: &CircleMap, weight: Option<&Weight>, n_max: u32, maximize: bool) -> (Vec<(f64, f64)>, Vec<f64>) {
    let m = extremum_grid(map.degree(), n_max);
    let coarse = scan(map, weight, n_max, m, maximize);
    let fine = scan(map, weight, n_max, 2 * m, maximize);
    let deltas = coarse
        .iter()
        .zip(&fine)
        .enumerate()
        .map(|(n, (a, b))| {
            if a.0.is_finite() && b.0.is_finite() {
                ((a.0 - b.0) / (n as f64 + 1.0)).abs()
            } else if a.0 == b.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect();
    (fine, deltas)
}

/// `chi_min` estimates `(1/n) log min |(f^n)'|` for `n = 1..=n_max`.
pub fn chi_min(map: &CircleMap, n_max: u32) -> Sequence {
    assert!(n_max >= 1, "n_max must be positive");
    if map.is_linear() {
        let v = map.deriv(0.0).ln();
        return Sequence {
            value: v,
            sequence: vec![v; n_max as usize],
            refinement_delta: 0.0,
        };
    }
    let (ext, deltas) = refined_scan(map, None, n_max, false);
    let sequence: Vec<f64> = ext
        .iter()
        .enumerate()
        .map(|(n, (v, _))| v / (n as f64 + 1.0))
        .collect();
    Sequence {
        value: *sequence.last().unwrap(),
        refinement_delta: deltas.iter().copied().fold(0.0, f64::max),
        sequence,
    }
}

/// `R_n(g) = sup |g^{(n)} (f^n)'|` on a polished grid.
pub fn r_n(g: &Weight, map: &CircleMap, n: u32) -> GridExtremum {
    assert!(n >= 1, "n must be positive");
    let (ext, deltas) = refined_scan(map, Some(g), n, true);
    let (v, x) = ext[n as usize - 1];
    GridExtremum {
        value: v.exp(),
        argument: x,
        refinement_delta: (deltas[n as usize - 1] * n as f64).exp() - 1.0,
    }
}

/// `R_n(g)^{1/n}` for `n = 1..=n_max`; `value` estimates `R(g)`.
pub fn r_limit(g: &Weight, map: &CircleMap, n_max: u32) -> Sequence {
    assert!(n_max >= 1, "n_max must be positive");
    let (ext, deltas) = refined_scan(map, Some(g), n_max, true);
    let sequence: Vec<f64> = ext
        .iter()
        .enumerate()
        .map(|(n, (v, _))| (v / (n as f64 + 1.0)).exp())
        .collect();
    Sequence {
        value: *sequence.last().unwrap(),
        refinement_delta: deltas.iter().copied().fold(0.0, f64::max),
        sequence,
    }
}
