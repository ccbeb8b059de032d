use num_complex::Complex64;

use super::filter::{psi, rho, FilterKind};
use super::grid::GridFunction;
use super::norms::{lp_norm_samples, top_block, weighted_sum, Exponent};
use crate::fourier;

/// One chart of the circle: `kappa(x) = x - center` on an arc around `center`,
/// carrying a smooth cut-off `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart {
    pub center: f64,
    /// Half-width of the chart domain.
    pub domain_radius: f64,
}

/// Two-interval cover of the circle with a smooth subordinate partition of unity.
///
/// `phi_0` equals 1 within distance `inner` of 0 and vanishes beyond `outer`;
/// `phi_1 = 1 - phi_0` lives on the arc around 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleAtlas {
    pub charts: [Chart; 2],
    inner: f64,
    outer: f64,
}

impl CircleAtlas {
    pub fn two_chart() -> Self {
        Self {
            charts: [
                Chart {
                    center: 0.0,
                    domain_radius: 0.35,
                },
                Chart {
                    center: 0.5,
                    domain_radius: 0.35,
                },
            ],
            inner: 0.2,
            outer: 0.3,
        }
    }

    fn phi0(&self, x: f64) -> f64 {
        let d = circle_distance(x, 0.0);
        rho(1.0 + (d - self.inner) / (self.outer - self.inner))
    }

    /// Partition-of-unity function of chart `i` at circle point `x`.
    pub fn cutoff(&self, i: usize, x: f64) -> f64 {
        match i {
            0 => self.phi0(x),
            _ => 1.0 - self.phi0(x),
        }
    }
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Padding factor of the non-periodic chart grid (line segment of length 4).
const PAD: usize = 4;

/// Sum over charts of the line Besov norms of `phi_i * u o kappa_i^{-1}`, computed on a
/// padded grid of length 4 with frequencies measured in cycles per unit.
pub fn besov_norm_charted(
    u: &GridFunction,
    atlas: &CircleAtlas,
    s: f64,
    p: Exponent,
    q: Exponent,
) -> f64 {
    let n = u.len();
    let m = PAD * n;
    let h = 1.0 / n as f64;
    let length = PAD as f64;
    atlas
        .charts
        .iter()
        .enumerate()
        .map(|(i, chart)| {
            // local coordinate y_j = j h - length/2
            let local: Vec<Complex64> = (0..m)
                .map(|j| {
                    let y = j as f64 * h - length / 2.0;
                    if y.abs() >= chart.domain_radius {
                        return Complex64::new(0.0, 0.0);
                    }
                    let x = (chart.center + y).rem_euclid(1.0);
                    let idx = ((x * n as f64).round() as usize) % n;
                    u.samples()[idx] * atlas.cutoff(i, x)
                })
                .collect();
            let coeffs = fourier::forward(&local);
            let blocks: Vec<f64> = (0..=top_block(n) + 1)
                .map(|b| {
                    let filtered: Vec<Complex64> = coeffs
                        .iter()
                        .enumerate()
                        .map(|(slot, c)| {
                            let nu = fourier::frequency(slot, m) as f64 / length;
                            c * psi(b, FilterKind::Standard, nu)
                        })
                        .collect();
                    lp_norm_samples(&fourier::inverse(&filtered), p, h)
                })
                .collect();
            weighted_sum(&blocks, s, q)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity() {
        let atlas = CircleAtlas::two_chart();
        for j in 0..1000 {
            let x = j as f64 / 1000.0;
            let a = atlas.cutoff(0, x);
            let b = atlas.cutoff(1, x);
            assert!((a + b - 1.0).abs() < 1e-15);
            if circle_distance(x, 0.0) >= 0.3 {
                assert_eq!(a, 0.0);
            }
            if circle_distance(x, 0.5) >= 0.3 {
                assert_eq!(b, 0.0);
            }
        }
    }

    #[test]
    fn zero_has_zero_norm() {
        let u = GridFunction::zeros(64).unwrap();
        let atlas = CircleAtlas::two_chart();
        assert_eq!(
            besov_norm_charted(&u, &atlas, 1.0, Exponent::Infinity, Exponent::Infinity),
            0.0
        );
    }
}
