use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Closed families of degree-`k` circle maps, given through their lifts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapFamily {
    /// `F(x) = k x`.
    Linear { degree: u32 },
    /// `F(x) = k x + eps sin(2 pi x) / (2 pi)`.
    Perturbed { degree: u32, epsilon: f64 },
}

/// Validated expanding circle map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapFamily", into = "MapFamily")]
pub struct CircleMap {
    family: MapFamily,
    k: f64,
    eps: f64,
}

impl TryFrom<MapFamily> for CircleMap {
    type Error = Error;
    fn try_from(family: MapFamily) -> Result<Self> {
        CircleMap::new(family)
    }
}

impl From<CircleMap> for MapFamily {
    fn from(m: CircleMap) -> Self {
        m.family
    }
}

const CHECK_POINTS: usize = 4096;
const MAX_ROOT_ITERS: usize = 100;

impl CircleMap {
    pub fn new(family: MapFamily) -> Result<Self> {
        let (degree, eps) = match family {
            MapFamily::Linear { degree } => (degree, 0.0),
            MapFamily::Perturbed { degree, epsilon } => (degree, epsilon),
        };
        if degree < 2 {
            return Err(Error::NotExpanding(format!("degree {degree} < 2")));
        }
        if !eps.is_finite() {
            return Err(Error::param("perturbation must be finite"));
        }
        let map = Self {
            family,
            k: degree as f64,
            eps,
        };
        let min_d = (0..CHECK_POINTS)
            .map(|i| map.deriv(i as f64 / CHECK_POINTS as f64).abs())
            .fold(f64::INFINITY, f64::min);
        if min_d <= 1.0 || map.k - eps.abs() <= 1.0 {
            return Err(Error::NotExpanding(format!(
                "inf |f'| = {} must exceed 1",
                min_d.min(map.k - eps.abs())
            )));
        }
        for i in 0..16 {
            let x = i as f64 / 16.0 + 0.013;
            if (map.lift(x + 1.0) - map.lift(x) - map.k).abs() > 1e-12 {
                return Err(Error::param("lift is not of degree k"));
            }
        }
        Ok(map)
    }

    pub fn linear(degree: u32) -> Result<Self> {
        Self::new(MapFamily::Linear { degree })
    }

    /// The doubling map `x -> 2x mod 1`.
    pub fn doubling() -> Self {
        Self::linear(2).expect("doubling map is expanding")
    }

    pub fn perturbed(degree: u32, epsilon: f64) -> Result<Self> {
        Self::new(MapFamily::Perturbed { degree, epsilon })
    }

    pub fn family(&self) -> MapFamily {
        self.family
    }

    pub fn degree(&self) -> u32 {
        self.k as u32
    }

    /// True when `f'` is constant.
    pub fn is_linear(&self) -> bool {
        self.eps == 0.0
    }

    pub fn lift(&self, x: f64) -> f64 {
        if self.eps == 0.0 {
            self.k * x
        } else {
            self.k * x + self.eps * (2.0 * PI * x).sin() / (2.0 * PI)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = self.lift(x).rem_euclid(1.0);
        if y >= 1.0 {
            0.0
        } else {
            y
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        if self.eps == 0.0 {
            self.k
        } else {
            self.k + self.eps * (2.0 * PI * x).cos()
        }
    }

    /// Lower bound of `|f'|`, attained for these families.
    pub fn min_expansion(&self) -> f64 {
        self.k - self.eps.abs()
    }

    pub fn max_expansion(&self) -> f64 {
        self.k + self.eps.abs()
    }

    /// Branch `j` of the inverse: the `y` in `[0, 1]` with `F(y) = x + j`.
    ///
    /// Accepts `x` in the closed interval `[0, 1]` so that the branch extends
    /// continuously to both ends.
    pub fn inverse_branch(&self, j: usize, x: f64) -> Result<f64> {
        let target = x + j as f64;
        if self.eps == 0.0 {
            return Ok(target / self.k);
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut y = target / self.k;
        for _ in 0..MAX_ROOT_ITERS {
            let r = self.lift(y) - target;
            if r.abs() <= 1e-15 * target.abs().max(1.0) {
                return Ok(y);
            }
            if r > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            let mut next = y - r / self.deriv(y);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - y).abs() < 1e-17 {
                return Ok(next);
            }
            y = next;
        }
        if (self.lift(y) - target).abs() < 1e-12 {
            Ok(y)
        } else {
            Err(Error::RootNotConverged { branch: j, target })
        }
    }

    /// The `k` preimages of `x` in increasing order within `[0, 1)`.
    pub fn inverse_branches(&self, x: f64) -> Result<Vec<f64>> {
        let x = x.rem_euclid(1.0);
        let x = if x >= 1.0 { 0.0 } else { x };
        (0..self.degree() as usize)
            .map(|j| self.inverse_branch(j, x))
            .collect()
    }

    /// `f^n(x)`.
    pub fn iterate(&self, n: u32, x: f64) -> f64 {
        (0..n).fold(x, |y, _| self.eval(y))
    }

    /// `(f^n)'(x)` as a product along the orbit.
    pub fn iterate_deriv(&self, n: u32, x: f64) -> f64 {
        let mut y = x;
        let mut d = 1.0;
        for _ in 0..n {
            d *= self.deriv(y);
            y = self.eval(y);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_expanding() {
        assert!(CircleMap::linear(1).is_err());
        assert!(CircleMap::perturbed(2, 1.0).is_err());
        assert!(CircleMap::perturbed(2, 0.99).is_ok());
    }

    #[test]
    fn doubling_preimages() {
        let f = CircleMap::doubling();
        assert_eq!(f.inverse_branches(0.3).unwrap(), vec![0.15, 0.65]);
        assert_eq!(f.inverse_branches(0.0).unwrap(), vec![0.0, 0.5]);
    }

    #[test]
    fn perturbed_preimages_match_bisection() {
        let f = CircleMap::perturbed(2, 0.1).unwrap();
        let ys = f.inverse_branches(0.3).unwrap();
        assert_eq!(ys.len(), 2);
        for (j, y) in ys.iter().enumerate() {
            // plain bisection on the branch
            let target = 0.3 + j as f64;
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f.lift(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((y - lo).abs() < 1e-13);
            assert!((f.lift(*y) - target).abs() < 1e-12);
        }
    }

    #[test]
    fn family_round_trips_through_serde() {
        let f = CircleMap::perturbed(3, 0.25).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: CircleMap = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
        let bad = r#"{"family":"linear","degree":1}"#;
        assert!(serde_json::from_str::<CircleMap>(bad).is_err());
    }
}
