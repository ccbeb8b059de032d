use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::CircleMap;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightFamily {
    /// `g = re + i im`.
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// `g = 1/|f'|`.
    InverseJacobian,
    /// `g = exp(a cos 2 pi x)`.
    Trigonometric { a: f64 },
    /// `g = 1/2 + amplitude sum_{j<levels} 2^{-exponent j} cos(2 pi 2^j x)`, a truncated
    /// Weierstrass series whose regularity stays `exponent` uniformly in `levels`.
    Lacunary {
        amplitude: f64,
        exponent: f64,
        levels: u32,
    },
}

/// A weight `g` together with its regularity tag.
///
/// Every family here is smooth, so the tag defaults to infinity; a finite tag
/// may be set to exercise finite-regularity constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    #[serde(flatten)]
    pub family: WeightFamily,
    #[serde(default = "infinite")]
    regularity: f64,
}

fn infinite() -> f64 {
    f64::INFINITY
}

impl Weight {
    pub fn new(family: WeightFamily) -> Self {
        Self {
            family,
            regularity: f64::INFINITY,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(WeightFamily::Constant { re: c, im: 0.0 })
    }

    pub fn complex_constant(c: Complex64) -> Self {
        Self::new(WeightFamily::Constant { re: c.re, im: c.im })
    }

    pub fn inverse_jacobian() -> Self {
        Self::new(WeightFamily::InverseJacobian)
    }

    pub fn trigonometric(a: f64) -> Self {
        Self::new(WeightFamily::Trigonometric { a })
    }

    /// Lacunary weight tagged with its limiting regularity `exponent`.
    pub fn lacunary(amplitude: f64, exponent: f64, levels: u32) -> Result<Self> {
        let w = Self {
            family: WeightFamily::Lacunary {
                amplitude,
                exponent,
                levels,
            },
            regularity: exponent,
        };
        w.validate()?;
        Ok(w)
    }

    /// Overrides the regularity tag; it must be at least 1.
    pub fn with_regularity(mut self, regularity: f64) -> Result<Self> {
        self.regularity = regularity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.regularity.is_nan() || self.regularity < 1.0 {
            return Err(Error::param(format!(
                "weight regularity {} must be at least 1",
                self.regularity
            )));
        }
        match self.family {
            WeightFamily::Constant { re, im } if !(re.is_finite() && im.is_finite()) => {
                Err(Error::param("constant weight must be finite"))
            }
            WeightFamily::Trigonometric { a } if !a.is_finite() => {
                Err(Error::param("trigonometric amplitude must be finite"))
            }
            WeightFamily::Lacunary {
                amplitude,
                exponent,
                levels,
            } => {
                if !(exponent.is_finite() && exponent >= 1.0) || levels == 0 || levels > 24 {
                    return Err(Error::param(
                        "lacunary weight needs exponent >= 1 and 1 <= levels <= 24",
                    ));
                }
                let total: f64 = (0..levels).map(|j| 2f64.powf(-exponent * j as f64)).sum();
                if !(amplitude.is_finite() && amplitude.abs() * total < 0.5) {
                    return Err(Error::param(format!(
                        "lacunary amplitude {amplitude} lets the weight vanish"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The regularity tag, capped by the family's own regularity.
    pub fn regularity(&self) -> f64 {
        match self.family {
            WeightFamily::Lacunary { exponent, .. } => self.regularity.min(exponent),
            _ => self.regularity,
        }
    }

    pub fn eval(&self, map: &CircleMap, x: f64) -> Complex64 {
        match self.family {
            WeightFamily::Constant { re, im } => Complex64::new(re, im),
            WeightFamily::InverseJacobian => Complex64::new(1.0 / map.deriv(x).abs(), 0.0),
            WeightFamily::Trigonometric { a } => Complex64::new((a * (2.0 * PI * x).cos()).exp(), 0.0),
            WeightFamily::Lacunary {
                amplitude,
                exponent,
                levels,
            } => {
                let series: f64 = (0..levels)
                    .map(|j| {
                        let k = (1u64 << j) as f64;
                        2f64.powf(-exponent * j as f64) * (2.0 * PI * (k * x).rem_euclid(1.0)).cos()
                    })
                    .sum();
                Complex64::new(0.5 + amplitude * series, 0.0)
            }
        }
    }

    /// True when `g` is real and positive everywhere.
    pub fn is_positive(&self) -> bool {
        match self.family {
            WeightFamily::Constant { re, im } => im == 0.0 && re > 0.0,
            _ => true,
        }
    }
}

/// `g^{(n)}(x) = prod_{j<n} g(f^j x)`.
pub fn cocycle(g: &Weight, map: &CircleMap, n: u32, x: f64) -> Complex64 {
    let mut y = x;
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= g.eval(map, y);
        y = map.eval(y);
    }
    acc
}
