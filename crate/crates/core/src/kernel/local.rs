use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Local inverse branch `T` on a chart interval `domain`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case", deny_unknown_fields)]
pub enum LocalBranch {
    /// `T(w) = a w + b`.
    Affine { a: f64, b: f64 },
    /// `T(w) = a w + beta sin(w)`.
    Nonlinear { a: f64, beta: f64 },
}

impl LocalBranch {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            LocalBranch::Affine { a, b } => a.is_finite() && b.is_finite() && a.abs() > 1.0,
            LocalBranch::Nonlinear { a, beta } => {
                a.is_finite() && beta.is_finite() && a.abs() - beta.abs() > 1.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NotExpanding(format!(
                "local branch {self:?} has |T'| bounded below only by {}",
                self.min_derivative()
            )))
        }
    }

    pub fn eval(&self, w: f64) -> f64 {
        match *self {
            LocalBranch::Affine { a, b } => a * w + b,
            LocalBranch::Nonlinear { a, beta } => a * w + beta * w.sin(),
        }
    }

    pub fn deriv(&self, w: f64) -> f64 {
        match *self {
            LocalBranch::Affine { a, .. } => a,
            LocalBranch::Nonlinear { a, beta } => a + beta * w.cos(),
        }
    }

    /// Lower bound for `|T'|`.
    pub fn min_derivative(&self) -> f64 {
        match *self {
            LocalBranch::Affine { a, .. } => a.abs(),
            LocalBranch::Nonlinear { a, beta } => a.abs() - beta.abs(),
        }
    }

    /// `sup |T'|` over `[lo, hi]`, sampled.
    pub fn max_derivative_on(&self, lo: f64, hi: f64) -> f64 {
        let m = 4096;
        (0..=m)
            .map(|i| self.deriv(lo + (hi - lo) * i as f64 / m as f64).abs())
            .fold(0.0, f64::max)
    }

    /// True when `T(-w) = -T(w)`.
    pub fn is_odd(&self) -> bool {
        match *self {
            LocalBranch::Affine { b, .. } => b == 0.0,
            LocalBranch::Nonlinear { .. } => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightShape {
    /// `exp(-1/(1-t^2))` with `t = (w - center)/radius`.
    Bump { center: f64, radius: f64 },
    /// `(1 - t^2)^power`.
    Polynomial { center: f64, radius: f64, power: u32 },
    Zero,
}

/// Compactly supported local weight `G~` with a declared regularity.
///
/// In configs the shape fields sit flat next to the `shape` tag; `regularity` is
/// optional and defaults to what the shape has.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightRepr", into = "WeightRepr")]
pub struct LocalWeight {
    pub shape: WeightShape,
    pub regularity: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
enum WeightRepr {
    Bump {
        center: f64,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        regularity: Option<f64>,
    },
    Polynomial {
        center: f64,
        radius: f64,
        power: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        regularity: Option<f64>,
    },
    Zero {},
}

impl TryFrom<WeightRepr> for LocalWeight {
    type Error = Error;

    fn try_from(r: WeightRepr) -> Result<Self> {
        let (base, tag) = match r {
            WeightRepr::Bump { center, radius, regularity } => (Self::bump(center, radius), regularity),
            WeightRepr::Polynomial { center, radius, power, regularity } => {
                (Self::polynomial(center, radius, power), regularity)
            }
            WeightRepr::Zero {} => (Self::zero(), None),
        };
        base.with_regularity(tag.unwrap_or(base.regularity))
    }
}

impl From<LocalWeight> for WeightRepr {
    fn from(w: LocalWeight) -> Self {
        let tag = |default: f64| (w.regularity != default).then_some(w.regularity);
        match w.shape {
            WeightShape::Bump { center, radius } => WeightRepr::Bump {
                center,
                radius,
                regularity: tag(f64::INFINITY),
            },
            WeightShape::Polynomial { center, radius, power } => WeightRepr::Polynomial {
                center,
                radius,
                power,
                regularity: tag(power as f64 - 1.0),
            },
            WeightShape::Zero => WeightRepr::Zero {},
        }
    }
}

impl LocalWeight {
    pub fn bump(center: f64, radius: f64) -> Self {
        Self {
            shape: WeightShape::Bump { center, radius },
            regularity: f64::INFINITY,
        }
    }

    /// `(1-t^2)^power`, tagged with regularity `power - 1`.
    pub fn polynomial(center: f64, radius: f64, power: u32) -> Self {
        Self {
            shape: WeightShape::Polynomial {
                center,
                radius,
                power,
            },
            regularity: power as f64 - 1.0,
        }
    }

    pub fn zero() -> Self {
        Self {
            shape: WeightShape::Zero,
            regularity: f64::INFINITY,
        }
    }

    pub fn with_regularity(mut self, r: f64) -> Result<Self> {
        self.regularity = r;
        self.validate()?;
        Ok(self)
    }

    /// Checks the shape and that the declared regularity does not exceed what the shape has.
    pub fn validate(&self) -> Result<()> {
        let r = self.regularity;
        if r.is_nan() || r < 0.0 {
            return Err(Error::param(format!("weight regularity {r} must be >= 0")));
        }
        match self.shape {
            WeightShape::Bump { center, radius } => {
                if !(center.is_finite() && radius.is_finite() && radius > 0.0) {
                    return Err(Error::param("bump weight needs a finite positive radius"));
                }
            }
            WeightShape::Polynomial {
                center,
                radius,
                power,
            } => {
                if !(center.is_finite() && radius.is_finite() && radius > 0.0) || power < 1 {
                    return Err(Error::param("polynomial weight needs radius > 0 and power >= 1"));
                }
                if r > power as f64 - 1.0 {
                    return Err(Error::param(format!(
                        "(1-t^2)^{power} does not have regularity {r}"
                    )));
                }
            }
            WeightShape::Zero => {}
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.shape, WeightShape::Zero)
    }

    /// Closed interval outside of which the weight vanishes (`None` for the zero weight).
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.shape {
            WeightShape::Bump { center, radius } | WeightShape::Polynomial { center, radius, .. } => {
                Some((center - radius, center + radius))
            }
            WeightShape::Zero => None,
        }
    }

    pub fn is_even(&self) -> bool {
        match self.shape {
            WeightShape::Bump { center, .. } | WeightShape::Polynomial { center, .. } => {
                center == 0.0
            }
            WeightShape::Zero => true,
        }
    }

    pub fn eval(&self, w: f64) -> f64 {
        match self.shape {
            WeightShape::Bump { center, radius } => {
                let t = (w - center) / radius;
                if t.abs() >= 1.0 {
                    0.0
                } else {
                    (-1.0 / (1.0 - t * t)).exp()
                }
            }
            WeightShape::Polynomial {
                center,
                radius,
                power,
            } => {
                let t = (w - center) / radius;
                if t.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - t * t).powi(power as i32)
                }
            }
            WeightShape::Zero => 0.0,
        }
    }

    /// Checks that the support sits inside `domain` with at least `margin` to spare.
    pub fn check_inside(&self, domain: (f64, f64), margin: f64) -> Result<()> {
        if let Some((lo, hi)) = self.support() {
            if lo < domain.0 + margin || hi > domain.1 - margin {
                return Err(Error::param(format!(
                    "weight support [{lo}, {hi}] not inside chart ({}, {}) with margin {margin}",
                    domain.0, domain.1
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_validation() {
        assert!(LocalBranch::Affine { a: 2.0, b: 0.1 }.validate().is_ok());
        assert!(LocalBranch::Affine { a: 0.9, b: 0.0 }.validate().is_err());
        assert!(LocalBranch::Nonlinear { a: 2.5, beta: 0.5 }.validate().is_ok());
        assert!(LocalBranch::Nonlinear { a: 1.4, beta: 0.5 }.validate().is_err());
    }

    #[test]
    fn weight_regularity_tags() {
        assert_eq!(LocalWeight::polynomial(0.0, 0.5, 3).regularity, 2.0);
        assert!(LocalWeight::polynomial(0.0, 0.5, 3).with_regularity(2.5).is_err());
        assert!(LocalWeight::bump(0.0, 0.5).with_regularity(7.0).is_ok());
        let w = LocalWeight::bump(0.0, 0.5);
        assert!(w.check_inside((-0.6, 0.6), 0.05).is_ok());
        assert!(w.check_inside((-0.52, 0.6), 0.05).is_err());
        assert_eq!(w.eval(0.5), 0.0);
        assert!(w.eval(0.0) > 0.3);
    }

    #[test]
    fn weight_config_form() {
        let w: LocalWeight =
            serde_json::from_str(r#"{"shape": "polynomial", "center": 0.1, "radius": 0.4, "power": 3}"#).unwrap();
        assert_eq!(w, LocalWeight::polynomial(0.1, 0.4, 3));
        let b: LocalWeight =
            serde_json::from_str(r#"{"shape": "bump", "center": 0.0, "radius": 0.5, "regularity": 2.0}"#).unwrap();
        assert_eq!(b.regularity, 2.0);
        let back: LocalWeight = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
        assert!(serde_json::from_str::<LocalWeight>(r#"{"shape": "polynomial", "center": 0.0, "radius": 0.5, "power": 2, "regularity": 3.0}"#).is_err());
        assert!(serde_json::from_str::<LocalWeight>(r#"{"shape": "zero"}"#).unwrap().is_zero());
        assert!(serde_json::from_str::<LocalWeight>(r#"{"shape": "zero", "radius": 1.0}"#).is_err());
    }
}
