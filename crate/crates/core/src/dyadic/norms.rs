use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::filter::{psi, FilterKind};
use super::grid::GridFunction;
use crate::{Error, Result};

/// Integrability or summability exponent in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else {
            Err(Error::param(format!("exponent {p} outside [1, inf]")))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `1/p`, zero for `p = inf`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Hoelder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `l^p` combination of nonnegative terms.
    pub fn combine(self, terms: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            Exponent::Infinity => terms.into_iter().fold(0.0, f64::max),
            Exponent::Finite(p) => {
                if p == 1.0 {
                    terms.into_iter().sum()
                } else {
                    terms.into_iter().map(|t| t.powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(Exponent::Infinity),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::param(format!("cannot parse exponent {s:?}")))
                .and_then(Exponent::finite),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::finite(p),
            Raw::Int(p) => Exponent::finite(p as f64),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Grid quadrature of the `L^p` norm on the circle; maximum of `|u|` for `p = inf`.
pub fn lp_norm(u: &GridFunction, p: Exponent) -> f64 {
    lp_norm_samples(u.samples(), p, 1.0 / u.len() as f64)
}

/// `L^p` norm of samples with quadrature weight `h`.
pub(crate) fn lp_norm_samples(samples: &[Complex64], p: Exponent, h: f64) -> f64 {
    match p {
        Exponent::Infinity => samples.iter().map(|v| v.norm()).fold(0.0, f64::max),
        Exponent::Finite(p) if p == 1.0 => h * samples.iter().map(|v| v.norm()).sum::<f64>(),
        Exponent::Finite(p) if p == 2.0 => (h * samples.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt(),
        Exponent::Finite(p) => (h * samples.iter().map(|v| v.norm().powf(p)).sum::<f64>()).powf(1.0 / p),
    }
}

/// Index of the top dyadic block on a grid of size `n`: `log2(n/2)`.
pub fn top_block(n: usize) -> u32 {
    (n / 2).trailing_zeros()
}

/// All blocks `Delta_0 u, ..., Delta_J u` with `J = log2(N/2)`; they sum to `u`.
pub fn block_decomposition(u: &GridFunction, kind: FilterKind) -> Vec<GridFunction> {
    let coeffs = u.coefficients();
    let n = u.len();
    (0..=top_block(n))
        .map(|b| {
            let filtered: Vec<Complex64> = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * psi(b, kind, u.frequency_of(i).unsigned_abs() as f64))
                .collect();
            GridFunction::from_coefficients(filtered)
        })
        .collect()
}

/// Per-block `L^p` norms `||Delta_n u||_p`, `n = 0..=J`.
pub fn block_norms(u: &GridFunction, p: Exponent) -> Vec<f64> {
    block_decomposition(u, FilterKind::Standard)
        .iter()
        .map(|b| lp_norm(b, p))
        .collect()
}

/// Weighted `l^q` combination `|| (2^{s n} a_n)_n ||_{l^q}`.
pub fn weighted_sum(block_values: &[f64], s: f64, q: Exponent) -> f64 {
    q.combine(
        block_values
            .iter()
            .enumerate()
            .map(|(n, a)| 2f64.powf(s * n as f64) * a),
    )
}

/// Periodic Besov norm: dyadic sum/sup over blocks `0 <= n <= log2(N/2)`.
pub fn besov_norm(u: &GridFunction, s: f64, p: Exponent, q: Exponent) -> f64 {
    weighted_sum(&block_norms(u, p), s, q)
}

/// Smoothness and exponents of a Besov space together with the auxiliary weak
/// exponent `sigma` used by the Lasota-Yorke inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub sigma: f64,
    /// Weight regularity the parameters were validated against.
    pub regularity: f64,
    /// Slack `delta` in `sigma > s - r + 1 + delta` (only meaningful when `r > 1`).
    pub delta: f64,
}

impl BesovParams {
    /// Validates `(s, p, q)` against a weight of regularity `regularity` and picks
    /// the default weak exponent.
    pub fn new(s: f64, p: Exponent, q: Exponent, regularity: f64) -> Result<Self> {
        let delta = default_delta(regularity);
        let sigma = default_sigma(s, regularity, delta);
        Self::with_sigma(s, p, q, regularity, sigma)
    }

    pub fn with_sigma(s: f64, p: Exponent, q: Exponent, regularity: f64, sigma: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::param(format!("smoothness s = {s} must be positive")));
        }
        if !(regularity > 0.0) {
            return Err(Error::param(format!("regularity {regularity} must be positive")));
        }
        if s > regularity {
            return Err(Error::param(format!(
                "s = {s} exceeds weight regularity {regularity}"
            )));
        }
        if !q.is_infinite() && s >= regularity {
            return Err(Error::param(format!(
                "q < inf requires s < regularity (s = {s}, r = {regularity})"
            )));
        }
        if !(sigma > 0.0 && sigma < s) {
            return Err(Error::param(format!("sigma = {sigma} must lie in (0, s)")));
        }
        let delta = default_delta(regularity);
        if regularity > 1.0 && sigma <= sigma_threshold(s, regularity, delta) {
            return Err(Error::param(format!(
                "sigma = {sigma} violates sigma > s - r + 1 + delta = {}",
                sigma_threshold(s, regularity, delta)
            )));
        }
        Ok(Self {
            s,
            p,
            q,
            sigma,
            regularity,
            delta,
        })
    }

    pub fn strong_norm(&self, u: &GridFunction) -> f64 {
        besov_norm(u, self.s, self.p, self.q)
    }

    pub fn weak_norm(&self, u: &GridFunction) -> f64 {
        besov_norm(u, self.sigma, self.p, self.q)
    }
}

fn default_delta(regularity: f64) -> f64 {
    if regularity.is_infinite() {
        0.5
    } else if regularity > 1.0 {
        (regularity - 1.0) / 2.0
    } else {
        0.0
    }
}

fn sigma_threshold(s: f64, regularity: f64, delta: f64) -> f64 {
    if regularity.is_infinite() {
        f64::NEG_INFINITY
    } else {
        s - regularity + 1.0 + delta
    }
}

fn default_sigma(s: f64, regularity: f64, delta: f64) -> f64 {
    if regularity <= 1.0 {
        return s / 2.0;
    }
    let threshold = sigma_threshold(s, regularity, delta);
    if threshold < s / 2.0 {
        s / 2.0
    } else {
        (threshold + s) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::filter::rho;

    const INF: Exponent = Exponent::Infinity;

    fn corners() -> Vec<(Exponent, Exponent)> {
        let one = Exponent::Finite(1.0);
        vec![(one, one), (one, INF), (INF, one), (INF, INF)]
    }

    #[test]
    fn exponent_parsing_and_conjugates() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), INF);
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::Finite(2.0));
        assert!("0.5".parse::<Exponent>().is_err());
        assert_eq!(INF.conjugate(), Exponent::Finite(1.0));
        assert_eq!(Exponent::Finite(1.0).conjugate(), INF);
        assert_eq!(Exponent::Finite(2.0).conjugate(), Exponent::Finite(2.0));
    }

    #[test]
    fn lp_norm_examples() {
        let one = GridFunction::constant(16, Complex64::new(1.0, 0.0)).unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert!((lp_norm(&one, Exponent::Finite(p)) - 1.0).abs() < 1e-14);
        }
        assert_eq!(lp_norm(&one, INF), 1.0);
        let e = GridFunction::exponential(16, 3).unwrap();
        assert!((lp_norm(&e, Exponent::Finite(2.0)) - 1.0).abs() < 1e-14);
        let c = GridFunction::from_real_fn(16, |x| (2.0 * std::f64::consts::PI * x).cos()).unwrap();
        assert!((lp_norm(&c, INF) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn besov_constant_and_single_modes() {
        let c = GridFunction::constant(64, Complex64::new(-3.0, 4.0)).unwrap();
        for (p, q) in corners() {
            assert!((besov_norm(&c, 1.0, p, q) - 5.0).abs() < 1e-12);
        }
        for n in 0..5 {
            let u = GridFunction::exponential(64, 1 << n).unwrap();
            for (p, q) in corners() {
                let expect = 2f64.powi(n);
                assert!((besov_norm(&u, 1.0, p, q) - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn besov_two_mode_example() {
        // |k| = 3 splits evenly between blocks 1 and 2 under the chosen rho
        let half = rho(1.5);
        assert!((half - 0.5).abs() < 1e-15);
        let u = GridFunction::from_modes(
            64,
            &[(3, Complex64::new(1.0, 0.0)), (16, Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let blocks_at_3 = (2.0 * half).max(4.0 * (rho(0.75) - rho(1.5)));
        let expect = blocks_at_3.max(16.0);
        assert!((besov_norm(&u, 1.0, INF, INF) - expect).abs() < 1e-12);
        assert!((expect - 16.0).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(BesovParams::new(1.0, INF, INF, 1.0).is_ok());
        assert!(BesovParams::new(1.0, INF, Exponent::Finite(2.0), 1.0).is_err());
        assert!(BesovParams::new(2.0, INF, INF, 1.0).is_err());
        assert!(BesovParams::new(-1.0, INF, INF, 1.0).is_err());
        let p = BesovParams::new(1.5, INF, INF, 2.5).unwrap();
        // threshold 1.5 - 2.5 + 1 + 0.75 = 0.75 -> midpoint with s
        assert!((p.sigma - 1.125).abs() < 1e-15);
        let p = BesovParams::new(1.0, INF, Exponent::Finite(2.0), f64::INFINITY).unwrap();
        assert_eq!(p.sigma, 0.5);
        assert!(BesovParams::with_sigma(1.5, INF, INF, 2.5, 0.7).is_err());
    }
}
