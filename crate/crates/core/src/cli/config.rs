use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::CorpusSpec;
use crate::dyadic::{check_grid_size, top_block, BesovParams, Exponent};
use crate::dynamics::{CircleMap, MapFamily, Potential, Weight};
use crate::kernel::{big_lambda, LocalBranch, LocalWeight, Regime, PAIR_BUDGET};
use crate::spectral::separated;
use crate::transfer::{StableOptions, TransferOp};
use crate::{Error, Result};

/// Top-level experiment configuration, read from TOML. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Grid size `N` of sampled functions.
    pub grid: usize,
    /// Highest block index tabulated by `filters`; defaults to `log2(N/2)`.
    pub n_max: Option<u32>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub map: MapFamily,
    pub weight: Weight,
    pub besov: BesovSection,
    pub spectrum: SpectrumSection,
    pub pressure: PressureSection,
    pub corpus: CorpusSection,
    pub kernel: KernelSection,
    pub bounds: BoundsSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid: 256,
            n_max: None,
            seed: 0,
            out: None,
            map: MapFamily::Linear { degree: 2 },
            weight: Weight::constant(0.5),
            besov: BesovSection::default(),
            spectrum: SpectrumSection::default(),
            pressure: PressureSection::default(),
            corpus: CorpusSection::default(),
            kernel: KernelSection::default(),
            bounds: BoundsSection::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BesovSection {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub sigma: Option<f64>,
}

impl Default for BesovSection {
    fn default() -> Self {
        Self {
            s: 1.0,
            p: Exponent::Infinity,
            q: Exponent::Infinity,
            sigma: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    pub truncations: Vec<usize>,
    /// Iterate `m` of the operator.
    pub power: u32,
    pub match_tol: f64,
    pub min_modulus: f64,
    /// Eigenvalues within `margin` of the radius bound count as inside.
    pub margin: f64,
    /// Orbit length used for the radius bound.
    pub bound_n_max: u32,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        let opts = StableOptions::default();
        Self {
            truncations: vec![8, 16, 32],
            power: 1,
            match_tol: opts.match_tol,
            min_modulus: opts.min_modulus,
            margin: 1e-3,
            bound_n_max: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PressureSection {
    pub n_max: u32,
    /// Potential `constant + log_weight log|g| + log_jacobian log|f'|`.
    pub constant: f64,
    pub log_weight: f64,
    pub log_jacobian: f64,
}

impl PressureSection {
    pub fn potential(&self) -> Potential {
        Potential {
            constant: self.constant,
            log_weight: self.log_weight,
            log_jacobian: self.log_jacobian,
        }
    }
}

impl Default for PressureSection {
    fn default() -> Self {
        Self {
            n_max: 12,
            constant: 0.0,
            log_weight: 0.0,
            log_jacobian: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusSection {
    pub random: usize,
    pub bandwidth: usize,
    pub decay: f64,
    pub max_exponential: Option<usize>,
}

impl Default for CorpusSection {
    fn default() -> Self {
        let spec = CorpusSpec::new(8);
        Self {
            random: spec.random,
            bandwidth: spec.bandwidth,
            decay: spec.decay,
            max_exponential: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64)
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSection {
    pub branch: LocalBranch,
    pub weight: LocalWeight,
    /// Chart interval `V` containing the weight's support.
    pub domain: [f64; 2],
    pub pairs: Vec<[u32; 2]>,
    pub regimes: Vec<Regime>,
    pub x: AxisSpec,
    pub y: AxisSpec,
    /// Writes every kernel grid and its heat data next to the decay tables.
    pub export_grids: bool,
}

impl Default for KernelSection {
    fn default() -> Self {
        let axis = AxisSpec {
            lo: -1.0,
            hi: 1.0,
            points: 25,
        };
        Self {
            branch: LocalBranch::Affine { a: 2.0, b: 0.0 },
            weight: LocalWeight::polynomial(0.0, 0.5, 3),
            domain: [-1.0, 1.0],
            pairs: vec![[7, 1], [8, 1], [8, 2], [9, 2]],
            regimes: vec![Regime::Gain, Regime::FiniteLoss],
            x: axis,
            y: axis,
            export_grids: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub s: Vec<f64>,
    pub n_max: u32,
}

impl Default for BoundsSection {
    fn default() -> Self {
        Self {
            s: vec![0.5, 1.0, 2.0],
            n_max: 12,
        }
    }
}

/// A configuration whose every constraint has been checked.
#[derive(Debug, Clone)]
pub struct Validated {
    pub config: ExperimentConfig,
    pub map: CircleMap,
    pub weight: Weight,
    pub params: BesovParams,
    pub op: TransferOp,
    pub corpus: CorpusSpec,
    pub stable: StableOptions,
    pub n_max: u32,
    pub out: PathBuf,
}

pub const DEFAULT_OUT: &str = "besov-lab-out";

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(self) -> Result<Validated> {
        check_grid_size(self.grid)?;
        let map = CircleMap::new(self.map)?;
        self.weight.validate()?;
        let weight = self.weight;
        let b = self.besov;
        let params = match b.sigma {
            Some(sigma) => BesovParams::with_sigma(b.s, b.p, b.q, weight.regularity(), sigma)?,
            None => BesovParams::new(b.s, b.p, b.q, weight.regularity())?,
        };

        let sp = &self.spectrum;
        if sp.power == 0 {
            return Err(Error::param("spectrum.power must be at least 1"));
        }
        if sp.truncations.len() < 3
            || sp.truncations[0] == 0
            || sp.truncations.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::param(
                "spectrum.truncations needs at least three strictly increasing positive levels",
            ));
        }
        if !(sp.match_tol > 0.0) || !(sp.min_modulus >= 0.0) || !(sp.margin >= 0.0) {
            return Err(Error::param("spectrum tolerances must be positive"));
        }
        if sp.bound_n_max == 0 || self.bounds.n_max == 0 || self.pressure.n_max == 0 {
            return Err(Error::param("orbit lengths must be at least 1"));
        }
        let op = TransferOp::new(map, weight)?.power(sp.power)?;

        if self.bounds.s.is_empty() || self.bounds.s.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::param("bounds.s must list positive smoothness values"));
        }

        let corpus = CorpusSpec {
            grid: self.grid,
            random: self.corpus.random,
            bandwidth: self.corpus.bandwidth.min(self.grid / 2 - 1),
            decay: self.corpus.decay,
            max_exponential: self.corpus.max_exponential.map(|k| k.min(self.grid / 2 - 1)),
            seed: self.seed,
        };
        corpus.validate()?;

        self.validate_kernel()?;

        let n_max = self.n_max.unwrap_or_else(|| top_block(self.grid));
        if n_max > 30 {
            return Err(Error::param("n_max must be at most 30"));
        }
        let out = self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let stable = StableOptions {
            match_tol: sp.match_tol,
            min_modulus: sp.min_modulus,
        };
        Ok(Validated {
            map,
            weight,
            params,
            op,
            corpus,
            stable,
            n_max,
            out,
            config: self,
        })
    }

    fn validate_kernel(&self) -> Result<()> {
        let k = &self.kernel;
        k.branch.validate()?;
        k.weight.validate()?;
        for axis in [&k.x, &k.y] {
            if axis.points < 2 || !(axis.hi > axis.lo) {
                return Err(Error::param("kernel axes need hi > lo and at least two points"));
            }
        }
        if !(k.domain[1] > k.domain[0]) {
            return Err(Error::param("kernel.domain must be a nonempty interval"));
        }
        k.weight
            .check_inside((k.domain[0], k.domain[1]), 4.0 * k.x.step().max(k.y.step()))?;
        if k.pairs.is_empty() || k.regimes.is_empty() {
            return Err(Error::param("kernel.pairs and kernel.regimes must be nonempty"));
        }
        let lam = big_lambda(&k.branch, &k.weight);
        for &[n, l] in &k.pairs {
            if n.max(l) > PAIR_BUDGET {
                return Err(Error::param(format!(
                    "pair ({n},{l}) exceeds the budget max(n,l) <= {PAIR_BUDGET}"
                )));
            }
            if !separated(n, l, lam) {
                return Err(Error::NotSeparated { n, l, lambda: lam });
            }
        }
        if !k.weight.is_zero() {
            let r = k.weight.regularity;
            if !r.is_finite() {
                return Err(Error::param("kernel.weight needs a finite regularity tag"));
            }
            if let Some(bad) = k.regimes.iter().find(|g| !g.applicable(r, f64::INFINITY)) {
                return Err(Error::param(format!(
                    "regime {bad:?} does not apply to weight regularity {r}"
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
    fn default_config_validates() {
        let v = ExperimentConfig::default().validate().unwrap();
        assert_eq!(v.n_max, 7);
        assert_eq!(v.corpus.bandwidth, 64);
    }

    #[test]
    fn parses_sections() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            grid = 128
            seed = 3
            [map]
            family = "perturbed"
            degree = 2
            epsilon = 0.3
            [weight]
            family = "trigonometric"
            a = 0.2
            [besov]
            s = 1.5
            p = 2.0
            q = "inf"
            [kernel]
            branch = { branch = "nonlinear", a = 2.5, beta = 0.5 }
            pairs = [[8, 1], [9, 1]]
            regimes = ["gain"]
            [pressure]
            n_max = 6
            log_weight = 1.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.grid, 128);
        assert_eq!(cfg.pressure.potential().log_weight, 1.0);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            ExperimentConfig::from_toml("gird = 64"),
            Err(Error::Config(_))
        ));
        assert!(ExperimentConfig::from_toml("[besov]\nss = 1.0").is_err());
        assert!(ExperimentConfig::from_toml("[weight]\nfamily = \"constant\"\nre = 0.5\nfoo = 1").is_err());
    }

    #[test]
    fn constraint_failures_are_validation_errors() {
        let cfg = ExperimentConfig {
            grid: 100,
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate().unwrap_err().is_validation());
        let mut cfg = ExperimentConfig::default();
        cfg.corpus.random = 0;
        cfg.corpus.max_exponential = None;
        assert!(matches!(cfg.validate(), Err(Error::EmptyCorpus)));
        let mut cfg = ExperimentConfig::default();
        cfg.kernel.pairs = vec![[5, 1]];
        assert!(matches!(cfg.validate(), Err(Error::NotSeparated { .. })));
    }
}
