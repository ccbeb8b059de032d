use serde::{Deserialize, Serialize};

use super::constants::hook;
use crate::dyadic::Exponent;
use crate::dynamics::{chi_min, r_limit, CircleMap, Sequence, Weight};
use crate::transfer::{stable_eigenvalues, StableEigenvalue, StableOptions, TransferOp};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThmBound {
    /// `exp(-s chi_min) R(g)`.
    pub value: f64,
    pub s: f64,
    pub chi_min: Sequence,
    pub r: Sequence,
}

/// Essential-spectral-radius bound `exp(-s chi_min) R(g)` from orbit data up to `n_max`.
pub fn thm_bound(map: &CircleMap, g: &Weight, s: f64, n_max: u32) -> Result<ThmBound> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::param(format!("smoothness {s} must be nonnegative")));
    }
    if n_max == 0 {
        return Err(Error::param("n_max must be positive"));
    }
    let chi = chi_min(map, n_max);
    let r = r_limit(g, map, n_max);
    Ok(ThmBound {
        value: (-s * chi.value).exp() * r.value,
        s,
        chi_min: chi,
        r,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub bound: f64,
    pub margin: f64,
    /// Stable eigenvalues with modulus above `bound + margin`.
    pub outside: Vec<StableEigenvalue>,
    /// Remaining stable eigenvalues.
    pub inside: Vec<StableEigenvalue>,
    /// Eigenvalues of the finest truncation above `bound + margin`, stable or not.
    pub finest_outside: usize,
    pub violations: Vec<String>,
    pub consistent: bool,
}

/// Splits the truncation-stable spectrum at the radius bound and flags eigenvalues
/// above it that are not isolated.
pub fn essential_radius_probe(
    op: &TransferOp,
    s: f64,
    truncations: &[usize],
    opts: StableOptions,
    n_max: u32,
    margin: f64,
) -> Result<ProbeReport> {
    let bound = thm_bound(op.map(), op.weight(), s, n_max)?.value.powi(op.exponent() as i32);
    let spectrum = stable_eigenvalues(op, truncations, opts)?;
    let cut = bound + margin;
    let (outside, inside): (Vec<_>, Vec<_>) = spectrum
        .stable
        .into_iter()
        .partition(|e| e.value().norm() > cut);
    let finest_outside = spectrum
        .finest
        .iter()
        .filter(|z| num_complex::Complex64::from(**z).norm() > cut)
        .count();
    let mut violations = Vec::new();
    if finest_outside > outside.len() {
        violations.push(format!(
            "{} eigenvalues above {cut:.6e} at the finest level but only {} are truncation-stable",
            finest_outside,
            outside.len()
        ));
    }
    for (i, a) in outside.iter().enumerate() {
        for b in &outside[i + 1..] {
            if (a.value() - b.value()).norm() <= opts.match_tol {
                violations.push(format!(
                    "stable eigenvalues {:?} and {:?} are not separated",
                    a.value(),
                    b.value()
                ));
            }
        }
    }
    Ok(ProbeReport {
        bound,
        margin,
        consistent: violations.is_empty(),
        outside,
        inside,
        finest_outside,
        violations,
    })
}

/// Growth of `a_n = sum_{l -/-> n} 2^{r n - sigma l - r max(n, l)}` when the smoothness
/// equals the weight regularity `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemarkDiagnostic {
    pub regularity: f64,
    pub sigma: f64,
    pub q: Exponent,
    pub terms: Vec<f64>,
    /// `l^q` norm of `(a_0, ..., a_n)` for each `n`.
    pub partial_norms: Vec<f64>,
    /// Set when the tail terms stay at least 1, so the partial norms grow without bound.
    pub unbounded: bool,
}

pub fn remark_diagnostic(regularity: f64, sigma: f64, q: Exponent, lambda: f64, n_max: u32) -> Result<RemarkDiagnostic> {
    if !(regularity > 0.0 && regularity.is_finite()) || !(sigma > 0.0 && sigma < regularity) {
        return Err(Error::param("need 0 < sigma < r < inf"));
    }
    let terms: Vec<f64> = (0..=n_max)
        .map(|n| {
            (0..=n + 200)
                .filter(|&l| !hook(n, l, lambda))
                .map(|l| {
                    let mx = n.max(l) as f64;
                    2f64.powf(regularity * n as f64 - sigma * l as f64 - regularity * mx)
                })
                .sum()
        })
        .collect();
    let partial_norms = (0..terms.len())
        .map(|i| q.combine(terms[..=i].iter().copied()))
        .collect();
    let tail = &terms[terms.len().saturating_sub(5)..];
    Ok(RemarkDiagnostic {
        regularity,
        sigma,
        q,
        unbounded: !q.is_infinite() && tail.iter().all(|a| *a >= 1.0),
        terms,
        partial_norms,
    })
}
