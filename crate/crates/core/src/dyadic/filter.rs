use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn mollifier(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth cut-off: 1 on `t <= 1`, 0 on `t >= 2`, nonincreasing in between.
pub fn rho(t: f64) -> f64 {
    if t <= 1.0 {
        return 1.0;
    }
    if t >= 2.0 {
        return 0.0;
    }
    let a = mollifier(2.0 - t);
    let b = mollifier(t - 1.0);
    a / (a + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    /// `psi_n`: supported on `2^{n-1} <= |xi| <= 2^{n+1}` for `n >= 1`.
    Standard,
    /// `psi~_n`: identically 1 on the support of the same-index standard filter.
    Wide,
}

/// Radial profile of block `n` at frequency magnitude `xi >= 0`.
pub fn psi(n: u32, kind: FilterKind, xi: f64) -> f64 {
    let xi = xi.abs();
    let n = n as i32;
    match (kind, n) {
        (FilterKind::Standard, 0) => rho(xi),
        (FilterKind::Standard, _) => rho(xi * 2f64.powi(-n)) - rho(xi * 2f64.powi(1 - n)),
        (FilterKind::Wide, 0) => rho(xi / 2.0),
        (FilterKind::Wide, _) => rho(xi * 2f64.powi(-n - 1)) - rho(xi * 2f64.powi(2 - n)),
    }
}

/// Frequency multiplier restricted to integer frequencies `0..=max_freq`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicFilter {
    n: u32,
    kind: FilterKind,
    values: Vec<f64>,
    truncated: bool,
}

impl DyadicFilter {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn max_freq(&self) -> usize {
        self.values.len() - 1
    }

    /// Set when `max_freq` cuts through the filter's support.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Value at integer frequency `k` (zero beyond `max_freq`).
    pub fn at(&self, k: i64) -> f64 {
        self.values
            .get(k.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Frequency range `[lo, hi]` outside of which the multiplier vanishes.
    pub fn support(&self) -> (f64, f64) {
        support(self.n, self.kind)
    }
}

pub fn support(n: u32, kind: FilterKind) -> (f64, f64) {
    let p = |e: i32| 2f64.powi(e);
    let n = n as i32;
    match (kind, n) {
        (FilterKind::Standard, 0) => (0.0, 2.0),
        (FilterKind::Standard, _) => (p(n - 1), p(n + 1)),
        (FilterKind::Wide, 0) => (0.0, 4.0),
        (FilterKind::Wide, _) => (p(n - 2), p(n + 2)),
    }
}

pub fn build_filter(n: i64, kind: FilterKind, max_freq: usize) -> Result<DyadicFilter> {
    if n < 0 {
        return Err(Error::NegativeBlockIndex(n));
    }
    let n = u32::try_from(n).map_err(|_| Error::param("block index too large"))?;
    if n > 60 {
        return Err(Error::param(format!("block index {n} out of range")));
    }
    let values = (0..=max_freq).map(|k| psi(n, kind, k as f64)).collect();
    let (_, hi) = support(n, kind);
    Ok(DyadicFilter {
        n,
        kind,
        values,
        truncated: (max_freq as f64) < hi,
    })
}
