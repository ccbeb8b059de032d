use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::blocks::block_operator_norms;
use super::constants::LYConstants;
use crate::dyadic::{besov_norm, block_norms, lp_norm, weighted_sum, BesovParams, GridFunction};
use crate::transfer::{GridOperator, TransferOp};
use crate::{Error, Result};

/// Relative slack allowed in the low-part comparison.
pub const LOW_PART_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LYRecord {
    pub index: usize,
    pub strong_norm: f64,
    pub weak_norm: f64,
    pub low_norm: f64,
    pub high_norm: f64,
    /// `gamma~_s alpha lambda^{-s} ||u||_{B^s}`.
    pub low_bound: f64,
    /// `high_norm / weak_norm`, zero when both vanish.
    pub high_ratio: f64,
    pub low_ok: bool,
    pub resolution_flag: bool,
    pub consistency: f64,
}

/// Both sides of the low- and high-part estimates over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LYReport {
    pub constants: LYConstants,
    pub records: Vec<LYRecord>,
    pub violations: usize,
    /// Smallest constant for which every high-part record holds.
    pub fitted_high_constant: f64,
    /// Largest `low_norm / low_bound`.
    pub max_low_ratio: f64,
    pub max_consistency: f64,
    pub resolution_flags: usize,
    pub pass: bool,
}

impl LYReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "index",
            "strong_norm",
            "weak_norm",
            "low_norm",
            "high_norm",
            "low_bound",
            "high_ratio",
            "low_ok",
            "resolution_flag",
            "consistency",
        ])?;
        for r in &self.records {
            out.write_record([
                r.index.to_string(),
                format!("{:.16e}", r.strong_norm),
                format!("{:.16e}", r.weak_norm),
                format!("{:.16e}", r.low_norm),
                format!("{:.16e}", r.high_norm),
                format!("{:.16e}", r.low_bound),
                format!("{:.16e}", r.high_ratio),
                r.low_ok.to_string(),
                r.resolution_flag.to_string(),
                format!("{:.16e}", r.consistency),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Checks the low-part bound for every corpus member and fits the high-part constant.
pub fn verify_ly(op: &TransferOp, params: &BesovParams, corpus: &[GridFunction]) -> Result<LYReport> {
    let first = corpus.first().ok_or(Error::EmptyCorpus)?;
    let n = first.len();
    if let Some(bad) = corpus.iter().find(|u| u.len() != n) {
        return Err(Error::GridMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let mut constants = LYConstants::compute(op, params, n)?;
    let gop = GridOperator::new(op, n)?;
    let factor = constants.low_factor();

    let rows: Vec<(LYRecord, f64)> = corpus
        .par_iter()
        .enumerate()
        .map(|(index, u)| {
            let blocks = block_operator_norms(&gop, u, constants.lambda, params.p)?;
            let strong_norm = besov_norm(u, params.s, params.p, params.q);
            let weak_norm = besov_norm(u, params.sigma, params.p, params.q);
            let low_norm = weighted_sum(&blocks.low, params.s, params.q);
            let high_norm = weighted_sum(&blocks.high, params.s, params.q);
            let low_bound = factor * strong_norm;
            let high_ratio = if weak_norm > 0.0 { high_norm / weak_norm } else { 0.0 };
            let base = lp_norm(u, params.p);
            let c1_seen = if base > 0.0 {
                block_norms(u, params.p).iter().fold(0.0f64, |a, b| a.max(b / base))
            } else {
                0.0
            };
            Ok((
                LYRecord {
                    index,
                    strong_norm,
                    weak_norm,
                    low_norm,
                    high_norm,
                    low_bound,
                    high_ratio,
                    low_ok: low_norm <= low_bound * (1.0 + LOW_PART_SLACK),
                    resolution_flag: blocks.resolution_flag,
                    consistency: blocks.consistency,
                },
                c1_seen,
            ))
        })
        .collect::<Result<_>>()?;

    constants.c1_measured = Some(rows.iter().map(|r| r.1).fold(0.0, f64::max));
    let records: Vec<LYRecord> = rows.into_iter().map(|r| r.0).collect();
    let violations = records.iter().filter(|r| !r.low_ok).count();
    let fold = |f: fn(&LYRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
    let fitted_high_constant = fold(|r| r.high_ratio);
    let max_low_ratio = fold(|r| if r.low_bound > 0.0 { r.low_norm / r.low_bound } else { 0.0 });
    let max_consistency = fold(|r| r.consistency);
    let resolution_flags = records.iter().filter(|r| r.resolution_flag).count();
    Ok(LYReport {
        constants,
        violations,
        fitted_high_constant,
        max_low_ratio,
        max_consistency,
        resolution_flags,
        pass: violations == 0 && fitted_high_constant.is_finite(),
        records,
    })
}
