//! Littlewood-Paley analysis of band-limited periodic functions.
//!
//! Block `n` of `u` keeps the Fourier coefficients of `u` multiplied by
//! `psi_n(|k|)`, where `psi_0 = rho` and `psi_n(t) = rho(t/2^n) - rho(t/2^{n-1})`.
//! Because the profiles telescope, the blocks `0..=log2(N/2)` of a grid function
//! sum back to it exactly.

mod charted;
mod filter;
mod grid;
mod norms;

pub use charted::{besov_norm_charted, Chart, CircleAtlas};
pub use filter::{build_filter, psi, rho, support, DyadicFilter, FilterKind};
pub use grid::{check_grid_size, exponential, GridFunction};
pub use norms::{
    besov_norm, block_decomposition, block_norms, lp_norm, top_block, weighted_sum, BesovParams,
    Exponent,
};

pub(crate) use grid::eval_coefficients;
pub(crate) use norms::lp_norm_samples;

use crate::{Error, Result};

/// Frequency-multiplier image `Delta_n u` (or the wide variant).
pub fn lp_block(u: &GridFunction, filter: &DyadicFilter) -> Result<GridFunction> {
    let needed = u.len() / 2;
    if filter.max_freq() < needed {
        return Err(Error::GridMismatch {
            expected: needed,
            found: filter.max_freq(),
        });
    }
    let coeffs: Vec<_> = u
        .coefficients()
        .into_iter()
        .enumerate()
        .map(|(i, c)| c * filter.at(u.frequency_of(i)))
        .collect();
    Ok(GridFunction::from_coefficients(coeffs))
}
