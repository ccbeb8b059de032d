//! Block splitting of the transfer operator, the Lasota-Yorke constants and the
//! essential-spectral-radius bound.
//!
//! For an operator with minimal expansion `lambda`, block `l` feeds block `n` at
//! low transfer (`l -> n`) when `2^n <= lambda^{-1} 2^{l+4}`. The low part is bounded
//! by `gamma~_s alpha lambda^{-s} ||u||_{B^s}` with explicit constants; the high part
//! is controlled by a weaker norm with a fitted constant.

mod blocks;
mod bounds;
mod constants;
mod ly;

pub use blocks::{block_operator_norms, BlockNorms, RESOLUTION_THRESHOLD};
pub use bounds::{
    essential_radius_probe, remark_diagnostic, thm_bound, ProbeReport, RemarkDiagnostic, ThmBound,
};
pub use constants::{block_projector_bound, gamma_tilde, hook, separated, LYConstants};
pub use ly::{verify_ly, LYRecord, LYReport, LOW_PART_SLACK};
