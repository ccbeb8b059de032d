//! Local oscillatory kernels of a transfer operator between separated frequency blocks.
//!
//! For an expanding local branch `T` and a compactly supported weight `G`, the operator
//! `Delta_n L Delta~_l` factors through the integral kernel
//! `V_n^l(x,y) = int e^{i(x-w) xi + i(T(w)-T(y)) eta} G(w) psi_n(xi) psi~_l(eta) dw dxi deta`.
//! The frequency integrals are done in closed form through the real-space filter kernels,
//! leaving a single quadrature in `w`.

mod decay;
mod eval;
mod filter_kernel;
mod local;

pub use decay::{
    decay_check, grid_constant, young_chain_check, DecayReport, DecayRow, Regime, YoungReport,
    PAIR_BUDGET, SLOPE_LIMIT,
};
pub use eval::{b_eval, b_l1_norm, b_m_eval, big_lambda, kernel_eval, KernelGrid, KERNEL_REL_TOL};
pub use filter_kernel::{
    filter_kernel, inv_filter_kernel, kernel_mass, rho_kernel, rho_kernel_imag_residual,
    FilterKernel,
};
pub use local::{LocalBranch, LocalWeight, WeightShape};
