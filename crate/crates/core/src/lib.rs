//! Numerical laboratory for transfer operators of smooth expanding circle maps
//! acting on Besov spaces.
//!
//! The crate is organised in layers:
//!
//! - [`dyadic`]: Littlewood-Paley filters, dyadic block projectors and Besov norms
//!   for band-limited periodic functions sampled on dyadic grids.
//! - [`dynamics`]: expanding circle maps, weights, cocycles, minimal Lyapunov
//!   exponents, periodic orbits and topological pressure.
//! - [`transfer`]: the weighted transfer operator, its Fourier-Galerkin matrices
//!   and truncation-stable eigenvalues.
//! - [`spectral`]: the Lasota-Yorke block decomposition, its constants and the
//!   essential-spectral-radius bound.
//! - [`kernel`]: oscillatory kernels of high-frequency block interactions and
//!   their decay bounds on the real line.
//! - [`cli`]: configuration-driven drivers that write CSV and JSON reports.

pub mod cli;
pub mod corpus;
pub mod dyadic;
pub mod dynamics;
mod error;
mod fourier;
pub mod kernel;
pub mod quad;
pub mod spectral;
pub mod transfer;

pub use error::{Error, Result};

pub use num_complex::Complex64;
