//! Expanding circle maps, weights and their thermodynamic quantities.

mod extrema;
mod map;
mod orbits;
mod weight;

pub use extrema::{chi_min, extremum_grid, r_limit, r_n, GridExtremum, Sequence};
pub use map::{CircleMap, MapFamily};
pub use orbits::{
    gl_bound, periodic_points, periodic_points_with_budget, potential_pressure, pressure, GlBound,
    OrbitSet, PeriodicPoint, Potential, PressureEstimate, DEFAULT_ORBIT_BUDGET,
};
pub use weight::{cocycle, Weight, WeightFamily};
