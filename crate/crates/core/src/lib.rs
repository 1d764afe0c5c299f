// `!(x > 0.0)` rejects NaN along with out-of-range values; keep the idiom.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for doubly warped-product open manifolds
//! `M = [0,∞) ×_f S^{p−1} ×_h S¹`: Ricci curvature scans, minimal
//! geodesic loops per winding class, and escape-rate estimates.

pub mod curvature;
pub mod error;
pub mod escape;
pub mod expr;
pub mod geodesic;
pub mod grid;
pub mod jet;
pub mod numeric;
pub mod shoot;
pub mod warp;

pub use curvature::{
    dominance_analysis, minimal_dimension_search, multi_factor_bound, ricci_at, scan_positivity,
    validate_wei_chain, DecayKind, NilFactorModel, PositivityReport, RicciReport, WeiDecayChain,
};
pub use error::{Error, Result};
pub use escape::{
    cylinder_lower_bound, estimate_escape_rate, orbit_diagnostics, poly_lower_bound,
    sigma_upper_bound, wei_r_l, EscapeEstimate, OrbitDiagnostics, Trend,
};
pub use geodesic::{
    geometric_ladder, half_oscillation, loop_table, minimal_loop, GeodesicArc, LoopRow,
    MinimalLoop, RevolutionProfile, SearchParams,
};
pub use grid::{grid_oracle, GridOracleResult};
pub use jet::Jet2;
pub use shoot::{shoot_3d, ShootResult};
pub use warp::{
    eval_jet2, make_positive_limit, validate_boundary, BoundaryReport, ManifoldSpec,
    WarpingFunction,
};
