//! The transition operator `M_τ`, the escape probability `T∞,τ`, minimal sets and their periods.

mod escape;
mod minimal;
mod raster;

pub use escape::{t_infinity_exact, t_infinity_mc, t_infinity_with_stats, TreeStats, PRUNE_WEIGHT};
pub use minimal::{
    contraction_rate, minimal_sets, t_minimal_mc, Cluster, ContractionEstimate, MinimalProbabilities, MinimalSet,
    MinimalSetReport, Node,
};
pub use raster::{m_tau_apply, t_raster, BBox, MTauOutput, Raster};
