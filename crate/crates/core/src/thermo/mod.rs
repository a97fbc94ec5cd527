//! Potential theory and thermodynamic formalism on Julia sets.

mod dimension;
mod green;
mod hoelder;

pub use dimension::{
    bowen_dimension, box_counting_dim, geometric_scales, BowenOptions, BowenResult, BoxCount, Metric, Transfer,
    TransferOperator, TransferOperatorState, BOX_MIN_POINTS, MESH_FACTOR,
};
pub use green::{green_function, omega, omega_integral, GreenValue};
pub use hoelder::{
    hoelder_entropy, hoelder_hausdorff, nondiff_conditions, pointwise_hoelder_empirical, EmpiricalSlope,
    HausdorffExponent, HoelderReport, NondiffConditions, Verdict, PIECE_MISMATCH_LIMIT,
};
