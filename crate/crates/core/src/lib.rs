//! Random polynomial dynamics.
//!
//! Polynomial semigroup Julia sets, the probability `T∞,τ` that a random orbit tends to
//! infinity (the "devil's coliseum"), its one-dimensional analogues (the Cantor function and
//! Lebesgue's singular functions), minimal sets of the random system, Green's functions,
//! Hölder exponents and Hausdorff dimension, plus a battery of numerical property checks.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod interval;
pub mod io;
pub mod iteration;
pub mod markov;
pub mod par;
pub mod poly;
pub mod scene;
pub mod scenes;
pub mod spatial;
pub mod staircase;
pub mod system;
pub mod thermo;
pub mod verify;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use interval::Interval;
pub use iteration::{EscapeParams, PointCloud, Trap};
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use system::{GeneratorSystem, RandomModel, Word};
