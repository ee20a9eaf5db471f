//! Robust multivariate and functional classification built on depth and
//! distance measures.
//!
//! The crate is organised around a small pipeline:
//!
//! * [`matrix`] — a dense row-major sample container with validation;
//! * [`depth`] — halfspace depth (exact in one and two dimensions,
//!   direction-sampled above), the deepest point, and the bag;
//! * [`dist`] — star-shaped bodies and their generalized norms, the
//!   medcouple, and fitted per-group models exposing bag distance,
//!   Stahel-Donoho and adjusted outlyingness, and projection depths;
//! * [`classify`] — depth- and distance-based classifiers for
//!   multivariate data (max-depth, min-distance, and k-nearest-neighbour
//!   rules in transformed space);
//! * [`functional`] — multivariate functional extensions that integrate
//!   the cross-sectional measures over the curve domain;
//! * [`data`] — simulation settings, label noise, CSV/dataset loading;
//! * [`bench`] — replicated misclassification benchmarks and timing.
//!
//! Randomised steps take explicit seeds and produce identical results
//! for identical seeds, independent of thread count. The `parallel`
//! feature (on by default) distributes the embarrassingly parallel
//! loops over a thread pool; disabling it yields a sequential build
//! with bit-identical output.

pub mod bench;
pub mod classify;
pub mod data;
pub mod depth;
pub mod dist;
pub mod error;
pub mod functional;
pub mod matrix;
pub(crate) mod parallel;
pub mod rng;

pub use error::{Error, Result};
