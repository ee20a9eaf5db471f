//! Classification of discretized curves.
//!
//! A functional observation is a T x p matrix of values on a shared,
//! strictly increasing time grid. Quadrature weights (trapezoid by
//! default, normalized to sum to one) fold pointwise depths and
//! distances into integrated scalar measures, and the multivariate
//! classification rules then apply unchanged to the resulting G-vectors.
//! Raw-curve kNN uses the weighted L2 curve metric. With a single grid
//! point everything reduces to the multivariate case.

mod classify;
mod group;
mod sample;

pub use classify::{FunctionalClassifier, FunctionalGroupedData, FunctionalTrainingSet};
pub use group::PointwiseGroupModels;
pub use sample::{l2_curve_distance, AugmentOp, FunctionalSample, WEIGHT_SUM_TOL};
