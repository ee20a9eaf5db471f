//! Depth- and distance-based classification: labelled data, per-group
//! fitted models, transforms into G-dimensional measure space, and the
//! MaxDepth, MinDist, DepthDepth+kNN, DistSpace, and plain-kNN rules.

mod knn;
mod measure;
mod model;
mod training;

pub use knn::{default_k_grid, knn_fit, knn_predict, KnnChoice};
pub use measure::{Measure, Method};
pub use model::{ClassifierModel, FitOptions};
pub use training::{GroupedData, TrainingSet, TransformedPoint};

pub(crate) use model::RescaleParams;
pub(crate) use training::arg_best_group;
