//! Univariate halfspace depth.

use crate::matrix::DataMatrix;
use crate::{Error, Result};

use super::DepthValue;

/// Exact univariate halfspace depth: min(#{y <= x}, #{y >= x}) / n.
pub fn hd_univariate(x: f64, sample: &DataMatrix) -> Result<f64> {
    if sample.ncols() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: sample.ncols(),
        });
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("evaluation point".into()));
    }
    let n = sample.nrows();
    let le = sample.rows_iter().filter(|r| r[0] <= x).count();
    let ge = sample.rows_iter().filter(|r| r[0] >= x).count();
    Ok(DepthValue {
        count: le.min(ge),
        n,
    }
    .value())
}

/// Count form of the univariate depth over an ascending-sorted slice,
/// via binary search. Equals direct counting exactly.
pub fn sorted_depth_count(x: f64, sorted: &[f64]) -> usize {
    let le = sorted.partition_point(|&v| v <= x);
    let lt = sorted.partition_point(|&v| v < x);
    let ge = sorted.len() - lt;
    le.min(ge)
}
