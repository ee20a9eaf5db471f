//! Halfspace (Tukey) depth: exact algorithms for one and two dimensions,
//! a direction-sampled approximation for higher dimensions, the Tukey
//! median, and the bag (the depth region holding the central half of the
//! data).

mod bag;
mod bivariate;
pub(crate) mod cache;
mod directions;
mod median;
mod univariate;

pub use bag::{compute_bag, BagGeometry, Polygon};
pub(crate) use bag::compute_bag_cached;
pub use bivariate::{hd_bivariate_count, hd_bivariate_exact};
pub use directions::{exact_direction_set, DirectionSet, DIRECTIONS_PER_DIM};
pub use median::tukey_median;
pub use univariate::{hd_univariate, sorted_depth_count};

use crate::matrix::DataMatrix;
use crate::{Error, Result};

/// A depth value stored as the exact count k over the sample size n.
/// Keeping the integer count makes tie detection exact where the
/// underlying algorithm is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthValue {
    pub count: usize,
    pub n: usize,
}

impl DepthValue {
    pub fn value(&self) -> f64 {
        self.count as f64 / self.n as f64
    }
}

impl PartialOrd for DepthValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DepthValue {
    // Cross-multiplied comparison, exact for the sample sizes at hand.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.count as u128 * other.n as u128).cmp(&(other.count as u128 * self.n as u128))
    }
}

/// Direction-sampled halfspace depth: the minimum over the given
/// directions of the univariate depth of the projections. Always an upper
/// bound on the exact depth.
pub fn hd_approx(x: &[f64], sample: &DataMatrix, dirs: &DirectionSet) -> Result<f64> {
    Ok(hd_approx_count(x, sample, dirs)?.value())
}

/// Count-valued form of [`hd_approx`].
pub fn hd_approx_count(x: &[f64], sample: &DataMatrix, dirs: &DirectionSet) -> Result<DepthValue> {
    let p = sample.ncols();
    if x.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: x.len(),
        });
    }
    if dirs.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: dirs.dim(),
        });
    }
    let n = sample.nrows();
    let mut best = n;
    let mut proj = Vec::with_capacity(n);
    for v in dirs.iter() {
        proj.clear();
        proj.extend(sample.rows_iter().map(|row| crate::matrix::dot(v, row)));
        let xv = crate::matrix::dot(v, x);
        let le = proj.iter().filter(|&&t| t <= xv).count();
        let ge = proj.iter().filter(|&&t| t >= xv).count();
        best = best.min(le).min(ge);
        if best == 0 {
            break;
        }
    }
    Ok(DepthValue { count: best, n })
}
