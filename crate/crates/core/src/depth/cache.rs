//! Cached per-direction projections of a sample, sorted once so that
//! every later depth evaluation is a handful of binary searches instead
//! of a fresh pass over the data. Counting via the sorted slices equals
//! direct counting exactly.

use crate::matrix::{dot, DataMatrix};
use crate::parallel::map_indexed;

use super::univariate::sorted_depth_count;
use super::{DepthValue, DirectionSet};

#[derive(Debug, Clone)]
pub(crate) struct ProjectionCache {
    /// Ascending projections of the sample, one vector per direction.
    pub sorted: Vec<Vec<f64>>,
    n: usize,
}

impl ProjectionCache {
    pub fn build(sample: &DataMatrix, dirs: &DirectionSet) -> Self {
        let sorted = map_indexed(dirs.len(), |i| {
            let v = dirs.direction(i);
            let mut proj: Vec<f64> = sample.rows_iter().map(|row| dot(v, row)).collect();
            proj.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            proj
        });
        Self {
            sorted,
            n: sample.nrows(),
        }
    }

    /// Direction-sampled depth of `x` using the cached projections.
    pub fn depth_count(&self, x: &[f64], dirs: &DirectionSet) -> DepthValue {
        let mut best = self.n;
        for (i, v) in dirs.iter().enumerate() {
            let c = sorted_depth_count(dot(v, x), &self.sorted[i]);
            best = best.min(c);
            if best == 0 {
                break;
            }
        }
        DepthValue {
            count: best,
            n: self.n,
        }
    }

    /// Depth along a ray: the point projects to base[i] + r * step[i] in
    /// direction i. `base` and `step` are per-direction dot products of
    /// the ray origin and the ray direction.
    pub fn depth_count_along(&self, base: &[f64], step: &[f64], r: f64) -> DepthValue {
        let mut best = self.n;
        for i in 0..self.sorted.len() {
            let c = sorted_depth_count(base[i] + r * step[i], &self.sorted[i]);
            best = best.min(c);
            if best == 0 {
                break;
            }
        }
        DepthValue {
            count: best,
            n: self.n,
        }
    }
}
