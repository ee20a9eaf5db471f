//! The bag: the region holding the central half of the data.
//!
//! In the plane it is the convex hull of the ceil(n/2) deepest sample
//! points (ties at the cutoff included). In any dimension the depth
//! threshold form is the median of the sample depths: the bag is the
//! region where the depth still reaches that median.

use crate::matrix::DataMatrix;
use crate::parallel::map_indexed;
use crate::{Error, Result};

use super::{hd_approx_count, hd_bivariate_count, median::check_affine_rank, tukey_median, DepthValue, DirectionSet};

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

impl Polygon {
    /// Convex hull (strictly convex, CCW) of a point cloud.
    pub fn convex_hull(points: &[[f64; 2]]) -> Result<Polygon> {
        let mut pts: Vec<[f64; 2]> = points.to_vec();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::DegenerateSample(
                "fewer than 3 distinct points for a polygon".into(),
            ));
        }
        let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
            (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        };
        let mut lower: Vec<[f64; 2]> = Vec::new();
        for &pt in &pts {
            while lower.len() >= 2
                && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], &pt) <= 0.0
            {
                lower.pop();
            }
            lower.push(pt);
        }
        let mut upper: Vec<[f64; 2]> = Vec::new();
        for &pt in pts.iter().rev() {
            while upper.len() >= 2
                && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], &pt) <= 0.0
            {
                upper.pop();
            }
            upper.push(pt);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::DegenerateSample("hull is collinear".into()));
        }
        Ok(Polygon { vertices: lower })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Closed CCW ring (first vertex repeated), e.g. for JSON export.
    pub fn closed_ring(&self) -> Vec<[f64; 2]> {
        let mut ring = self.vertices.clone();
        ring.push(self.vertices[0]);
        ring
    }

    /// Point-in-polygon test (closed region; boundary counts as inside).
    pub fn contains(&self, pt: &[f64]) -> bool {
        let k = self.vertices.len();
        let scale = self
            .vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..k {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % k];
            let c = (b[0] - a[0]) * (pt[1] - a[1]) - (b[1] - a[1]) * (pt[0] - a[0]);
            if c < -1e-12 * scale * scale {
                return false;
            }
        }
        true
    }

    /// Distance from `origin` (inside the polygon) to the boundary along
    /// the ray with unit direction `u`.
    ///
    /// Crossings within rounding distance of the origin (relative 1e-12)
    /// are boundary touches, not exits: an origin sitting on the boundary
    /// itself meets its own edges at distance zero — possibly rounded to
    /// a stray 1e-16 — and those contacts must not shadow the true exit
    /// point further along. When no real crossing remains (the ray leaves
    /// the region immediately), the scaled distance is undefined and this
    /// errors.
    pub fn ray_boundary_distance(&self, origin: &[f64], u: &[f64]) -> Result<f64> {
        let k = self.vertices.len();
        let scale = self
            .vertices
            .iter()
            .flat_map(|v| v.iter())
            .chain(origin.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let touch = 1e-12 * scale;
        let mut best: Option<f64> = None;
        for i in 0..k {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % k];
            // Solve origin + r u = a + s (b - a).
            let ex = b[0] - a[0];
            let ey = b[1] - a[1];
            let det = u[0] * (-ey) - u[1] * (-ex);
            if det == 0.0 {
                continue; // ray parallel to this edge
            }
            let wx = a[0] - origin[0];
            let wy = a[1] - origin[1];
            let r = (wx * (-ey) + ex * wy) / det;
            let s = (u[0] * wy - u[1] * wx) / det;
            if r > touch && (-1e-12..=1.0 + 1e-12).contains(&s) {
                best = Some(match best {
                    Some(prev) => prev.min(r),
                    None => r,
                });
            }
        }
        best.ok_or_else(|| {
            Error::InvalidArgument("ray does not leave the polygon through its boundary".into())
        })
    }
}

/// The bag of a sample: centre (Tukey median), depth threshold (median of
/// the sample point depths, kept as an exact ratio), the per-point source
/// depths, and for p = 2 the explicit polygon.
#[derive(Debug, Clone)]
pub struct BagGeometry {
    pub center: Vec<f64>,
    pub threshold: DepthValue,
    pub source_depths: Vec<DepthValue>,
    pub polygon: Option<Polygon>,
}

/// Computes the bag of the sample.
pub fn compute_bag(sample: &DataMatrix, dirs: &DirectionSet) -> Result<BagGeometry> {
    if sample.ncols() >= 3 {
        let cache = super::cache::ProjectionCache::build(sample, dirs);
        compute_bag_cached(sample, dirs, &cache)
    } else {
        compute_bag_impl(sample, dirs, None)
    }
}

/// Variant reusing an existing projection cache (p >= 3).
pub(crate) fn compute_bag_cached(
    sample: &DataMatrix,
    dirs: &DirectionSet,
    cache: &super::cache::ProjectionCache,
) -> Result<BagGeometry> {
    compute_bag_impl(sample, dirs, Some(cache))
}

fn compute_bag_impl(
    sample: &DataMatrix,
    dirs: &DirectionSet,
    cache: Option<&super::cache::ProjectionCache>,
) -> Result<BagGeometry> {
    let p = sample.ncols();
    let n = sample.nrows();
    if p > 1 {
        if n < p + 1 {
            return Err(Error::DegenerateSample(format!(
                "need at least p + 1 = {} points, have {n}",
                p + 1
            )));
        }
        check_affine_rank(sample)?;
    }
    let depths: Vec<DepthValue> = {
        let computed = map_indexed(n, |i| {
            if p >= 3 {
                if let Some(c) = cache {
                    return Ok(c.depth_count(sample.row(i), dirs));
                }
            }
            point_depth(sample.row(i), sample, dirs)
        });
        let mut out = Vec::with_capacity(n);
        for d in computed {
            out.push(d?);
        }
        out
    };

    // Median of the depths as an exact ratio: for even counts the average
    // of the two middle values is (c1 + c2) / 2n.
    let mut sorted = depths.clone();
    sorted.sort_unstable();
    let threshold = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        let a = sorted[n / 2 - 1];
        let b = sorted[n / 2];
        DepthValue {
            count: a.count + b.count,
            n: 2 * a.n,
        }
    };

    let polygon = if p == 2 {
        // The ceil(n/2) deepest points, ties at the cutoff included.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| depths[b].cmp(&depths[a]).then(a.cmp(&b)));
        let half = n.div_ceil(2);
        let cutoff = depths[order[half - 1]];
        let chosen: Vec<[f64; 2]> = order
            .iter()
            .copied()
            .filter(|&i| depths[i] >= cutoff)
            .map(|i| {
                let r = sample.row(i);
                [r[0], r[1]]
            })
            .collect();
        Some(Polygon::convex_hull(&chosen)?)
    } else {
        None
    };

    let center = match cache {
        Some(c) if p >= 3 => super::median::tukey_median_cached(sample, dirs, c)?,
        _ => tukey_median(sample, dirs)?,
    };
    if let Some(poly) = &polygon {
        if !poly.contains(&center) {
            return Err(Error::DegenerateSample(
                "bag centre fell outside the bag polygon".into(),
            ));
        }
    }

    Ok(BagGeometry {
        center,
        threshold,
        source_depths: depths,
        polygon,
    })
}

/// Depth of a point routed to the exact algorithm for p <= 2.
pub(crate) fn point_depth(
    x: &[f64],
    sample: &DataMatrix,
    dirs: &DirectionSet,
) -> Result<DepthValue> {
    match sample.ncols() {
        1 => {
            let n = sample.nrows();
            let le = sample.rows_iter().filter(|r| r[0] <= x[0]).count();
            let ge = sample.rows_iter().filter(|r| r[0] >= x[0]).count();
            Ok(DepthValue {
                count: le.min(ge),
                n,
            })
        }
        2 => hd_bivariate_count(x, sample),
        _ => hd_approx_count(x, sample, dirs),
    }
}
