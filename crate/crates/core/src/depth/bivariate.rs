//! Exact halfspace depth in the plane, O(n log n) per evaluation.
//!
//! The depth of x is m + min over critical boundary directions of the
//! count just past the critical angle, where m is the number of sample
//! points coincident with x. Writing d_i = y_i - x and grouping equal
//! directions, the count for the interval starting just past the line
//! through x and d_j is: points strictly counterclockwise of d_j within a
//! half turn, plus points exactly opposite d_j. All angular comparisons
//! are sign tests on cross/dot products, so collinear and duplicated
//! points are handled exactly; no angles are ever materialised.

use crate::matrix::DataMatrix;
use crate::{Error, Result};

use super::DepthValue;

/// Exact planar halfspace depth of `x` with respect to `sample` (p = 2).
pub fn hd_bivariate_exact(x: &[f64], sample: &DataMatrix) -> Result<f64> {
    Ok(hd_bivariate_count(x, sample)?.value())
}

/// Count-valued form of [`hd_bivariate_exact`].
pub fn hd_bivariate_count(x: &[f64], sample: &DataMatrix) -> Result<DepthValue> {
    if sample.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: sample.ncols(),
        });
    }
    if x.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: x.len(),
        });
    }
    if !(x[0].is_finite() && x[1].is_finite()) {
        return Err(Error::NonFinite("evaluation point".into()));
    }
    let n = sample.nrows();
    let mut coincident = 0usize;
    let mut dirs: Vec<[f64; 2]> = Vec::with_capacity(n);
    for row in sample.rows_iter() {
        let d = [row[0] - x[0], row[1] - x[1]];
        if d[0] == 0.0 && d[1] == 0.0 {
            coincident += 1;
        } else {
            dirs.push(d);
        }
    }
    if dirs.is_empty() {
        return Ok(DepthValue { count: n, n });
    }

    dirs.sort_unstable_by(|a, b| angular_cmp(a, b));

    // Group equal directions; `counts[t]` is the multiplicity of group t.
    let mut groups: Vec<[f64; 2]> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for d in &dirs {
        if let Some(last) = groups.last() {
            if same_direction(last, d) {
                *counts.last_mut().unwrap() += 1;
                continue;
            }
        }
        groups.push(*d);
        counts.push(1);
    }
    let k = groups.len();
    let total = dirs.len();

    // Circular prefix sums over group counts.
    let mut prefix = vec![0usize; 2 * k + 1];
    for i in 0..2 * k {
        prefix[i + 1] = prefix[i] + counts[i % k];
    }
    let range_sum = |from: usize, len: usize| prefix[from + len] - prefix[from];

    let mut best = usize::MAX;
    for t in 0..k {
        let g = &groups[t];
        // Offsets 1..k-1 index the other groups in ascending angular order
        // starting just past g; "strictly ccw within a half turn" is a
        // true-prefix over that order.
        let mut lo = 1usize; // offsets < lo are ccw
        let mut hi = k; // offsets >= hi are not
        while lo < hi {
            let mid = (lo + hi) / 2;
            let s = &groups[(t + mid) % k];
            if cross(g, s) > 0.0 {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let run = lo - 1; // number of strictly-ccw groups
        let ccw_strict = range_sum(t + 1, run);
        let mut anti = 0usize;
        if run + 1 < k {
            let cand = (t + run + 1) % k;
            let s = &groups[cand];
            if cross(g, s) == 0.0 && dot(g, s) < 0.0 {
                anti = counts[cand];
            }
        }
        let cw_strict = total - counts[t] - ccw_strict - anti;
        best = best.min(ccw_strict + anti).min(cw_strict + anti);
        if best == 0 {
            break;
        }
    }

    Ok(DepthValue {
        count: coincident + best,
        n,
    })
}

fn cross(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Which half turn a nonzero direction lies in: 0 for angles in [0, pi),
/// 1 for [pi, 2 pi).
fn half(d: &[f64; 2]) -> u8 {
    if d[1] > 0.0 || (d[1] == 0.0 && d[0] > 0.0) {
        0
    } else {
        1
    }
}

/// Ascending-angle comparator using only sign tests.
fn angular_cmp(a: &[f64; 2], b: &[f64; 2]) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    match half(a).cmp(&half(b)) {
        Equal => {
            let c = cross(a, b);
            if c > 0.0 {
                Less
            } else if c < 0.0 {
                Greater
            } else {
                Equal
            }
        }
        other => other,
    }
}

fn same_direction(a: &[f64; 2], b: &[f64; 2]) -> bool {
    half(a) == half(b) && cross(a, b) == 0.0
}
