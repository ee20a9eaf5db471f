//! The Tukey median: the deepest point of a sample.
//!
//! p = 1 is the ordinary median. For p = 2 depths are exact; otherwise
//! they use the supplied direction set. The deepest sample points are
//! averaged (their mean stays at least as deep because depth regions are
//! convex; if floating point says otherwise, the lexicographically
//! smallest maximiser is used instead), then refined by a derivative-free
//! simplex search whose moves are affine combinations of data points, so
//! the whole procedure is affine equivariant and deterministic.

use crate::matrix::DataMatrix;
use crate::parallel::map_indexed;
use crate::{Error, Result};

use super::{hd_approx_count, hd_bivariate_count, DepthValue, DirectionSet};

const REFINE_MAX_ITER: usize = 200;
const REFINE_TOL: f64 = 1e-7;

/// Computes the Tukey median of the sample.
pub fn tukey_median(sample: &DataMatrix, dirs: &DirectionSet) -> Result<Vec<f64>> {
    if sample.ncols() >= 3 {
        let cache = super::cache::ProjectionCache::build(sample, dirs);
        tukey_median_cached(sample, dirs, &cache)
    } else {
        tukey_median_impl(sample, dirs, None)
    }
}

/// Variant reusing an existing projection cache (p >= 3).
pub(crate) fn tukey_median_cached(
    sample: &DataMatrix,
    dirs: &DirectionSet,
    cache: &super::cache::ProjectionCache,
) -> Result<Vec<f64>> {
    tukey_median_impl(sample, dirs, Some(cache))
}

fn tukey_median_impl(
    sample: &DataMatrix,
    dirs: &DirectionSet,
    cache: Option<&super::cache::ProjectionCache>,
) -> Result<Vec<f64>> {
    let p = sample.ncols();
    let n = sample.nrows();
    if p == 1 {
        let mut col = sample.column(0);
        col.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        return Ok(vec![crate::dist::sorted_median(&col)]);
    }
    if n < p + 1 {
        return Err(Error::DegenerateSample(format!(
            "need at least p + 1 = {} points, have {n}",
            p + 1
        )));
    }
    check_affine_rank(sample)?;

    let depth = |x: &[f64]| -> Result<DepthValue> {
        if p == 2 {
            hd_bivariate_count(x, sample)
        } else if let Some(c) = cache {
            Ok(c.depth_count(x, dirs))
        } else {
            hd_approx_count(x, sample, dirs)
        }
    };

    let depths: Vec<DepthValue> = {
        let computed = map_indexed(n, |i| depth(sample.row(i)));
        let mut out = Vec::with_capacity(n);
        for d in computed {
            out.push(d?);
        }
        out
    };
    let best_depth = *depths.iter().max().unwrap();

    // Depth-descending, index-ascending order of sample points.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| depths[b].cmp(&depths[a]).then(a.cmp(&b)));

    let maximizers: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&i| depths[i] == best_depth)
        .collect();
    let mut center = vec![0.0; p];
    for &i in &maximizers {
        for (c, v) in center.iter_mut().zip(sample.row(i)) {
            *c += v;
        }
    }
    for c in &mut center {
        *c /= maximizers.len() as f64;
    }
    let mut start_depth = depth(&center)?;
    if start_depth < best_depth {
        // Floating point demoted the average; fall back to the
        // lexicographically smallest maximiser.
        let lex = maximizers
            .iter()
            .map(|&i| sample.row(i))
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        center = lex.to_vec();
        start_depth = best_depth;
    }

    let (refined, refined_depth) = refine(&center, start_depth.value(), &order, sample, &|x| {
        depth(x).map(|d| d.value())
    })?;
    debug_assert!(refined_depth >= best_depth.value() - 1e-12);
    let _ = refined_depth;
    Ok(refined)
}

/// Nelder-Mead-style maximisation of the depth, starting from `start`.
/// Vertices are built from the deepest sample points; all updates are
/// affine combinations. Returns the best point ever evaluated.
fn refine(
    start: &[f64],
    start_value: f64,
    depth_order: &[usize],
    sample: &DataMatrix,
    f: &dyn Fn(&[f64]) -> Result<f64>,
) -> Result<(Vec<f64>, f64)> {
    let p = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(p + 1);
    simplex.push((start.to_vec(), start_value));
    for &i in depth_order {
        if simplex.len() == p + 1 {
            break;
        }
        let row = sample.row(i);
        if row == start {
            continue;
        }
        let vertex: Vec<f64> = start.iter().zip(row).map(|(a, b)| (a + b) / 2.0).collect();
        let value = f(&vertex)?;
        simplex.push((vertex, value));
    }
    if simplex.len() < p + 1 {
        return Ok((start.to_vec(), start_value));
    }

    let mut best = simplex[0].clone();
    for _ in 0..REFINE_MAX_ITER {
        // Descending by value; stable, so ties keep their order.
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        if simplex[0].1 > best.1 {
            best = simplex[0].clone();
        }
        if simplex[0].1 - simplex[p].1 < REFINE_TOL {
            break;
        }
        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; p];
        for (v, _) in &simplex[..p] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in &mut centroid {
            *c /= p as f64;
        }
        let worst = simplex[p].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| 2.0 * c - w)
            .collect();
        let fr = f(&reflect)?;
        if fr > simplex[0].1 {
            // Try expanding further.
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| 3.0 * c - 2.0 * w)
                .collect();
            let fe = f(&expand)?;
            simplex[p] = if fe > fr { (expand, fe) } else { (reflect, fr) };
        } else if fr > simplex[p - 1].1 {
            simplex[p] = (reflect, fr);
        } else {
            // Contract toward the centroid.
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| 0.5 * (c + w))
                .collect();
            let fc = f(&contract)?;
            if fc > worst.1 {
                simplex[p] = (contract, fc);
            } else {
                // Shrink everything toward the best vertex.
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = anchor
                        .iter()
                        .zip(&entry.0)
                        .map(|(a, v)| 0.5 * (a + v))
                        .collect();
                    let fv = f(&shrunk)?;
                    *entry = (shrunk, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    if simplex[0].1 > best.1 {
        best = simplex[0].clone();
    }
    Ok(best)
}

/// Errors out when the sample is affinely dependent (rank < p).
pub(crate) fn check_affine_rank(sample: &DataMatrix) -> Result<()> {
    let n = sample.nrows();
    let p = sample.ncols();
    let mut mean = vec![0.0; p];
    for row in sample.rows_iter() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut centered = Vec::with_capacity(n * p);
    for row in sample.rows_iter() {
        for j in 0..p {
            centered.push(row[j] - mean[j]);
        }
    }
    let m = nalgebra::DMatrix::from_row_slice(n, p, &centered);
    let svd = m.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10 * smax.max(1e-300))
        .count();
    if rank < p {
        return Err(Error::DegenerateSample(
            "all points lie on a common hyperplane".into(),
        ));
    }
    Ok(())
}
