//! Wall-clock comparison of the two outlyingness-to-distance routes:
//! the bag-based generalized norm, whose query cost grows with both
//! dimension and query count, versus directional adjusted outlyingness,
//! whose per-query cost is a single pass over the projection
//! directions.
//!
//! Each grid cell times fit-plus-queries for both measures on the same
//! freshly drawn Gaussian datasets, so the model-building cost is
//! charged identically to the two columns and only the query phase
//! separates them.

use crate::dist::GroupModel;
use crate::matrix::DataMatrix;
use crate::rng::{child_seed, stream_rng};
use crate::{Error, Result};
use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use std::hint::black_box;
use std::time::Instant;

/// Mean wall-clock milliseconds at one (dimension, query-count) cell:
/// fitting the group model plus answering every query, for the
/// bag-based distance (`bd_ms`) and adjusted outlyingness (`ao_ms`).
#[derive(Debug, Clone, Copy)]
pub struct TimingRow {
    pub p: usize,
    pub m: usize,
    pub bd_ms: f64,
    pub ao_ms: f64,
}

/// Draws `total` rows from N(0, A Aᵀ + I/2) with a fresh random A, so
/// every dataset has a different correlated shape.
fn random_gaussian(p: usize, total: usize, seed: u64) -> Result<DataMatrix> {
    let mut rng = stream_rng(seed, 0);
    let a = DMatrix::<f64>::from_fn(p, p, |_, _| rng.sample(StandardNormal));
    let sigma = &a * a.transpose() + DMatrix::<f64>::identity(p, p) * 0.5;
    let l = Cholesky::new(sigma)
        .ok_or_else(|| Error::DegenerateSample("covariance factorization failed".into()))?
        .l();
    let mut rows = Vec::with_capacity(total);
    for _ in 0..total {
        let z = DVector::<f64>::from_fn(p, |_, _| rng.sample(StandardNormal));
        rows.push((&l * z).iter().copied().collect::<Vec<f64>>());
    }
    DataMatrix::from_rows(&rows)
}

/// Times fit-plus-queries over a (dimension × query-count) grid,
/// averaging each cell over `datasets` independent draws of an
/// `n`-point training sample. Rows come back dimension-major in the
/// order of `ps` and `ms`.
pub fn time_measures(
    ps: &[usize],
    ms: &[usize],
    n: usize,
    datasets: usize,
    seed: u64,
) -> Result<Vec<TimingRow>> {
    if ps.is_empty() || ms.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one dimension and one query count".into(),
        ));
    }
    if datasets == 0 {
        return Err(Error::InvalidArgument(
            "need at least one dataset per cell".into(),
        ));
    }
    if let Some(&p) = ps.iter().find(|&&p| p == 0 || n < p + 1) {
        return Err(Error::InvalidArgument(format!(
            "cannot fit {p}-dimensional models on {n} observations"
        )));
    }
    if let Some(&m) = ms.iter().find(|&&m| m == 0) {
        return Err(Error::InvalidArgument(format!(
            "query counts must be positive, got {m}"
        )));
    }

    let mut root = stream_rng(seed, 0);
    let mut rows = Vec::with_capacity(ps.len() * ms.len());
    for &p in ps {
        for &m in ms {
            let mut bd_total = 0.0;
            let mut ao_total = 0.0;
            for _ in 0..datasets {
                let ds_seed = child_seed(&mut root);
                let data = random_gaussian(p, n + m, ds_seed)?;
                let sample = data.select_rows(&(0..n).collect::<Vec<_>>())?;
                let queries: Vec<Vec<f64>> = (n..n + m).map(|i| data.row(i).to_vec()).collect();

                let t = Instant::now();
                let model = GroupModel::fit(sample.clone(), ds_seed)?;
                let mut acc = 0.0;
                for q in &queries {
                    acc += model.bagdistance(q)?;
                }
                black_box(acc);
                bd_total += t.elapsed().as_secs_f64() * 1e3;

                let t = Instant::now();
                let model = GroupModel::fit(sample, ds_seed)?;
                let mut acc = 0.0;
                for q in &queries {
                    acc += model.ao(q)?;
                }
                black_box(acc);
                ao_total += t.elapsed().as_secs_f64() * 1e3;
            }
            rows.push(TimingRow {
                p,
                m,
                bd_ms: bd_total / datasets as f64,
                ao_ms: ao_total / datasets as f64,
            });
        }
    }
    Ok(rows)
}
