//! Train/test splitting of a fixed labelled dataset and robust
//! column standardization, the two per-replication steps for
//! benchmarking real (non-simulated) data.

use crate::dist::{mad, median};
use crate::matrix::DataMatrix;
use crate::rng::stream_rng;
use crate::{Error, Result};
use rand::seq::index::sample as index_sample;

/// Largest-remainder apportionment of `total` seats over class
/// `sizes`: every class gets the floor of its proportional share, and
/// the leftover seats go to the largest fractional remainders
/// (ties toward the earlier class). Computed in exact integers.
fn largest_remainder(sizes: &[usize], total: usize) -> Vec<usize> {
    let n: usize = sizes.iter().sum();
    let mut base: Vec<usize> = sizes.iter().map(|&s| total * s / n).collect();
    let remainders: Vec<usize> = sizes.iter().map(|&s| total * s % n).collect();
    let assigned: usize = base.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(remainders[c]), c));
    for &c in order.iter().take(total - assigned) {
        base[c] += 1;
    }
    base
}

/// Splits row indices into a training part of exactly `training_size`
/// and the complementary test part, both ascending. With `stratified`
/// the training seats are apportioned to the classes by the
/// largest-remainder rule and drawn uniformly within each class;
/// without it they are drawn uniformly from all rows.
pub fn split_indices(
    labels: &[String],
    training_size: usize,
    stratified: bool,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if training_size == 0 || training_size >= n {
        return Err(Error::InvalidArgument(format!(
            "training size must lie in 1..{n}, got {training_size}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut train: Vec<usize> = if stratified {
        let mut classes: Vec<&String> = labels.iter().collect();
        classes.sort();
        classes.dedup();
        let members: Vec<Vec<usize>> = classes
            .iter()
            .map(|c| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| *l == *c)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
        let targets = largest_remainder(&sizes, training_size);
        let mut chosen = Vec::with_capacity(training_size);
        for (class, &target) in members.iter().zip(&targets) {
            for local in index_sample(&mut rng, class.len(), target) {
                chosen.push(class[local]);
            }
        }
        chosen
    } else {
        index_sample(&mut rng, n, training_size).into_vec()
    };
    train.sort_unstable();

    let mut in_train = vec![false; n];
    for &i in &train {
        in_train[i] = true;
    }
    let test: Vec<usize> = (0..n).filter(|&i| !in_train[i]).collect();
    Ok((train, test))
}

/// Per-column median and raw MAD of a matrix.
pub(crate) fn column_med_mad(m: &DataMatrix) -> Result<Vec<(f64, f64)>> {
    (0..m.ncols())
        .map(|j| {
            let col = m.column(j);
            Ok((median(&col)?, mad(&col)?))
        })
        .collect()
}

/// Standardizes `target` columnwise by the medians and MADs of
/// `reference`: x -> (x - med) / MAD. A reference column with zero MAD
/// cannot be scaled and is reported by its (1-based) position.
pub fn standardize_by(reference: &DataMatrix, target: &DataMatrix) -> Result<DataMatrix> {
    if reference.ncols() != target.ncols() {
        return Err(Error::DimensionMismatch {
            expected: reference.ncols(),
            found: target.ncols(),
        });
    }
    let stats = column_med_mad(reference)?;
    if let Some(j) = stats.iter().position(|&(_, s)| s == 0.0) {
        return Err(Error::ZeroScale(format!(
            "column {} has zero MAD; cannot standardize",
            j + 1
        )));
    }
    let rows: Vec<Vec<f64>> = target
        .rows_iter()
        .map(|row| {
            row.iter()
                .zip(&stats)
                .map(|(x, &(med, scale))| (x - med) / scale)
                .collect()
        })
        .collect();
    DataMatrix::from_rows(&rows)
}
