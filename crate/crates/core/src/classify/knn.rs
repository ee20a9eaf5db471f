//! k-nearest-neighbour voting with fully deterministic tie rules, plus
//! leave-one-out selection of k.
//!
//! Neighbours are ranked by (Euclidean distance, training index), so a
//! distance tie at the k-th place is resolved by stable training order.
//! A vote tie goes to the label with the smallest summed neighbour
//! distance, then to the lower label index.

use crate::matrix::euclidean;
use crate::parallel::map_indexed;
use crate::{Error, Result};

/// The k chosen by leave-one-out cross-validation and its error count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnnChoice {
    pub k: usize,
    pub loo_errors: usize,
}

/// Majority vote over the first k entries of a (distance, label) list
/// already ranked by (distance, training index).
fn vote(ranked: &[(f64, usize)], k: usize, n_labels: usize) -> usize {
    let mut counts = vec![0usize; n_labels];
    let mut sums = vec![0.0f64; n_labels];
    for &(d, label) in &ranked[..k] {
        counts[label] += 1;
        sums[label] += d;
    }
    let mut winner = 0usize;
    for g in 1..n_labels {
        let better = counts[g] > counts[winner]
            || (counts[g] == counts[winner] && sums[g] < sums[winner]);
        if better {
            winner = g;
        }
    }
    winner
}

fn check_inputs(train: &[Vec<f64>], labels: &[usize]) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::EmptySample);
    }
    if labels.len() != train.len() {
        return Err(Error::InvalidArgument(format!(
            "{} points but {} labels",
            train.len(),
            labels.len()
        )));
    }
    let dim = train[0].len();
    if train.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidArgument("ragged training coordinates".into()));
    }
    Ok(labels.iter().max().copied().unwrap_or(0) + 1)
}

/// Ranked (distance, label) list of all training points except `skip`.
fn ranked_neighbors(
    train: &[Vec<f64>],
    labels: &[usize],
    x: &[f64],
    skip: Option<usize>,
) -> Vec<(f64, usize)> {
    let mut order: Vec<(f64, usize)> = train
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .map(|(i, r)| (euclidean(r, x), i))
        .collect();
    order.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    order.into_iter().map(|(d, i)| (d, labels[i])).collect()
}

/// Label of `x` by majority vote among its k nearest training points.
pub fn knn_predict(train: &[Vec<f64>], labels: &[usize], x: &[f64], k: usize) -> Result<usize> {
    let n_labels = check_inputs(train, labels)?;
    if x.len() != train[0].len() {
        return Err(Error::DimensionMismatch {
            expected: train[0].len(),
            found: x.len(),
        });
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} outside 1..={}",
            train.len()
        )));
    }
    Ok(vote(&ranked_neighbors(train, labels, x, None), k, n_labels))
}

/// Chooses k from `k_grid` by leave-one-out cross-validation.
///
/// Returns the grid k with the fewest LOO misclassifications; ties go
/// to the smallest k.
pub fn knn_fit(train: &[Vec<f64>], labels: &[usize], k_grid: &[usize]) -> Result<KnnChoice> {
    let n_labels = check_inputs(train, labels)?;
    let n = train.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "leave-one-out needs at least two points".into(),
        ));
    }
    if k_grid.is_empty() {
        return Err(Error::InvalidArgument("empty k grid".into()));
    }
    if let Some(&bad) = k_grid.iter().find(|&&k| k == 0 || k > n - 1) {
        return Err(Error::InvalidArgument(format!(
            "grid k = {bad} outside 1..={}",
            n - 1
        )));
    }

    // One ranked neighbour list per point, then every grid k reads a
    // prefix of it.
    let errors_per_point: Vec<Vec<bool>> = map_indexed(n, |i| {
        let ranked = ranked_neighbors(train, labels, &train[i], Some(i));
        k_grid
            .iter()
            .map(|&k| vote(&ranked, k, n_labels) != labels[i])
            .collect()
    });

    let mut best: Option<KnnChoice> = None;
    for (j, &k) in k_grid.iter().enumerate() {
        let errs = errors_per_point.iter().filter(|e| e[j]).count();
        let cand = KnnChoice { k, loo_errors: errs };
        best = Some(match best {
            None => cand,
            Some(b) => {
                if errs < b.loo_errors || (errs == b.loo_errors && k < b.k) {
                    cand
                } else {
                    b
                }
            }
        });
    }
    Ok(best.unwrap())
}

/// The default cross-validation grid: 1..=min(30, N-1).
pub fn default_k_grid(n: usize) -> Vec<usize> {
    (1..=30.min(n.saturating_sub(1))).collect()
}
