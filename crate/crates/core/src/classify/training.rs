//! Labelled data, fitted per-group models, and the depth/distance
//! transforms into G-dimensional space with the MaxDepth and MinDist
//! rules.

use super::measure::Measure;
use crate::dist::GroupModel;
use crate::matrix::DataMatrix;
use crate::parallel::map_indexed;
use crate::rng::{child_seed, stream_rng};
use crate::{Error, Result};

/// Raw labelled observations, grouped. Groups are ordered by label
/// (lexicographically), which fixes every group index downstream.
#[derive(Debug, Clone)]
pub struct GroupedData {
    names: Vec<String>,
    groups: Vec<DataMatrix>,
}

impl GroupedData {
    /// Builds grouped data from (label, sample) pairs. Labels must be
    /// unique and samples must share one dimension; the pairs are
    /// reordered by label.
    pub fn new(pairs: Vec<(String, DataMatrix)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("duplicate group label".into()));
        }
        let dim = pairs[0].1.ncols();
        if pairs.iter().any(|(_, m)| m.ncols() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: pairs.iter().map(|(_, m)| m.ncols()).find(|&c| c != dim).unwrap(),
            });
        }
        let (names, groups) = pairs.into_iter().unzip();
        Ok(Self { names, groups })
    }

    /// Groups flat rows by their label strings (sorted unique order).
    pub fn from_rows(rows: &DataMatrix, labels: &[String]) -> Result<Self> {
        if labels.len() != rows.nrows() {
            return Err(Error::InvalidArgument(format!(
                "{} rows but {} labels",
                rows.nrows(),
                labels.len()
            )));
        }
        let mut names: Vec<String> = labels.to_vec();
        names.sort();
        names.dedup();
        let pairs = names
            .into_iter()
            .map(|name| {
                let idx: Vec<usize> = labels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| **l == name)
                    .map(|(i, _)| i)
                    .collect();
                Ok((name, rows.select_rows(&idx)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn group(&self, g: usize) -> &DataMatrix {
        &self.groups[g]
    }

    pub fn dim(&self) -> usize {
        self.groups[0].ncols()
    }

    pub fn total_n(&self) -> usize {
        self.groups.iter().map(|m| m.nrows()).sum()
    }

    /// Flattens back to rows in group order with the group index of
    /// each row.
    pub fn to_rows(&self) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rows = Vec::with_capacity(self.total_n());
        let mut idx = Vec::with_capacity(self.total_n());
        for (g, m) in self.groups.iter().enumerate() {
            for r in m.rows_iter() {
                rows.push(r.to_vec());
                idx.push(g);
            }
        }
        (rows, idx)
    }

    /// Consumes the grouping into (label, sample) pairs.
    pub fn into_pairs(self) -> Vec<(String, DataMatrix)> {
        self.names.into_iter().zip(self.groups).collect()
    }

    /// Fits one [`GroupModel`] per group, with per-group direction seeds
    /// derived from `seed`.
    pub fn fit_training(&self, seed: u64) -> Result<TrainingSet> {
        TrainingSet::fit(self, seed)
    }
}

/// A point mapped to the G-vector of its per-group measure values.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedPoint {
    pub coords: Vec<f64>,
    pub measure: Measure,
}

/// Fitted reference groups with their labels and training counts.
#[derive(Debug)]
pub struct TrainingSet {
    groups: Vec<GroupModel>,
    names: Vec<String>,
    counts: Vec<usize>,
    seed: u64,
}

impl TrainingSet {
    /// Fits every group of `data`. Needs at least two groups and
    /// n_g >= p + 1 points in each.
    pub fn fit(data: &GroupedData, seed: u64) -> Result<Self> {
        if data.n_groups() < 2 {
            return Err(Error::InvalidArgument(
                "classification needs at least two groups".into(),
            ));
        }
        let p = data.dim();
        for g in 0..data.n_groups() {
            if data.group(g).nrows() < p + 1 {
                return Err(Error::InvalidArgument(format!(
                    "group '{}' has {} points; need at least p + 1 = {}",
                    data.name(g),
                    data.group(g).nrows(),
                    p + 1
                )));
            }
        }
        let mut root = stream_rng(seed, 0);
        let group_seeds: Vec<u64> = (0..data.n_groups()).map(|_| child_seed(&mut root)).collect();
        let groups = map_indexed(data.n_groups(), |g| {
            GroupModel::fit(data.group(g).clone(), group_seeds[g])
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            groups,
            names: data.names().to_vec(),
            counts: (0..data.n_groups()).map(|g| data.group(g).nrows()).collect(),
            seed,
        })
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, g: usize) -> &GroupModel {
        &self.groups[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.groups[0].sample().ncols()
    }

    /// Training priors n_g / N.
    pub fn priors(&self) -> Vec<f64> {
        let n: usize = self.counts.iter().sum();
        self.counts.iter().map(|&c| c as f64 / n as f64).collect()
    }

    /// One measure value against one group.
    pub fn measure_value(&self, x: &[f64], measure: Measure, g: usize) -> Result<f64> {
        let model = &self.groups[g];
        match measure {
            Measure::Hd => model.hd(x),
            Measure::Pd => model.pd(x),
            Measure::Spd => model.spd(x),
            Measure::Bd => model.bagdistance(x),
            Measure::Sdo => model.sdo(x),
            Measure::Ao => model.ao(x),
        }
    }

    /// Maps `x` to the G-vector of its per-group measure values.
    pub fn transform(&self, x: &[f64], measure: Measure) -> Result<TransformedPoint> {
        let coords = (0..self.groups.len())
            .map(|g| self.measure_value(x, measure, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(TransformedPoint { coords, measure })
    }

    /// Transforms every row of `rows` (in parallel).
    pub fn transform_batch(&self, rows: &DataMatrix, measure: Measure) -> Result<Vec<Vec<f64>>> {
        map_indexed(rows.nrows(), |i| {
            Ok(self.transform(rows.row(i), measure)?.coords)
        })
        .into_iter()
        .collect()
    }

    /// MaxDepth rule: the group index with the largest depth, ties to
    /// the larger prior and then the lower index.
    pub fn classify_maxdepth(&self, x: &[f64], measure: Measure) -> Result<usize> {
        if !measure.is_depth() {
            return Err(Error::InvalidArgument(format!(
                "'{measure}' is a distance, not a depth"
            )));
        }
        let t = self.transform(x, measure)?;
        Ok(self.arg_best(&t.coords, true))
    }

    /// MinDist rule: the group index with the smallest distance, same
    /// tie handling.
    pub fn classify_mindist(&self, x: &[f64], measure: Measure) -> Result<usize> {
        if measure.is_depth() {
            return Err(Error::InvalidArgument(format!(
                "'{measure}' is a depth, not a distance"
            )));
        }
        let t = self.transform(x, measure)?;
        Ok(self.arg_best(&t.coords, false))
    }

    fn arg_best(&self, coords: &[f64], larger_is_better: bool) -> usize {
        arg_best_group(coords, &self.counts, larger_is_better)
    }
}

/// Index of the best coordinate; exact-value ties go to the larger
/// training count, then to the lower group index.
pub(crate) fn arg_best_group(coords: &[f64], counts: &[usize], larger_is_better: bool) -> usize {
    let mut best = 0usize;
    for g in 1..coords.len() {
        let better = if larger_is_better {
            coords[g] > coords[best]
        } else {
            coords[g] < coords[best]
        };
        if better || (coords[g] == coords[best] && counts[g] > counts[best]) {
            best = g;
        }
    }
    best
}
