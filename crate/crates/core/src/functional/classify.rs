//! Labelled curve bundles and the classification rules for curves: the
//! G-vector transform built from integrated measures feeds the same
//! rules as the multivariate layer, and raw-curve kNN works under the
//! weighted L2 metric via an exact isometric embedding.

use super::group::PointwiseGroupModels;
use super::sample::FunctionalSample;
use crate::classify::{
    arg_best_group, default_k_grid, knn_fit, knn_predict, FitOptions, Measure, Method,
    RescaleParams, TransformedPoint,
};
use crate::matrix::DataMatrix;
use crate::parallel::{map_indexed, map_slice};
use crate::rng::{child_seed, stream_rng};
use crate::{Error, Result};

/// Labelled bundles of curves sharing one grid, ordered by label
/// (lexicographically), which fixes every group index downstream.
#[derive(Debug, Clone)]
pub struct FunctionalGroupedData {
    names: Vec<String>,
    groups: Vec<FunctionalSample>,
}

impl FunctionalGroupedData {
    /// Builds grouped curves from (label, bundle) pairs. Labels must be
    /// unique; bundles must share the grid, weights, and dimension. The
    /// pairs are reordered by label.
    pub fn new(pairs: Vec<(String, FunctionalSample)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("duplicate group label".into()));
        }
        let first = &pairs[0].1;
        for (_, s) in &pairs {
            if s.grid() != first.grid() || s.weights() != first.weights() || s.dim() != first.dim()
            {
                return Err(Error::InvalidArgument(
                    "all groups must share the grid, weights, and dimension".into(),
                ));
            }
        }
        let (names, groups) = pairs.into_iter().unzip();
        Ok(Self { names, groups })
    }

    /// Splits one bundle into groups by per-curve label strings.
    pub fn from_labeled(sample: &FunctionalSample, labels: &[String]) -> Result<Self> {
        if labels.len() != sample.n_curves() {
            return Err(Error::InvalidArgument(format!(
                "{} curves but {} labels",
                sample.n_curves(),
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
                Ok((name, sample.select_curves(&idx)?))
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

    pub fn group(&self, g: usize) -> &FunctionalSample {
        &self.groups[g]
    }

    pub fn grid(&self) -> &[f64] {
        self.groups[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.groups[0].dim()
    }

    pub fn total_n(&self) -> usize {
        self.groups.iter().map(|s| s.n_curves()).sum()
    }

    /// Fits one pointwise model set per group, with per-group seeds
    /// derived from `seed`.
    pub fn fit_training(&self, seed: u64) -> Result<FunctionalTrainingSet> {
        FunctionalTrainingSet::fit(self, seed)
    }
}

/// Fitted reference groups of curves with labels and training counts.
#[derive(Debug)]
pub struct FunctionalTrainingSet {
    groups: Vec<PointwiseGroupModels>,
    names: Vec<String>,
    counts: Vec<usize>,
    seed: u64,
}

impl FunctionalTrainingSet {
    /// Fits every group of `data`. Needs at least two groups and
    /// n_g >= p + 1 curves in each (every cross-section must support a
    /// group model).
    pub fn fit(data: &FunctionalGroupedData, seed: u64) -> Result<Self> {
        if data.n_groups() < 2 {
            return Err(Error::InvalidArgument(
                "classification needs at least two groups".into(),
            ));
        }
        let p = data.dim();
        for g in 0..data.n_groups() {
            if data.group(g).n_curves() < p + 1 {
                return Err(Error::InvalidArgument(format!(
                    "group '{}' has {} curves; need at least p + 1 = {}",
                    data.name(g),
                    data.group(g).n_curves(),
                    p + 1
                )));
            }
        }
        let mut root = stream_rng(seed, 0);
        let group_seeds: Vec<u64> = (0..data.n_groups()).map(|_| child_seed(&mut root)).collect();
        let groups = (0..data.n_groups())
            .map(|g| PointwiseGroupModels::fit(data.group(g), group_seeds[g]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            groups,
            names: data.names().to_vec(),
            counts: (0..data.n_groups()).map(|g| data.group(g).n_curves()).collect(),
            seed,
        })
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, g: usize) -> &PointwiseGroupModels {
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
        self.groups[0].dim()
    }

    pub fn grid(&self) -> &[f64] {
        self.groups[0].grid()
    }

    /// Training priors n_g / N.
    pub fn priors(&self) -> Vec<f64> {
        let n: usize = self.counts.iter().sum();
        self.counts.iter().map(|&c| c as f64 / n as f64).collect()
    }

    /// The integrated measure of `curve` against one group.
    pub fn measure_value(&self, curve: &DataMatrix, measure: Measure, g: usize) -> Result<f64> {
        self.groups[g].measure(curve, measure)
    }

    /// Maps a curve to the G-vector of integrated measure values.
    pub fn transform(&self, curve: &DataMatrix, measure: Measure) -> Result<TransformedPoint> {
        let coords = (0..self.groups.len())
            .map(|g| self.measure_value(curve, measure, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(TransformedPoint { coords, measure })
    }

    /// Transforms every curve (in parallel).
    pub fn transform_batch(
        &self,
        curves: &[DataMatrix],
        measure: Measure,
    ) -> Result<Vec<Vec<f64>>> {
        map_indexed(curves.len(), |i| Ok(self.transform(&curves[i], measure)?.coords))
            .into_iter()
            .collect()
    }

    /// Largest integrated depth wins; exact ties go to the larger
    /// training count, then the lower group index.
    pub fn classify_maxdepth(&self, curve: &DataMatrix, measure: Measure) -> Result<usize> {
        if !measure.is_depth() {
            return Err(Error::InvalidArgument(format!(
                "'{measure}' is a distance, not a depth"
            )));
        }
        let t = self.transform(curve, measure)?;
        Ok(arg_best_group(&t.coords, &self.counts, true))
    }

    /// Smallest integrated distance wins, same tie handling.
    pub fn classify_mindist(&self, curve: &DataMatrix, measure: Measure) -> Result<usize> {
        if measure.is_depth() {
            return Err(Error::InvalidArgument(format!(
                "'{measure}' is a depth, not a distance"
            )));
        }
        let t = self.transform(curve, measure)?;
        Ok(arg_best_group(&t.coords, &self.counts, false))
    }
}

/// A fitted curve classifier. For kNN over raw curves the weighted L2
/// metric is realized by scaling the values at grid point t with
/// sqrt(w_t * span) and taking Euclidean distances in the flattened
/// space, which reproduces the curve distance up to rounding.
#[derive(Debug)]
pub struct FunctionalClassifier {
    method: Method,
    measure: Option<Measure>,
    training: Option<FunctionalTrainingSet>,
    names: Vec<String>,
    counts: Vec<usize>,
    reference: Vec<Vec<f64>>,
    reference_labels: Vec<usize>,
    k: Option<usize>,
    loo_errors: Option<usize>,
    seed: u64,
    rescale: Option<RescaleParams>,
    grid: Vec<f64>,
    dim: usize,
    embed_coef: Vec<f64>,
}

impl FunctionalClassifier {
    /// Fits `method` (with `measure` where applicable) on grouped
    /// curves. Reference curves are ordered group by group, keeping each
    /// bundle's input order, which fixes the neighbour tie rule.
    pub fn fit(
        data: &FunctionalGroupedData,
        method: Method,
        measure: Option<Measure>,
        opts: &FitOptions,
        seed: u64,
    ) -> Result<Self> {
        method.check_measure(measure)?;
        if method == Method::PlainKnn && opts.rescale {
            return Err(Error::InvalidArgument(
                "rescaling raw curve coordinates would change the L2 metric; \
                 rescale applies to transformed coordinates only"
                    .into(),
            ));
        }

        let grid = data.grid().to_vec();
        let dim = data.dim();
        let sample0 = data.group(0);
        let span = sample0.span();
        let embed_coef: Vec<f64> =
            sample0.weights().iter().map(|&w| (w * span).sqrt()).collect();

        let mut all_curves: Vec<&DataMatrix> = Vec::with_capacity(data.total_n());
        let mut row_groups: Vec<usize> = Vec::with_capacity(data.total_n());
        for g in 0..data.n_groups() {
            for c in data.group(g).curves() {
                all_curves.push(c);
                row_groups.push(g);
            }
        }

        let (training, reference) = match method {
            Method::PlainKnn => {
                let embedded = all_curves
                    .iter()
                    .map(|c| embed(c, &embed_coef))
                    .collect::<Vec<_>>();
                (None, embedded)
            }
            _ => {
                let ts = data.fit_training(seed)?;
                let reference = if method.uses_knn() {
                    let curves: Vec<DataMatrix> =
                        all_curves.iter().map(|c| (*c).clone()).collect();
                    ts.transform_batch(&curves, measure.unwrap())?
                } else {
                    Vec::new()
                };
                (Some(ts), reference)
            }
        };

        let (reference, reference_labels, rescale) = if method.uses_knn() {
            let params = if opts.rescale {
                Some(RescaleParams::fit(&reference)?)
            } else {
                None
            };
            let reference = match &params {
                Some(p) => reference.iter().map(|r| p.apply(r)).collect(),
                None => reference,
            };
            (reference, row_groups, params)
        } else {
            (Vec::new(), Vec::new(), None)
        };

        let (k, loo_errors) = if method.uses_knn() {
            match opts.k {
                Some(k) => {
                    if k == 0 || k >= reference.len() {
                        return Err(Error::InvalidArgument(format!(
                            "k = {k} outside 1..={}",
                            reference.len().saturating_sub(1)
                        )));
                    }
                    (Some(k), None)
                }
                None => {
                    let grid_k = opts
                        .k_grid
                        .clone()
                        .unwrap_or_else(|| default_k_grid(reference.len()));
                    let choice = knn_fit(&reference, &reference_labels, &grid_k)?;
                    (Some(choice.k), Some(choice.loo_errors))
                }
            }
        } else {
            if opts.k.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "method '{method}' does not use k"
                )));
            }
            (None, None)
        };

        Ok(Self {
            method,
            measure,
            training,
            names: data.names().to_vec(),
            counts: (0..data.n_groups()).map(|g| data.group(g).n_curves()).collect(),
            reference,
            reference_labels,
            k,
            loo_errors,
            seed,
            rescale,
            grid,
            dim,
            embed_coef,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn measure(&self) -> Option<Measure> {
        self.measure
    }

    pub fn labels(&self) -> &[String] {
        &self.names
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn chosen_k(&self) -> Option<usize> {
        self.k
    }

    pub fn loo_errors(&self) -> Option<usize> {
        self.loo_errors
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn training(&self) -> Option<&FunctionalTrainingSet> {
        self.training.as_ref()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The G transform coordinates of a curve (None for raw-curve kNN,
    /// which has no transform).
    pub fn transform_coords(&self, curve: &DataMatrix) -> Result<Option<Vec<f64>>> {
        match (&self.training, self.measure) {
            (Some(ts), Some(m)) => Ok(Some(ts.transform(curve, m)?.coords)),
            _ => Ok(None),
        }
    }

    /// Predicts the group index of one curve.
    pub fn predict(&self, curve: &DataMatrix) -> Result<usize> {
        match self.method {
            Method::MaxDepth => self
                .training
                .as_ref()
                .unwrap()
                .classify_maxdepth(curve, self.measure.unwrap()),
            Method::MinDist => self
                .training
                .as_ref()
                .unwrap()
                .classify_mindist(curve, self.measure.unwrap()),
            Method::DepthDepthKnn | Method::DistSpace => {
                let t = self.transform_coords(curve)?.unwrap();
                let t = match &self.rescale {
                    Some(p) => p.apply(&t),
                    None => t,
                };
                knn_predict(&self.reference, &self.reference_labels, &t, self.k.unwrap())
            }
            Method::PlainKnn => {
                self.check_curve(curve)?;
                let q = embed(curve, &self.embed_coef);
                knn_predict(&self.reference, &self.reference_labels, &q, self.k.unwrap())
            }
        }
    }

    /// Predicts every curve (in parallel).
    pub fn predict_batch(&self, curves: &[DataMatrix]) -> Result<Vec<usize>> {
        map_slice(curves, |c| self.predict(c)).into_iter().collect()
    }

    fn check_curve(&self, curve: &DataMatrix) -> Result<()> {
        if curve.nrows() != self.grid.len() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.len(),
                found: curve.nrows(),
            });
        }
        if curve.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: curve.ncols(),
            });
        }
        Ok(())
    }
}

/// Flattens a curve with per-grid-point scaling so that Euclidean
/// distance in the image equals the weighted L2 curve distance.
fn embed(curve: &DataMatrix, coef: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(curve.nrows() * curve.ncols());
    for (t, &c) in coef.iter().enumerate() {
        for v in curve.row(t) {
            out.push(v * c);
        }
    }
    out
}
