//! A fitted classifier bundling the rule, the measure, the fitted
//! groups, and (for kNN rules) the reference coordinates and chosen k,
//! with a versioned JSON representation.
//!
//! The JSON document (version "1") stores the raw group samples and the
//! fitting seed; loading refits the per-group models deterministically,
//! so a round-tripped model predicts identically to the original.

use super::knn::{default_k_grid, knn_fit, knn_predict};
use super::measure::{Measure, Method};
use super::training::{GroupedData, TrainingSet};
use crate::dist::{mad, median};
use crate::matrix::DataMatrix;
use crate::parallel::map_indexed;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Options for [`ClassifierModel::fit_opts`].
#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Fixed neighbour count; when None, k is cross-validated.
    pub k: Option<usize>,
    /// Cross-validation grid; defaults to 1..=min(30, N-1).
    pub k_grid: Option<Vec<usize>>,
    /// Standardize each kNN coordinate by training median/MAD before
    /// measuring distances (off by default; coordinates with zero MAD
    /// are left unscaled).
    pub rescale: bool,
}

/// A fitted classification rule ready to label new points.
#[derive(Debug)]
pub struct ClassifierModel {
    method: Method,
    measure: Option<Measure>,
    training: Option<TrainingSet>,
    names: Vec<String>,
    counts: Vec<usize>,
    reference: Vec<Vec<f64>>,
    reference_labels: Vec<usize>,
    k: Option<usize>,
    loo_errors: Option<usize>,
    seed: u64,
    rescale: Option<RescaleParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RescaleParams {
    center: Vec<f64>,
    spread: Vec<f64>,
}

impl RescaleParams {
    pub(crate) fn fit(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points[0].len();
        let mut center = Vec::with_capacity(dim);
        let mut spread = Vec::with_capacity(dim);
        for j in 0..dim {
            let col: Vec<f64> = points.iter().map(|r| r[j]).collect();
            center.push(median(&col)?);
            let m = mad(&col)?;
            // A constant coordinate carries no distance information;
            // leave it unscaled instead of dividing by zero.
            spread.push(if m > 0.0 { m } else { 1.0 });
        }
        Ok(Self { center, spread })
    }

    pub(crate) fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.center.iter().zip(&self.spread))
            .map(|(v, (c, s))| (v - c) / s)
            .collect()
    }
}

impl ClassifierModel {
    /// Fits `method` (with `measure` where applicable) on `data`.
    /// `k` fixes the neighbour count, otherwise `k_grid` (or the
    /// default grid) is cross-validated.
    pub fn fit(
        data: &GroupedData,
        method: Method,
        measure: Option<Measure>,
        k: Option<usize>,
        k_grid: Option<&[usize]>,
        seed: u64,
    ) -> Result<Self> {
        Self::fit_opts(
            data,
            method,
            measure,
            &FitOptions {
                k,
                k_grid: k_grid.map(|g| g.to_vec()),
                rescale: false,
            },
            seed,
        )
    }

    /// [`Self::fit`] with all options.
    pub fn fit_opts(
        data: &GroupedData,
        method: Method,
        measure: Option<Measure>,
        opts: &FitOptions,
        seed: u64,
    ) -> Result<Self> {
        method.check_measure(measure)?;
        let (rows, row_groups) = data.to_rows();

        let (training, reference) = match method {
            Method::PlainKnn => (None, rows),
            _ => {
                let ts = data.fit_training(seed)?;
                let reference = if method.uses_knn() {
                    let m = DataMatrix::from_rows(&rows)?;
                    ts.transform_batch(&m, measure.unwrap())?
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
                    let grid = opts
                        .k_grid
                        .clone()
                        .unwrap_or_else(|| default_k_grid(reference.len()));
                    let choice = knn_fit(&reference, &reference_labels, &grid)?;
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
            counts: (0..data.n_groups()).map(|g| data.group(g).nrows()).collect(),
            reference,
            reference_labels,
            k,
            loo_errors,
            seed,
            rescale,
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

    pub fn chosen_k(&self) -> Option<usize> {
        self.k
    }

    pub fn loo_errors(&self) -> Option<usize> {
        self.loo_errors
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn training(&self) -> Option<&TrainingSet> {
        self.training.as_ref()
    }

    pub fn dim(&self) -> usize {
        match &self.training {
            Some(ts) => ts.dim(),
            None => self.reference[0].len(),
        }
    }

    /// The G transform coordinates of `x` (None for plain kNN, which
    /// has no transform).
    pub fn transform_coords(&self, x: &[f64]) -> Result<Option<Vec<f64>>> {
        match (&self.training, self.measure) {
            (Some(ts), Some(m)) => Ok(Some(ts.transform(x, m)?.coords)),
            _ => Ok(None),
        }
    }

    /// Predicts the group index of one point.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        match self.method {
            Method::MaxDepth => self
                .training
                .as_ref()
                .unwrap()
                .classify_maxdepth(x, self.measure.unwrap()),
            Method::MinDist => self
                .training
                .as_ref()
                .unwrap()
                .classify_mindist(x, self.measure.unwrap()),
            Method::DepthDepthKnn | Method::DistSpace => {
                let t = self.transform_coords(x)?.unwrap();
                let t = match &self.rescale {
                    Some(p) => p.apply(&t),
                    None => t,
                };
                knn_predict(&self.reference, &self.reference_labels, &t, self.k.unwrap())
            }
            Method::PlainKnn => {
                let q = match &self.rescale {
                    Some(p) => p.apply(x),
                    None => x.to_vec(),
                };
                knn_predict(&self.reference, &self.reference_labels, &q, self.k.unwrap())
            }
        }
    }

    /// Predicts every row of `rows` (in parallel).
    pub fn predict_batch(&self, rows: &DataMatrix) -> Result<Vec<usize>> {
        map_indexed(rows.nrows(), |i| self.predict(rows.row(i)))
            .into_iter()
            .collect()
    }

    /// Serializes to the version-"1" JSON document.
    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDoc {
            version: "1".into(),
            method: self.method,
            measure: self.measure,
            seed: self.seed,
            k: self.k,
            loo_errors: self.loo_errors,
            labels: self.names.clone(),
            counts: self.counts.clone(),
            groups: self.training.as_ref().map(|ts| {
                (0..ts.n_groups())
                    .map(|g| GroupDoc {
                        label: ts.names()[g].clone(),
                        rows: ts
                            .group(g)
                            .sample()
                            .rows_iter()
                            .map(|r| r.to_vec())
                            .collect(),
                    })
                    .collect()
            }),
            reference: self
                .reference
                .iter()
                .zip(&self.reference_labels)
                .map(|(coords, &group)| ReferenceDoc {
                    coords: coords.clone(),
                    group,
                })
                .collect(),
            rescale: self.rescale.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Loads a version-"1" JSON document, refitting the group models
    /// from the stored samples and seed.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        if doc.version != "1" {
            return Err(Error::InvalidArgument(format!(
                "unsupported model version '{}'",
                doc.version
            )));
        }
        doc.method.check_measure(doc.measure)?;
        let training = match &doc.groups {
            Some(groups) => {
                let pairs = groups
                    .iter()
                    .map(|g| Ok((g.label.clone(), DataMatrix::from_rows(&g.rows)?)))
                    .collect::<Result<Vec<_>>>()?;
                Some(GroupedData::new(pairs)?.fit_training(doc.seed)?)
            }
            None => None,
        };
        if doc.method.uses_knn() {
            if doc.reference.is_empty() {
                return Err(Error::InvalidArgument(
                    "kNN model without reference coordinates".into(),
                ));
            }
            let k = doc
                .k
                .ok_or_else(|| Error::InvalidArgument("kNN model without k".into()))?;
            if k == 0 || k >= doc.reference.len() {
                return Err(Error::InvalidArgument(format!(
                    "stored k = {k} outside 1..={}",
                    doc.reference.len() - 1
                )));
            }
        }
        if doc.method != Method::PlainKnn && training.is_none() {
            return Err(Error::InvalidArgument(
                "model lacks the group samples its method needs".into(),
            ));
        }
        let (reference, reference_labels) = doc
            .reference
            .into_iter()
            .map(|r| (r.coords, r.group))
            .unzip();
        Ok(Self {
            method: doc.method,
            measure: doc.measure,
            training,
            names: doc.labels,
            counts: doc.counts,
            reference,
            reference_labels,
            k: doc.k,
            loo_errors: doc.loo_errors,
            seed: doc.seed,
            rescale: doc.rescale,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    version: String,
    method: Method,
    measure: Option<Measure>,
    seed: u64,
    k: Option<usize>,
    loo_errors: Option<usize>,
    labels: Vec<String>,
    counts: Vec<usize>,
    groups: Option<Vec<GroupDoc>>,
    reference: Vec<ReferenceDoc>,
    rescale: Option<RescaleParams>,
}

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    label: String,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ReferenceDoc {
    coords: Vec<f64>,
    group: usize,
}
