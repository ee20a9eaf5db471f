//! One fitted group model per grid point, and the integrated depth and
//! distance measures for curves: each pointwise value is folded with the
//! quadrature weights into a single scalar summary.

use super::sample::FunctionalSample;
use crate::classify::Measure;
use crate::dist::GroupModel;
use crate::matrix::DataMatrix;
use crate::parallel::map_indexed;
use crate::rng::{child_seed, stream_rng};
use crate::{Error, Result};

/// A group of curves fitted pointwise: T group models sharing the grid
/// and quadrature weights of the sample they came from.
#[derive(Debug)]
pub struct PointwiseGroupModels {
    models: Vec<GroupModel>,
    grid: Vec<f64>,
    weights: Vec<f64>,
    span: f64,
    dim: usize,
    n_curves: usize,
}

impl PointwiseGroupModels {
    /// Fits one group model per grid point (in parallel). Per-point
    /// direction seeds are derived from the grid *value*, not its index,
    /// so refitting on a sub-grid reuses bit-identical pointwise models.
    pub fn fit(sample: &FunctionalSample, seed: u64) -> Result<Self> {
        let models = map_indexed(sample.n_points(), |t| {
            let mut r = stream_rng(seed, sample.grid()[t].to_bits());
            GroupModel::fit(sample.cross_section(t), child_seed(&mut r))
                .map_err(|e| at_grid_point(sample.grid(), t, e))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            models,
            grid: sample.grid().to_vec(),
            weights: sample.weights().to_vec(),
            span: sample.span(),
            dim: sample.dim(),
            n_curves: sample.n_curves(),
        })
    }

    /// Weighted sum over the grid of the pointwise measure of `curve`
    /// against this group.
    pub fn measure(&self, curve: &DataMatrix, measure: Measure) -> Result<f64> {
        self.check_curve(curve)?;
        let mut acc = 0.0;
        for (t, model) in self.models.iter().enumerate() {
            let x = curve.row(t);
            let value = match measure {
                Measure::Hd => model.hd(x),
                Measure::Pd => model.pd(x),
                Measure::Spd => model.spd(x),
                Measure::Bd => model.bagdistance(x),
                Measure::Sdo => model.sdo(x),
                Measure::Ao => model.ao(x),
            }
            .map_err(|e| at_grid_point(&self.grid, t, e))?;
            acc += self.weights[t] * value;
        }
        Ok(acc)
    }

    /// Integrated depth of `curve` for a pointwise depth measure.
    pub fn mfd(&self, curve: &DataMatrix, depth: Measure) -> Result<f64> {
        if !depth.is_depth() {
            return Err(Error::InvalidArgument(format!(
                "'{depth}' is a distance, not a depth"
            )));
        }
        self.measure(curve, depth)
    }

    /// Integrated bag distance.
    pub fn fbd(&self, curve: &DataMatrix) -> Result<f64> {
        self.measure(curve, Measure::Bd)
    }

    /// Integrated directional outlyingness.
    pub fn fsdo(&self, curve: &DataMatrix) -> Result<f64> {
        self.measure(curve, Measure::Sdo)
    }

    /// Integrated skew-adjusted outlyingness.
    pub fn fao(&self, curve: &DataMatrix) -> Result<f64> {
        self.measure(curve, Measure::Ao)
    }

    /// The curve of pointwise deepest points; its integrated depth is at
    /// least that of every training curve.
    pub fn median_curve(&self) -> Result<DataMatrix> {
        let rows: Vec<Vec<f64>> = self.models.iter().map(|m| m.center().to_vec()).collect();
        DataMatrix::from_rows(&rows)
    }

    pub fn models(&self) -> &[GroupModel] {
        &self.models
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_curves(&self) -> usize {
        self.n_curves
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

fn at_grid_point(grid: &[f64], index: usize, source: Error) -> Error {
    Error::AtGridPoint {
        index,
        t: grid[index],
        source: Box::new(source),
    }
}
