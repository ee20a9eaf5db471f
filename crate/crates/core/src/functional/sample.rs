//! Discretized curves on a shared time grid with quadrature weights,
//! the weighted L2 curve distance, and grid manipulation: restriction,
//! linear resampling, and derivative/integral augmentation.

use crate::matrix::DataMatrix;
use crate::{Error, Result};

/// Absolute tolerance for checking that supplied weights sum to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// One appended coordinate per op, evaluated in sequence, so a later op
/// may reference a coordinate appended by an earlier one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentOp {
    /// d/dt of the given coordinate: central differences at interior
    /// grid points, one-sided differences at the two ends.
    Derivative(usize),
    /// Running trapezoid integral of the given coordinate, zero at the
    /// first grid point.
    CumulativeIntegral(usize),
}

/// n curves observed at the same T time points with p coordinates each,
/// plus nonnegative quadrature weights summing to one (trapezoid by
/// default). With T = 1 the span counts as 1 and everything reduces to
/// the multivariate case.
#[derive(Debug, Clone)]
pub struct FunctionalSample {
    grid: Vec<f64>,
    curves: Vec<DataMatrix>,
    weights: Vec<f64>,
}

impl FunctionalSample {
    /// Builds a sample with trapezoid weights on `grid`.
    pub fn new(grid: Vec<f64>, curves: Vec<DataMatrix>) -> Result<Self> {
        let weights = Self::trapezoid_weights(&grid)?;
        Self::with_weights(grid, curves, weights)
    }

    /// Builds a sample with caller-supplied quadrature weights.
    pub fn with_weights(
        grid: Vec<f64>,
        curves: Vec<DataMatrix>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        check_grid(&grid)?;
        if curves.is_empty() {
            return Err(Error::EmptySample);
        }
        let t_len = grid.len();
        let dim = curves[0].ncols();
        for c in &curves {
            if c.nrows() != t_len {
                return Err(Error::DimensionMismatch {
                    expected: t_len,
                    found: c.nrows(),
                });
            }
            if c.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.ncols(),
                });
            }
        }
        if weights.len() != t_len {
            return Err(Error::DimensionMismatch {
                expected: t_len,
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "quadrature weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "quadrature weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { grid, curves, weights })
    }

    /// Normalized trapezoid weights: each point receives half the length
    /// of its adjacent grid cells, divided by the total span. A single
    /// point gets the whole unit weight.
    pub fn trapezoid_weights(grid: &[f64]) -> Result<Vec<f64>> {
        check_grid(grid)?;
        let t_len = grid.len();
        if t_len == 1 {
            return Ok(vec![1.0]);
        }
        let mut raw = vec![0.0; t_len];
        for i in 0..t_len - 1 {
            let half = (grid[i + 1] - grid[i]) / 2.0;
            raw[i] += half;
            raw[i + 1] += half;
        }
        let sum: f64 = raw.iter().sum();
        Ok(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn n_curves(&self) -> usize {
        self.curves.len()
    }

    /// Number of grid points T.
    pub fn n_points(&self) -> usize {
        self.grid.len()
    }

    /// Number of coordinates p.
    pub fn dim(&self) -> usize {
        self.curves[0].ncols()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Length of the observation window; 1 when there is only one point.
    pub fn span(&self) -> f64 {
        if self.grid.len() == 1 {
            1.0
        } else {
            self.grid[self.grid.len() - 1] - self.grid[0]
        }
    }

    pub fn curve(&self, i: usize) -> &DataMatrix {
        &self.curves[i]
    }

    pub fn curves(&self) -> &[DataMatrix] {
        &self.curves
    }

    /// The n x p matrix of all curve values at grid point `t`.
    pub fn cross_section(&self, t: usize) -> DataMatrix {
        let rows: Vec<Vec<f64>> = self.curves.iter().map(|c| c.row(t).to_vec()).collect();
        DataMatrix::from_rows(&rows).expect("cross-section of a valid sample")
    }

    /// Weighted L2 distance between two curves on this sample's grid.
    pub fn l2_distance(&self, a: &DataMatrix, b: &DataMatrix) -> Result<f64> {
        l2_curve_distance(&self.weights, self.span(), a, b)
    }

    /// Keeps the listed curves (in the given order) on the same grid.
    pub fn select_curves(&self, idx: &[usize]) -> Result<FunctionalSample> {
        if idx.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.curves.len()) {
            return Err(Error::InvalidArgument(format!(
                "curve index {bad} out of range 0..{}",
                self.curves.len()
            )));
        }
        let curves: Vec<DataMatrix> = idx.iter().map(|&i| self.curves[i].clone()).collect();
        Self::with_weights(self.grid.clone(), curves, self.weights.clone())
    }

    /// Keeps only the listed grid points (strictly increasing indices)
    /// and renormalizes the kept weights by their total mass, so the
    /// restricted weights again sum to one.
    pub fn restrict_grid(&self, idx: &[usize]) -> Result<FunctionalSample> {
        if idx.is_empty() {
            return Err(Error::EmptySample);
        }
        if idx.windows(2).any(|w| w[1] <= w[0]) || idx[idx.len() - 1] >= self.grid.len() {
            return Err(Error::InvalidArgument(
                "grid indices must be strictly increasing and in range".into(),
            ));
        }
        let mass: f64 = idx.iter().map(|&t| self.weights[t]).sum();
        if mass <= 0.0 {
            return Err(Error::ZeroScale("kept grid points carry no weight".into()));
        }
        let grid: Vec<f64> = idx.iter().map(|&t| self.grid[t]).collect();
        let weights: Vec<f64> = idx.iter().map(|&t| self.weights[t] / mass).collect();
        let curves = self
            .curves
            .iter()
            .map(|c| c.select_rows(idx))
            .collect::<Result<Vec<_>>>()?;
        Self::with_weights(grid, curves, weights)
    }

    /// Linearly interpolates every curve onto `new_grid`, which must be
    /// strictly increasing and stay inside the observed span. Values at
    /// original knots are copied bit-for-bit. The result carries fresh
    /// trapezoid weights.
    pub fn resample_linear(&self, new_grid: &[f64]) -> Result<FunctionalSample> {
        check_grid(new_grid)?;
        let (lo, hi) = (self.grid[0], self.grid[self.grid.len() - 1]);
        if new_grid[0] < lo || new_grid[new_grid.len() - 1] > hi {
            return Err(Error::InvalidArgument(format!(
                "target grid [{}, {}] leaves the observed span [{lo}, {hi}]",
                new_grid[0],
                new_grid[new_grid.len() - 1]
            )));
        }
        let p = self.dim();
        let curves = self
            .curves
            .iter()
            .map(|c| {
                let mut rows = Vec::with_capacity(new_grid.len());
                for &t in new_grid {
                    // First knot >= t; exact hits skip interpolation.
                    let k = self.grid.partition_point(|&g| g < t);
                    let row: Vec<f64> = if self.grid[k] == t {
                        c.row(k).to_vec()
                    } else {
                        let (g0, g1) = (self.grid[k - 1], self.grid[k]);
                        let u = (t - g0) / (g1 - g0);
                        (0..p)
                            .map(|j| {
                                let (a, b) = (c.row(k - 1)[j], c.row(k)[j]);
                                a + u * (b - a)
                            })
                            .collect()
                    };
                    rows.push(row);
                }
                DataMatrix::from_rows(&rows)
            })
            .collect::<Result<Vec<_>>>()?;
        FunctionalSample::new(new_grid.to_vec(), curves)
    }

    /// Appends one derived coordinate per op to every curve, keeping the
    /// grid and weights. Needs at least two grid points.
    pub fn augment(&self, ops: &[AugmentOp]) -> Result<FunctionalSample> {
        let t_len = self.grid.len();
        if t_len < 2 {
            return Err(Error::InvalidArgument(
                "derivatives and integrals need at least two grid points".into(),
            ));
        }
        let curves = self
            .curves
            .iter()
            .map(|c| {
                let mut cols: Vec<Vec<f64>> = (0..c.ncols()).map(|j| c.column(j)).collect();
                for op in ops {
                    let j = match *op {
                        AugmentOp::Derivative(j) | AugmentOp::CumulativeIntegral(j) => j,
                    };
                    if j >= cols.len() {
                        return Err(Error::InvalidArgument(format!(
                            "augmentation references coordinate {j}, but only {} exist",
                            cols.len()
                        )));
                    }
                    let new = match *op {
                        AugmentOp::Derivative(_) => derivative(&self.grid, &cols[j]),
                        AugmentOp::CumulativeIntegral(_) => {
                            cumulative_integral(&self.grid, &cols[j])
                        }
                    };
                    cols.push(new);
                }
                let rows: Vec<Vec<f64>> = (0..t_len)
                    .map(|t| cols.iter().map(|col| col[t]).collect())
                    .collect();
                DataMatrix::from_rows(&rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_weights(self.grid.clone(), curves, self.weights.clone())
    }
}

/// Weighted L2 distance between two curves sharing a grid:
/// sqrt(span * sum_t w_t * ||a(t) - b(t)||^2). With one grid point and
/// span 1 this is the plain Euclidean distance.
pub fn l2_curve_distance(
    weights: &[f64],
    span: f64,
    a: &DataMatrix,
    b: &DataMatrix,
) -> Result<f64> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows() * a.ncols(),
            found: b.nrows() * b.ncols(),
        });
    }
    if weights.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: a.nrows(),
        });
    }
    if !span.is_finite() || span <= 0.0 {
        return Err(Error::InvalidArgument(format!("bad span {span}")));
    }
    let mut acc = 0.0;
    for (t, &w) in weights.iter().enumerate() {
        let (ra, rb) = (a.row(t), b.row(t));
        let mut s = 0.0;
        for j in 0..a.ncols() {
            let d = ra[j] - rb[j];
            s += d * d;
        }
        acc += w * s;
    }
    Ok((acc * span).sqrt())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(bad) = grid.iter().find(|g| !g.is_finite()) {
        return Err(Error::NonFinite(format!("grid point {bad}")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Central differences inside, one-sided at the two ends.
fn derivative(grid: &[f64], v: &[f64]) -> Vec<f64> {
    let t = grid.len();
    let mut out = Vec::with_capacity(t);
    out.push((v[1] - v[0]) / (grid[1] - grid[0]));
    for i in 1..t - 1 {
        out.push((v[i + 1] - v[i - 1]) / (grid[i + 1] - grid[i - 1]));
    }
    out.push((v[t - 1] - v[t - 2]) / (grid[t - 1] - grid[t - 2]));
    out
}

/// Running trapezoid integral, zero at the first grid point.
fn cumulative_integral(grid: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    out.push(0.0);
    for i in 1..grid.len() {
        let step = (grid[i] - grid[i - 1]) * (v[i - 1] + v[i]) / 2.0;
        out.push(out[i - 1] + step);
    }
    out
}
