//! Dense row-major data matrix (n observations by p coordinates).

use crate::{Error, Result};

/// An n x p data matrix stored row-major. Every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl DataMatrix {
    /// Builds a matrix from a flat row-major buffer.
    pub fn new(data: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptySample);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {bad}")));
        }
        Ok(Self { data, rows, cols })
    }

    /// Builds a matrix from a slice of equal-length rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        let cols = rows[0].len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(data, rows.len(), cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Stacks the rows of `self` and `other` (same width).
    pub fn vstack(&self, other: &DataMatrix) -> Result<DataMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DataMatrix::new(data, self.rows + other.rows, self.cols)
    }

    /// Keeps the rows whose indices are listed (in the given order).
    pub fn select_rows(&self, idx: &[usize]) -> Result<DataMatrix> {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        DataMatrix::new(data, idx.len(), self.cols)
    }

    /// Applies x -> A x + b to every row (A is p x p row-major).
    pub fn affine_map(&self, a: &[f64], b: &[f64]) -> Result<DataMatrix> {
        let p = self.cols;
        if a.len() != p * p || b.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p * p,
                found: a.len(),
            });
        }
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.rows_iter() {
            for i in 0..p {
                let mut acc = b[i];
                for j in 0..p {
                    acc += a[i * p + j] * row[j];
                }
                data.push(acc);
            }
        }
        DataMatrix::new(data, self.rows, self.cols)
    }
}

/// Dot product of two equal-length vectors.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Componentwise a - b.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Euclidean distance between two points.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(DataMatrix::new(vec![1.0, f64::NAN], 1, 2).is_err());
        assert!(DataMatrix::new(vec![1.0, f64::INFINITY], 2, 1).is_err());
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(DataMatrix::from_rows(&[]).is_err());
        assert!(DataMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(DataMatrix::new(vec![], 0, 3).is_err());
    }

    #[test]
    fn row_access() {
        let m = DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.row(1), &[3.0, 4.0]);
        assert_eq!(m.column(0), vec![1.0, 3.0]);
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.ncols(), 2);
    }

    #[test]
    fn affine_map_applies_rowwise() {
        let m = DataMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        // A = [[0, -1], [1, 0]] (rotation), b = (1, 1)
        let out = m.affine_map(&[0.0, -1.0, 1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(out.row(0), &[1.0, 2.0]);
        assert_eq!(out.row(1), &[0.0, 1.0]);
    }
}
