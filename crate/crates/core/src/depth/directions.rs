//! Projection directions for the approximate depth and outlyingness
//! measures. Directions are unit normals of affine hyperplanes through
//! randomly drawn sample points; generated with a seed they are
//! bit-for-bit reproducible, and regenerating them after an affine map of
//! the data yields the correspondingly mapped directions (same index
//! draws), which is what makes the projection measures affine invariant.

use nalgebra::DMatrix;
use rand::Rng;

use crate::matrix::DataMatrix;
use crate::rng::stream_rng;
use crate::{Error, Result};

/// Default number of directions per dimension.
pub const DIRECTIONS_PER_DIM: usize = 250;

/// A set of unit projection directions in dimension p.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    flat: Vec<f64>,
    dim: usize,
    seed: Option<u64>,
}

impl DirectionSet {
    /// Draws `count` directions as unit normals of hyperplanes through p
    /// randomly chosen distinct sample points. Degenerate draws (affinely
    /// dependent points) are rejected and redrawn, up to 50 * count
    /// attempts. For p = 1 the set is {+1, -1}.
    pub fn random_hyperplanes(sample: &DataMatrix, count: usize, seed: u64) -> Result<Self> {
        let p = sample.ncols();
        let n = sample.nrows();
        if count == 0 {
            return Err(Error::InvalidArgument("direction count must be positive".into()));
        }
        if p == 1 {
            return Ok(Self {
                flat: vec![1.0, -1.0],
                dim: 1,
                seed: Some(seed),
            });
        }
        if n < p {
            return Err(Error::DegenerateSample(format!(
                "need at least p = {p} points to span a hyperplane, have {n}"
            )));
        }
        let mut rng = stream_rng(seed, 0);
        let mut flat = Vec::with_capacity(count * p);
        let max_attempts = 50 * count;
        let mut attempts = 0usize;
        let mut idx = vec![0usize; p];
        while flat.len() < count * p {
            if attempts >= max_attempts {
                return Err(Error::DegenerateDirections(max_attempts));
            }
            attempts += 1;
            draw_distinct(&mut rng, n, &mut idx);
            let base = sample.row(idx[0]);
            let mut diffs = Vec::with_capacity((p - 1) * p);
            for &i in &idx[1..] {
                let row = sample.row(i);
                for j in 0..p {
                    diffs.push(row[j] - base[j]);
                }
            }
            if let Some(v) = hyperplane_normal(&diffs, p) {
                flat.extend_from_slice(&v);
            }
        }
        Ok(Self {
            flat,
            dim: p,
            seed: Some(seed),
        })
    }

    /// The default set for a sample: 250 * p random hyperplane directions.
    pub fn for_sample(sample: &DataMatrix, seed: u64) -> Result<Self> {
        Self::random_hyperplanes(sample, DIRECTIONS_PER_DIM * sample.ncols(), seed)
    }

    /// Builds a set from explicit unit vectors (mainly for tests).
    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidArgument("empty direction set".into()));
        }
        let dim = vectors[0].len();
        let mut flat = Vec::with_capacity(vectors.len() * dim);
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let nrm = crate::matrix::norm(v);
            if !((nrm - 1.0).abs() <= 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "direction is not unit length (norm {nrm})"
                )));
            }
            flat.extend_from_slice(v);
        }
        Ok(Self {
            flat,
            dim,
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn direction(&self, i: usize) -> &[f64] {
        &self.flat[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.flat.chunks_exact(self.dim)
    }
}

/// All unit normals of hyperplanes through `x` and p-1 sample points,
/// both orientations, duplicates kept. Used as an exhaustive direction
/// set for small samples. For p = 1 this is {+1, -1}.
///
/// In the plane the set additionally carries one direction inside every
/// angular gap between consecutive normals: the closed-halfplane count
/// only changes at the normals, so its minimum over all directions is
/// attained strictly between them, and with the gap midpoints included
/// the minimum over this finite set equals the exact depth of `x`.
pub fn exact_direction_set(x: &[f64], sample: &DataMatrix) -> Result<DirectionSet> {
    let p = sample.ncols();
    let n = sample.nrows();
    if x.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: x.len(),
        });
    }
    if n < p.saturating_sub(1) {
        return Err(Error::DegenerateSample(format!(
            "need at least p - 1 = {} points, have {n}",
            p - 1
        )));
    }
    if p == 1 {
        return Ok(DirectionSet {
            flat: vec![1.0, -1.0],
            dim: 1,
            seed: None,
        });
    }
    if p == 2 {
        let mut flat = Vec::new();
        let mut angles: Vec<f64> = Vec::new();
        for row in sample.rows_iter() {
            let dx = row[0] - x[0];
            let dy = row[1] - x[1];
            let len = (dx * dx + dy * dy).sqrt();
            if len == 0.0 || !len.is_finite() {
                continue; // a point coincident with x constrains nothing
            }
            let (nx, ny) = (-dy / len, dx / len);
            flat.extend_from_slice(&[nx, ny, -nx, -ny]);
            angles.push(ny.atan2(nx));
            angles.push((-ny).atan2(-nx));
        }
        if flat.is_empty() {
            return Err(Error::DegenerateSample(
                "all candidate hyperplanes through x are degenerate".into(),
            ));
        }
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup();
        let k = angles.len();
        for i in 0..k {
            let a = angles[i];
            let b = if i + 1 < k {
                angles[i + 1]
            } else {
                angles[0] + std::f64::consts::TAU
            };
            let mid = 0.5 * (a + b);
            flat.extend_from_slice(&[mid.cos(), mid.sin()]);
        }
        return Ok(DirectionSet {
            flat,
            dim: 2,
            seed: None,
        });
    }
    let mut flat = Vec::new();
    let mut subset = vec![0usize; p - 1];
    let mut diffs = vec![0.0f64; (p - 1) * p];
    enumerate_subsets(n, p - 1, &mut subset, 0, 0, &mut |idx| {
        for (r, &i) in idx.iter().enumerate() {
            let row = sample.row(i);
            for j in 0..p {
                diffs[r * p + j] = row[j] - x[j];
            }
        }
        if let Some(v) = hyperplane_normal(&diffs, p) {
            flat.extend_from_slice(&v);
            flat.extend(v.iter().map(|c| -c));
        }
    });
    if flat.is_empty() {
        return Err(Error::DegenerateSample(
            "all candidate hyperplanes through x are degenerate".into(),
        ));
    }
    Ok(DirectionSet {
        flat,
        dim: p,
        seed: None,
    })
}

/// Unit normal of the hyperplane spanned by k = rows difference vectors
/// (row-major, k x p). None if the rows do not span a (p-1)-space.
fn hyperplane_normal(diffs: &[f64], p: usize) -> Option<Vec<f64>> {
    let k = diffs.len() / p;
    if p == 2 {
        // Normal of a line segment.
        let dx = diffs[0];
        let dy = diffs[1];
        let len = (dx * dx + dy * dy).sqrt();
        if len == 0.0 || !len.is_finite() {
            return None;
        }
        return Some(vec![-dy / len, dx / len]);
    }
    if p == 3 && k == 2 {
        let a = &diffs[0..3];
        let b = &diffs[3..6];
        let v = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let scale = a.iter().chain(b).map(|t| t.abs()).fold(0.0f64, f64::max);
        if len <= 1e-12 * scale * scale || len == 0.0 {
            return None;
        }
        return Some(vec![v[0] / len, v[1] / len, v[2] / len]);
    }
    // General case: right-singular vector for the smallest singular
    // value. The k x p matrix is padded with zero rows to p x p so the
    // (thin) SVD still carries the full right-singular basis, nullspace
    // vector included.
    let mut padded = diffs.to_vec();
    padded.resize(p * p, 0.0);
    let m = DMatrix::from_row_slice(p, p, &padded);
    let svd = m.svd(false, true);
    let vt = svd.v_t.as_ref()?;
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    // Rank must be exactly p - 1 for a unique normal.
    let rank = sv.iter().filter(|&&s| s > 1e-10 * smax.max(1e-300)).count();
    if rank < p - 1 {
        return None;
    }
    let imin = (0..sv.len())
        .min_by(|&a, &b| sv[a].partial_cmp(&sv[b]).unwrap())
        .unwrap();
    let v: Vec<f64> = vt.row(imin).iter().cloned().collect();
    let nrm = crate::matrix::norm(&v);
    if nrm == 0.0 || !nrm.is_finite() {
        return None;
    }
    Some(v.iter().map(|c| c / nrm).collect())
}

fn draw_distinct<R: Rng>(rng: &mut R, n: usize, out: &mut [usize]) {
    let k = out.len();
    let mut filled = 0;
    while filled < k {
        let cand = rng.gen_range(0..n);
        if !out[..filled].contains(&cand) {
            out[filled] = cand;
            filled += 1;
        }
    }
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    subset: &mut Vec<usize>,
    pos: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == k {
        f(subset);
        return;
    }
    for i in start..n {
        subset[pos] = i;
        enumerate_subsets(n, k, subset, pos + 1, i + 1, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gaussian_sample(n: usize, p: usize, seed: u64) -> DataMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        DataMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn reproducible_bit_for_bit() {
        let s = gaussian_sample(40, 3, 5);
        let a = DirectionSet::random_hyperplanes(&s, 100, 9).unwrap();
        let b = DirectionSet::random_hyperplanes(&s, 100, 9).unwrap();
        assert_eq!(a, b);
        let c = DirectionSet::random_hyperplanes(&s, 100, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unit_norm_within_tolerance() {
        let s = gaussian_sample(30, 4, 6);
        let d = DirectionSet::random_hyperplanes(&s, 200, 1).unwrap();
        assert_eq!(d.len(), 200);
        for v in d.iter() {
            assert!((crate::matrix::norm(v) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn univariate_set_is_plus_minus_one() {
        let s = gaussian_sample(10, 1, 7);
        let d = DirectionSet::for_sample(&s, 3).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.direction(0), &[1.0]);
        assert_eq!(d.direction(1), &[-1.0]);
    }

    #[test]
    fn default_count_is_250_per_dim() {
        let s = gaussian_sample(30, 3, 8);
        let d = DirectionSet::for_sample(&s, 3).unwrap();
        assert_eq!(d.len(), 750);
    }

    #[test]
    fn exact_set_counts() {
        // p = 2, n = 3 in generic position: one normal pair per point
        // (6 directions) plus the midpoint of each of the 6 angular gaps.
        let s = DataMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]])
            .unwrap();
        let d = exact_direction_set(&[0.0, 0.0], &s).unwrap();
        assert_eq!(d.len(), 12);
        // p = 3, n = 5: C(5, 2) pairs x 2 orientations.
        let s = gaussian_sample(5, 3, 10);
        let d = exact_direction_set(&[0.0, 0.0, 0.0], &s).unwrap();
        assert_eq!(d.len(), 20);
    }

    #[test]
    fn degenerate_draws_error_out() {
        // All points identical: no hyperplane can be spanned.
        let s = DataMatrix::from_rows(&vec![vec![1.0, 1.0]; 10]).unwrap();
        assert!(matches!(
            DirectionSet::random_hyperplanes(&s, 10, 0),
            Err(Error::DegenerateDirections(_))
        ));
    }

    #[test]
    fn normals_are_orthogonal_to_spans() {
        let s = gaussian_sample(12, 5, 11);
        let x = vec![0.1, -0.2, 0.3, 0.0, 0.5];
        let d = exact_direction_set(&x, &s).unwrap();
        assert!(d.len() > 0);
        for v in d.iter() {
            assert!((crate::matrix::norm(v) - 1.0).abs() <= 1e-9);
        }
    }
}
