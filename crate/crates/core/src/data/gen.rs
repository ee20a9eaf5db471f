//! The three synthetic benchmark settings: correlated Gaussians with a
//! reflected and a shifted copy, a symmetric-versus-skewed pair, and a
//! Gaussian core surrounded by a thin spherical shell.
//!
//! Group draws are seeded per (phase, group) through child streams, so
//! a generated scenario is reproducible bit for bit and independent of
//! thread count.

use crate::classify::GroupedData;
use crate::matrix::DataMatrix;
use crate::rng::{child_seed, stream_rng};
use crate::{Error, Result};
use nalgebra::{Cholesky, Matrix3, Vector3};
use rand::Rng;
use rand_distr::{Exp, StandardNormal};

/// A generated scenario: labelled training groups plus a test set with
/// its clean labels (`test_labels[i]` names the group of `test` row i).
#[derive(Debug, Clone)]
pub struct SimulatedData {
    pub training: GroupedData,
    pub test: DataMatrix,
    pub test_labels: Vec<String>,
}

/// Covariance of the first trivariate group; the other two groups are
/// derived from its draws.
const SETTING1_SIGMA: [f64; 9] = [5.0, 3.0, 1.0, 3.0, 2.0, 1.0, 1.0, 1.0, 3.0];

/// Shift applied to the third group.
const SETTING1_SHIFT: [f64; 3] = [1.0, -2.0, -4.0];

/// `n` draws from one group of the trivariate-normals setting:
/// group 0 is N(mu, Sigma), group 1 flips the sign of the second
/// coordinate, group 2 is group 0 shifted by (1, -2, -4).
pub fn setting1_draws(group: usize, n: usize, seed: u64) -> Result<DataMatrix> {
    if group >= 3 {
        return Err(Error::InvalidArgument(format!(
            "setting 1 has groups 0..3, got {group}"
        )));
    }
    let sigma = Matrix3::from_row_slice(&SETTING1_SIGMA);
    let l = Cholesky::new(sigma)
        .expect("the designed covariance is positive definite")
        .l();
    let mut rng = stream_rng(seed, 0);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let z = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let mut x = l * z;
        match group {
            1 => x[1] = -x[1],
            2 => {
                for (v, s) in x.iter_mut().zip(SETTING1_SHIFT) {
                    *v += s;
                }
            }
            _ => {}
        }
        rows.push(vec![x[0], x[1], x[2]]);
    }
    DataMatrix::from_rows(&rows)
}

/// `n` draws from one group of the normal-versus-skewed setting:
/// group 0 is standard normal in six dimensions, group 1 has
/// independent unit-rate exponential coordinates.
pub fn setting2_draws(group: usize, n: usize, seed: u64) -> Result<DataMatrix> {
    if group >= 2 {
        return Err(Error::InvalidArgument(format!(
            "setting 2 has groups 0..2, got {group}"
        )));
    }
    let exp = Exp::new(1.0).expect("unit rate is valid");
    let mut rng = stream_rng(seed, 0);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..6)
            .map(|_| {
                if group == 0 {
                    rng.sample::<f64, _>(StandardNormal)
                } else {
                    rng.sample(exp)
                }
            })
            .collect();
        rows.push(row);
    }
    DataMatrix::from_rows(&rows)
}

/// `n` draws from one group of the concentric setting: group 0 is
/// standard normal in seven dimensions, group 1 is a uniform direction
/// on the unit sphere scaled by a radius uniform on [12, 13].
pub fn setting3_draws(group: usize, n: usize, seed: u64) -> Result<DataMatrix> {
    if group >= 2 {
        return Err(Error::InvalidArgument(format!(
            "setting 3 has groups 0..2, got {group}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        if group == 0 {
            rows.push(
                (0..7)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect(),
            );
        } else {
            // Normalized Gaussians are uniform on the sphere; a zero
            // vector is a measure-zero accident worth guarding anyway.
            let (z, norm) = loop {
                let z: Vec<f64> = (0..7)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    break (z, norm);
                }
            };
            let r = rng.gen_range(12.0..13.0);
            rows.push(z.into_iter().map(|v| v * r / norm).collect());
        }
    }
    DataMatrix::from_rows(&rows)
}

/// Assembles training groups and a labelled test set from a per-group
/// sampler, with one child seed per (phase, group).
fn build(
    n_groups: usize,
    train_sizes: &[usize],
    test_per_group: usize,
    seed: u64,
    draws: fn(usize, usize, u64) -> Result<DataMatrix>,
) -> Result<SimulatedData> {
    if train_sizes.iter().any(|&n| n == 0) || test_per_group == 0 {
        return Err(Error::InvalidArgument(
            "group sizes must be positive".into(),
        ));
    }
    let mut root = stream_rng(seed, 0);
    let train_seeds: Vec<u64> = (0..n_groups).map(|_| child_seed(&mut root)).collect();
    let test_seeds: Vec<u64> = (0..n_groups).map(|_| child_seed(&mut root)).collect();

    let mut pairs = Vec::with_capacity(n_groups);
    for g in 0..n_groups {
        pairs.push((
            (g + 1).to_string(),
            draws(g, train_sizes[g], train_seeds[g])?,
        ));
    }
    let training = GroupedData::new(pairs)?;

    let mut test: Option<DataMatrix> = None;
    let mut test_labels = Vec::with_capacity(n_groups * test_per_group);
    for g in 0..n_groups {
        let block = draws(g, test_per_group, test_seeds[g])?;
        test_labels.extend(std::iter::repeat((g + 1).to_string()).take(test_per_group));
        test = Some(match test {
            None => block,
            Some(acc) => acc.vstack(&block)?,
        });
    }
    Ok(SimulatedData {
        training,
        test: test.expect("at least one group"),
        test_labels,
    })
}

/// Trivariate normals with custom sizes.
pub fn gen_setting1_sized(
    train_sizes: [usize; 3],
    test_per_group: usize,
    seed: u64,
) -> Result<SimulatedData> {
    build(3, &train_sizes, test_per_group, seed, setting1_draws)
}

/// Trivariate normals at the published scale: 50 training observations
/// per group and 500 test observations per group.
pub fn gen_setting1(seed: u64) -> SimulatedData {
    gen_setting1_sized([50, 50, 50], 500, seed).expect("published sizes are valid")
}

/// Normal versus skewed with custom sizes.
pub fn gen_setting2_sized(
    train_sizes: [usize; 2],
    test_per_group: usize,
    seed: u64,
) -> Result<SimulatedData> {
    build(2, &train_sizes, test_per_group, seed, setting2_draws)
}

/// Normal versus skewed at the published scale: 150 and 100 training
/// observations, 500 test observations per group.
pub fn gen_setting2(seed: u64) -> SimulatedData {
    gen_setting2_sized([150, 100], 500, seed).expect("published sizes are valid")
}

/// Concentric groups with custom sizes.
pub fn gen_setting3_sized(
    train_sizes: [usize; 2],
    test_per_group: usize,
    seed: u64,
) -> Result<SimulatedData> {
    build(2, &train_sizes, test_per_group, seed, setting3_draws)
}

/// Concentric groups at the published scale: 150 and 250 training
/// observations, 500 test observations per group.
pub fn gen_setting3(seed: u64) -> SimulatedData {
    gen_setting3_sized([150, 250], 500, seed).expect("published sizes are valid")
}
