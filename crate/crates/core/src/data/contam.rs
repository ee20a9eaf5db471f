//! Label contamination: a rounded share of every group is reassigned,
//! uniformly at random, to one of the other groups. Test labels are
//! never touched; contamination applies to training data only.

use crate::classify::GroupedData;
use crate::functional::{FunctionalGroupedData, FunctionalSample};
use crate::matrix::DataMatrix;
use crate::rng::stream_rng;
use crate::{Error, Result};
use rand::seq::index::sample as index_sample;
use rand::Rng;

/// Per group, the members to move and their destination group, drawn
/// in ascending group order so the consumption of randomness is fixed.
/// The count per group is round-half-to-even of `fraction * n_g`; the
/// destination is uniform over the other groups.
fn draw_moves(
    group_sizes: &[usize],
    fraction: f64,
    rng: &mut impl Rng,
) -> Result<Vec<Vec<(usize, usize)>>> {
    if !fraction.is_finite() || !(0.0..1.0).contains(&fraction) {
        return Err(Error::InvalidArgument(format!(
            "mislabel fraction must lie in [0, 1), got {fraction}"
        )));
    }
    let n_groups = group_sizes.len();
    let mut moves = Vec::with_capacity(n_groups);
    for (g, &n) in group_sizes.iter().enumerate() {
        let k = (fraction * n as f64).round_ties_even() as usize;
        let mut chosen = index_sample(rng, n, k).into_vec();
        chosen.sort_unstable();
        let mut group_moves = Vec::with_capacity(k);
        for idx in chosen {
            let mut dest = rng.gen_range(0..n_groups - 1);
            if dest >= g {
                dest += 1;
            }
            group_moves.push((idx, dest));
        }
        moves.push(group_moves);
    }
    Ok(moves)
}

/// Returns `data` with a rounded `fraction` of each group relabelled to
/// a uniformly random other group. Moved points never keep their label;
/// group sizes are recounted from the new labels.
pub fn mislabel(data: &GroupedData, fraction: f64, seed: u64) -> Result<GroupedData> {
    let sizes: Vec<usize> = (0..data.n_groups()).map(|g| data.group(g).nrows()).collect();
    let mut rng = stream_rng(seed, 0);
    let moves = draw_moves(&sizes, fraction, &mut rng)?;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(data.total_n());
    let mut labels: Vec<String> = Vec::with_capacity(data.total_n());
    for g in 0..data.n_groups() {
        let mut next = moves[g].iter().peekable();
        for (i, row) in data.group(g).rows_iter().enumerate() {
            let dest = match next.peek() {
                Some(&&(idx, d)) if idx == i => {
                    next.next();
                    d
                }
                _ => g,
            };
            rows.push(row.to_vec());
            labels.push(data.name(dest).to_string());
        }
    }
    GroupedData::from_rows(&DataMatrix::from_rows(&rows)?, &labels)
}

/// [`mislabel`] for curve bundles: whole curves move between groups.
pub fn mislabel_curves(
    data: &FunctionalGroupedData,
    fraction: f64,
    seed: u64,
) -> Result<FunctionalGroupedData> {
    let sizes: Vec<usize> = (0..data.n_groups())
        .map(|g| data.group(g).n_curves())
        .collect();
    let mut rng = stream_rng(seed, 0);
    let moves = draw_moves(&sizes, fraction, &mut rng)?;

    let mut curves: Vec<DataMatrix> = Vec::with_capacity(data.total_n());
    let mut labels: Vec<String> = Vec::with_capacity(data.total_n());
    for g in 0..data.n_groups() {
        let mut next = moves[g].iter().peekable();
        for i in 0..data.group(g).n_curves() {
            let dest = match next.peek() {
                Some(&&(idx, d)) if idx == i => {
                    next.next();
                    d
                }
                _ => g,
            };
            curves.push(data.group(g).curve(i).clone());
            labels.push(data.name(dest).to_string());
        }
    }
    let sample = FunctionalSample::with_weights(
        data.grid().to_vec(),
        curves,
        data.group(0).weights().to_vec(),
    )?;
    FunctionalGroupedData::from_labeled(&sample, &labels)
}
