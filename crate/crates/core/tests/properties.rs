//! Randomized invariant checks over the depth, distance, classification,
//! functional, and benchmark layers: norm axioms on random convex bodies,
//! exactness and invariance properties of the bivariate depth, order
//! relations between outlyingness and depth, tie-rule-independent kNN
//! behaviour, and exact restriction of functional measures to sub-grids.
//!
//! The generator seed is fixed so the suite explores the same cases on
//! every run.

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use distspace::bench::misclassification_rate;
use distspace::classify::{knn_predict, ClassifierModel, GroupedData, Measure, Method};
use distspace::depth::{
    compute_bag, exact_direction_set, hd_approx_count, hd_bivariate_count, tukey_median,
    DirectionSet, Polygon,
};
use distspace::dist::{
    generalized_norm, medcouple, quantile_type7, Ellipsoid, GroupModel, HalfspacePolytope,
    StarBody,
};
use distspace::functional::{FunctionalSample, PointwiseGroupModels};
use distspace::matrix::{euclidean, DataMatrix};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x00d1_5ba1),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// A planar cloud from integer draws. The small index-dependent jitter
/// keeps points distinct, and the quadratic term in the second
/// coordinate keeps the cloud away from exact collinearity even when
/// every integer shrinks to zero.
fn planar_cloud_at(ints: &[(i32, i32)], dx: f64, dy: f64) -> DataMatrix {
    let rows: Vec<Vec<f64>> = ints
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let t = i as f64;
            vec![
                a as f64 * 0.3 + t * 0.017 + dx,
                b as f64 * 0.3 + t * 0.013 + t * t * 0.0019 + dy,
            ]
        })
        .collect();
    DataMatrix::from_rows(&rows).unwrap()
}

fn planar_cloud(ints: &[(i32, i32)]) -> DataMatrix {
    planar_cloud_at(ints, 0.0, 0.0)
}

fn lattice_query(q: (i32, i32)) -> [f64; 2] {
    [q.0 as f64 * 0.3 + 0.05, q.1 as f64 * 0.3 + 0.07]
}

type CloudInts = Vec<(i32, i32)>;

fn cloud_strategy(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = CloudInts> {
    prop::collection::vec((-30i32..=30, -30i32..=30), n)
}

// ---------------------------------------------------------------------
// Exact bivariate depth.
// ---------------------------------------------------------------------

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn exact_depth_is_a_fraction_with_a_sample_point_floor(
        ints in cloud_strategy(8..=20),
        q in (-40i32..=40, -40i32..=40),
    ) {
        let sample = planar_cloud(&ints);
        let n = sample.nrows();
        let d = hd_bivariate_count(&lattice_query(q), &sample).unwrap();
        prop_assert!(d.n == n && d.count <= n);
        for i in 0..n {
            let di = hd_bivariate_count(sample.row(i), &sample).unwrap();
            prop_assert!(di.count >= 1, "sample point fell below the 1/n depth floor");
        }
    }

    #[test]
    fn exact_depth_is_ridge_shaped_along_lines(
        ints in cloud_strategy(10..=20),
        angle in 0.0f64..std::f64::consts::TAU,
        q in (-35i32..=35, -35i32..=35),
    ) {
        let sample = planar_cloud(&ints);

        // The refined centre is at least as deep as every sample point.
        // (It may still miss the exact maximiser: the refinement is a
        // documented approximation, so ray monotonicity is asserted in
        // its reference-point-free form below.)
        let dirs = DirectionSet::from_vectors(&[vec![1.0, 0.0]]).unwrap();
        let c = tukey_median(&sample, &dirs).unwrap();
        let at_median = hd_bivariate_count(&c, &sample).unwrap().count;
        let best_sample = (0..sample.nrows())
            .map(|i| hd_bivariate_count(sample.row(i), &sample).unwrap().count)
            .max()
            .unwrap();
        prop_assert!(at_median >= best_sample);

        // Depth regions are convex, so along any line the depth never
        // dips between two points: rises to a ridge, then falls.
        let u = [angle.cos(), angle.sin()];
        let base = lattice_query(q);
        let counts: Vec<usize> = [-9.0, -4.1, -1.4, 0.0, 1.2, 3.7, 8.4]
            .iter()
            .map(|t| {
                hd_bivariate_count(&[base[0] + t * u[0], base[1] + t * u[1]], &sample)
                    .unwrap()
                    .count
            })
            .collect();
        for i in 0..counts.len() {
            for j in i + 2..counts.len() {
                let floor = counts[i].min(counts[j]);
                for m in i + 1..j {
                    prop_assert!(
                        counts[m] >= floor,
                        "depth dipped to {} between {} and {}",
                        counts[m],
                        counts[i],
                        counts[j]
                    );
                }
            }
        }
    }

    #[test]
    fn exact_depth_vanishes_strictly_outside_the_hull(
        ints in cloud_strategy(8..=20),
        off in 0i32..=20,
        qy in -40i32..=40,
    ) {
        let sample = planar_cloud(&ints);
        let max_x = sample
            .column(0)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let x = [max_x + 0.6 + off as f64 * 0.5, qy as f64 * 0.3];
        prop_assert_eq!(hd_bivariate_count(&x, &sample).unwrap().count, 0);
    }

    #[test]
    fn exact_depth_counts_survive_affine_maps(
        ints in cloud_strategy(8..=16),
        qi in (-35i32..=35, -35i32..=35),
        th in 0.0f64..std::f64::consts::TAU,
        s1 in 0.5f64..2.0,
        s2 in 0.5f64..2.0,
        bx in -5.0f64..5.0,
        by in -5.0f64..5.0,
    ) {
        let sample = planar_cloud(&ints);
        let x = lattice_query(qi);
        let (c, s) = (th.cos(), th.sin());
        // Rotation times a well-conditioned diagonal, plus a shift.
        let map = |z: &[f64]| {
            vec![
                c * s1 * z[0] - s * s2 * z[1] + bx,
                s * s1 * z[0] + c * s2 * z[1] + by,
            ]
        };
        let mapped =
            DataMatrix::from_rows(&sample.rows_iter().map(map).collect::<Vec<_>>()).unwrap();
        let before = hd_bivariate_count(&x, &sample).unwrap();
        let after = hd_bivariate_count(&map(&x), &mapped).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn sampled_direction_depth_upper_bounds_the_exact_value(
        ints in cloud_strategy(8..=18),
        qi in (-35i32..=35, -35i32..=35),
        m in 4usize..=40,
        seed in any::<u64>(),
    ) {
        let sample = planar_cloud(&ints);
        let x = lattice_query(qi);
        let exact = hd_bivariate_count(&x, &sample).unwrap();
        let dirs = DirectionSet::random_hyperplanes(&sample, m, seed).unwrap();
        let approx = hd_approx_count(&x, &sample, &dirs).unwrap();
        prop_assert!(approx.count >= exact.count);
        // With the critical directions of x itself the bound is tight.
        let crit = exact_direction_set(&x, &sample).unwrap();
        let tight = hd_approx_count(&x, &sample, &crit).unwrap();
        prop_assert_eq!(tight, exact);
    }

    #[test]
    fn the_bag_sits_inside_the_sample_hull(ints in cloud_strategy(8..=18)) {
        let sample = planar_cloud(&ints);
        let dirs = DirectionSet::from_vectors(&[vec![1.0, 0.0]]).unwrap();
        let bag = compute_bag(&sample, &dirs).unwrap();
        let pts: Vec<[f64; 2]> = sample.rows_iter().map(|r| [r[0], r[1]]).collect();
        let hull = Polygon::convex_hull(&pts).unwrap();
        let poly = bag.polygon.unwrap();
        for v in poly.vertices() {
            prop_assert!(hull.contains(v), "bag vertex {v:?} left the sample hull");
        }
        prop_assert!(poly.contains(&bag.center));
    }
}

// ---------------------------------------------------------------------
// Generalized norms on random convex bodies.
// ---------------------------------------------------------------------

/// Nonnegativity, zero-only-at-centre, positive homogeneity, the
/// triangle inequality after centering, and convexity.
fn assert_norm_axioms(
    body: &dyn StarBody,
    x: &[f64],
    y: &[f64],
    gamma: f64,
    lam: f64,
) -> std::result::Result<(), TestCaseError> {
    let th = body.center().to_vec();
    let gx = generalized_norm(x, body).unwrap();
    let gy = generalized_norm(y, body).unwrap();
    prop_assert!(gx >= 0.0 && gy >= 0.0);
    prop_assert_eq!(generalized_norm(&th, body).unwrap(), 0.0);
    if gx == 0.0 {
        prop_assert_eq!(x, th.as_slice(), "zero norm away from the centre");
    }

    let scaled: Vec<f64> = th
        .iter()
        .zip(x)
        .map(|(c, v)| c + gamma * (v - c))
        .collect();
    let gs = generalized_norm(&scaled, body).unwrap();
    prop_assert!(
        (gs - gamma * gx).abs() <= 1e-10,
        "homogeneity off by {}",
        (gs - gamma * gx).abs()
    );

    let sum: Vec<f64> = x
        .iter()
        .zip(y)
        .zip(&th)
        .map(|((a, b), c)| a + b - c)
        .collect();
    let gsum = generalized_norm(&sum, body).unwrap();
    prop_assert!(gsum <= gx + gy + 1e-10, "triangle inequality failed");

    let mix: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| lam * a + (1.0 - lam) * b)
        .collect();
    let gmix = generalized_norm(&mix, body).unwrap();
    prop_assert!(
        gmix <= lam * gx + (1.0 - lam) * gy + 1e-10,
        "convexity failed"
    );
    Ok(())
}

proptest! {
    #![proptest_config(cfg(256))]

    #[test]
    fn polytope_norms_obey_the_norm_axioms(
        cx in -3.0f64..3.0,
        cy in -3.0f64..3.0,
        axis_offsets in prop::collection::vec(0.5f64..3.0, 4),
        extra in prop::collection::vec((0.0f64..std::f64::consts::TAU, 0.5f64..3.0), 0..=4),
        x in prop::collection::vec(-9.0f64..9.0, 2),
        y in prop::collection::vec(-9.0f64..9.0, 2),
        gamma in 0.0f64..4.0,
        lam in 0.0f64..1.0,
    ) {
        // The four axis halfspaces keep the polytope bounded no matter
        // what the extra random faces do.
        let mut normals = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let mut offsets = axis_offsets.clone();
        for (t, d) in &extra {
            normals.push(vec![t.cos(), t.sin()]);
            offsets.push(*d);
        }
        let body = HalfspacePolytope::new(vec![cx, cy], normals, offsets).unwrap();
        assert_norm_axioms(&body, &x, &y, gamma, lam)?;
    }

    #[test]
    fn ellipsoid_norms_obey_the_norm_axioms(
        p in 1usize..=3,
        raw in prop::collection::vec(-1.5f64..1.5, 9),
        cen in prop::collection::vec(-3.0f64..3.0, 3),
        xr in prop::collection::vec(-8.0f64..8.0, 3),
        yr in prop::collection::vec(-8.0f64..8.0, 3),
        gamma in 0.0f64..4.0,
        lam in 0.0f64..1.0,
    ) {
        // sigma = A A' + 0.3 I is positive definite for any A.
        let mut sigma = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..p {
                let mut acc = if i == j { 0.3 } else { 0.0 };
                for k in 0..p {
                    acc += raw[i * 3 + k] * raw[j * 3 + k];
                }
                sigma[i * p + j] = acc;
            }
        }
        let body = Ellipsoid::new(cen[..p].to_vec(), &sigma).unwrap();
        assert_norm_axioms(&body, &xr[..p], &yr[..p], gamma, lam)?;
    }
}

// ---------------------------------------------------------------------
// Robust measures and their order relations.
// ---------------------------------------------------------------------

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn medcouple_is_bounded_and_location_scale_equivariant(
        ints in prop::collection::vec(-40i32..=40, 6..=25),
        a in prop::sample::select(vec![2.5f64, -1.75, 0.4, -0.3, 7.0]),
        b in -6.0f64..6.0,
    ) {
        let xs: Vec<f64> = ints
            .iter()
            .enumerate()
            .map(|(i, &v)| v as f64 * 0.3 + i as f64 * 0.0137)
            .collect();
        let mc = medcouple(&xs).unwrap();
        prop_assert!((-1.0..=1.0).contains(&mc));
        let ys: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let mc2 = medcouple(&ys).unwrap();
        prop_assert!(
            (mc2 - a.signum() * mc).abs() <= 1e-9,
            "{mc2} vs {} under x -> {a} x + {b}",
            a.signum() * mc
        );
    }

    #[test]
    fn quantiles_are_monotone_and_bounded(
        mut xs in prop::collection::vec(0.0f64..100.0, 1..=60),
        pa in 0.0f64..=1.0,
        pb in 0.0f64..=1.0,
    ) {
        xs.sort_by(|u, v| u.partial_cmp(v).unwrap());
        let (lo, hi) = (pa.min(pb), pa.max(pb));
        let qlo = quantile_type7(&xs, lo);
        let qhi = quantile_type7(&xs, hi);
        prop_assert!(qlo <= qhi);
        prop_assert!(xs[0] <= qlo && qhi <= xs[xs.len() - 1]);
    }

    #[test]
    fn weighted_error_stays_within_percent_bounds(
        flips in prop::collection::vec(any::<bool>(), 2..=40),
        w in 0.05f64..0.95,
    ) {
        let labels = vec!["a".to_string(), "b".to_string()];
        let priors = vec![w, 1.0 - w];
        let other = |t: &str| if t == "a" { "b".to_string() } else { "a".to_string() };
        let truth: Vec<String> = (0..flips.len()).map(|i| labels[i % 2].clone()).collect();
        let predicted: Vec<String> = flips
            .iter()
            .zip(&truth)
            .map(|(f, t)| if *f { other(t) } else { t.clone() })
            .collect();
        let e = misclassification_rate(&predicted, &truth, &labels, &priors).unwrap();
        prop_assert!((0.0..=100.0 + 1e-9).contains(&e));
        let clean = misclassification_rate(&truth, &truth, &labels, &priors).unwrap();
        prop_assert_eq!(clean, 0.0);
        let inverted: Vec<String> = truth.iter().map(|t| other(t)).collect();
        let worst = misclassification_rate(&inverted, &truth, &labels, &priors).unwrap();
        prop_assert!((worst - 100.0).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn outlyingness_is_nonnegative_and_orders_inversely_to_depth(
        ints in cloud_strategy(8..=16),
        q1 in (-35i32..=35, -35i32..=35),
        q2 in (-35i32..=35, -35i32..=35),
        seed in any::<u64>(),
    ) {
        let model = GroupModel::fit(planar_cloud(&ints), seed).unwrap();
        let x1 = lattice_query(q1);
        let x2 = lattice_query(q2);
        for x in [&x1, &x2] {
            prop_assert!(model.sdo(x).unwrap() >= 0.0);
            prop_assert!(model.ao(x).unwrap() >= 0.0);
            let hd = model.hd(x).unwrap();
            prop_assert!((0.0..=1.0).contains(&hd));
            let pd = model.pd(x).unwrap();
            let spd = model.spd(x).unwrap();
            prop_assert!(0.0 < pd && pd <= 1.0);
            prop_assert!(0.0 < spd && spd <= 1.0);
        }
        let (s1, s2) = (model.sdo(&x1).unwrap(), model.sdo(&x2).unwrap());
        prop_assume!(s1 != s2);
        prop_assert_eq!(s1 < s2, model.pd(&x1).unwrap() > model.pd(&x2).unwrap());
        let (a1, a2) = (model.ao(&x1).unwrap(), model.ao(&x2).unwrap());
        prop_assume!(a1 != a2);
        prop_assert_eq!(a1 < a2, model.spd(&x1).unwrap() > model.spd(&x2).unwrap());
    }

    #[test]
    fn bag_vertices_lie_at_unit_scaled_distance(
        ints in cloud_strategy(10..=18),
        seed in any::<u64>(),
    ) {
        let model = GroupModel::fit(planar_cloud(&ints), seed).unwrap();
        let bag = model.bag();
        let poly = bag.polygon.as_ref().unwrap();
        let c = &bag.center;
        let vs = poly.vertices();
        // Only meaningful when the centre is strictly interior; a centre
        // on the boundary makes the scaled distance undefined there.
        for i in 0..vs.len() {
            let a = vs[i];
            let b = vs[(i + 1) % vs.len()];
            let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            prop_assume!(cross > 1e-9);
        }
        for v in vs {
            let bd = model.bagdistance(v).unwrap();
            prop_assert!((bd - 1.0).abs() <= 1e-9, "vertex {v:?} at scaled distance {bd}");
        }
    }

    #[test]
    fn planar_bag_distance_survives_affine_maps(
        ints in cloud_strategy(10..=16),
        qi in (-35i32..=35, -35i32..=35),
        th in 0.0f64..std::f64::consts::TAU,
        s1 in 0.5f64..2.0,
        s2 in 0.5f64..2.0,
        bx in -5.0f64..5.0,
        by in -5.0f64..5.0,
        seed in any::<u64>(),
    ) {
        let sample = planar_cloud(&ints);
        let (c, s) = (th.cos(), th.sin());
        let map = |z: &[f64]| {
            vec![
                c * s1 * z[0] - s * s2 * z[1] + bx,
                s * s1 * z[0] + c * s2 * z[1] + by,
            ]
        };
        let mapped =
            DataMatrix::from_rows(&sample.rows_iter().map(map).collect::<Vec<_>>()).unwrap();
        let m1 = GroupModel::fit(sample, seed).unwrap();
        let m2 = GroupModel::fit(mapped, seed).unwrap();
        let x = lattice_query(qi);
        let b1 = m1.bagdistance(&x);
        let b2 = m2.bagdistance(&map(&x));
        // A centre that lands on the bag boundary has no scaled distance
        // in outward directions; skip those degenerate draws.
        prop_assume!(b1.is_ok() && b2.is_ok());
        let (b1, b2) = (b1.unwrap(), b2.unwrap());
        prop_assert!((b1 - b2).abs() <= 1e-6, "{b1} vs {b2} after the affine map");
    }

    #[test]
    fn smallest_distance_and_largest_depth_give_identical_labels(
        a_ints in prop::collection::vec((-20i32..=20, -20i32..=20), 8..=12),
        b_ints in prop::collection::vec((-20i32..=20, -20i32..=20), 8..=12),
        queries in prop::collection::vec((-60i32..=60, -60i32..=60), 1..=6),
        seed in any::<u64>(),
    ) {
        let data = GroupedData::new(vec![
            ("a".to_string(), planar_cloud(&a_ints)),
            ("b".to_string(), planar_cloud_at(&b_ints, 7.0, 0.0)),
        ])
        .unwrap();
        for (dist_m, depth_m) in [(Measure::Sdo, Measure::Pd), (Measure::Ao, Measure::Spd)] {
            let by_dist =
                ClassifierModel::fit(&data, Method::MinDist, Some(dist_m), None, None, seed)
                    .unwrap();
            let by_depth =
                ClassifierModel::fit(&data, Method::MaxDepth, Some(depth_m), None, None, seed)
                    .unwrap();
            for q in &queries {
                let x = [q.0 as f64 * 0.2 + 0.03, q.1 as f64 * 0.2 + 0.01];
                prop_assert_eq!(
                    by_dist.predict(&x).unwrap(),
                    by_depth.predict(&x).unwrap(),
                    "labels split for {:?}/{:?}",
                    dist_m,
                    depth_m
                );
            }
        }
    }
}

// ---------------------------------------------------------------------
// kNN tie rules.
// ---------------------------------------------------------------------

/// Deterministic shuffle driven by a single seed.
fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut s = seed | 1;
    for i in (1..n).rev() {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = (s >> 33) as usize % (i + 1);
        idx.swap(i, j);
    }
    idx
}

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn nearest_neighbour_votes_ignore_training_order(
        pts in prop::collection::vec(((-30i32..=30, -30i32..=30), 0usize..=1), 6..=18),
        q in (-35i32..=35, -35i32..=35),
        k_pick in any::<u32>(),
        perm_seed in any::<u64>(),
    ) {
        let train: Vec<Vec<f64>> = pts
            .iter()
            .enumerate()
            .map(|(i, &((a, b), _))| {
                vec![a as f64 * 0.31 + i as f64 * 0.019, b as f64 * 0.29 + i as f64 * 0.023]
            })
            .collect();
        let labels: Vec<usize> = pts.iter().map(|&(_, l)| l).collect();
        let x = [q.0 as f64 * 0.3 + 0.021, q.1 as f64 * 0.3 + 0.013];

        // Order can only matter through exact distance ties; skip them.
        let mut ds: Vec<f64> = train.iter().map(|r| euclidean(r, &x)).collect();
        ds.sort_by(|u, v| u.partial_cmp(v).unwrap());
        prop_assume!(ds.windows(2).all(|w| w[1] - w[0] > 1e-9));

        let k = 1 + (k_pick as usize) % train.len();
        let perm = shuffled(train.len(), perm_seed);
        let ptrain: Vec<Vec<f64>> = perm.iter().map(|&i| train[i].clone()).collect();
        let plabels: Vec<usize> = perm.iter().map(|&i| labels[i]).collect();
        prop_assert_eq!(
            knn_predict(&train, &labels, &x, k).unwrap(),
            knn_predict(&ptrain, &plabels, &x, k).unwrap()
        );
    }
}

// ---------------------------------------------------------------------
// Functional measures restrict exactly to sub-grids.
// ---------------------------------------------------------------------

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn functional_measures_restrict_exactly_to_sub_grids(
        vals in prop::collection::vec(prop::collection::vec(-25i32..=25, 6), 6..=10),
        keep_mask in 1u8..=63,
        qc in prop::collection::vec(-25i32..=25, 6),
        seed in any::<u64>(),
    ) {
        let grid: Vec<f64> = (0..6).map(|t| t as f64 * 0.2).collect();
        let curves: Vec<DataMatrix> = vals
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let pts: Vec<Vec<f64>> = row
                    .iter()
                    .enumerate()
                    .map(|(t, &v)| vec![v as f64 * 0.3 + j as f64 * 0.011 + t as f64 * 0.0047])
                    .collect();
                DataMatrix::from_rows(&pts).unwrap()
            })
            .collect();
        let full = FunctionalSample::new(grid, curves).unwrap();
        let fit_full = PointwiseGroupModels::fit(&full, seed).unwrap();

        let idx: Vec<usize> = (0..6).filter(|t| keep_mask & (1 << t) != 0).collect();
        let restricted = full.restrict_grid(&idx).unwrap();
        prop_assert!((restricted.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let fit_res = PointwiseGroupModels::fit(&restricted, seed).unwrap();

        let q_rows: Vec<Vec<f64>> = qc
            .iter()
            .enumerate()
            .map(|(t, &v)| vec![v as f64 * 0.29 + t as f64 * 0.0031])
            .collect();
        let q_full = DataMatrix::from_rows(&q_rows).unwrap();
        let q_res = q_full.select_rows(&idx).unwrap();

        let mfd = fit_full.mfd(&q_full, Measure::Hd).unwrap();
        prop_assert!((0.0..=1.0).contains(&mfd));

        // Per-point seeds come from grid values, so the restricted fit
        // reuses bit-identical pointwise models and the weighted sums
        // must agree exactly.
        for m in [Measure::Bd, Measure::Sdo, Measure::Hd] {
            let direct = fit_res.measure(&q_res, m).unwrap();
            let mut acc = 0.0;
            for (pos, &t) in idx.iter().enumerate() {
                let x = q_full.row(t);
                let model = &fit_full.models()[t];
                let v = match m {
                    Measure::Bd => model.bagdistance(x),
                    Measure::Sdo => model.sdo(x),
                    Measure::Hd => model.hd(x),
                    _ => unreachable!(),
                }
                .unwrap();
                acc += restricted.weights()[pos] * v;
            }
            prop_assert_eq!(direct, acc, "restriction drifted for {:?}", m);
        }
    }
}
