//! The replication harness: run a list of classification methods over
//! replicated scenario draws, score each on clean test labels with the
//! prior-weighted misclassification percentage, and summarise.
//!
//! Replication r uses RNG stream r + 1 of the master seed and touches
//! nothing shared, so results are identical across runs and thread
//! counts; only the wall-clock figures vary, and those never enter the
//! CSV export.

use crate::classify::{ClassifierModel, FitOptions, GroupedData, Measure, Method};
use crate::data::{
    gen_setting1_sized, gen_setting2_sized, gen_setting3_sized, mislabel, mislabel_curves,
    split_indices, standardize_by, SimulatedData,
};
use crate::dist::quantile_type7;
use crate::functional::{FunctionalClassifier, FunctionalGroupedData, FunctionalSample};
use crate::matrix::DataMatrix;
use crate::parallel::map_indexed;
use crate::rng::{child_seed, stream_rng};
use crate::{Error, Result};
use rand::seq::index::sample as index_sample;
use std::fmt;
use std::time::Instant;

/// A classification rule paired with the measure it runs on (None for
/// plain kNN), e.g. "distspace(bd)" or "knn".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSpec {
    pub method: Method,
    pub measure: Option<Measure>,
}

impl MethodSpec {
    /// Builds a spec, rejecting invalid method/measure pairings.
    pub fn new(method: Method, measure: Option<Measure>) -> Result<Self> {
        method.check_measure(measure)?;
        Ok(Self { method, measure })
    }

    /// Canonical display name: `method(measure)`, or just the method
    /// for plain kNN.
    pub fn name(&self) -> String {
        match self.measure {
            Some(m) => format!("{}({m})", self.method),
            None => self.method.to_string(),
        }
    }

    /// Parses `method(measure)` or a bare method name, case
    /// insensitively; "ddknn" and "plainknn" are accepted shorthands.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        let (method_text, measure) = match t.find('(') {
            Some(open) => {
                if !t.ends_with(')') || open + 1 >= t.len() - 1 {
                    return Err(Error::InvalidArgument(format!(
                        "malformed method spec '{text}'; expected method(measure)"
                    )));
                }
                (&t[..open], Some(Measure::parse(&t[open + 1..t.len() - 1])?))
            }
            None => (t.as_str(), None),
        };
        let method = match method_text {
            "ddknn" => Method::DepthDepthKnn,
            "plainknn" => Method::PlainKnn,
            other => Method::parse(other)?,
        };
        Self::new(method, measure)
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// What data each replication works on.
#[derive(Debug, Clone)]
pub enum Scenario {
    /// Trivariate normals: three groups, freshly generated each
    /// replication.
    Setting1 {
        train_sizes: [usize; 3],
        test_per_group: usize,
    },
    /// Standard normal versus coordinatewise exponential, six
    /// dimensions.
    Setting2 {
        train_sizes: [usize; 2],
        test_per_group: usize,
    },
    /// Standard normal versus a thin spherical shell, seven
    /// dimensions.
    Setting3 {
        train_sizes: [usize; 2],
        test_per_group: usize,
    },
    /// A fixed labelled table split anew each replication into
    /// `training_size` training rows and the rest as test rows.
    Split {
        rows: DataMatrix,
        labels: Vec<String>,
        training_size: usize,
        /// Apportion training seats to classes by the largest-remainder
        /// rule instead of sampling uniformly from all rows.
        stratified: bool,
        /// Standardize both portions by the training columns'
        /// median/MAD, recomputed per split.
        standardize: bool,
    },
    /// A fixed bundle of labelled curves split anew each replication;
    /// `train_sizes[g]` training curves are drawn from the g-th group
    /// (groups in sorted label order).
    FunctionalSplit {
        sample: FunctionalSample,
        labels: Vec<String>,
        train_sizes: Vec<usize>,
    },
}

impl Scenario {
    /// Trivariate normals at the published scale.
    pub fn setting1() -> Self {
        Scenario::Setting1 {
            train_sizes: [50, 50, 50],
            test_per_group: 500,
        }
    }

    /// Normal versus skewed at the published scale.
    pub fn setting2() -> Self {
        Scenario::Setting2 {
            train_sizes: [150, 100],
            test_per_group: 500,
        }
    }

    /// Concentric groups at the published scale.
    pub fn setting3() -> Self {
        Scenario::Setting3 {
            train_sizes: [150, 250],
            test_per_group: 500,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Setting1 { .. } => "setting1",
            Scenario::Setting2 { .. } => "setting2",
            Scenario::Setting3 { .. } => "setting3",
            Scenario::Split { .. } => "csv",
            Scenario::FunctionalSplit { .. } => "ucr",
        }
    }

    fn validate(&self) -> Result<()> {
        let synthetic = |sizes: &[usize], test: usize, dim: usize| {
            if test == 0 {
                return Err(Error::InvalidArgument(
                    "test size per group must be positive".into(),
                ));
            }
            if let Some(&n) = sizes.iter().find(|&&n| n < dim + 1) {
                return Err(Error::InvalidArgument(format!(
                    "training group of {n} cannot support a {dim}-dimensional model; \
                     need at least {} observations",
                    dim + 1
                )));
            }
            Ok(())
        };
        match self {
            Scenario::Setting1 {
                train_sizes,
                test_per_group,
            } => synthetic(train_sizes, *test_per_group, 3),
            Scenario::Setting2 {
                train_sizes,
                test_per_group,
            } => synthetic(train_sizes, *test_per_group, 6),
            Scenario::Setting3 {
                train_sizes,
                test_per_group,
            } => synthetic(train_sizes, *test_per_group, 7),
            Scenario::Split {
                rows,
                labels,
                training_size,
                ..
            } => {
                if labels.len() != rows.nrows() {
                    return Err(Error::InvalidArgument(format!(
                        "{} rows but {} labels",
                        rows.nrows(),
                        labels.len()
                    )));
                }
                let mut distinct = labels.to_vec();
                distinct.sort();
                distinct.dedup();
                if distinct.len() < 2 {
                    return Err(Error::InvalidArgument(
                        "need at least two classes".into(),
                    ));
                }
                if *training_size == 0 || *training_size >= rows.nrows() {
                    return Err(Error::InvalidArgument(format!(
                        "training size must lie in 1..{}, got {training_size}",
                        rows.nrows()
                    )));
                }
                Ok(())
            }
            Scenario::FunctionalSplit {
                sample,
                labels,
                train_sizes,
            } => {
                if labels.len() != sample.n_curves() {
                    return Err(Error::InvalidArgument(format!(
                        "{} curves but {} labels",
                        sample.n_curves(),
                        labels.len()
                    )));
                }
                let mut distinct = labels.to_vec();
                distinct.sort();
                distinct.dedup();
                if distinct.len() < 2 {
                    return Err(Error::InvalidArgument(
                        "need at least two classes".into(),
                    ));
                }
                if train_sizes.len() != distinct.len() {
                    return Err(Error::InvalidArgument(format!(
                        "{} training sizes for {} groups",
                        train_sizes.len(),
                        distinct.len()
                    )));
                }
                for (class, &k) in distinct.iter().zip(train_sizes) {
                    let n = labels.iter().filter(|l| *l == class).count();
                    if k == 0 || k >= n {
                        return Err(Error::InvalidArgument(format!(
                            "group '{class}' has {n} curves; its training size must \
                             lie in 1..{n}, got {k}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// A full benchmark request: the scenario, how often to replicate it,
/// how much training-label noise to inject, and the master seed.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub replications: usize,
    pub mislabel_fraction: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidArgument(
                "need at least one replication".into(),
            ));
        }
        if !self.mislabel_fraction.is_finite() || !(0.0..1.0).contains(&self.mislabel_fraction) {
            return Err(Error::InvalidArgument(format!(
                "mislabel fraction must lie in [0, 1), got {}",
                self.mislabel_fraction
            )));
        }
        self.scenario.validate()
    }
}

/// Five-number summary of one method's misclassification percentages.
#[derive(Debug, Clone)]
pub struct MethodSummary {
    pub method: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Per-method, per-replication misclassification percentages with
/// their five-number summaries and wall-clock totals per phase.
#[derive(Debug, Clone)]
pub struct BenchResult {
    methods: Vec<String>,
    /// `errors[m][r]` is method m's percentage in replication r.
    errors: Vec<Vec<f64>>,
    summaries: Vec<MethodSummary>,
    scenario: String,
    replications: usize,
    mislabel_fraction: f64,
    seed: u64,
    wall_ms: f64,
    /// ("generate", total ms) followed by one entry per method; each
    /// total sums the per-replication durations of that phase.
    phase_ms: Vec<(String, f64)>,
}

impl BenchResult {
    pub fn methods(&self) -> &[String] {
        &self.methods
    }

    pub fn replications(&self) -> usize {
        self.replications
    }

    /// Per-replication percentages for a method name.
    pub fn errors_for(&self, method: &str) -> Option<&[f64]> {
        self.methods
            .iter()
            .position(|m| m == method)
            .map(|i| self.errors[i].as_slice())
    }

    pub fn summaries(&self) -> &[MethodSummary] {
        &self.summaries
    }

    pub fn summary_for(&self, method: &str) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method == method)
    }

    pub fn wall_ms(&self) -> f64 {
        self.wall_ms
    }

    /// Deterministic long-format CSV (one row per replication and
    /// method), free of any timing: identical seeds give identical
    /// bytes regardless of thread count.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("replication,method,error_pct\n");
        for r in 0..self.replications {
            for (m, name) in self.methods.iter().enumerate() {
                out.push_str(&format!("{r},{name},{}\n", self.errors[m][r]));
            }
        }
        out
    }

    /// JSON report: the echoed configuration, per-method errors and
    /// five-number summaries, and wall-clock totals (the one
    /// nondeterministic part).
    pub fn summary_json(&self) -> Result<String> {
        let methods: Vec<serde_json::Value> = self
            .methods
            .iter()
            .zip(&self.summaries)
            .zip(&self.errors)
            .map(|((name, s), errs)| {
                serde_json::json!({
                    "name": name,
                    "quantiles": {
                        "min": s.min, "q1": s.q1, "median": s.median,
                        "q3": s.q3, "max": s.max,
                    },
                    "errors": errs,
                })
            })
            .collect();
        let phases: serde_json::Map<String, serde_json::Value> = self
            .phase_ms
            .iter()
            .map(|(name, ms)| (name.clone(), serde_json::json!(ms)))
            .collect();
        let doc = serde_json::json!({
            "scenario": self.scenario,
            "replications": self.replications,
            "mislabel_fraction": self.mislabel_fraction,
            "seed": self.seed,
            "methods": methods,
            "timings": { "wall_ms": self.wall_ms, "phases": phases },
        });
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

/// Prior-weighted misclassification percentage: for each group g with
/// training prior `priors[g]`, the share of test observations of that
/// group that were predicted as anything else, combined as
/// sum_g priors[g] * e_g with e_g in percent.
pub fn misclassification_rate(
    predicted: &[String],
    truth: &[String],
    labels: &[String],
    priors: &[f64],
) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::InvalidArgument(format!(
            "{} predictions for {} observations",
            predicted.len(),
            truth.len()
        )));
    }
    if labels.is_empty() || labels.len() != priors.len() {
        return Err(Error::InvalidArgument(format!(
            "{} labels with {} priors",
            labels.len(),
            priors.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut wrong = vec![0usize; labels.len()];
    let mut total = vec![0usize; labels.len()];
    for (p, t) in predicted.iter().zip(truth) {
        let g = labels.iter().position(|l| l == t).ok_or_else(|| {
            Error::InvalidArgument(format!("test label '{t}' is not a training label"))
        })?;
        total[g] += 1;
        if p != t {
            wrong[g] += 1;
        }
    }
    let mut rate = 0.0;
    for g in 0..labels.len() {
        if total[g] == 0 {
            return Err(Error::InvalidArgument(format!(
                "group '{}' has no test observations",
                labels[g]
            )));
        }
        rate += priors[g] * 100.0 * wrong[g] as f64 / total[g] as f64;
    }
    Ok(rate)
}

/// One replication's prepared data: contaminated training, clean test
/// inputs, and the clean truth labels.
enum Prepared {
    Multivariate {
        training: GroupedData,
        test: DataMatrix,
        truth: Vec<String>,
    },
    Functional {
        training: FunctionalGroupedData,
        test: Vec<DataMatrix>,
        truth: Vec<String>,
    },
}

fn prepare(spec: &ScenarioSpec, gen_seed: u64, mis_seed: u64) -> Result<Prepared> {
    let simulated = |sim: SimulatedData| -> Result<Prepared> {
        Ok(Prepared::Multivariate {
            training: mislabel(&sim.training, spec.mislabel_fraction, mis_seed)?,
            test: sim.test,
            truth: sim.test_labels,
        })
    };
    match &spec.scenario {
        Scenario::Setting1 {
            train_sizes,
            test_per_group,
        } => simulated(gen_setting1_sized(*train_sizes, *test_per_group, gen_seed)?),
        Scenario::Setting2 {
            train_sizes,
            test_per_group,
        } => simulated(gen_setting2_sized(*train_sizes, *test_per_group, gen_seed)?),
        Scenario::Setting3 {
            train_sizes,
            test_per_group,
        } => simulated(gen_setting3_sized(*train_sizes, *test_per_group, gen_seed)?),
        Scenario::Split {
            rows,
            labels,
            training_size,
            stratified,
            standardize,
        } => {
            let (train_idx, test_idx) =
                split_indices(labels, *training_size, *stratified, gen_seed)?;
            let mut train_rows = rows.select_rows(&train_idx)?;
            let mut test_rows = rows.select_rows(&test_idx)?;
            if *standardize {
                test_rows = standardize_by(&train_rows, &test_rows)?;
                train_rows = standardize_by(&train_rows, &train_rows)?;
            }
            let train_labels: Vec<String> =
                train_idx.iter().map(|&i| labels[i].clone()).collect();
            let truth: Vec<String> = test_idx.iter().map(|&i| labels[i].clone()).collect();
            let grouped = GroupedData::from_rows(&train_rows, &train_labels)?;
            Ok(Prepared::Multivariate {
                training: mislabel(&grouped, spec.mislabel_fraction, mis_seed)?,
                test: test_rows,
                truth,
            })
        }
        Scenario::FunctionalSplit {
            sample,
            labels,
            train_sizes,
        } => {
            let mut classes = labels.to_vec();
            classes.sort();
            classes.dedup();
            let mut rng = stream_rng(gen_seed, 0);
            let mut train_idx = Vec::new();
            for (class, &k) in classes.iter().zip(train_sizes) {
                let members: Vec<usize> = labels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| *l == class)
                    .map(|(i, _)| i)
                    .collect();
                for local in index_sample(&mut rng, members.len(), k) {
                    train_idx.push(members[local]);
                }
            }
            train_idx.sort_unstable();
            let mut in_train = vec![false; labels.len()];
            for &i in &train_idx {
                in_train[i] = true;
            }
            let train_sample = sample.select_curves(&train_idx)?;
            let train_labels: Vec<String> =
                train_idx.iter().map(|&i| labels[i].clone()).collect();
            let grouped = FunctionalGroupedData::from_labeled(&train_sample, &train_labels)?;
            let mut test = Vec::new();
            let mut truth = Vec::new();
            for i in 0..labels.len() {
                if !in_train[i] {
                    test.push(sample.curve(i).clone());
                    truth.push(labels[i].clone());
                }
            }
            Ok(Prepared::Functional {
                training: mislabel_curves(&grouped, spec.mislabel_fraction, mis_seed)?,
                test,
                truth,
            })
        }
    }
}

/// One replication: generate, contaminate, then fit and score every
/// method on the clean-labelled test points. Returns the per-method
/// percentages and the per-phase durations (generate first).
fn run_replication(
    spec: &ScenarioSpec,
    methods: &[MethodSpec],
    replication: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rng = stream_rng(spec.seed, replication as u64 + 1);
    let gen_seed = child_seed(&mut rng);
    let mis_seed = child_seed(&mut rng);
    let fit_seed = child_seed(&mut rng);

    let t_gen = Instant::now();
    let prepared = prepare(spec, gen_seed, mis_seed)?;
    let mut phase_ms = vec![t_gen.elapsed().as_secs_f64() * 1e3];

    let mut errors = Vec::with_capacity(methods.len());
    for m in methods {
        let t = Instant::now();
        let err = match &prepared {
            Prepared::Multivariate {
                training,
                test,
                truth,
            } => {
                let model = ClassifierModel::fit_opts(
                    training,
                    m.method,
                    m.measure,
                    &FitOptions::default(),
                    fit_seed,
                )?;
                let idx = model.predict_batch(test)?;
                let predicted: Vec<String> =
                    idx.into_iter().map(|g| model.labels()[g].clone()).collect();
                let counts: Vec<usize> = (0..training.n_groups())
                    .map(|g| training.group(g).nrows())
                    .collect();
                let total: usize = counts.iter().sum();
                let priors: Vec<f64> =
                    counts.iter().map(|&c| c as f64 / total as f64).collect();
                misclassification_rate(&predicted, truth, training.names(), &priors)?
            }
            Prepared::Functional {
                training,
                test,
                truth,
            } => {
                let model = FunctionalClassifier::fit(
                    training,
                    m.method,
                    m.measure,
                    &FitOptions::default(),
                    fit_seed,
                )?;
                let idx = model.predict_batch(test)?;
                let predicted: Vec<String> =
                    idx.into_iter().map(|g| model.labels()[g].clone()).collect();
                let counts: Vec<usize> = (0..training.n_groups())
                    .map(|g| training.group(g).n_curves())
                    .collect();
                let total: usize = counts.iter().sum();
                let priors: Vec<f64> =
                    counts.iter().map(|&c| c as f64 / total as f64).collect();
                misclassification_rate(&predicted, truth, training.names(), &priors)?
            }
        };
        errors.push(err);
        phase_ms.push(t.elapsed().as_secs_f64() * 1e3);
    }
    Ok((errors, phase_ms))
}

/// Runs `spec.replications` independent replications of the scenario
/// and scores every method in `methods` on each. Replications run
/// concurrently on their own RNG streams; any failure is reported with
/// the replication that produced it.
pub fn run_benchmark(spec: &ScenarioSpec, methods: &[MethodSpec]) -> Result<BenchResult> {
    spec.validate()?;
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no methods requested".into()));
    }
    for m in methods {
        m.method.check_measure(m.measure)?;
    }
    let names: Vec<String> = methods.iter().map(MethodSpec::name).collect();

    let wall = Instant::now();
    let outcomes = map_indexed(spec.replications, |r| run_replication(spec, methods, r));

    let mut errors = vec![Vec::with_capacity(spec.replications); methods.len()];
    let mut phase_totals = vec![0.0; methods.len() + 1];
    for (r, outcome) in outcomes.into_iter().enumerate() {
        let (errs, phases) = outcome.map_err(|e| Error::AtReplication {
            index: r,
            source: Box::new(e),
        })?;
        for (m, e) in errs.into_iter().enumerate() {
            errors[m].push(e);
        }
        for (slot, ms) in phase_totals.iter_mut().zip(phases) {
            *slot += ms;
        }
    }

    let summaries = names
        .iter()
        .zip(&errors)
        .map(|(name, errs)| {
            let mut sorted = errs.clone();
            sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite percentages"));
            MethodSummary {
                method: name.clone(),
                min: sorted[0],
                q1: quantile_type7(&sorted, 0.25),
                median: quantile_type7(&sorted, 0.5),
                q3: quantile_type7(&sorted, 0.75),
                max: sorted[sorted.len() - 1],
            }
        })
        .collect();

    let mut phase_ms = vec![("generate".to_string(), phase_totals[0])];
    for (name, &ms) in names.iter().zip(&phase_totals[1..]) {
        phase_ms.push((name.clone(), ms));
    }

    Ok(BenchResult {
        methods: names,
        errors,
        summaries,
        scenario: spec.scenario.name().to_string(),
        replications: spec.replications,
        mislabel_fraction: spec.mislabel_fraction,
        seed: spec.seed,
        wall_ms: wall.elapsed().as_secs_f64() * 1e3,
        phase_ms,
    })
}
