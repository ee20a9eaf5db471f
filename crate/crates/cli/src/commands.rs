//! The four subcommands: fitting a model, labelling new data with it,
//! running replicated benchmarks, and inspecting bag distances.
//!
//! Each command validates its arguments before touching any file (bad
//! arguments exit 2), loads data (failures exit 1), computes, and only
//! then writes artifacts — a failed run never leaves partial output.
//! Every artifact embeds the result-defining configuration.

use crate::config::{parse_usize_list, usage, CliError, Echo, Settings};
use distspace::bench::{run_benchmark, BenchResult, MethodSpec, Scenario, ScenarioSpec};
use distspace::classify::{ClassifierModel, FitOptions, GroupedData};
use distspace::data::{fetch_uci_banknote, load_csv, load_points_csv, load_ucr};
use distspace::dist::GroupModel;
use distspace::matrix::DataMatrix;
use std::fs;
use std::path::{Path, PathBuf};

/// Configures the global thread pool: an explicit `--threads` wins,
/// otherwise the command's default (benchmarks use every core, the
/// other commands one). 0 means "let the pool decide".
fn init_threads(requested: Option<usize>, default: Option<usize>) {
    if let Some(n) = requested.or(default) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))
}

fn write_artifact(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Inserts the echoed configuration into a JSON document's top level.
fn with_config(json_text: &str, echo: &Echo) -> Result<String, CliError> {
    let mut doc: serde_json::Value =
        serde_json::from_str(json_text).map_err(|e| CliError::Runtime(e.to_string()))?;
    doc.as_object_mut()
        .expect("artifact documents are objects")
        .insert("config".into(), echo.json_object());
    serde_json::to_string_pretty(&doc).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Shared flags for commands that fit or evaluate on a labelled CSV.
pub struct TrainArgs {
    pub data: Option<PathBuf>,
    pub label_col: Option<String>,
    pub method: Option<String>,
    pub measure: Option<String>,
    pub k: Option<usize>,
    pub k_grid: Option<String>,
    pub rescale: Option<bool>,
    pub standardize: Option<bool>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub fn cmd_train(
    args: TrainArgs,
    config: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    const KEYS: &[&str] = &[
        "data",
        "label_col",
        "method",
        "measure",
        "k",
        "k_grid",
        "rescale",
        "standardize",
        "seed",
        "out",
        "threads",
    ];
    let mut s = Settings::load(
        config,
        KEYS,
        &[("label_col", "label"), ("seed", "0")],
    )?;
    s.override_with("data", args.data.map(|p| p.display().to_string()));
    s.override_with("label_col", args.label_col);
    s.override_with("method", args.method);
    s.override_with("measure", args.measure);
    s.override_with("k", args.k.map(|v| v.to_string()));
    s.override_with("k_grid", args.k_grid);
    s.override_with("rescale", args.rescale.map(|v| v.to_string()));
    s.override_with("standardize", args.standardize.map(|v| v.to_string()));
    s.override_with("seed", args.seed.map(|v| v.to_string()));
    s.override_with("out", args.out.map(|p| p.display().to_string()));
    init_threads(threads.or(s.get_parsed("threads")?), Some(1));

    // Everything checkable without data comes first.
    let method_text = s.require("method")?.to_string();
    let spec_text = match s.get("measure") {
        Some(m) => format!("{method_text}({m})"),
        None => method_text,
    };
    let spec = MethodSpec::parse(&spec_text).map_err(|e| usage(e.to_string()))?;
    let k = s.get_parsed::<usize>("k")?;
    let k_grid = match s.get("k_grid") {
        Some(text) => Some(parse_usize_list(text, "k_grid")?),
        None => None,
    };
    let rescale = s.get_bool("rescale", false)?;
    let standardize = s.get_bool("standardize", false)?;
    let seed: u64 = s.get_parsed("seed")?.unwrap_or(0);
    let label_col = s.require("label_col")?.to_string();
    let data_path = PathBuf::from(s.require("data")?);
    let out_path = PathBuf::from(s.require("out")?);

    let mut echo = Echo::default();
    echo.put("data", data_path.display());
    echo.put("label_col", &label_col);
    echo.put("method", spec.method);
    echo.put_opt("measure", spec.measure);
    echo.put_opt("k", k);
    echo.put_opt("k_grid", s.get("k_grid"));
    echo.put("rescale", rescale);
    echo.put("standardize", standardize);
    echo.put("seed", seed);

    let loaded = load_csv(&data_path, &label_col, standardize)?;
    let n = loaded.rows.nrows();
    let grouped = GroupedData::from_rows(&loaded.rows, &loaded.labels)?;
    let opts = FitOptions {
        k,
        k_grid,
        rescale,
    };
    let model = ClassifierModel::fit_opts(&grouped, spec.method, spec.measure, &opts, seed)?;

    let mut text = with_config(&model.to_json()?, &echo)?;
    text.push('\n');
    write_artifact(&out_path, &text)?;

    println!(
        "fitted {}: {} groups, {n} observations",
        spec.name(),
        model.labels().len()
    );
    if let Some(k) = model.chosen_k() {
        match model.loo_errors() {
            Some(e) => println!("k = {k} (leave-one-out errors: {e}/{n})"),
            None => println!("k = {k} (fixed)"),
        }
    }
    println!("model written to {}", out_path.display());
    Ok(())
}

pub struct ClassifyArgs {
    pub model: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub label_col: Option<String>,
    pub out: Option<PathBuf>,
}

pub fn cmd_classify(
    args: ClassifyArgs,
    config: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    const KEYS: &[&str] = &["model", "data", "label_col", "out", "threads"];
    let mut s = Settings::load(config, KEYS, &[])?;
    s.override_with("model", args.model.map(|p| p.display().to_string()));
    s.override_with("data", args.data.map(|p| p.display().to_string()));
    s.override_with("label_col", args.label_col);
    s.override_with("out", args.out.map(|p| p.display().to_string()));
    init_threads(threads.or(s.get_parsed("threads")?), Some(1));

    let model_path = PathBuf::from(s.require("model")?);
    let data_path = PathBuf::from(s.require("data")?);
    let out_path = PathBuf::from(s.require("out")?);
    let label_col = s.get("label_col").map(String::from);

    let mut echo = Echo::default();
    echo.put("data", data_path.display());
    echo.put_opt("label_col", label_col.as_deref());
    echo.put("model", model_path.display());

    let model = ClassifierModel::from_json(&read_to_string(&model_path)?)?;
    let rows = match &label_col {
        Some(col) => load_csv(&data_path, col, false)?.rows,
        None => load_points_csv(&data_path)?.rows,
    };
    if rows.ncols() != model.dim() {
        return Err(CliError::Runtime(format!(
            "model expects {} features but {} has {}",
            model.dim(),
            data_path.display(),
            rows.ncols()
        )));
    }

    let predicted = model.predict_batch(&rows)?;
    let has_coords = model.training().is_some() && model.measure().is_some();
    let mut text = echo.csv_header();
    text.push_str("row,label");
    if has_coords {
        let measure = model.measure().unwrap();
        for g in model.labels() {
            text.push_str(&format!(",{measure}_{g}"));
        }
    }
    text.push('\n');
    for (i, &g) in predicted.iter().enumerate() {
        text.push_str(&format!("{i},{}", model.labels()[g]));
        if has_coords {
            for c in model.transform_coords(rows.row(i))?.unwrap() {
                text.push_str(&format!(",{c}"));
            }
        }
        text.push('\n');
    }
    write_artifact(&out_path, &text)?;
    println!(
        "wrote {} predictions to {}",
        predicted.len(),
        out_path.display()
    );
    Ok(())
}

pub struct BenchArgs {
    pub setting: Option<String>,
    pub data: Option<PathBuf>,
    pub fetch_banknote: Option<bool>,
    pub ucr: Option<PathBuf>,
    pub label_col: Option<String>,
    pub train_size: Option<usize>,
    pub train_sizes: Option<String>,
    pub test_per_group: Option<usize>,
    pub stratified: Option<bool>,
    pub standardize: Option<bool>,
    pub runs: Option<usize>,
    pub mislabel: Option<f64>,
    pub methods: Option<String>,
    pub seed: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub banknote_url: Option<String>,
    pub out: Option<PathBuf>,
}

enum Source {
    Setting(u8),
    Csv(PathBuf),
    Banknote,
    Ucr(PathBuf),
}

pub fn cmd_bench(
    args: BenchArgs,
    config: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    const KEYS: &[&str] = &[
        "setting",
        "data",
        "fetch_banknote",
        "ucr",
        "label_col",
        "train_size",
        "train_sizes",
        "test_per_group",
        "stratified",
        "standardize",
        "runs",
        "mislabel",
        "methods",
        "seed",
        "cache_dir",
        "banknote_url",
        "out",
        "threads",
    ];
    let mut s = Settings::load(
        config,
        KEYS,
        &[
            ("label_col", "label"),
            ("runs", "200"),
            ("mislabel", "0"),
            ("seed", "0"),
        ],
    )?;
    s.override_with("setting", args.setting);
    s.override_with("data", args.data.map(|p| p.display().to_string()));
    s.override_with("fetch_banknote", args.fetch_banknote.map(|v| v.to_string()));
    s.override_with("ucr", args.ucr.map(|p| p.display().to_string()));
    s.override_with("label_col", args.label_col);
    s.override_with("train_size", args.train_size.map(|v| v.to_string()));
    s.override_with("train_sizes", args.train_sizes);
    s.override_with("test_per_group", args.test_per_group.map(|v| v.to_string()));
    s.override_with("stratified", args.stratified.map(|v| v.to_string()));
    s.override_with("standardize", args.standardize.map(|v| v.to_string()));
    s.override_with("runs", args.runs.map(|v| v.to_string()));
    s.override_with("mislabel", args.mislabel.map(|v| v.to_string()));
    s.override_with("methods", args.methods);
    s.override_with("seed", args.seed.map(|v| v.to_string()));
    s.override_with("cache_dir", args.cache_dir.map(|p| p.display().to_string()));
    s.override_with("banknote_url", args.banknote_url);
    s.override_with("out", args.out.map(|p| p.display().to_string()));
    init_threads(threads.or(s.get_parsed("threads")?), None);

    // --- usage validation, no data touched yet ---
    let mut sources = Vec::new();
    if let Some(text) = s.get("setting") {
        let n: u8 = text
            .parse()
            .ok()
            .filter(|n| (1..=3).contains(n))
            .ok_or_else(|| {
                usage(format!("unknown setting '{text}'; the built-in settings are 1, 2, 3"))
            })?;
        sources.push(Source::Setting(n));
    }
    if let Some(p) = s.get("data") {
        sources.push(Source::Csv(PathBuf::from(p)));
    }
    if s.get_bool("fetch_banknote", false)? {
        sources.push(Source::Banknote);
    }
    if let Some(p) = s.get("ucr") {
        sources.push(Source::Ucr(PathBuf::from(p)));
    }
    if sources.len() != 1 {
        return Err(usage(
            "choose exactly one data source: --setting, --data, --fetch-banknote, or --ucr",
        ));
    }
    let source = sources.pop().unwrap();

    let methods_text = s.require("methods")?;
    let methods: Vec<MethodSpec> = methods_text
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| MethodSpec::parse(p).map_err(|e| usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    if methods.is_empty() {
        return Err(usage("the methods list is empty"));
    }
    let methods_echo = methods
        .iter()
        .map(MethodSpec::name)
        .collect::<Vec<_>>()
        .join(",");

    let runs: usize = s.get_parsed("runs")?.unwrap_or(200);
    if runs == 0 {
        return Err(usage("need at least one replication"));
    }
    let mislabel: f64 = s.get_parsed("mislabel")?.unwrap_or(0.0);
    if !mislabel.is_finite() || !(0.0..1.0).contains(&mislabel) {
        return Err(usage(format!(
            "the mislabelled fraction must lie in [0, 1), got {mislabel}"
        )));
    }
    let seed: u64 = s.get_parsed("seed")?.unwrap_or(0);
    let out_dir = PathBuf::from(s.require("out")?);

    let mut echo = Echo::default();
    echo.put("methods", &methods_echo);
    echo.put("mislabel", mislabel);
    echo.put("runs", runs);
    echo.put("seed", seed);

    // --- per-source parameters, then data loading ---
    let scenario = match source {
        Source::Setting(n) => {
            let defaults: &[usize] = match n {
                1 => &[50, 50, 50],
                2 => &[150, 100],
                _ => &[150, 250],
            };
            let sizes = match s.get("train_sizes") {
                Some(text) => {
                    let sizes = parse_usize_list(text, "train_sizes")?;
                    if sizes.len() != defaults.len() {
                        return Err(usage(format!(
                            "setting {n} has {} groups but {} training sizes were given",
                            defaults.len(),
                            sizes.len()
                        )));
                    }
                    sizes
                }
                None => defaults.to_vec(),
            };
            let test_per_group: usize = s.get_parsed("test_per_group")?.unwrap_or(500);
            echo.put("setting", n);
            echo.put("test_per_group", test_per_group);
            echo.put(
                "train_sizes",
                sizes
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            );
            match n {
                1 => Scenario::Setting1 {
                    train_sizes: [sizes[0], sizes[1], sizes[2]],
                    test_per_group,
                },
                2 => Scenario::Setting2 {
                    train_sizes: [sizes[0], sizes[1]],
                    test_per_group,
                },
                _ => Scenario::Setting3 {
                    train_sizes: [sizes[0], sizes[1]],
                    test_per_group,
                },
            }
        }
        Source::Csv(path) => {
            let training_size = s
                .get_parsed::<usize>("train_size")?
                .ok_or_else(|| usage("--data needs --train-size"))?;
            let label_col = s.require("label_col")?.to_string();
            let stratified = s.get_bool("stratified", false)?;
            let standardize = s.get_bool("standardize", false)?;
            echo.put("data", path.display());
            echo.put("label_col", &label_col);
            echo.put("standardize", standardize);
            echo.put("stratified", stratified);
            echo.put("train_size", training_size);
            let loaded = load_csv(&path, &label_col, false)?;
            Scenario::Split {
                rows: loaded.rows,
                labels: loaded.labels,
                training_size,
                stratified,
                standardize,
            }
        }
        Source::Banknote => {
            let training_size = s.get_parsed::<usize>("train_size")?.unwrap_or(500);
            let stratified = s.get_bool("stratified", false)?;
            let standardize = s.get_bool("standardize", true)?;
            echo.put_opt("banknote_url", s.get("banknote_url"));
            echo.put("fetch_banknote", true);
            echo.put("standardize", standardize);
            echo.put("stratified", stratified);
            echo.put("train_size", training_size);
            let cache_dir = s.get("cache_dir").map(PathBuf::from);
            let (rows, labels) = fetch_uci_banknote(s.get("banknote_url"), cache_dir.as_deref())?;
            Scenario::Split {
                rows,
                labels,
                training_size,
                stratified,
                standardize,
            }
        }
        Source::Ucr(path) => {
            let sizes_text = s
                .get("train_sizes")
                .ok_or_else(|| usage("--ucr needs --train-sizes (one per group)"))?;
            let train_sizes = parse_usize_list(sizes_text, "train_sizes")?;
            echo.put(
                "train_sizes",
                train_sizes
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            );
            echo.put("ucr", path.display());
            let loaded = load_ucr(&path)?;
            Scenario::FunctionalSplit {
                sample: loaded.sample,
                labels: loaded.labels,
                train_sizes,
            }
        }
    };

    let spec = ScenarioSpec {
        scenario,
        replications: runs,
        mislabel_fraction: mislabel,
        seed,
    };
    let result = run_benchmark(&spec, &methods)?;

    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut csv = echo.csv_header();
    csv.push_str(&result.to_csv());
    write_artifact(&out_dir.join("results.csv"), &csv)?;
    let mut json = with_config(&result.summary_json()?, &echo)?;
    json.push('\n');
    write_artifact(&out_dir.join("summary.json"), &json)?;

    print_summary(&result);
    println!("results written to {}", out_dir.display());
    Ok(())
}

fn print_summary(result: &BenchResult) {
    println!(
        "{:<28} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "method", "min", "q1", "median", "q3", "max"
    );
    for s in result.summaries() {
        println!(
            "{:<28} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
            s.method, s.min, s.q1, s.median, s.q3, s.max
        );
    }
}

pub struct BagdistArgs {
    pub data: Option<PathBuf>,
    pub label_col: Option<String>,
    pub query: Option<PathBuf>,
    pub measures: Option<String>,
    pub polygon: Option<bool>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub fn cmd_bagdist(
    args: BagdistArgs,
    config: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    const KEYS: &[&str] = &[
        "data",
        "label_col",
        "query",
        "measures",
        "polygon",
        "seed",
        "out",
        "threads",
    ];
    let mut s = Settings::load(config, KEYS, &[("measures", "bd"), ("seed", "0")])?;
    s.override_with("data", args.data.map(|p| p.display().to_string()));
    s.override_with("label_col", args.label_col);
    s.override_with("query", args.query.map(|p| p.display().to_string()));
    s.override_with("measures", args.measures);
    s.override_with("polygon", args.polygon.map(|v| v.to_string()));
    s.override_with("seed", args.seed.map(|v| v.to_string()));
    s.override_with("out", args.out.map(|p| p.display().to_string()));
    init_threads(threads.or(s.get_parsed("threads")?), Some(1));

    let measures: Vec<String> = s
        .require("measures")?
        .split(',')
        .map(|m| m.trim().to_ascii_lowercase())
        .filter(|m| !m.is_empty())
        .collect();
    if measures.is_empty() {
        return Err(usage("the measures list is empty"));
    }
    for m in &measures {
        if !matches!(m.as_str(), "bd" | "sdo" | "ao") {
            return Err(usage(format!(
                "unknown measure '{m}'; bagdist reports bd, sdo, ao"
            )));
        }
    }
    let want_polygon = s.get_bool("polygon", false)?;
    let seed: u64 = s.get_parsed("seed")?.unwrap_or(0);
    let data_path = PathBuf::from(s.require("data")?);
    let query_path = PathBuf::from(s.require("query")?);
    let label_col = s.get("label_col").map(String::from);
    let out_path = s.get("out").map(PathBuf::from);

    let mut echo = Echo::default();
    echo.put("data", data_path.display());
    echo.put_opt("label_col", label_col.as_deref());
    echo.put("measures", measures.join(","));
    echo.put("polygon", want_polygon);
    echo.put("query", query_path.display());
    echo.put("seed", seed);

    let rows = match &label_col {
        Some(col) => load_csv(&data_path, col, false)?.rows,
        None => load_points_csv(&data_path)?.rows,
    };
    let queries: DataMatrix = load_points_csv(&query_path)?.rows;
    let model = GroupModel::fit(rows, seed)?;

    let ring: Option<Vec<[f64; 2]>> = if want_polygon {
        match &model.bag().polygon {
            Some(p) => Some(p.closed_ring()),
            None => {
                return Err(CliError::Runtime(format!(
                    "the bag polygon exists only for bivariate data; \
                     this sample has {} columns",
                    model.sample().ncols()
                )))
            }
        }
    } else {
        None
    };

    let mut query_docs = Vec::new();
    for i in 0..queries.nrows() {
        let point = queries.row(i);
        let mut line = format!("query {i}:");
        let mut doc = serde_json::Map::new();
        doc.insert("point".into(), serde_json::json!(point));
        for m in &measures {
            let value = match m.as_str() {
                "bd" => model.bagdistance(point)?,
                "sdo" => model.sdo(point)?,
                _ => model.ao(point)?,
            };
            line.push_str(&format!(" {m}={value}"));
            doc.insert(m.clone(), serde_json::json!(value));
        }
        println!("{line}");
        query_docs.push(serde_json::Value::Object(doc));
    }

    if let Some(out_path) = out_path {
        let mut doc = serde_json::Map::new();
        doc.insert("center".into(), serde_json::json!(model.center()));
        doc.insert("config".into(), echo.json_object());
        if let Some(ring) = &ring {
            doc.insert("polygon".into(), serde_json::json!(ring));
        }
        doc.insert("queries".into(), serde_json::Value::Array(query_docs));
        let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        text.push('\n');
        write_artifact(&out_path, &text)?;
        println!("report written to {}", out_path.display());
    }
    Ok(())
}
