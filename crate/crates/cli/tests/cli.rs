//! End-to-end tests of the `distspace` binary: exit codes (0 success,
//! 1 data/runtime, 2 usage), the configuration echo embedded in every
//! artifact, and byte-level determinism of seeded outputs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Two well-separated planar clusters, five rows each, label column
/// last.
fn write_toy_csv(path: &Path) {
    let mut text = String::from("x,y,label\n");
    for (x, y) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.4, 0.6)] {
        text.push_str(&format!("{x},{y},a\n"));
    }
    for (x, y) in [(5.0, 5.0), (6.0, 5.0), (6.0, 6.0), (5.0, 6.0), (5.5, 5.4)] {
        text.push_str(&format!("{x},{y},b\n"));
    }
    fs::write(path, text).unwrap();
}

/// The published banknote table's exact shape (1372 rows, 762 zeros
/// then 610 ones) with synthetic values, for exercising the cache path
/// without a network.
fn write_fake_banknote(path: &Path) {
    let mut text = String::new();
    for i in 0..1372 {
        let v = i as f64 * 0.01;
        let label = if i < 762 { 0 } else { 1 };
        text.push_str(&format!("{v},{},{},{},{label}\n", v + 0.5, v - 0.25, v * 2.0));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn train_writes_a_versioned_model_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    write_toy_csv(&data);
    let model1 = dir.path().join("model1.json");
    let model2 = dir.path().join("model2.json");

    let out = run(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--method",
        "mindist",
        "--measure",
        "bd",
        "--seed",
        "7",
        "--out",
        model1.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("mindist(bd)"));

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&model1).unwrap()).unwrap();
    assert_eq!(doc["version"], "1");
    assert_eq!(doc["method"], "mindist");
    assert_eq!(doc["config"]["method"], "mindist");
    assert_eq!(doc["config"]["measure"], "bd");
    assert_eq!(doc["config"]["seed"], "7");
    assert_eq!(doc["config"]["label_col"], "label");
    assert!(doc["config"].get("out").is_none());
    assert!(doc["config"].get("threads").is_none());

    let out = run(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--method",
        "mindist",
        "--measure",
        "bd",
        "--seed",
        "7",
        "--out",
        model2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read(&model1).unwrap(), fs::read(&model2).unwrap());
}

#[test]
fn train_rejects_bad_combinations_as_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    write_toy_csv(&data);
    let model = dir.path().join("model.json");

    // A depth where a distance belongs: rejected before any data is read.
    for args in [
        vec!["--method", "distspace", "--measure", "hd"],
        vec!["--method", "maxdepth"],
        vec!["--method", "bogus", "--measure", "bd"],
        vec!["--method", "knn", "--measure", "bd"],
    ] {
        let mut full = vec!["train", "--data", data.to_str().unwrap()];
        full.extend(args.iter());
        full.extend(["--out", model.to_str().unwrap()]);
        let out = run(&full);
        assert_eq!(code(&out), 2, "args {args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
        assert!(!model.exists(), "no artifact after a usage error");
    }
}

#[test]
fn train_reports_the_cross_validated_k() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    write_toy_csv(&data);
    let model = dir.path().join("model.json");

    let out = run(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--method",
        "distspace",
        "--measure",
        "sdo",
        "--seed",
        "3",
        "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("k = "), "stdout: {text}");
    assert!(text.contains("leave-one-out"), "stdout: {text}");
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert!(doc["k"].is_number());
}

#[test]
fn classify_writes_labels_and_group_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    write_toy_csv(&data);
    let model = dir.path().join("model.json");
    let pred = dir.path().join("pred.csv");

    let out = run(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--method",
        "distspace",
        "--measure",
        "sdo",
        "--seed",
        "3",
        "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let out = run(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--label-col",
        "label",
        "--out",
        pred.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("predictions"));

    let text = fs::read_to_string(&pred).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with(&format!("# data={}", data.display())));
    assert_eq!(lines[1], "# label_col=label");
    assert!(lines[2].starts_with(&format!("# model={}", model.display())));
    // Two groups, so the transform plane has exactly two coordinates.
    assert_eq!(lines[3], "row,label,sdo_a,sdo_b");
    let body = &lines[4..];
    assert_eq!(body.len(), 10);
    for (i, line) in body.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        assert_eq!(fields[0], i.to_string());
        assert_eq!(fields[1], if i < 5 { "a" } else { "b" });
        assert!(fields[2].parse::<f64>().unwrap().is_finite());
        assert!(fields[3].parse::<f64>().unwrap().is_finite());
    }

    // Plain kNN has no transform, so only the label column is emitted.
    let kmodel = dir.path().join("knn.json");
    let kpred = dir.path().join("kpred.csv");
    let out = run(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--method",
        "knn",
        "--seed",
        "3",
        "--out",
        kmodel.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let out = run(&[
        "classify",
        "--model",
        kmodel.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--label-col",
        "label",
        "--out",
        kpred.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let ktext = fs::read_to_string(&kpred).unwrap();
    let header = ktext.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "row,label");
}

#[test]
fn classify_fails_cleanly_on_bad_model_or_width() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    write_toy_csv(&data);
    let pred = dir.path().join("pred.csv");

    // Malformed model JSON is a data error, not a usage error.
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{oops").unwrap();
    let out = run(&[
        "classify",
        "--model",
        broken.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--label-col",
        "label",
        "--out",
        pred.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    assert!(!stderr(&out).is_empty());

    // Width mismatch between the model and the query table.
    let model = dir.path().join("model.json");
    let out = run(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--method",
        "knn",
        "--seed",
        "1",
        "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let wide = dir.path().join("wide.csv");
    fs::write(&wide, "x,y,z\n1,2,3\n4,5,6\n").unwrap();
    let out = run(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        "--data",
        wide.to_str().unwrap(),
        "--out",
        pred.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
}

#[test]
fn bench_setting_one_writes_frozen_config_and_deterministic_results() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");

    let args_for = |out_dir: &Path, threads: &str| {
        vec![
            "bench".to_string(),
            "--setting".into(),
            "1".into(),
            "--runs".into(),
            "3".into(),
            "--mislabel".into(),
            "0.05".into(),
            "--methods".into(),
            "maxdepth(spd),knn".into(),
            "--seed".into(),
            "5".into(),
            "--threads".into(),
            threads.into(),
            "--out".into(),
            out_dir.display().to_string(),
        ]
    };
    let a1 = args_for(&out1, "2");
    let out = run(&a1.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("median"));

    let text = fs::read_to_string(out1.join("results.csv")).unwrap();
    let expected_head = "\
# methods=maxdepth(spd),knn
# mislabel=0.05
# runs=3
# seed=5
# setting=1
# test_per_group=500
# train_sizes=50,50,50
replication,method,error_pct
";
    assert!(
        text.starts_with(expected_head),
        "results.csv began:\n{}",
        &text[..text.len().min(400)]
    );
    let body: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("replication"))
        .collect();
    assert_eq!(body.len(), 6);
    assert!(body[0].starts_with("0,maxdepth(spd),"));
    assert!(body[1].starts_with("0,knn,"));
    assert!(body[5].starts_with("2,knn,"));

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out1.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["setting"], "1");
    assert_eq!(summary["config"]["mislabel"], "0.05");
    assert_eq!(summary["scenario"], "setting1");
    assert_eq!(summary["replications"], 3);
    assert_eq!(summary["methods"][0]["name"], "maxdepth(spd)");
    assert!(summary["methods"][0]["quantiles"]["median"].is_number());
    assert!(summary["timings"]["wall_ms"].is_number());

    // A different thread count must not change a single byte of the CSV.
    let a2 = args_for(&out2, "1");
    let out = run(&a2.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        fs::read(out1.join("results.csv")).unwrap(),
        fs::read(out2.join("results.csv")).unwrap()
    );
}

#[test]
fn bench_usage_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let ucr = dir.path().join("curves.txt");
    fs::write(&ucr, "1,0.1,0.2\n2,5.0,5.1\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        // Settings beyond the three built-in ones are not a thing.
        vec!["--setting", "4", "--methods", "knn"],
        vec!["--setting", "0", "--methods", "knn"],
        vec!["--setting", "banana", "--methods", "knn"],
        // A depth measure under a distance-only rule.
        vec!["--setting", "1", "--methods", "maxdepth(bd)"],
        // No data source at all, and two at once.
        vec!["--methods", "knn"],
        vec!["--setting", "1", "--ucr", ucr.to_str().unwrap(), "--methods", "knn"],
        // Mislabelling everything leaves nothing to learn from.
        vec!["--setting", "1", "--mislabel", "1.0", "--methods", "knn"],
    ];
    for extra in cases {
        let mut args: Vec<&str> = vec!["bench", "--runs", "1"];
        args.extend(extra.iter());
        args.extend(["--out", out_dir.to_str().unwrap()]);
        let out = run(&args);
        assert_eq!(code(&out), 2, "args {extra:?}: stderr {}", stderr(&out));
        assert!(!out_dir.exists(), "no artifacts after usage error {extra:?}");
    }
}

#[test]
fn bench_csv_source_honours_config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let mut text = String::from("a,b,label\n");
    for i in 0..30 {
        text.push_str(&format!("{},{},x\n", i as f64 * 0.01, (i % 7) as f64 * 0.01));
    }
    for i in 0..18 {
        text.push_str(&format!(
            "{},{},y\n",
            50.0 + i as f64 * 0.01,
            50.0 + (i % 5) as f64 * 0.01
        ));
    }
    fs::write(&data, text).unwrap();

    let cfg = dir.path().join("bench.conf");
    fs::write(
        &cfg,
        format!(
            "# benchmark configuration\n\
             data={}\n\
             label_col=label\n\
             train_size=16\n\
             stratified=true\n\
             methods=knn\n\
             runs=2\n\
             seed=3\n\
             mislabel=0\n",
            data.display()
        ),
    )
    .unwrap();

    let out_dir = dir.path().join("out1");
    let out = run(&[
        "bench",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let expected = format!(
        "# data={}\n\
         # label_col=label\n\
         # methods=knn\n\
         # mislabel=0\n\
         # runs=2\n\
         # seed=3\n\
         # standardize=false\n\
         # stratified=true\n\
         # train_size=16\n\
         replication,method,error_pct\n\
         0,knn,0\n\
         1,knn,0\n",
        data.display()
    );
    assert_eq!(
        fs::read_to_string(out_dir.join("results.csv")).unwrap(),
        expected
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["train_size"], "16");
    assert_eq!(summary["config"]["stratified"], "true");

    // A flag beats the same key in the file.
    let out_dir2 = dir.path().join("out2");
    let out = run(&[
        "bench",
        "--config",
        cfg.to_str().unwrap(),
        "--runs",
        "1",
        "--out",
        out_dir2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = fs::read_to_string(out_dir2.join("results.csv")).unwrap();
    assert!(text.contains("# runs=1\n"));
    let body: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("replication"))
        .collect();
    assert_eq!(body, ["0,knn,0"]);

    // Unknown keys are rejected, not silently ignored.
    let bad_cfg = dir.path().join("bad.conf");
    fs::write(&bad_cfg, "bogus=1\n").unwrap();
    let out = run(&[
        "bench",
        "--config",
        bad_cfg.to_str().unwrap(),
        "--setting",
        "1",
        "--runs",
        "1",
        "--methods",
        "knn",
        "--out",
        dir.path().join("out3").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bogus"));
}

#[test]
fn bench_ucr_and_banknote_sources_work_offline() {
    let dir = tempfile::tempdir().unwrap();

    // Curve archive: two flat, well-separated bundles.
    let ucr = dir.path().join("curves.txt");
    let mut text = String::new();
    for j in 0..8 {
        let v = j as f64 * 0.1;
        text.push_str(&format!("1,{v},{v},{v},{v}\n"));
    }
    for j in 0..8 {
        let v = 50.0 + j as f64 * 0.1;
        text.push_str(&format!("2,{v},{v},{v},{v}\n"));
    }
    fs::write(&ucr, text).unwrap();

    let out_dir = dir.path().join("ucr_out");
    let out = run(&[
        "bench",
        "--ucr",
        ucr.to_str().unwrap(),
        "--train-sizes",
        "5,5",
        "--methods",
        "knn",
        "--runs",
        "2",
        "--seed",
        "4",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(text.contains(&format!("# ucr={}\n", ucr.display())));
    assert!(text.contains("# train_sizes=5,5\n"));
    let body: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("replication"))
        .collect();
    assert_eq!(body, ["0,knn,0", "1,knn,0"]);

    // Banknote run against a pre-seeded cache and an unreachable URL:
    // the cache must satisfy both runs without any network.
    let cache = dir.path().join("cache");
    fs::create_dir_all(&cache).unwrap();
    write_fake_banknote(&cache.join("data_banknote_authentication.txt"));
    let bank_args = |out_dir: &Path| {
        vec![
            "bench".to_string(),
            "--fetch-banknote".into(),
            "--banknote-url".into(),
            "http://127.0.0.1:9/refused".into(),
            "--cache-dir".into(),
            cache.display().to_string(),
            "--train-size".into(),
            "300".into(),
            "--methods".into(),
            "knn".into(),
            "--runs".into(),
            "2".into(),
            "--seed".into(),
            "8".into(),
            "--out".into(),
            out_dir.display().to_string(),
        ]
    };
    let b1 = dir.path().join("bank1");
    let b2 = dir.path().join("bank2");
    let a1 = bank_args(&b1);
    let out = run(&a1.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = fs::read_to_string(b1.join("results.csv")).unwrap();
    assert!(text.contains("# fetch_banknote=true\n"));
    assert!(text.contains("# train_size=300\n"));
    assert!(text.contains("# standardize=true\n"));
    let a2 = bank_args(&b2);
    let out = run(&a2.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        fs::read(b1.join("results.csv")).unwrap(),
        fs::read(b2.join("results.csv")).unwrap()
    );
}

#[test]
fn bagdist_reports_distances_and_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("pts.csv");
    // Four corners plus an inner diamond, all antipodal about (0.5, 0.5):
    // the centre of the sample is then strictly inside the bag polygon, so
    // every ray from it crosses the boundary at a positive distance.
    fs::write(
        &data,
        "x,y\n0,0\n1,0\n1,1\n0,1\n0.5,0.8\n0.5,0.2\n0.8,0.5\n0.2,0.5\n",
    )
    .unwrap();
    let query = dir.path().join("query.csv");
    fs::write(&query, "x,y\n0.5,0.5\n4,4\n").unwrap();
    let report = dir.path().join("bag.json");

    let out = run(&[
        "bagdist",
        "--data",
        data.to_str().unwrap(),
        "--query",
        query.to_str().unwrap(),
        "--measures",
        "bd,sdo,ao",
        "--polygon",
        "--seed",
        "2",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("bd="));

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["config"]["measures"], "bd,sdo,ao");
    assert_eq!(doc["config"]["polygon"], "true");
    assert_eq!(doc["center"].as_array().unwrap().len(), 2);
    let queries = doc["queries"].as_array().unwrap();
    assert_eq!(queries.len(), 2);
    for q in queries {
        assert_eq!(q["point"].as_array().unwrap().len(), 2);
        for key in ["bd", "sdo", "ao"] {
            let v = q[key].as_f64().unwrap();
            assert!(v.is_finite() && v >= 0.0);
        }
    }
    // The far point is much further out than the central one.
    assert!(queries[1]["bd"].as_f64().unwrap() > queries[0]["bd"].as_f64().unwrap() + 1.0);

    // Closed CCW ring: first vertex repeated, positive signed area.
    let ring = doc["polygon"].as_array().unwrap();
    assert!(ring.len() >= 4);
    assert_eq!(ring[0], ring[ring.len() - 1]);
    let pts: Vec<(f64, f64)> = ring
        .iter()
        .map(|v| (v[0].as_f64().unwrap(), v[1].as_f64().unwrap()))
        .collect();
    let area2: f64 = pts
        .windows(2)
        .map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1)
        .sum();
    assert!(area2 > 0.0, "ring must be counter-clockwise");

    // The polygon exists only in two dimensions.
    let data3 = dir.path().join("pts3.csv");
    fs::write(&data3, "x,y,z\n0,0,0\n1,0,0\n0,1,0\n0,0,1\n1,1,1\n").unwrap();
    let out = run(&[
        "bagdist",
        "--data",
        data3.to_str().unwrap(),
        "--query",
        query.to_str().unwrap(),
        "--polygon",
        "--seed",
        "2",
    ]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));

    // Unknown measures are a usage error.
    let out = run(&[
        "bagdist",
        "--data",
        data.to_str().unwrap(),
        "--query",
        query.to_str().unwrap(),
        "--measures",
        "bd,hd",
    ]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
}
