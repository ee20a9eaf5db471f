//! File loaders: labelled CSV tables, label-first curve archives, and
//! the cached download of the banknote authentication dataset.

use crate::functional::FunctionalSample;
use crate::matrix::DataMatrix;
use crate::{Error, Result};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use super::split::column_med_mad;

/// Where the banknote authentication data is published.
pub const BANKNOTE_URL: &str =
    "https://archive.ics.uci.edu/ml/machine-learning-databases/00267/data_banknote_authentication.txt";

/// File name used inside the cache directory.
pub const BANKNOTE_FILENAME: &str = "data_banknote_authentication.txt";

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV_VAR: &str = "DISTSPACE_CACHE_DIR";

/// A parsed CSV table: numeric feature rows, the label per row, and the
/// feature column names in matrix order.
#[derive(Debug, Clone)]
pub struct LoadedCsv {
    pub rows: DataMatrix,
    pub labels: Vec<String>,
    pub feature_names: Vec<String>,
}

/// A parsed curve archive: one bundle of univariate curves on the grid
/// 1..=T, and the label per curve.
#[derive(Debug, Clone)]
pub struct LoadedCurves {
    pub sample: FunctionalSample,
    pub labels: Vec<String>,
}

/// A parsed unlabelled CSV table: every column is a numeric feature.
#[derive(Debug, Clone)]
pub struct LoadedPoints {
    pub rows: DataMatrix,
    pub feature_names: Vec<String>,
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        path: path_str(path),
        line,
        message: e.to_string(),
    }
}

/// Loads a header-first CSV file. The label column is chosen by header
/// name, or by 0-based position when no header matches and the
/// selector parses as an index. With `standardize`, every feature
/// column is mapped to (x - median) / MAD using this file's own rows;
/// a column without spread is rejected by name.
pub fn load_csv(path: &Path, label_column: &str, standardize: bool) -> Result<LoadedCsv> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .or_else(|| {
            label_column
                .parse::<usize>()
                .ok()
                .filter(|&i| i < headers.len())
        })
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "label column '{label_column}' not found among {:?}",
                headers.iter().collect::<Vec<_>>()
            ))
        })?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut row = Vec::with_capacity(feature_names.len());
        for (j, field) in record.iter().enumerate() {
            if j == label_idx {
                labels.push(field.to_string());
            } else {
                row.push(field.parse::<f64>().map_err(|_| Error::Parse {
                    path: path_str(path),
                    line,
                    message: format!(
                        "cannot parse '{field}' in column '{}' as a number",
                        &headers[j]
                    ),
                })?);
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut matrix = DataMatrix::from_rows(&rows)?;
    if standardize {
        let stats = column_med_mad(&matrix)?;
        if let Some(j) = stats.iter().position(|&(_, s)| s == 0.0) {
            return Err(Error::ZeroScale(format!(
                "column '{}' has zero MAD; cannot standardize",
                feature_names[j]
            )));
        }
        let scaled: Vec<Vec<f64>> = matrix
            .rows_iter()
            .map(|row| {
                row.iter()
                    .zip(&stats)
                    .map(|(x, &(med, scale))| (x - med) / scale)
                    .collect()
            })
            .collect();
        matrix = DataMatrix::from_rows(&scaled)?;
    }
    Ok(LoadedCsv {
        rows: matrix,
        labels,
        feature_names,
    })
}

/// Loads a header-first CSV file in which every column is a numeric
/// feature (no label column), e.g. query points for distance
/// evaluation.
pub fn load_points_csv(path: &Path) -> Result<LoadedPoints> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let feature_names: Vec<String> = headers.iter().map(str::to_string).collect();

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut row = Vec::with_capacity(feature_names.len());
        for (j, field) in record.iter().enumerate() {
            row.push(field.parse::<f64>().map_err(|_| Error::Parse {
                path: path_str(path),
                line,
                message: format!(
                    "cannot parse '{field}' in column '{}' as a number",
                    &headers[j]
                ),
            })?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(LoadedPoints {
        rows: DataMatrix::from_rows(&rows)?,
        feature_names,
    })
}

/// Loads a label-first curve archive: one record per line, the first
/// field an integer label, the remaining T fields the curve values.
/// Records may be comma- or whitespace-delimited (detected per line);
/// blank lines are skipped. The grid is 1..=T.
pub fn load_ucr(path: &Path) -> Result<LoadedCurves> {
    let text = fs::read_to_string(path)?;
    let mut labels = Vec::new();
    let mut curves: Vec<DataMatrix> = Vec::new();
    let mut expected_len: Option<usize> = None;
    for (lineno0, raw) in text.lines().enumerate() {
        let line_no = lineno0 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if trimmed.contains(',') {
            trimmed.split(',').map(str::trim).collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        if fields.len() < 2 {
            return Err(Error::Parse {
                path: path_str(path),
                line: line_no,
                message: "each record needs a label and at least one value".into(),
            });
        }
        if fields[0].parse::<i64>().is_err() {
            return Err(Error::Parse {
                path: path_str(path),
                line: line_no,
                message: format!("label '{}' is not an integer", fields[0]),
            });
        }
        let values: Vec<Vec<f64>> = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<f64>().map(|v| vec![v]).map_err(|_| Error::Parse {
                    path: path_str(path),
                    line: line_no,
                    message: format!("cannot parse '{f}' as a number"),
                })
            })
            .collect::<Result<_>>()?;
        match expected_len {
            None => expected_len = Some(values.len()),
            Some(t) if t != values.len() => {
                return Err(Error::Parse {
                    path: path_str(path),
                    line: line_no,
                    message: format!("record has {} values, expected {t}", values.len()),
                });
            }
            _ => {}
        }
        labels.push(fields[0].to_string());
        curves.push(DataMatrix::from_rows(&values)?);
    }
    if curves.is_empty() {
        return Err(Error::EmptySample);
    }
    let t = expected_len.expect("nonempty");
    let grid: Vec<f64> = (1..=t).map(|i| i as f64).collect();
    Ok(LoadedCurves {
        sample: FunctionalSample::new(grid, curves)?,
        labels,
    })
}

fn resolve_cache_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(dir) = explicit {
        return dir.to_path_buf();
    }
    if let Ok(v) = std::env::var(CACHE_ENV_VAR) {
        if !v.is_empty() {
            return PathBuf::from(v);
        }
    }
    if let Ok(home) = std::env::var("HOME") {
        if !home.is_empty() {
            return Path::new(&home).join(".cache").join("distspace");
        }
    }
    std::env::temp_dir().join("distspace-cache")
}

fn download(url: &str) -> Result<String> {
    let client = reqwest::blocking::Client::builder()
        .connect_timeout(Duration::from_secs(10))
        .timeout(Duration::from_secs(120))
        .build()
        .map_err(|e| Error::Download(e.to_string()))?;
    let response = client
        .get(url)
        .send()
        .map_err(|e| Error::Download(e.to_string()))?;
    if !response.status().is_success() {
        return Err(Error::Download(format!(
            "HTTP {} from {url}",
            response.status()
        )));
    }
    response.text().map_err(|e| Error::Download(e.to_string()))
}

/// Parses and shape-checks banknote CSV content: exactly 1372 rows of
/// four features plus a class field, with 762 rows of class 0 and 610
/// of class 1. Any malformed content counts as a shape mismatch.
fn parse_banknote(text: &str) -> Result<(DataMatrix, Vec<String>)> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (lineno0, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::DatasetShape(format!(
                "unexpected dataset shape: line {} has {} fields, expected 5",
                lineno0 + 1,
                fields.len()
            )));
        }
        let mut row = Vec::with_capacity(4);
        for f in &fields[..4] {
            row.push(f.parse::<f64>().map_err(|_| {
                Error::DatasetShape(format!(
                    "unexpected dataset shape: non-numeric value '{f}' on line {}",
                    lineno0 + 1
                ))
            })?);
        }
        let label = fields[4].parse::<i64>().map_err(|_| {
            Error::DatasetShape(format!(
                "unexpected dataset shape: non-integer class '{}' on line {}",
                fields[4],
                lineno0 + 1
            ))
        })?;
        labels.push(label.to_string());
        rows.push(row);
    }
    let genuine = labels.iter().filter(|l| *l == "0").count();
    let forged = labels.iter().filter(|l| *l == "1").count();
    if rows.len() != 1372 || genuine != 762 || forged != 610 {
        return Err(Error::DatasetShape(format!(
            "unexpected dataset shape: {} rows with class counts ({genuine}, {forged}), \
             expected 1372 rows with (762, 610)",
            rows.len()
        )));
    }
    Ok((DataMatrix::from_rows(&rows)?, labels))
}

/// Returns the banknote authentication data (1372 x 4 with class
/// labels "0" = genuine, "1" = forged), reading the cache when present
/// and downloading otherwise. A cache that fails the shape check
/// triggers one download attempt; if that also fails, the shape
/// complaint is surfaced. Freshly downloaded data is cached best
/// effort.
pub fn fetch_uci_banknote(
    url_override: Option<&str>,
    cache_dir: Option<&Path>,
) -> Result<(DataMatrix, Vec<String>)> {
    let dir = resolve_cache_dir(cache_dir);
    let file = dir.join(BANKNOTE_FILENAME);
    let url = url_override.unwrap_or(BANKNOTE_URL);

    if file.exists() {
        let cached = fs::read_to_string(&file)?;
        match parse_banknote(&cached) {
            Ok(out) => return Ok(out),
            Err(cache_err) => match download(url) {
                Ok(text) => {
                    let out = parse_banknote(&text)?;
                    let _ = fs::create_dir_all(&dir);
                    let _ = fs::write(&file, text);
                    return Ok(out);
                }
                Err(_) => return Err(cache_err),
            },
        }
    }

    let text = download(url)?;
    let out = parse_banknote(&text)?;
    let _ = fs::create_dir_all(&dir);
    let _ = fs::write(&file, text);
    Ok(out)
}
