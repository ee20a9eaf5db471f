//! The flat key=value configuration layer and the two-level error
//! model: usage errors (exit 2) for arguments that are wrong before any
//! data is touched, runtime errors (exit 1) for everything after.
//!
//! Settings merge in three stages — command defaults, then the
//! `--config` file, then explicit flags — and unknown file keys are
//! rejected. The resolved, canonically formatted values are echoed into
//! every artifact a command writes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

/// A failure with its exit category already decided.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration: exit code 2.
    Usage(String),
    /// Data or computation failure: exit code 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<distspace::Error> for CliError {
    fn from(e: distspace::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Merged settings for one command: defaults, config-file values, and
/// flag overrides, all as strings keyed by the flag name in snake_case.
#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Starts from `defaults`, then merges `path` (if given), rejecting
    /// keys outside `accepted`. Lines are `key=value`; blank lines and
    /// `#` comments are skipped.
    pub fn load(
        path: Option<&Path>,
        accepted: &[&str],
        defaults: &[(&str, &str)],
    ) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (k, v) in defaults {
            s.values.insert((*k).into(), (*v).into());
        }
        if let Some(path) = path {
            let text = fs::read_to_string(path).map_err(|e| {
                usage(format!("cannot read config file {}: {e}", path.display()))
            })?;
            for (lineno0, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    usage(format!(
                        "{}:{}: expected key=value, got '{line}'",
                        path.display(),
                        lineno0 + 1
                    ))
                })?;
                let key = key.trim();
                if !accepted.contains(&key) {
                    return Err(usage(format!(
                        "{}:{}: unknown key '{key}'",
                        path.display(),
                        lineno0 + 1
                    )));
                }
                s.values.insert(key.into(), value.trim().into());
            }
        }
        Ok(s)
    }

    /// Records a flag's value; a `None` flag leaves config/defaults in
    /// place.
    pub fn override_with(&mut self, key: &str, flag: Option<String>) {
        if let Some(v) = flag {
            self.values.insert(key.into(), v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| usage(format!("missing required setting '--{}'",
                key.replace('_', "-"))))
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                usage(format!("cannot parse '{v}' as a value for '{key}'"))
            }),
        }
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => Err(usage(format!("'{key}' must be true or false, got '{v}'"))),
        }
    }
}

/// Comma-separated positive integers, e.g. training sizes or a k grid.
pub fn parse_usize_list(text: &str, key: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .map(|part| {
            part.parse::<usize>()
                .map_err(|_| usage(format!("'{key}' entry '{part}' is not a whole number")))
        })
        .collect()
}

/// The result-defining configuration echoed into artifacts. Keys are
/// emitted sorted; execution-only settings (--out, --threads, cache
/// locations) never enter, so artifact bytes do not depend on where or
/// how fast a run happened.
#[derive(Debug, Default, Clone)]
pub struct Echo {
    values: BTreeMap<String, String>,
}

impl Echo {
    pub fn put(&mut self, key: &str, value: impl fmt::Display) {
        self.values.insert(key.into(), value.to_string());
    }

    pub fn put_opt(&mut self, key: &str, value: Option<impl fmt::Display>) {
        if let Some(v) = value {
            self.put(key, v);
        }
    }

    /// `# key=value` comment lines for CSV artifacts.
    pub fn csv_header(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out
    }

    /// A string→string JSON object for JSON artifacts.
    pub fn json_object(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.values
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_then_file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        fs::write(&path, "# note\nruns=5\nseed = 9\n").unwrap();
        let mut s = Settings::load(
            Some(&path),
            &["runs", "seed", "mislabel"],
            &[("runs", "200"), ("mislabel", "0")],
        )
        .unwrap();
        assert_eq!(s.get("runs"), Some("5"));
        assert_eq!(s.get("seed"), Some("9"));
        assert_eq!(s.get("mislabel"), Some("0"));
        s.override_with("runs", Some("1".into()));
        s.override_with("seed", None);
        assert_eq!(s.get_parsed::<usize>("runs").unwrap(), Some(1));
        assert_eq!(s.get("seed"), Some("9"));
    }

    #[test]
    fn unknown_keys_and_bad_lines_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        fs::write(&path, "bogus=1\n").unwrap();
        assert!(matches!(
            Settings::load(Some(&path), &["runs"], &[]),
            Err(CliError::Usage(m)) if m.contains("bogus")
        ));
        fs::write(&path, "runs\n").unwrap();
        assert!(matches!(
            Settings::load(Some(&path), &["runs"], &[]),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn echo_lines_are_sorted_and_prefixed() {
        let mut e = Echo::default();
        e.put("seed", 5);
        e.put("data", "x.csv");
        e.put_opt("measure", None::<&str>);
        assert_eq!(e.csv_header(), "# data=x.csv\n# seed=5\n");
    }
}
