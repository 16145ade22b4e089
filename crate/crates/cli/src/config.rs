//! Flat `key = value` configuration with `[section]` headers, layered as
//! defaults < SUBRADIANCE_WORKERS < config file < command-line flags.
//!
//! ```text
//! # comment
//! [chain]
//! n = 20:200:5        # start:stop:step, inclusive
//! d = 0.02, 0.1       # comma list
//! gamma = 0.1
//! xi = 1, 3
//! [solver]
//! eig_tol = 1e-10
//! workers = 4
//! [output]
//! dir = results
//! format = csv
//! [fit]
//! input = results/records.csv
//! column = Gamma_num
//! window = 40:200
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use subradiance_core::experiments::FigureId;
use subradiance_core::spectrum::MAX_EIG_TOL;
use thiserror::Error;

use crate::defaults::defaults;

pub const WORKERS_ENV: &str = "SUBRADIANCE_WORKERS";

/// Observables the `fit` command can regress against N.
pub const FIT_COLUMNS: &[&str] = &[
    "Gamma_num",
    "Gamma_ana_total",
    "Gamma_ana_1d",
    "Gamma_ana_fs",
    "J_deviation",
    "Gamma_rel_error",
];

const SCHEMA: &[(&str, &[&str])] = &[
    ("chain", &["n", "d", "gamma", "xi"]),
    ("solver", &["eig_tol", "workers"]),
    ("output", &["dir", "format"]),
    ("fit", &["input", "column", "window"]),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Default,
    Env,
    File { path: String, line: usize },
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => f.write_str("default"),
            Origin::Env => write!(f, "environment variable {WORKERS_ENV}"),
            Origin::File { path, line } => write!(f, "{path}:{line}"),
            Origin::Flag => f.write_str("command line"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Syntax { path: String, line: usize, message: String },
    #[error("unknown key `{key}` ({origin}); accepted keys: {accepted}")]
    UnknownKey {
        key: String,
        origin: Origin,
        accepted: String,
    },
    #[error("`{key}` ({origin}): cannot parse `{value}` as {expected}")]
    Type {
        key: String,
        origin: Origin,
        value: String,
        expected: &'static str,
    },
    #[error("`{key}` ({origin}): value {value} outside accepted range {range}")]
    Range {
        key: String,
        origin: Origin,
        value: String,
        range: &'static str,
    },
    #[error("missing required key `{key}` for the {command} command")]
    Missing { key: String, command: &'static str },
    #[error("`{key}` ({origin}): the {command} command takes a single value, got {count}")]
    NotScalar {
        key: String,
        origin: Origin,
        command: &'static str,
        count: usize,
    },
    #[error("cannot read config file {path}: {message}")]
    Read { path: String, message: String },
}

impl ConfigError {
    /// The short key name the error refers to, e.g. `gamma`.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey { key, .. }
            | ConfigError::Type { key, .. }
            | ConfigError::Range { key, .. }
            | ConfigError::Missing { key, .. }
            | ConfigError::NotScalar { key, .. } => Some(key.rsplit('.').next().unwrap_or(key)),
            _ => None,
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Setting {
    pub value: String,
    pub origin: Origin,
}

/// Raw values keyed by `section.key`, later layers replacing earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layers {
    map: BTreeMap<String, Setting>,
}

fn accepted_keys() -> String {
    SCHEMA
        .iter()
        .flat_map(|(s, keys)| keys.iter().map(move |k| format!("{s}.{k}")))
        .collect::<Vec<_>>()
        .join(", ")
}

fn known(key: &str) -> bool {
    let Some((section, name)) = key.split_once('.') else {
        return false;
    };
    SCHEMA.iter().any(|(s, keys)| *s == section && keys.contains(&name))
}

impl Layers {
    pub fn with_defaults() -> Self {
        let mut l = Self::default();
        for e in defaults() {
            l.set(e.key, &e.value, Origin::Default)
                .expect("default keys are in the schema");
        }
        l
    }

    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<()> {
        if !known(key) {
            return Err(ConfigError::UnknownKey {
                key: key.into(),
                origin,
                accepted: accepted_keys(),
            });
        }
        self.map.insert(
            key.into(),
            Setting {
                value: value.trim().into(),
                origin,
            },
        );
        Ok(())
    }

    pub fn apply_env(&mut self, workers: Option<String>) -> Result<()> {
        match workers {
            Some(v) if !v.trim().is_empty() => self.set("solver.workers", &v, Origin::Env),
            _ => Ok(()),
        }
    }

    pub fn apply_text(&mut self, text: &str, path: &str) -> Result<()> {
        let mut section: Option<String> = None;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| ConfigError::Syntax {
                path: path.into(),
                line,
                message,
            };
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| syntax(format!("unterminated section header `{content}`")))?
                    .trim();
                if !SCHEMA.iter().any(|(s, _)| *s == name) {
                    let names: Vec<&str> = SCHEMA.iter().map(|(s, _)| *s).collect();
                    return Err(syntax(format!(
                        "unknown section [{name}]; accepted: {}",
                        names.join(", ")
                    )));
                }
                section = Some(name.into());
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected `key = value`, got `{content}`")))?;
            let key = key.trim();
            let section = section
                .as_deref()
                .ok_or_else(|| syntax(format!("key `{key}` appears before any [section] header")))?;
            if value.trim().is_empty() {
                return Err(syntax(format!("key `{key}` has no value")));
            }
            self.set(
                &format!("{section}.{key}"),
                value,
                Origin::File {
                    path: path.into(),
                    line,
                },
            )?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn get(&self, key: &str) -> Option<&Setting> {
        self.map.get(key)
    }

    pub fn resolved(&self) -> &BTreeMap<String, Setting> {
        &self.map
    }
}

fn type_error(key: &str, s: &Setting, item: &str, expected: &'static str) -> ConfigError {
    ConfigError::Type {
        key: key.into(),
        origin: s.origin.clone(),
        value: item.into(),
        expected,
    }
}

fn range_error(key: &str, s: &Setting, value: String, range: &'static str) -> ConfigError {
    ConfigError::Range {
        key: key.into(),
        origin: s.origin.clone(),
        value,
        range,
    }
}

fn parse_f64(key: &str, s: &Setting, item: &str) -> Result<f64> {
    item.trim()
        .parse::<f64>()
        .map_err(|_| type_error(key, s, item.trim(), "a number"))
}

fn parse_usize(key: &str, s: &Setting, item: &str) -> Result<usize> {
    let t = item.trim();
    match t.parse::<i64>() {
        Ok(v) if v < 0 => Err(range_error(key, s, t.into(), "integers >= 0")),
        Ok(v) => Ok(v as usize),
        Err(_) => Err(type_error(key, s, t, "an integer")),
    }
}

/// `a, b, c` where each item may be a range `start:stop[:step]`.
pub fn parse_int_list(key: &str, s: &Setting) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.value.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse_usize(key, s, v)?),
            [a, b] | [a, b, _] => {
                let (a, b) = (parse_usize(key, s, a)?, parse_usize(key, s, b)?);
                let step = if parts.len() == 3 {
                    parse_usize(key, s, parts[2])?
                } else {
                    1
                };
                if step == 0 || b < a {
                    return Err(type_error(key, s, item.trim(), "a range start:stop:step with step > 0"));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(type_error(key, s, item.trim(), "an integer or start:stop:step")),
        }
    }
    Ok(out)
}

pub fn parse_float_list(key: &str, s: &Setting) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.value.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse_f64(key, s, v)?),
            [a, b, step] => {
                let (a, b, step) = (parse_f64(key, s, a)?, parse_f64(key, s, b)?, parse_f64(key, s, step)?);
                if !(step > 0.0) || b < a {
                    return Err(type_error(key, s, item.trim(), "a range start:stop:step with step > 0"));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|k| a + step * k as f64));
            }
            _ => return Err(type_error(key, s, item.trim(), "a number or start:stop:step")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "name")]
pub enum CommandKind {
    Spectrum,
    Sweep,
    Figure { id: FigureId },
    Verify { quick: bool },
    Fit,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Sweep => "sweep",
            CommandKind::Figure { .. } => "figure",
            CommandKind::Verify { .. } => "verify",
            CommandKind::Fit => "fit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub n: Vec<usize>,
    pub d: Vec<f64>,
    pub gamma: Vec<f64>,
    pub xi: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitConfig {
    pub input: Option<PathBuf>,
    pub column: String,
    pub window: (f64, f64),
}

/// Fully validated run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub grid: Grid,
    pub eig_tol: f64,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub format: Format,
    pub fit: FitConfig,
    pub resolved: BTreeMap<String, Setting>,
}

fn setting<'a>(layers: &'a Layers, key: &str) -> &'a Setting {
    layers.get(key).expect("every key with a default is present")
}

fn check_all<T: Copy + fmt::Display>(
    key: &str,
    s: &Setting,
    values: &[T],
    ok: impl Fn(T) -> bool,
    range: &'static str,
) -> Result<()> {
    match values.iter().find(|v| !ok(**v)) {
        Some(v) => Err(range_error(key, s, v.to_string(), range)),
        None => Ok(()),
    }
}

fn scalar<T: Copy>(key: &str, s: &Setting, values: &[T], command: &'static str) -> Result<()> {
    if values.len() != 1 {
        return Err(ConfigError::NotScalar {
            key: key.into(),
            origin: s.origin.clone(),
            command,
            count: values.len(),
        });
    }
    Ok(())
}

pub fn resolve(command: CommandKind, layers: &Layers) -> Result<RunConfig> {
    let name = command.name();
    let needs_grid = matches!(command, CommandKind::Spectrum | CommandKind::Sweep);

    let n = match layers.get("chain.n") {
        Some(s) => {
            let v = parse_int_list("chain.n", s)?;
            check_all("chain.n", s, &v, |x| x >= 1, "integers >= 1")?;
            v
        }
        None if needs_grid => {
            return Err(ConfigError::Missing {
                key: "chain.n".into(),
                command: name,
            })
        }
        None => Vec::new(),
    };
    let s = setting(layers, "chain.d");
    let d = parse_float_list("chain.d", s)?;
    check_all("chain.d", s, &d, |x| x > 0.0 && x.is_finite(), "(0, inf)")?;
    let s = setting(layers, "chain.gamma");
    let gamma = parse_float_list("chain.gamma", s)?;
    check_all("chain.gamma", s, &gamma, |x| x >= 0.0 && x.is_finite(), "[0, inf)")?;
    let s = setting(layers, "chain.xi");
    let xi = parse_int_list("chain.xi", s)?;
    check_all("chain.xi", s, &xi, |x| x >= 1, "integers >= 1")?;
    if command == CommandKind::Spectrum {
        scalar("chain.n", setting(layers, "chain.n"), &n, name)?;
        scalar("chain.d", setting(layers, "chain.d"), &d, name)?;
        scalar("chain.gamma", setting(layers, "chain.gamma"), &gamma, name)?;
        let s = setting(layers, "chain.xi");
        check_all("chain.xi", s, &xi, |x| x <= n[0], "1..=N")?;
    }

    let s = setting(layers, "solver.eig_tol");
    let eig_tol = parse_f64("solver.eig_tol", s, &s.value)?;
    if !(eig_tol > 0.0 && eig_tol <= MAX_EIG_TOL) {
        return Err(range_error("solver.eig_tol", s, s.value.clone(), "(0, 1e-6]"));
    }
    let s = setting(layers, "solver.workers");
    let workers = parse_usize("solver.workers", s, &s.value)?;
    if workers > 1024 {
        return Err(range_error("solver.workers", s, s.value.clone(), "0..=1024"));
    }

    let out_dir = PathBuf::from(&setting(layers, "output.dir").value);
    let s = setting(layers, "output.format");
    let format = match s.value.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(type_error("output.format", s, other, "csv or json")),
    };

    let input = layers.get("fit.input").map(|s| PathBuf::from(&s.value));
    if command == CommandKind::Fit && input.is_none() {
        return Err(ConfigError::Missing {
            key: "fit.input".into(),
            command: name,
        });
    }
    let s = setting(layers, "fit.column");
    if !FIT_COLUMNS.contains(&s.value.as_str()) {
        return Err(ConfigError::Type {
            key: "fit.column".into(),
            origin: s.origin.clone(),
            value: s.value.clone(),
            expected: "one of Gamma_num, Gamma_ana_total, Gamma_ana_1d, Gamma_ana_fs, J_deviation, Gamma_rel_error",
        });
    }
    let s = setting(layers, "fit.window");
    let window = match s.value.split(':').collect::<Vec<_>>().as_slice() {
        [a, b] => (parse_f64("fit.window", s, a)?, parse_f64("fit.window", s, b)?),
        _ => return Err(type_error("fit.window", s, &s.value, "lo:hi")),
    };
    if !(window.0 <= window.1) {
        return Err(range_error("fit.window", s, s.value.clone(), "lo <= hi"));
    }

    Ok(RunConfig {
        command,
        grid: Grid { n, d, gamma, xi },
        eig_tol,
        workers,
        out_dir,
        format,
        fit: FitConfig {
            input,
            column: setting(layers, "fit.column").value.clone(),
            window,
        },
        resolved: layers.resolved().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layers(text: &str) -> Result<Layers> {
        let mut l = Layers::with_defaults();
        l.apply_text(text, "run.cfg")?;
        Ok(l)
    }

    #[test]
    fn defaults_match_the_solver() {
        let l = layers("[chain]\nn = 10\n").unwrap();
        let c = resolve(CommandKind::Spectrum, &l).unwrap();
        assert_eq!(c.eig_tol, subradiance_core::spectrum::DEFAULT_EIG_TOL);
        assert_eq!((c.grid.d[0], c.grid.gamma[0], c.grid.xi[0]), (0.02, 0.1, 1));
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn ranges_and_lists() {
        let l = layers("[chain]\nn = 20:40:10, 45\nd = 0.01:0.03:0.01\nxi = 1,3\n").unwrap();
        let c = resolve(CommandKind::Sweep, &l).unwrap();
        assert_eq!(c.grid.n, vec![20, 30, 40, 45]);
        assert_eq!(c.grid.d.len(), 3);
        assert!((c.grid.d[2] - 0.03).abs() < 1e-15);
        assert_eq!(c.grid.xi, vec![1, 3]);
    }

    #[test]
    fn negative_gamma_names_the_key() {
        let l = layers("[chain]\nn = 10\ngamma = -0.1\n").unwrap();
        let e = resolve(CommandKind::Sweep, &l).unwrap_err();
        assert_eq!(e.key(), Some("gamma"));
        let msg = e.to_string();
        assert!(
            msg.contains("chain.gamma") && msg.contains("run.cfg:3") && msg.contains("[0, inf)"),
            "{msg}"
        );
    }

    #[test]
    fn unknown_keys_and_sections_have_locations() {
        let e = layers("[chain]\nn = 10\nbeta = 2\n").unwrap_err();
        assert!(
            matches!(
                &e,
                ConfigError::UnknownKey {
                    origin: Origin::File { line: 3, .. },
                    ..
                }
            ),
            "{e}"
        );
        let e = layers("[physics]\n").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 1, .. }));
        let e = layers("n = 3\n").unwrap_err();
        assert!(e.to_string().contains("before any [section]"));
        let e = layers("[chain]\nn 3\n").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 2, .. }));
    }

    #[test]
    fn type_errors() {
        let l = layers("[chain]\nn = ten\n").unwrap();
        let e = resolve(CommandKind::Sweep, &l).unwrap_err();
        assert!(matches!(e, ConfigError::Type { .. }) && e.key() == Some("n"));
        let l = layers("[chain]\nn = 5\n[output]\nformat = xml\n").unwrap();
        assert!(resolve(CommandKind::Sweep, &l).is_err());
        let l = layers("[chain]\nn = 5\n[solver]\neig_tol = 1e-3\n").unwrap();
        assert_eq!(resolve(CommandKind::Sweep, &l).unwrap_err().key(), Some("eig_tol"));
    }

    #[test]
    fn missing_and_scalar_requirements() {
        let l = Layers::with_defaults();
        assert!(matches!(
            resolve(CommandKind::Sweep, &l),
            Err(ConfigError::Missing { .. })
        ));
        assert!(resolve(CommandKind::Verify { quick: true }, &l).is_ok());
        assert!(matches!(
            resolve(CommandKind::Fit, &l),
            Err(ConfigError::Missing { .. })
        ));
        let l = layers("[chain]\nn = 10, 20\n").unwrap();
        assert!(matches!(
            resolve(CommandKind::Spectrum, &l),
            Err(ConfigError::NotScalar { .. })
        ));
        let l = layers("[chain]\nn = 3\nxi = 4\n").unwrap();
        assert_eq!(resolve(CommandKind::Spectrum, &l).unwrap_err().key(), Some("xi"));
    }

    #[test]
    fn later_layers_win() {
        let mut l = Layers::with_defaults();
        l.apply_env(Some("3".into())).unwrap();
        assert_eq!(l.get("solver.workers").unwrap().origin, Origin::Env);
        l.apply_text("[solver]\nworkers = 2\n", "a.cfg").unwrap();
        l.set("solver.workers", "5", Origin::Flag).unwrap();
        let c = resolve(CommandKind::Verify { quick: false }, &l).unwrap();
        assert_eq!(c.workers, 5);
        assert_eq!(c.resolved["solver.workers"].origin, Origin::Flag);
    }
}
