//! `run_manifest.json`: what ran, with which settings, and how long each stage took.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use subradiance_core::experiments::write_json;

use crate::config::{RunConfig, Setting};

pub const MANIFEST_FILE: &str = "run_manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub eig_tol: f64,
    pub workers: usize,
    pub config: BTreeMap<String, Setting>,
    pub stages: Vec<Stage>,
    pub files: Vec<PathBuf>,
    pub total_wall_seconds: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunManifest {
    pub fn new(cfg: &RunConfig, argv: Vec<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: cfg.command.name().into(),
            argv,
            eig_tol: cfg.eig_tol,
            workers: cfg.workers,
            config: cfg.resolved.clone(),
            stages: Vec::new(),
            files: Vec::new(),
            total_wall_seconds: 0.0,
            started: Some(Instant::now()),
        }
    }

    /// Run `f` and record its wall clock under `name`.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.stages.push(Stage {
            name: name.into(),
            wall_seconds: t0.elapsed().as_secs_f64(),
        });
        out
    }

    pub fn write(&mut self, dir: &Path) -> subradiance_core::Result<PathBuf> {
        if let Some(t0) = self.started {
            self.total_wall_seconds = t0.elapsed().as_secs_f64();
        }
        let path = dir.join(MANIFEST_FILE);
        write_json(&path, self)?;
        Ok(path)
    }
}
