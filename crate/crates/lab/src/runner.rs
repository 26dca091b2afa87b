//! Experiment orchestration: flat JSON run configuration (mirroring the
//! CLI flags), output emission, and the reproducibility manifest.

use crate::formats;
use anyhow::{bail, Context, Result};
use lanczos_core::experiments::{
    run_experiment, AggregateStats, ExperimentConfig, RunPath, SpectrumKind,
};
use lanczos_core::spectra::Spectrum;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Flat, flag-shaped run configuration. `path` is "matrix", "measure", or
/// "auto" (matrix up to n = 1e5, measure beyond).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub kind: String,
    pub n: usize,
    pub m_max: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_index")]
    pub index: usize,
    #[serde(default = "default_path")]
    pub path: String,
}

fn default_index() -> usize {
    1
}

fn default_path() -> String {
    "auto".into()
}

pub fn parse_kind(kind: &str, spectrum_file: Option<&Path>) -> Result<SpectrumKind> {
    Ok(match kind {
        "lap" => SpectrumKind::Lap,
        "unif" => SpectrumKind::Unif,
        "semi" => SpectrumKind::Semi,
        "log" => SpectrumKind::Log,
        "legendre-hard" => SpectrumKind::LegendreHard,
        "jacobi-hard" => SpectrumKind::JacobiHard,
        "file" => {
            let path = spectrum_file
                .context("kind 'file' requires a spectrum file path")?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading spectrum file {}", path.display()))?;
            SpectrumKind::Custom(
                Spectrum::from_text(&text).map_err(|e| anyhow::anyhow!("{e}"))?,
            )
        }
        other => bail!("unknown spectrum kind {other:?}"),
    })
}

impl RunConfig {
    pub fn to_experiment(&self, spectrum_file: Option<&Path>) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(
            parse_kind(&self.kind, spectrum_file)?,
            self.n,
            self.m_max,
            self.trials,
            self.seed,
        );
        cfg.eigen_index = self.index;
        cfg.path = match self.path.as_str() {
            "auto" => cfg.path,
            "matrix" => RunPath::Matrix,
            "measure" => RunPath::Measure,
            other => bail!("unknown path {other:?} (expected matrix, measure, or auto)"),
        };
        Ok(cfg)
    }
}

/// Everything needed to reproduce a run: the command line, the resolved
/// configuration, and the files it produced. Timings are informational and
/// excluded from the byte-reproducibility contract.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub seed: u64,
    pub outputs: Vec<String>,
    pub wall_clock_ms: u128,
    pub version: String,
}

pub struct RunOutputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// Runs the experiment and writes the requested artifacts; returns the
/// statistics and the manifest (written to the JSON path when given).
pub fn execute_run(
    config: &RunConfig,
    spectrum_file: Option<&Path>,
    outputs: &RunOutputs,
    command: Vec<String>,
) -> Result<(AggregateStats, RunManifest)> {
    let started = Instant::now();
    let cfg = config.to_experiment(spectrum_file)?;
    let stats = run_experiment(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut written = Vec::new();
    if let Some(path) = &outputs.csv {
        std::fs::write(path, formats::stats_csv(&stats))
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(path.display().to_string());
    }
    if let Some(path) = &outputs.svg {
        std::fs::write(path, formats::box_plot_svg("scaled relative error", &stats))
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(path.display().to_string());
    }
    if let Some(path) = &outputs.json {
        written.push(path.display().to_string());
    }

    let manifest = RunManifest {
        command,
        config: config.clone(),
        seed: config.seed,
        outputs: written,
        wall_clock_ms: started.elapsed().as_millis(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    if let Some(path) = &outputs.json {
        std::fs::write(path, serde_json::to_string_pretty(&manifest)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok((stats, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_and_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"kind":"unif","n":50,"m_max":5,"trials":3,"seed":9}"#)
                .unwrap();
        assert_eq!(cfg.index, 1);
        assert_eq!(cfg.path, "auto");
        let exp = cfg.to_experiment(None).unwrap();
        assert_eq!(exp.path, RunPath::Matrix);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_kind_rejected() {
        let cfg = RunConfig {
            kind: "mystery".into(),
            n: 10,
            m_max: 2,
            trials: 1,
            seed: 0,
            index: 1,
            path: "auto".into(),
        };
        assert!(cfg.to_experiment(None).is_err());
    }

    #[test]
    fn run_writes_reproducible_csv() {
        let dir = std::env::temp_dir().join(format!("lanczos-lab-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = RunConfig {
            kind: "lap".into(),
            n: 120,
            m_max: 6,
            trials: 4,
            seed: 5,
            index: 1,
            path: "matrix".into(),
        };
        let out = RunOutputs {
            csv: Some(dir.join("a.csv")),
            json: Some(dir.join("a.json")),
            svg: None,
        };
        let (_, manifest) = execute_run(&cfg, None, &out, vec!["test".into()]).unwrap();
        assert_eq!(manifest.outputs.len(), 2);
        let first = std::fs::read(dir.join("a.csv")).unwrap();
        let out2 = RunOutputs {
            csv: Some(dir.join("b.csv")),
            json: None,
            svg: None,
        };
        execute_run(&cfg, None, &out2, vec!["test".into()]).unwrap();
        assert_eq!(first, std::fs::read(dir.join("b.csv")).unwrap());
        std::fs::remove_dir_all(&dir).ok();
    }
}
