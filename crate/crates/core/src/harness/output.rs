use std::path::{Path, PathBuf};

use serde::Serialize;

use super::SweepResult;
use crate::config::{ConfigFile, SimConfig};
use crate::Result;

pub const CSV_HEADER: &str = "scenario,param,value,scheme,metric,mean,stderr,n_runs,seed";

/// `git describe` of the build, or the crate version outside a checkout.
pub const VERSION: &str = match option_env!("RISCE_GIT_DESCRIBE") {
    Some(v) => v,
    None => concat!("v", env!("CARGO_PKG_VERSION")),
};

impl SweepResult {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(','))?;
        for r in &self.rows {
            w.write_record([
                r.scenario.name().to_string(),
                r.param.to_string(),
                r.value.to_string(),
                r.scheme.name().to_string(),
                r.metric.to_string(),
                r.mean.to_string(),
                r.stderr.to_string(),
                r.n_runs.to_string(),
                r.seed.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("ascii csv"))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}

/// Run description written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: String,
    pub param: String,
    pub values: Vec<f64>,
    pub tx_power_dbm: Option<f64>,
    pub n_runs: usize,
    pub seed: u64,
    pub angle_model: String,
    pub csv: String,
    pub config: ConfigFile,
}

impl Manifest {
    pub fn path_for(csv: &Path) -> PathBuf {
        csv.with_extension("manifest.json")
    }

    pub fn from_config(cfg: &SimConfig) -> Self {
        Manifest {
            tool: "risce",
            version: VERSION,
            scenario: String::new(),
            param: String::new(),
            values: Vec::new(),
            tx_power_dbm: None,
            n_runs: cfg.n_runs,
            seed: cfg.seed,
            angle_model: String::new(),
            csv: String::new(),
            config: cfg.to_file_repr(),
        }
    }
}

pub fn write_manifest(manifest: &Manifest, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
