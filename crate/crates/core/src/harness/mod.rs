//! Monte-Carlo sweeps.
//!
//! Every run draws from its own ChaCha stream keyed by `(seed, run index)`,
//! so a sweep point's result does not depend on the thread count or on which
//! other points are evaluated. Runs are collected in index order and reduced
//! sequentially, which keeps parallel and serial output bit-identical.

pub mod cli;
mod multipath;
mod output;
mod singlepath;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::AngleModel;
use crate::estimators::Scheme;
use crate::Result;

pub use multipath::{run_multipath, simulate_multipath_run, MultipathOutcome, MultipathSweep};
pub use output::{write_manifest, Manifest, CSV_HEADER};
pub use singlepath::{run_singlepath, simulate_singlepath_run, SinglepathOutcome};

/// Default sweep grids.
pub const DEFAULT_ETA_SWEEP: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_M_SWEEP: [usize; 3] = [16, 64, 144];
/// Operating point of the eta sweep.
pub const ETA_SWEEP_TX_POWER_DBM: f64 = 10.0;
/// Operating point of the sub-surface-count sweep.
pub const M_SWEEP_TX_POWER_DBM: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    MultipathPower,
    MultipathEta,
    SinglepathM,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::MultipathPower => "multipath-power",
            Scenario::MultipathEta => "multipath-eta",
            Scenario::SinglepathM => "singlepath-m",
        }
    }

    pub fn param(self) -> &'static str {
        match self {
            Scenario::MultipathPower => "tx_power_dbm",
            Scenario::MultipathEta => "eta",
            Scenario::SinglepathM => "m",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [
            Scenario::MultipathPower,
            Scenario::MultipathEta,
            Scenario::SinglepathM,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| format!("unknown scenario {s:?}"))
    }
}

/// Knobs that are not part of the scenario configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Worker threads; `None` runs serially on the caller's thread.
    pub jobs: Option<usize>,
    pub angle_model: AngleModel,
    /// Drop receiver noise entirely (exactness checks).
    pub noiseless: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            jobs: None,
            angle_model: AngleModel::SharedPerTap,
            noiseless: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario: Scenario,
    pub param: &'static str,
    pub value: f64,
    pub scheme: Scheme,
    pub metric: &'static str,
    pub mean: f64,
    pub stderr: f64,
    pub n_runs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn get(&self, value: f64, scheme: Scheme, metric: &str) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.value == value && r.scheme == scheme && r.metric == metric)
    }

    /// Distinct swept values in first-appearance order.
    pub fn values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.value) {
                out.push(r.value);
            }
        }
        out
    }
}

/// Mean and standard error of the mean, reduced in slice order.
pub fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

pub fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

/// Evaluates `f(run)` for every run index, in parallel when requested, and
/// returns outcomes in run order.
pub(crate) fn map_runs<T, F>(n_runs: usize, jobs: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match jobs {
        None | Some(0) | Some(1) => (0..n_runs).map(&f).collect(),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .expect("thread pool");
            pool.install(|| (0..n_runs).into_par_iter().map(&f).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn stderr_of_constant_is_zero() {
        assert_eq!(mean_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        assert_eq!(mean_stderr(&[5.0]), (5.0, 0.0));
        let (m, s) = mean_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn streams_are_distinct_and_repeatable() {
        let a: u64 = run_rng(7, 0).random();
        let b: u64 = run_rng(7, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, run_rng(7, 0).random::<u64>());
    }

    #[test]
    fn scenario_names() {
        for s in ["multipath-power", "multipath-eta", "singlepath-m"] {
            assert_eq!(s.parse::<Scenario>().unwrap().name(), s);
        }
        assert!("fig5".parse::<Scenario>().is_err());
    }
}
