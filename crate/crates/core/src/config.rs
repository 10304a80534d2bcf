//! Scenario parameters.
//!
//! A configuration file is a flat JSON object whose keys are the field names
//! of [`ConfigFile`]. Unknown keys are rejected so that typos surface as
//! errors instead of silently falling back to defaults. Derived quantities
//! (symbol duration, wavelength) are never read from the file.
//!
//! ```text
//! {
//!   "n_rbs": 16, "scs_hz": 30000.0, "cp_len": 16,
//!   "fc_hz": 28e9, "d_ur_m": 5.0, "d_rg_m": 50.0, "d_ug_m": 50.0,
//!   "ple_ur": 2.0, "ple_rg": 2.1, "ple_ug": 3.5,
//!   "n_ris_elements": 576, "n_subsurfaces": 16, "l_taps": 6, "eta": 0.1,
//!   "velocity_mps": 10.0, "noise_dbm": -106.0, "processing_gain_db": 40.0,
//!   "tx_power_dbm": {"start": 0.0, "stop": 30.0, "step": 5.0},
//!   "threshold": 0.1, "seed": 1, "n_runs": 200
//! }
//! ```
//!
//! `n_subcarriers`, `zc_root` and `reference_symbol` are optional.
//! `tx_power_dbm` is either a number or an inclusive `{start, stop, step}`
//! sweep.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::SPEED_OF_LIGHT;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfdmConfig {
    pub n_subcarriers: usize,
    pub n_rbs: usize,
    pub scs_hz: f64,
    pub cp_len: usize,
    /// OFDM symbol duration including the cyclic prefix.
    pub symbol_duration_s: f64,
}

impl OfdmConfig {
    pub fn new(n_rbs: usize, scs_hz: f64, cp_len: usize) -> Self {
        let n_subcarriers = 12 * n_rbs;
        let symbol_duration_s = (1.0 + cp_len as f64 / n_subcarriers as f64) / scs_hz;
        OfdmConfig {
            n_subcarriers,
            n_rbs,
            scs_hz,
            cp_len,
            symbol_duration_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryConfig {
    pub d_ur_m: f64,
    pub d_rg_m: f64,
    pub d_ug_m: f64,
    pub ple_ur: f64,
    pub ple_rg: f64,
    pub ple_ug: f64,
    pub fc_hz: f64,
    pub wavelength_m: f64,
}

/// Transmit power: a single operating point or an inclusive linear sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TxPower {
    Scalar(f64),
    Sweep { start: f64, stop: f64, step: f64 },
}

impl TxPower {
    /// All power points in dBm, in increasing sweep order.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            TxPower::Scalar(p) => vec![p],
            TxPower::Sweep { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub ofdm: OfdmConfig,
    pub geometry: GeometryConfig,
    pub n_ris_elements: usize,
    pub n_subsurfaces: usize,
    pub l_taps: usize,
    pub eta: f64,
    pub velocity_mps: f64,
    pub noise_dbm: f64,
    pub processing_gain_db: f64,
    pub tx_power_dbm: TxPower,
    pub threshold: f64,
    pub seed: u64,
    pub n_runs: usize,
    pub zc_root: u64,
    /// Reference symbol q for the Doppler-adjusted estimate, in 1..=M+1.
    pub reference_symbol: usize,
}

/// On-disk representation: flat, with exactly these keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n_rbs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_subcarriers: Option<usize>,
    pub scs_hz: f64,
    pub cp_len: usize,
    pub fc_hz: f64,
    pub d_ur_m: f64,
    pub d_rg_m: f64,
    pub d_ug_m: f64,
    pub ple_ur: f64,
    pub ple_rg: f64,
    pub ple_ug: f64,
    pub n_ris_elements: usize,
    pub n_subsurfaces: usize,
    pub l_taps: usize,
    pub eta: f64,
    pub velocity_mps: f64,
    pub noise_dbm: f64,
    pub processing_gain_db: f64,
    pub tx_power_dbm: TxPower,
    pub threshold: f64,
    pub seed: u64,
    pub n_runs: usize,
    #[serde(default = "default_zc_root")]
    pub zc_root: u64,
    #[serde(default = "default_reference_symbol")]
    pub reference_symbol: usize,
}

fn default_zc_root() -> u64 {
    1
}

fn default_reference_symbol() -> usize {
    1
}

impl SimConfig {
    /// Builds and validates a configuration from its file form.
    pub fn from_file_repr(f: ConfigFile) -> Result<Self, ConfigError> {
        let ofdm = OfdmConfig::new(f.n_rbs, f.scs_hz, f.cp_len);
        if let Some(n) = f.n_subcarriers {
            if n != ofdm.n_subcarriers {
                return invalid(format!(
                    "n_subcarriers = {n} violates N = 12 * n_rbs = {}",
                    ofdm.n_subcarriers
                ));
            }
        }
        let geometry = GeometryConfig {
            d_ur_m: f.d_ur_m,
            d_rg_m: f.d_rg_m,
            d_ug_m: f.d_ug_m,
            ple_ur: f.ple_ur,
            ple_rg: f.ple_rg,
            ple_ug: f.ple_ug,
            fc_hz: f.fc_hz,
            wavelength_m: SPEED_OF_LIGHT / f.fc_hz,
        };
        let cfg = SimConfig {
            ofdm,
            geometry,
            n_ris_elements: f.n_ris_elements,
            n_subsurfaces: f.n_subsurfaces,
            l_taps: f.l_taps,
            eta: f.eta,
            velocity_mps: f.velocity_mps,
            noise_dbm: f.noise_dbm,
            processing_gain_db: f.processing_gain_db,
            tx_power_dbm: f.tx_power_dbm,
            threshold: f.threshold,
            seed: f.seed,
            n_runs: f.n_runs,
            zc_root: f.zc_root,
            reference_symbol: f.reference_symbol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_file_repr(&self) -> ConfigFile {
        let g = &self.geometry;
        ConfigFile {
            n_rbs: self.ofdm.n_rbs,
            n_subcarriers: Some(self.ofdm.n_subcarriers),
            scs_hz: self.ofdm.scs_hz,
            cp_len: self.ofdm.cp_len,
            fc_hz: g.fc_hz,
            d_ur_m: g.d_ur_m,
            d_rg_m: g.d_rg_m,
            d_ug_m: g.d_ug_m,
            ple_ur: g.ple_ur,
            ple_rg: g.ple_rg,
            ple_ug: g.ple_ug,
            n_ris_elements: self.n_ris_elements,
            n_subsurfaces: self.n_subsurfaces,
            l_taps: self.l_taps,
            eta: self.eta,
            velocity_mps: self.velocity_mps,
            noise_dbm: self.noise_dbm,
            processing_gain_db: self.processing_gain_db,
            tx_power_dbm: self.tx_power_dbm,
            threshold: self.threshold,
            seed: self.seed,
            n_runs: self.n_runs,
            zc_root: self.zc_root,
            reference_symbol: self.reference_symbol,
        }
    }

    /// Checks every invariant, returning the first violation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let o = &self.ofdm;
        let g = &self.geometry;
        if o.n_rbs == 0 {
            return invalid("n_rbs must be at least 1");
        }
        if o.n_subcarriers != 12 * o.n_rbs {
            return invalid("N = 12 * n_rbs violated");
        }
        if !(o.scs_hz > 0.0) {
            return invalid("scs_hz must be positive");
        }
        if self.l_taps == 0 {
            return invalid("l_taps must be at least 1");
        }
        // The reflecting link is the convolution of two L-tap links.
        let cascade_len = 2 * self.l_taps - 1;
        if o.cp_len < cascade_len || o.cp_len <= self.l_taps {
            return invalid(format!(
                "cp_len = {} must exceed the longest channel delay spread ({} taps)",
                o.cp_len, cascade_len
            ));
        }
        if o.cp_len >= o.n_subcarriers {
            return invalid("cp_len must be smaller than n_subcarriers");
        }
        for (name, d) in [
            ("d_ur_m", g.d_ur_m),
            ("d_rg_m", g.d_rg_m),
            ("d_ug_m", g.d_ug_m),
        ] {
            if !(d > 0.0) {
                return invalid(format!("{name} must be positive"));
            }
        }
        for (name, e) in [
            ("ple_ur", g.ple_ur),
            ("ple_rg", g.ple_rg),
            ("ple_ug", g.ple_ug),
        ] {
            if !(e >= 1.0) {
                return invalid(format!("{name} must be at least 1"));
            }
        }
        if !(g.fc_hz > 0.0) {
            return invalid("fc_hz must be positive");
        }
        if self.n_subsurfaces == 0 {
            return invalid("n_subsurfaces must be at least 1");
        }
        if !self.n_ris_elements.is_multiple_of(self.n_subsurfaces) {
            return invalid(format!(
                "N_R not divisible by M ({} mod {} != 0)",
                self.n_ris_elements, self.n_subsurfaces
            ));
        }
        if !(self.eta >= 0.0) {
            return invalid("eta must be non-negative");
        }
        if !(self.velocity_mps >= 0.0) {
            return invalid("velocity_mps must be non-negative");
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return invalid(format!("threshold = {} outside (0, 1]", self.threshold));
        }
        if self.n_runs == 0 {
            return invalid("n_runs must be at least 1");
        }
        if let TxPower::Sweep { start, stop, step } = self.tx_power_dbm {
            if !(step > 0.0) || stop < start {
                return invalid("tx_power_dbm sweep needs step > 0 and stop >= start");
            }
        }
        if self.zc_root == 0 || gcd(self.zc_root, o.n_subcarriers as u64) != 1 {
            return invalid(format!(
                "zc_root = {} not coprime with N = {}",
                self.zc_root, o.n_subcarriers
            ));
        }
        let max_q = self.n_subsurfaces + 1;
        if self.reference_symbol == 0 || self.reference_symbol > max_q {
            return invalid(format!("reference_symbol must lie in 1..={max_q}"));
        }
        Ok(())
    }

    /// Sub-surface side length for square grids, if M is a perfect square.
    pub fn m_side(&self) -> Option<usize> {
        square_side(self.n_subsurfaces)
    }

    /// Copy with a different sub-surface count, revalidated.
    pub fn with_subsurfaces(&self, m: usize) -> Result<Self, ConfigError> {
        let mut c = self.clone();
        c.n_subsurfaces = m;
        if c.reference_symbol > m + 1 {
            c.reference_symbol = 1;
        }
        c.validate()?;
        Ok(c)
    }

    /// Receiver noise variance per sub-carrier in mW, after processing gain.
    pub fn noise_var_mw(&self) -> f64 {
        crate::db_to_linear(self.noise_dbm - self.processing_gain_db)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_repr()).expect("config serializes")
    }
}

impl fmt::Display for SimConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn square_side(m: usize) -> Option<usize> {
    let s = (m as f64).sqrt().round() as usize;
    (s * s == m).then_some(s)
}

pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    SimConfig::from_file_repr(file)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SimConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Reference scenario: 28 GHz, 16 RBs at 30 kHz, 576-element RIS in 16
/// sub-surfaces, 6-tap channels, UE at 10 m/s.
pub fn reference_preset() -> SimConfig {
    let file = ConfigFile {
        n_rbs: 16,
        n_subcarriers: None,
        scs_hz: 30e3,
        cp_len: 16,
        fc_hz: 28e9,
        d_ur_m: 5.0,
        d_rg_m: 50.0,
        d_ug_m: 50.0,
        ple_ur: 2.0,
        ple_rg: 2.1,
        ple_ug: 3.5,
        n_ris_elements: 576,
        n_subsurfaces: 16,
        l_taps: 6,
        eta: 0.1,
        velocity_mps: 10.0,
        noise_dbm: -106.0,
        processing_gain_db: 40.0,
        tx_power_dbm: TxPower::Sweep {
            start: 0.0,
            stop: 30.0,
            step: 5.0,
        },
        threshold: 0.1,
        seed: 1,
        n_runs: 200,
        zc_root: 1,
        reference_symbol: 1,
    };
    SimConfig::from_file_repr(file).expect("preset is valid")
}
