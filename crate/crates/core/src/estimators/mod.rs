//! Channel estimators.
//!
//! Multi-path schemes share one pipeline: per-symbol LS estimates of the
//! superimposed CFR are stacked and separated into direct and cascaded
//! components with the inverse training pattern. The Doppler-aware variants
//! first rotate the strong delay taps of every symbol back to a common
//! reference symbol, using the phase drift measured between two symbols that
//! shared the all-ones pattern.

mod cascaded;
mod dsa;
mod dump;
mod single_path;

use std::collections::BTreeMap;
use std::fmt;

use ndarray::{Array2, ArrayView1};
use num_complex::Complex64;

use crate::channel::Cfr;

pub use cascaded::{bm1_estimate, per_symbol_cfr};
pub use dsa::{bm2_estimate, dsa_adjust, measure_delta_beta, proposed_estimate, select_paths};
pub use dump::{read_estimate, write_estimate};
pub use single_path::{
    single_path_estimate, single_path_estimate_with, single_path_patterns, SinglePathEstimate,
    SinglePathOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Cascaded CE assuming a static channel over the training frame.
    Bm1,
    /// Doppler adjustment of the strongest delay tap only.
    Bm2,
    /// Doppler adjustment of every tap above the amplitude threshold.
    Proposed,
    /// Four-pilot single-path estimator.
    SinglePath,
    /// Ground truth, used as the rate reference.
    Perfect,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Bm1 => "bm1",
            Scheme::Bm2 => "bm2",
            Scheme::Proposed => "proposed",
            Scheme::SinglePath => "singlepath",
            Scheme::Perfect => "perfect",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Scheme::Bm1,
            Scheme::Bm2,
            Scheme::Proposed,
            Scheme::SinglePath,
            Scheme::Perfect,
        ]
        .into_iter()
        .find(|x| x.name() == s)
    }

    /// Pilot symbols consumed, i.e. the minimum CE latency.
    pub fn symbols_used(self, m: usize) -> usize {
        match self {
            Scheme::Bm1 => m + 1,
            Scheme::Bm2 | Scheme::Proposed => m + 2,
            Scheme::SinglePath => 4,
            Scheme::Perfect => 0,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-symbol LS estimates of the superimposed CFR, one column per symbol.
///
/// With the extra Doppler symbol the columns are symbols `0..=M+1`,
/// otherwise `1..=M+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperimposedEstimates {
    pub h_hat: Array2<Complex64>,
    pub includes_extra_symbol: bool,
}

impl SuperimposedEstimates {
    pub fn from_columns(cols: &[Cfr], includes_extra_symbol: bool) -> Self {
        let n = cols.first().map_or(0, Cfr::len);
        let h_hat = Array2::from_shape_fn((n, cols.len()), |(k, i)| cols[i].values[k]);
        SuperimposedEstimates {
            h_hat,
            includes_extra_symbol,
        }
    }

    pub fn n_subcarriers(&self) -> usize {
        self.h_hat.nrows()
    }

    pub fn n_subsurfaces(&self) -> usize {
        self.h_hat.ncols() - if self.includes_extra_symbol { 2 } else { 1 }
    }

    /// Estimate for symbol index `i`.
    pub fn symbol(&self, i: usize) -> Option<ArrayView1<'_, Complex64>> {
        let col = if self.includes_extra_symbol {
            i
        } else {
            i.checked_sub(1)?
        };
        (col < self.h_hat.ncols()).then(|| self.h_hat.column(col))
    }

    /// Columns for symbols `1..=M+1`, the input of the cascaded separation.
    pub fn training_columns(&self) -> ndarray::ArrayView2<'_, Complex64> {
        let start = usize::from(self.includes_extra_symbol);
        self.h_hat.slice(ndarray::s![.., start..])
    }
}

/// Delay taps tracked for Doppler adjustment, with their measured per-symbol
/// phase drift once known.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSet {
    pub indices: Vec<usize>,
    pub delta_beta: BTreeMap<usize, f64>,
}

impl PathSet {
    pub fn contains(&self, k: usize) -> bool {
        self.indices.binary_search(&k).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub h_ug_hat: Cfr,
    /// N x M, column m is the estimated cascaded CFR of sub-surface m.
    pub h_urg_hat: Array2<Complex64>,
    pub reference_symbol: usize,
    pub scheme: Scheme,
    pub symbols_used: usize,
}

impl EstimationResult {
    /// Splits `[h_ug | H_urg]` (N x (M+1)) into its parts.
    pub(crate) fn from_stacked(
        stacked: Array2<Complex64>,
        reference_symbol: usize,
        scheme: Scheme,
    ) -> Self {
        let m = stacked.ncols() - 1;
        let h_ug_hat = Cfr::new(stacked.column(0).to_vec());
        let h_urg_hat = stacked.slice(ndarray::s![.., 1..]).to_owned();
        EstimationResult {
            h_ug_hat,
            h_urg_hat,
            reference_symbol,
            scheme,
            symbols_used: scheme.symbols_used(m),
        }
    }

    pub fn n_subsurfaces(&self) -> usize {
        self.h_urg_hat.ncols()
    }
}
