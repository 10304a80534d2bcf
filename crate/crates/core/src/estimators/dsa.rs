use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;

use super::{EstimationResult, PathSet, Scheme, SuperimposedEstimates};
use crate::channel::{dft_in_place, idft_in_place};
use crate::signal::ReflectionMatrix;
use crate::{Error, Result};

/// Taps of `g0` whose amplitude is at least `threshold` times the largest.
pub fn select_paths(g0: &[Complex64], threshold: f64) -> Result<PathSet> {
    let peak = g0.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroInput("delay profile of the extra symbol"));
    }
    let floor = threshold * peak;
    let indices = g0
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() >= floor)
        .map(|(k, _)| k)
        .collect();
    Ok(PathSet {
        indices,
        delta_beta: BTreeMap::new(),
    })
}

/// Phase drift of every tracked tap between symbols 0 and 1, wrapped to
/// `(-pi, pi]`. Both symbols must have used the same reflection pattern.
pub fn measure_delta_beta(g0: &[Complex64], g1: &[Complex64], pset: &PathSet) -> Result<PathSet> {
    let mut delta_beta = BTreeMap::new();
    for &k in &pset.indices {
        let (a, b) = (g0[k], g1[k]);
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return Err(Error::ZeroTap(k));
        }
        delta_beta.insert(k, (b * a.conj()).arg());
    }
    Ok(PathSet {
        indices: pset.indices.clone(),
        delta_beta,
    })
}

/// Rotates the tracked taps of symbols `1..=M+1` back to reference symbol
/// `q`, then separates the direct and cascaded CFRs.
pub fn dsa_adjust(
    estimates: &SuperimposedEstimates,
    pset: &PathSet,
    q: usize,
    theta: &ReflectionMatrix,
) -> Result<EstimationResult> {
    let m = theta.n_subsurfaces();
    if estimates.n_subsurfaces() != m || !estimates.includes_extra_symbol {
        return Err(Error::Dimension(format!(
            "need M+2 = {} symbols, got {} columns",
            m + 2,
            estimates.h_hat.ncols()
        )));
    }
    if q == 0 || q > m + 1 {
        return Err(Error::ReferenceSymbol { q, max: m + 1 });
    }
    let n = estimates.n_subcarriers();
    let mut adjusted = Array2::zeros((n, m + 1));
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..=m + 1 {
        let col = estimates.symbol(i).expect("column present");
        buf.iter_mut().zip(col.iter()).for_each(|(b, v)| *b = *v);
        idft_in_place(&mut buf);
        let steps = i as f64 - q as f64;
        for (&k, &db) in &pset.delta_beta {
            buf[k] *= Complex64::from_polar(1.0, -steps * db);
        }
        dft_in_place(&mut buf);
        adjusted
            .column_mut(i - 1)
            .iter_mut()
            .zip(&buf)
            .for_each(|(a, b)| *a = *b);
    }
    let stacked = adjusted.dot(&theta.inverse());
    Ok(EstimationResult::from_stacked(stacked, q, Scheme::Proposed))
}

fn delay_profile(estimates: &SuperimposedEstimates, i: usize) -> Vec<Complex64> {
    let mut g = estimates.symbol(i).expect("symbol present").to_vec();
    idft_in_place(&mut g);
    g
}

/// Full Doppler-adjusted pipeline with amplitude threshold `threshold`.
pub fn proposed_estimate(
    estimates: &SuperimposedEstimates,
    threshold: f64,
    q: usize,
    theta: &ReflectionMatrix,
) -> Result<EstimationResult> {
    if !estimates.includes_extra_symbol {
        return Err(Error::Dimension(
            "Doppler adjustment needs the extra symbol".into(),
        ));
    }
    let g0 = delay_profile(estimates, 0);
    let g1 = delay_profile(estimates, 1);
    let pset = select_paths(&g0, threshold)?;
    let pset = measure_delta_beta(&g0, &g1, &pset)?;
    dsa_adjust(estimates, &pset, q, theta)
}

/// Doppler adjustment of the strongest tap only (threshold 1).
pub fn bm2_estimate(
    estimates: &SuperimposedEstimates,
    q: usize,
    theta: &ReflectionMatrix,
) -> Result<EstimationResult> {
    let mut est = proposed_estimate(estimates, 1.0, q, theta)?;
    est.scheme = Scheme::Bm2;
    Ok(est)
}
