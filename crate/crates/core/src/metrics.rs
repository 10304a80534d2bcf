//! Reflection design for data transmission, achievable rate and NMSE.

use ndarray::ArrayView2;
use num_complex::Complex64;

use crate::channel::{cfr_to_cir, Cfr, LinkSet};
use crate::{Error, Result};

/// Unit-modulus RIS coefficients used for data transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamPattern {
    pub phi: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub nmse: f64,
    pub rate_bpshz: f64,
    pub rate_ratio: f64,
}

/// Aligns every cascaded link with the direct link at the delay tap where
/// their coherent sum can be largest.
///
/// The pattern is frequency-flat, so it is chosen in the delay domain: tap
/// `l*` maximises `|g_UG[l]| + sum_m |g_URG,m[l]|` and
/// `phi_m = exp(j (arg g_UG[l*] - arg g_URG,m[l*]))`.
pub fn strongest_tap_beam(
    h_ug_hat: &Cfr,
    h_urg_hat: ArrayView2<'_, Complex64>,
) -> Result<BeamPattern> {
    let (n, m) = h_urg_hat.dim();
    if h_ug_hat.len() != n {
        return Err(Error::Dimension(format!(
            "direct CFR has {} entries, cascade {n}",
            h_ug_hat.len()
        )));
    }
    let g_ug = cfr_to_cir(h_ug_hat);
    let g_urg: Vec<Vec<Complex64>> = h_urg_hat
        .columns()
        .into_iter()
        .map(|c| cfr_to_cir(&Cfr::new(c.to_vec())))
        .collect();

    let score = |l: usize| g_ug[l].norm() + g_urg.iter().map(|g| g[l].norm()).sum::<f64>();
    let (best, best_score) =
        (0..n)
            .map(|l| (l, score(l)))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
    if !(best_score > 0.0) {
        return Err(Error::ZeroInput("channel estimate"));
    }
    let anchor = g_ug[best].arg();
    let phi = (0..m)
        .map(|j| Complex64::from_polar(1.0, anchor - g_urg[j][best].arg()))
        .collect();
    Ok(BeamPattern { phi })
}

/// Spectral efficiency with equal power per sub-carrier:
/// `mean_n log2(1 + snr_scale |h_n|^2)`.
pub fn rate_from_cfr(h: &[Complex64], snr_scale: f64) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    h.iter()
        .map(|v| (1.0 + snr_scale * v.norm_sqr()).log2())
        .sum::<f64>()
        / h.len() as f64
}

/// Achievable rate in bit/s/Hz of `links` under reflection pattern `beam`,
/// with `tx_power_dbm` split evenly over the sub-carriers and receiver noise
/// `noise_var_mw` per sub-carrier.
pub fn achievable_rate(
    links: &LinkSet,
    beam: &BeamPattern,
    tx_power_dbm: f64,
    noise_var_mw: f64,
) -> f64 {
    let h = links.superimposed(&beam.phi);
    let per_subcarrier = crate::db_to_linear(tx_power_dbm) / h.len() as f64;
    rate_from_cfr(&h, per_subcarrier / noise_var_mw)
}

/// `||est - truth||^2 / ||truth||^2` over paired entries.
pub fn nmse_of<'a>(
    est: impl IntoIterator<Item = &'a Complex64>,
    truth: impl IntoIterator<Item = &'a Complex64>,
) -> Result<f64> {
    let (mut err, mut norm, mut n_est, mut n_truth) = (0.0, 0.0, 0usize, 0usize);
    let mut est = est.into_iter();
    for t in truth {
        n_truth += 1;
        let e = match est.next() {
            Some(e) => e,
            None => break,
        };
        n_est += 1;
        err += (e - t).norm_sqr();
        norm += t.norm_sqr();
    }
    if n_est != n_truth || est.next().is_some() {
        return Err(Error::Dimension("estimate and truth differ in size".into()));
    }
    if norm == 0.0 {
        return Err(Error::ZeroInput("reference channel"));
    }
    Ok(err / norm)
}

pub fn nmse(est: ArrayView2<'_, Complex64>, truth: ArrayView2<'_, Complex64>) -> Result<f64> {
    if est.dim() != truth.dim() {
        return Err(Error::Dimension(format!(
            "{:?} vs {:?}",
            est.dim(),
            truth.dim()
        )));
    }
    nmse_of(est.iter(), truth.iter())
}

pub fn rate_ratio(rate_est_csi: f64, rate_perfect_csi: f64) -> Result<f64> {
    if !(rate_perfect_csi > 0.0) {
        return Err(Error::ZeroInput("perfect-CSI rate"));
    }
    Ok(rate_est_csi / rate_perfect_csi)
}
