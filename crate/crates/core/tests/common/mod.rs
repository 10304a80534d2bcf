#![allow(dead_code)]

use std::f64::consts::PI;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_ce::channel::{Cfr, Cir, LinkSet, SinglePathChannel};
use ris_ce::config::SimConfig;
use ris_ce::estimators::SuperimposedEstimates;
use ris_ce::signal::{receive_superimposed, single_on_pattern, zadoff_chu, PilotSymbol, RxSymbol};
use ris_ce::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Naive DFT training matrix, built straight from the definition.
pub fn naive_theta(m: usize) -> Array2<Complex64> {
    let s = m + 1;
    Array2::from_shape_fn((s, s), |(p, q)| {
        Complex64::from_polar(1.0, -2.0 * PI * (p as f64) * (q as f64) / s as f64)
    })
}

/// Naive O(N L) frequency response of a tap vector.
pub fn naive_cfr(taps: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            taps.iter()
                .enumerate()
                .map(|(l, t)| t * Complex64::from_polar(1.0, -2.0 * PI * (k * l) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// `[h_UG | H_URG]` of `links`, N x (M+1).
pub fn stacked_truth(links: &LinkSet) -> Array2<Complex64> {
    let n = links.n_subcarriers();
    let m = links.n_subsurfaces();
    let mut out = Array2::zeros((n, m + 1));
    out.column_mut(0)
        .assign(&ndarray::ArrayView1::from(&links.direct_cfr().values));
    out.slice_mut(ndarray::s![.., 1..])
        .assign(links.cascade_cfr());
    out
}

pub fn stacked_estimate(h_ug: &Cfr, h_urg: &Array2<Complex64>) -> Array2<Complex64> {
    let (n, m) = h_urg.dim();
    let mut out = Array2::zeros((n, m + 1));
    out.column_mut(0)
        .assign(&ndarray::ArrayView1::from(&h_ug.values));
    out.slice_mut(ndarray::s![.., 1..]).assign(h_urg);
    out
}

pub fn nmse_naive(est: &Array2<Complex64>, truth: &Array2<Complex64>) -> f64 {
    let err: f64 = est.iter().zip(truth).map(|(a, b)| (a - b).norm_sqr()).sum();
    let norm: f64 = truth.iter().map(|v| v.norm_sqr()).sum();
    err / norm
}

/// Noiseless multi-path training frame: per-symbol LS estimates for symbols
/// `0..=M+1`, channels rotated by their own Doppler at every symbol.
pub fn noiseless_frame(links0: &LinkSet, cfg: &SimConfig) -> SuperimposedEstimates {
    let m = links0.n_subsurfaces();
    let n = links0.n_subcarriers();
    let theta = naive_theta(m);
    let dt = cfg.ofdm.symbol_duration_s;
    let cols: Vec<Cfr> = (0..=m + 1)
        .map(|i| {
            let links = links0.evolved(cfg.velocity_mps, i as f64 * dt, cfg.geometry.wavelength_m);
            let col = i.saturating_sub(1);
            let phi: Vec<Complex64> = (1..=m).map(|p| theta[[p, col]]).collect();
            Cfr::new(links.superimposed(&phi))
        })
        .collect();
    assert_eq!(cols[0].len(), n);
    SuperimposedEstimates::from_columns(&cols, true)
}

/// One tap at delay `delay`, everything else zero.
pub fn single_tap(len: usize, delay: usize, value: Complex64, angle: f64) -> Cir {
    let mut taps = vec![c(0.0, 0.0); len];
    taps[delay] = value;
    Cir::new(taps, vec![angle; len])
}

/// Four noiseless pilots through a single-path cascade, as the receiver
/// would see them with one sub-surface on at a time.
pub fn singlepath_pilots(
    ch: &SinglePathChannel,
    cfg: &SimConfig,
    v: f64,
    on: [usize; 4],
) -> ([RxSymbol; 4], PilotSymbol) {
    let n = cfg.ofdm.n_subcarriers;
    let pilot = zadoff_chu(n, 1).unwrap();
    let dt = cfg.ofdm.symbol_duration_s;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let rx = std::array::from_fn(|i| {
        let h = vec![ch.cascade_at(v, i as f64 * dt)[on[i]]; n];
        RxSymbol {
            y: receive_superimposed(&h, &pilot, 0.0, &mut rng),
            symbol_index: i,
            pattern: single_on_pattern(ch.n_subsurfaces(), Some(on[i])).unwrap(),
        }
    });
    (rx, pilot)
}

pub fn rel_err(est: &[Complex64], truth: &[Complex64]) -> f64 {
    assert_eq!(est.len(), truth.len());
    let err: f64 = est.iter().zip(truth).map(|(a, b)| (a - b).norm_sqr()).sum();
    let norm: f64 = truth.iter().map(|v| v.norm_sqr()).sum();
    (err / norm).sqrt()
}

/// Single-tap links: the direct link at delay 0 and sub-surface `m` reached
/// through delay `m + 1`, each UE-side link with its own Doppler angle.
/// Every delay bin of the superimposed CIR then carries exactly one path.
pub fn separable_single_tap_links(n: usize, m: usize, seed: u64) -> LinkSet {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = m + 1;
    let unit = |rng: &mut ChaCha8Rng| {
        Complex64::from_polar(rng.random_range(0.5..1.0), rng.random_range(0.0..2.0 * PI))
    };
    let ug = single_tap(len, 0, unit(&mut rng), rng.random_range(0.0..2.0 * PI));
    let mut ur = Vec::with_capacity(m);
    let mut rg = Vec::with_capacity(m);
    for j in 0..m {
        let value = unit(&mut rng);
        ur.push(single_tap(
            len,
            j + 1,
            value,
            rng.random_range(0.0..2.0 * PI),
        ));
        rg.push(single_tap(1, 0, unit(&mut rng), 0.0));
    }
    LinkSet::new(n, ug, ur, rg).unwrap()
}
