use num_complex::Complex64;
use rand::Rng;

use super::{map_runs, mean_stderr, run_rng, RunOptions, Scenario, SweepResult, SweepRow};
use crate::channel::gen_single_path;
use crate::config::SimConfig;
use crate::estimators::{single_path_estimate, single_path_patterns, Scheme};
use crate::metrics::{nmse_of, rate_from_cfr, rate_ratio};
use crate::signal::{effective_noise_var, receive_superimposed, zadoff_chu, RxSymbol};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SinglepathOutcome {
    pub nmse: f64,
    pub rate: f64,
    pub rate_perfect: f64,
    pub rate_ratio: f64,
    pub symbols_used: usize,
}

fn conjugate_beam(cascade: &[Complex64]) -> Vec<Complex64> {
    cascade
        .iter()
        .map(|c| Complex64::from_polar(1.0, -c.arg()))
        .collect()
}

/// Four single-sub-surface pilots (symbols 0..=3), data at symbol 4.
///
/// The channel is flat across sub-carriers, so every sub-carrier of a pilot
/// observes the same cascade entry under independent noise.
pub fn simulate_singlepath_run<R: Rng + ?Sized>(
    cfg: &SimConfig,
    tx_power_dbm: f64,
    opts: &RunOptions,
    rng: &mut R,
) -> Result<SinglepathOutcome> {
    let n = cfg.ofdm.n_subcarriers;
    let m_side = cfg.m_side().ok_or(Error::NonSquare(cfg.n_subsurfaces))?;
    let dt = cfg.ofdm.symbol_duration_s;
    let v = cfg.velocity_mps;
    let pilot = zadoff_chu(n, cfg.zc_root)?;
    let noise_var = if opts.noiseless {
        0.0
    } else {
        effective_noise_var(cfg, tx_power_dbm)
    };

    let (ch, _) = gen_single_path(cfg, rng)?;
    let on = single_path_patterns(m_side);
    let rx: [RxSymbol; 4] = std::array::from_fn(|i| {
        let cascade = ch.cascade_at(v, i as f64 * dt);
        let h = vec![cascade[on[i]]; n];
        RxSymbol {
            y: receive_superimposed(&h, &pilot, noise_var, rng),
            symbol_index: i,
            pattern: crate::signal::single_on_pattern(cfg.n_subsurfaces, Some(on[i]))
                .expect("index in range"),
        }
    });
    let est = single_path_estimate(&rx, &pilot, m_side)?;

    let truth = ch.cascade_at(v, dt);
    let nmse = nmse_of(&est.cascade_hat, &truth)?;

    let data = ch.cascade_at(v, 4.0 * dt);
    let snr_scale = crate::db_to_linear(tx_power_dbm) / n as f64 / cfg.noise_var_mw();
    let received =
        |beam: &[Complex64]| -> Complex64 { data.iter().zip(beam).map(|(c, p)| c * p).sum() };
    let rate = rate_from_cfr(&[received(&conjugate_beam(&est.cascade_hat))], snr_scale);
    let rate_perfect = rate_from_cfr(&[received(&conjugate_beam(&data))], snr_scale);
    Ok(SinglepathOutcome {
        nmse,
        rate,
        rate_perfect,
        rate_ratio: rate_ratio(rate, rate_perfect)?,
        symbols_used: est.symbols_used,
    })
}

/// Single-path sweep over the number of sub-surfaces.
pub fn run_singlepath(
    cfg: &SimConfig,
    m_list: &[usize],
    tx_power_dbm: f64,
    opts: &RunOptions,
) -> Result<SweepResult> {
    let scenario = Scenario::SinglepathM;
    let mut rows = Vec::new();
    for &m in m_list {
        let point = cfg.with_subsurfaces(m)?;
        if point.m_side().is_none() {
            return Err(Error::NonSquare(m));
        }
        let outcomes = map_runs(cfg.n_runs, opts.jobs, |r| {
            simulate_singlepath_run(&point, tx_power_dbm, opts, &mut run_rng(cfg.seed, r))
        })?;
        let row = |scheme, metric, samples: Vec<f64>| {
            let (mean, stderr) = mean_stderr(&samples);
            SweepRow {
                scenario,
                param: scenario.param(),
                value: m as f64,
                scheme,
                metric,
                mean,
                stderr,
                n_runs: samples.len(),
                seed: cfg.seed,
            }
        };
        let col = |f: fn(&SinglepathOutcome) -> f64| outcomes.iter().map(f).collect::<Vec<_>>();
        rows.push(row(Scheme::SinglePath, "nmse", col(|o| o.nmse)));
        rows.push(row(Scheme::SinglePath, "rate", col(|o| o.rate)));
        rows.push(row(Scheme::SinglePath, "rate_ratio", col(|o| o.rate_ratio)));
        rows.push(row(
            Scheme::SinglePath,
            "latency",
            col(|o| o.symbols_used as f64),
        ));
        rows.push(row(Scheme::Perfect, "rate", col(|o| o.rate_perfect)));
    }
    Ok(SweepResult { rows })
}
