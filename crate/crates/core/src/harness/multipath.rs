use rand::Rng;

use super::{map_runs, mean_stderr, run_rng, RunOptions, Scenario, SweepResult, SweepRow};
use crate::channel::{gen_links, LinkSet};
use crate::config::SimConfig;
use crate::estimators::{
    bm1_estimate, bm2_estimate, per_symbol_cfr, proposed_estimate, EstimationResult, Scheme,
    SuperimposedEstimates,
};
use crate::metrics::{achievable_rate, nmse, rate_ratio, strongest_tap_beam};
use crate::signal::{dft_reflection_pattern, effective_noise_var, receive_symbol, zadoff_chu};
use crate::Result;

pub const MULTIPATH_SCHEMES: [Scheme; 3] = [Scheme::Bm1, Scheme::Bm2, Scheme::Proposed];

#[derive(Debug, Clone)]
pub enum MultipathSweep {
    Power(Vec<f64>),
    Eta { values: Vec<f64>, tx_power_dbm: f64 },
}

/// Per-run metrics, indexed like [`MULTIPATH_SCHEMES`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultipathOutcome {
    /// NMSE of the cascaded (reflecting link) estimate at the reference symbol.
    pub nmse: [f64; 3],
    pub rate: [f64; 3],
    pub rate_ratio: [f64; 3],
    pub rate_perfect: f64,
}

/// One training frame: symbols `0..=M+1` with the DFT pattern (symbols 0 and
/// 1 both all-ones), then data at symbol `M+2`.
pub fn simulate_multipath_run<R: Rng + ?Sized>(
    cfg: &SimConfig,
    tx_power_dbm: f64,
    opts: &RunOptions,
    rng: &mut R,
) -> Result<MultipathOutcome> {
    let m = cfg.n_subsurfaces;
    let n = cfg.ofdm.n_subcarriers;
    let dt = cfg.ofdm.symbol_duration_s;
    let (v, wavelength) = (cfg.velocity_mps, cfg.geometry.wavelength_m);
    let pilot = zadoff_chu(n, cfg.zc_root)?;
    let theta = dft_reflection_pattern(m);
    let noise_var = if opts.noiseless {
        0.0
    } else {
        effective_noise_var(cfg, tx_power_dbm)
    };

    let links0 = gen_links(cfg, opts.angle_model, rng);
    let at = |i: usize| -> LinkSet { links0.evolved(v, i as f64 * dt, wavelength) };

    let mut cols = Vec::with_capacity(m + 2);
    let mut truth_q = None;
    for i in 0..=m + 1 {
        let links = at(i);
        let phi = theta.pattern(i.saturating_sub(1));
        let rx = receive_symbol(&links, &phi, &pilot, noise_var, rng).with_index(i);
        cols.push(per_symbol_cfr(&rx, &pilot));
        if i == cfg.reference_symbol {
            truth_q = Some(links);
        }
    }
    let truth_q = truth_q.expect("reference symbol within frame");
    let estimates = SuperimposedEstimates::from_columns(&cols, true);

    let q = cfg.reference_symbol;
    let results: [EstimationResult; 3] = [
        bm1_estimate(estimates.training_columns(), &theta)?,
        bm2_estimate(&estimates, q, &theta)?,
        proposed_estimate(&estimates, cfg.threshold, q, &theta)?,
    ];

    let data = at(m + 2);
    let noise_mw = cfg.noise_var_mw();
    let perfect_beam = strongest_tap_beam(data.direct_cfr(), data.cascade_cfr().view())?;
    let rate_perfect = achievable_rate(&data, &perfect_beam, tx_power_dbm, noise_mw);

    let mut out = MultipathOutcome {
        nmse: [0.0; 3],
        rate: [0.0; 3],
        rate_ratio: [0.0; 3],
        rate_perfect,
    };
    for (j, est) in results.iter().enumerate() {
        out.nmse[j] = nmse(est.h_urg_hat.view(), truth_q.cascade_cfr().view())?;
        let beam = strongest_tap_beam(&est.h_ug_hat, est.h_urg_hat.view())?;
        out.rate[j] = achievable_rate(&data, &beam, tx_power_dbm, noise_mw);
        out.rate_ratio[j] = rate_ratio(out.rate[j], rate_perfect)?;
    }
    Ok(out)
}

fn push_rows(
    rows: &mut Vec<SweepRow>,
    scenario: Scenario,
    value: f64,
    cfg: &SimConfig,
    outcomes: &[MultipathOutcome],
) {
    let row = |scheme, metric, samples: &[f64]| {
        let (mean, stderr) = mean_stderr(samples);
        SweepRow {
            scenario,
            param: scenario.param(),
            value,
            scheme,
            metric,
            mean,
            stderr,
            n_runs: samples.len(),
            seed: cfg.seed,
        }
    };
    for (j, &scheme) in MULTIPATH_SCHEMES.iter().enumerate() {
        let col = |f: fn(&MultipathOutcome) -> [f64; 3]| -> Vec<f64> {
            outcomes.iter().map(|o| f(o)[j]).collect()
        };
        rows.push(row(scheme, "nmse", &col(|o| o.nmse)));
        rows.push(row(scheme, "rate", &col(|o| o.rate)));
        rows.push(row(scheme, "rate_ratio", &col(|o| o.rate_ratio)));
        let latency = vec![scheme.symbols_used(cfg.n_subsurfaces) as f64; outcomes.len()];
        rows.push(row(scheme, "latency", &latency));
    }
    let perfect: Vec<f64> = outcomes.iter().map(|o| o.rate_perfect).collect();
    rows.push(row(Scheme::Perfect, "rate", &perfect));
}

/// Multi-path sweep over transmit power or over the non-dominant power ratio.
pub fn run_multipath(
    cfg: &SimConfig,
    sweep: &MultipathSweep,
    opts: &RunOptions,
) -> Result<SweepResult> {
    cfg.validate()?;
    let (scenario, points): (Scenario, Vec<(f64, SimConfig, f64)>) = match sweep {
        MultipathSweep::Power(powers) => (
            Scenario::MultipathPower,
            powers.iter().map(|&p| (p, cfg.clone(), p)).collect(),
        ),
        MultipathSweep::Eta {
            values,
            tx_power_dbm,
        } => {
            let mut pts = Vec::with_capacity(values.len());
            for &eta in values {
                let mut c = cfg.clone();
                c.eta = eta;
                c.validate()?;
                pts.push((eta, c, *tx_power_dbm));
            }
            (Scenario::MultipathEta, pts)
        }
    };

    let mut rows = Vec::new();
    for (value, point_cfg, power) in &points {
        let outcomes = map_runs(cfg.n_runs, opts.jobs, |r| {
            simulate_multipath_run(point_cfg, *power, opts, &mut run_rng(cfg.seed, r))
        })?;
        push_rows(&mut rows, scenario, *value, point_cfg, &outcomes);
    }
    Ok(SweepResult { rows })
}
