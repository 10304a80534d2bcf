//! `risce` command line.

use std::path::PathBuf;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use super::{
    run_multipath, run_singlepath, write_manifest, Manifest, MultipathSweep, RunOptions, Scenario,
    SweepResult, DEFAULT_ETA_SWEEP, DEFAULT_M_SWEEP, ETA_SWEEP_TX_POWER_DBM, M_SWEEP_TX_POWER_DBM,
};
use crate::channel::AngleModel;
use crate::config::{load_config, reference_preset, SimConfig, TxPower};

#[derive(Debug, Parser)]
#[command(name = "risce", version = super::output::VERSION, about = "RIS-assisted OFDM channel estimation under UE mobility")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScenarioArg {
    MultipathPower,
    MultipathEta,
    SinglepathM,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::MultipathPower => Scenario::MultipathPower,
            ScenarioArg::MultipathEta => Scenario::MultipathEta,
            ScenarioArg::SinglepathM => Scenario::SinglepathM,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AngleArg {
    Shared,
    Independent,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep and write CSV plus a JSON manifest.
    Run {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        /// Scenario config file; the reference preset when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (1 = serial).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Operating point for the eta and M sweeps, dBm.
        #[arg(long)]
        tx_power: Option<f64>,
        /// Comma-separated sweep values (powers, eta values or M values).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        /// Doppler angle assignment across UE-side links.
        #[arg(long, value_enum, default_value_t = AngleArg::Shared)]
        angles: AngleArg,
    },
    /// Write the reference configuration.
    Preset {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("risce: {msg}");
    1
}

/// Entry point; returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if e.use_stderr() {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return code;
        }
    };
    match cli.command {
        Command::Preset { out } => {
            let text = reference_preset().to_json() + "\n";
            match out {
                Some(p) => match std::fs::write(&p, text) {
                    Ok(()) => 0,
                    Err(e) => fail(format!("{}: {e}", p.display())),
                },
                None => {
                    print!("{text}");
                    0
                }
            }
        }
        Command::Run {
            scenario,
            config,
            runs,
            seed,
            out,
            jobs,
            tx_power,
            values,
            angles,
        } => {
            let mut cfg = match config {
                Some(p) => match load_config(&p) {
                    Ok(c) => c,
                    Err(e) => return fail(format!("{}: {e}", p.display())),
                },
                None => reference_preset(),
            };
            if let Some(r) = runs {
                cfg.n_runs = r;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Err(e) = cfg.validate() {
                return fail(e);
            }
            let opts = RunOptions {
                jobs: Some(jobs),
                angle_model: match angles {
                    AngleArg::Shared => AngleModel::SharedPerTap,
                    AngleArg::Independent => AngleModel::Independent,
                },
                noiseless: false,
            };
            let scenario = Scenario::from(scenario);
            let out = out.unwrap_or_else(|| PathBuf::from(format!("{scenario}.csv")));
            match execute(&cfg, scenario, tx_power, values, &opts, &out) {
                Ok(()) => 0,
                Err(e) => fail(e),
            }
        }
    }
}

/// Operating point for the fixed-power sweeps: explicit flag, else a scalar
/// config power, else the scenario default.
fn fixed_power(cfg: &SimConfig, flag: Option<f64>, default: f64) -> f64 {
    flag.unwrap_or(match cfg.tx_power_dbm {
        TxPower::Scalar(p) => p,
        TxPower::Sweep { .. } => default,
    })
}

fn execute(
    cfg: &SimConfig,
    scenario: Scenario,
    tx_power: Option<f64>,
    values: Option<Vec<f64>>,
    opts: &RunOptions,
    out: &std::path::Path,
) -> crate::Result<()> {
    let mut manifest = Manifest::from_config(cfg);
    let result: SweepResult = match scenario {
        Scenario::MultipathPower => {
            let powers = values.unwrap_or_else(|| cfg.tx_power_dbm.values());
            manifest.values.clone_from(&powers);
            run_multipath(cfg, &MultipathSweep::Power(powers), opts)?
        }
        Scenario::MultipathEta => {
            let etas = values.unwrap_or_else(|| DEFAULT_ETA_SWEEP.to_vec());
            let p = fixed_power(cfg, tx_power, ETA_SWEEP_TX_POWER_DBM);
            manifest.values.clone_from(&etas);
            manifest.tx_power_dbm = Some(p);
            run_multipath(
                cfg,
                &MultipathSweep::Eta {
                    values: etas,
                    tx_power_dbm: p,
                },
                opts,
            )?
        }
        Scenario::SinglepathM => {
            let ms: Vec<usize> = match values {
                Some(v) => v.iter().map(|&x| x as usize).collect(),
                None => DEFAULT_M_SWEEP.to_vec(),
            };
            let p = fixed_power(cfg, tx_power, M_SWEEP_TX_POWER_DBM);
            manifest.values = ms.iter().map(|&m| m as f64).collect();
            manifest.tx_power_dbm = Some(p);
            run_singlepath(cfg, &ms, p, opts)?
        }
    };
    result.write_csv(out)?;
    manifest.scenario = scenario.name().into();
    manifest.param = scenario.param().into();
    manifest.angle_model = format!("{:?}", opts.angle_model);
    manifest.csv = out
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_manifest(&manifest, Manifest::path_for(out))?;
    Ok(())
}
