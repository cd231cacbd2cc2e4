//! Sweep settings of the published figures.

use polar_rsma_core::config::SystemConfig;
use polar_rsma_core::montecarlo::{Scheme, SweepSpec};
use polar_rsma_core::phy::RateTargets;

use crate::error::CliError;

pub const PRESET_NAMES: [&str; 6] = ["fig2a", "fig2b", "fig4a", "fig4b", "fig5a", "fig5b"];

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: &'static str,
    pub config: SystemConfig,
    pub sweep: SweepSpec,
}

/// 0, 2, …, 30 dB.
pub fn snr_axis() -> Vec<f64> {
    (0..=15).map(|k| 2.0 * k as f64).collect()
}

fn outage_sum_rate_targets() -> RateTargets {
    RateTargets { common_rate: 0.5, private_rates: vec![0.1, 1.0, 2.0] }
}

pub fn preset(name: &str) -> Result<Experiment, CliError> {
    let mut config = SystemConfig::default();
    let spec = |snr: Vec<f64>, chi: Vec<f64>, xi: Vec<f64>, trials: u64, schemes: Vec<Scheme>| SweepSpec {
        snr_grid_db: snr,
        chi_grid: chi,
        xi_grid: xi,
        trials,
        master_seed: DEFAULT_SEED,
        schemes,
    };
    let (name, sweep) = match name {
        "fig2a" => {
            config.chi = 0.0;
            ("fig2a", spec(snr_axis(), vec![0.0], vec![0.0], 1_000_000, vec![Scheme::DpRsma]))
        }
        "fig2b" => ("fig2b", spec(snr_axis(), vec![0.01, 0.1], vec![0.0], 1_000_000, vec![Scheme::DpRsma])),
        "fig4a" => {
            config.targets = outage_sum_rate_targets();
            ("fig4a", spec(snr_axis(), vec![0.001], vec![0.0, 0.1], 100_000, Scheme::ALL.to_vec()))
        }
        "fig4b" => {
            config.targets = outage_sum_rate_targets();
            config.snr_db = 24.0;
            let xi = (0..=20).map(|k| k as f64 * 0.05).collect();
            ("fig4b", spec(vec![24.0], vec![0.001], xi, 100_000, Scheme::ALL.to_vec()))
        }
        "fig5a" => ("fig5a", spec(snr_axis(), vec![0.001, 0.01, 0.1], vec![0.0], 100_000, vec![Scheme::DpRsma])),
        "fig5b" => ("fig5b", spec(snr_axis(), vec![0.001], vec![0.0, 0.1], 100_000, Scheme::ALL.to_vec())),
        other => {
            return Err(CliError::Usage(format!("unknown preset '{other}' (expected one of {})", PRESET_NAMES.join(", "))))
        }
    };
    Ok(Experiment { name, config, sweep })
}
