//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use polar_rsma_core::analytic::{ergodic_common, ergodic_private, outage_common, outage_private};
use polar_rsma_core::config::SystemConfig;
use polar_rsma_core::montecarlo::{ResultTable, Scheme, SweepSpec};
use polar_rsma_core::scenario::Scenario;

use crate::config_file::{load_config_over, SweepOverrides};
use crate::error::CliError;
use crate::output::{write_rows, write_summaries};
use crate::parallel::{run_sweep_parallel, threads_from_env};
use crate::presets::{preset, Experiment, DEFAULT_SEED};
use crate::validate::{run_validation, ValidationSettings};

pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "polar-rsma", version, about = "SIC-free dual-polarized massive MIMO rate-splitting simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo at the configured SNR, χ and ξ.
    Simulate(Options),
    /// Closed-form outage probabilities and ergodic rates.
    Analytic(Options),
    /// Monte Carlo over a grid of SNR, χ and ξ.
    Sweep(Options),
    /// Oracle and invariant checks; exits 1 when any check fails.
    Validate(Options),
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Flat key = value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// fig2a, fig2b, fig4a, fig4b, fig5a or fig5b.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo trials per point (samples per fit for validate).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Output file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write group sum-rates as CSV (simulate and sweep).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

struct Resolved {
    config: SystemConfig,
    overrides: SweepOverrides,
    experiment: Option<Experiment>,
}

fn resolve(o: &Options) -> Result<Resolved, CliError> {
    let experiment = o.preset.as_deref().map(preset).transpose()?;
    let base = experiment.as_ref().map_or_else(SystemConfig::default, |e| e.config.clone());
    let (config, overrides) = match &o.config {
        Some(path) => load_config_over(base, path)?,
        None => (base, SweepOverrides::default()),
    };
    Ok(Resolved { config, overrides, experiment })
}

fn trials(o: &Options, r: &Resolved, fallback: u64) -> u64 {
    o.trials.or(r.overrides.trials).unwrap_or(fallback)
}

fn seed(o: &Options, r: &Resolved) -> u64 {
    o.seed
        .or(r.overrides.seed)
        .or(r.experiment.as_ref().map(|e| e.sweep.master_seed))
        .unwrap_or(DEFAULT_SEED)
}

fn open_out<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(stdout),
    })
}

fn scenario_for(config: &SystemConfig, spec: &SweepSpec) -> Result<Scenario, CliError> {
    let sc = Scenario::new(config.clone())?;
    Ok(if spec.needs_single_pol() { sc.with_single_pol()? } else { sc })
}

fn emit_table(o: &Options, table: &ResultTable, stdout: &mut dyn Write) -> Result<(), CliError> {
    {
        let mut w = open_out(&o.out, stdout)?;
        write_rows(table, &mut w)?;
        w.flush()?;
    }
    if let Some(p) = &o.summary {
        let f = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        write_summaries(table, BufWriter::new(f))?;
    }
    if !table.failures.is_empty() {
        let lines: Vec<String> = table
            .failures
            .iter()
            .map(|(p, e)| format!("snr_db={} chi={} xi={}: {e}", p.snr_db, p.chi, p.xi))
            .collect();
        return Err(CliError::Failed(format!("{} point(s) failed: {}", lines.len(), lines.join("; "))));
    }
    Ok(())
}

fn cmd_simulate(o: &Options, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = resolve(o)?;
    let c = &r.config;
    let spec = SweepSpec {
        snr_grid_db: vec![c.snr_db],
        chi_grid: vec![c.chi],
        xi_grid: vec![c.powers.sic_error],
        trials: trials(o, &r, DEFAULT_TRIALS),
        master_seed: seed(o, &r),
        schemes: r
            .overrides
            .schemes
            .clone()
            .or_else(|| r.experiment.as_ref().map(|e| e.sweep.schemes.clone()))
            .unwrap_or_else(|| Scheme::ALL.to_vec()),
    };
    let sc = scenario_for(c, &spec)?;
    let table = run_sweep_parallel(&spec, &sc, threads_from_env())?;
    emit_table(o, &table, stdout)
}

fn sweep_spec(o: &Options, r: &Resolved) -> Result<SweepSpec, CliError> {
    let ov = &r.overrides;
    let base = r.experiment.as_ref().map(|e| e.sweep.clone());
    let snr = ov
        .snr_grid_db
        .clone()
        .or_else(|| base.as_ref().map(|b| b.snr_grid_db.clone()))
        .ok_or_else(|| CliError::Usage("sweep needs --preset or snr_grid_db in the config file".into()))?;
    let spec = SweepSpec {
        snr_grid_db: snr,
        chi_grid: ov
            .chi_grid
            .clone()
            .or_else(|| base.as_ref().map(|b| b.chi_grid.clone()))
            .unwrap_or_else(|| vec![r.config.chi]),
        xi_grid: ov
            .xi_grid
            .clone()
            .or_else(|| base.as_ref().map(|b| b.xi_grid.clone()))
            .unwrap_or_else(|| vec![r.config.powers.sic_error]),
        trials: trials(o, r, base.as_ref().map_or(DEFAULT_TRIALS, |b| b.trials)),
        master_seed: seed(o, r),
        schemes: ov
            .schemes
            .clone()
            .or_else(|| base.as_ref().map(|b| b.schemes.clone()))
            .unwrap_or_else(|| Scheme::ALL.to_vec()),
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_sweep(o: &Options, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = resolve(o)?;
    let spec = sweep_spec(o, &r)?;
    let sc = scenario_for(&r.config, &spec)?;
    log::info!("sweep: {} points x {} trials", spec.points().len(), spec.trials);
    let table = run_sweep_parallel(&spec, &sc, threads_from_env())?;
    emit_table(o, &table, stdout)
}

/// The 2U+2 closed-form values at the configured SNR and χ.
pub fn analytic_values(config: &SystemConfig) -> Result<Vec<(String, f64)>, CliError> {
    let sc = Scenario::new(config.clone())?;
    let (snr, chi) = (config.snr_db, config.chi);
    let users = config.users_per_group;
    let mut v = Vec::with_capacity(2 * users + 2);
    for u in 0..users {
        let p = outage_common(&sc.link(u, snr, chi), users, config.targets.common_rate)?;
        v.push((format!("outage_common_user{}", u + 1), p));
    }
    for u in 0..users {
        let p = outage_private(&sc.link(u, snr, chi), config.targets.private_rates[u])?;
        v.push((format!("outage_private_user{}", u + 1), p));
    }
    let e = sc.ergodic_params(snr, chi);
    v.push(("ergodic_common".into(), ergodic_common(&e)?));
    v.push(("ergodic_private".into(), ergodic_private(&e)?));
    Ok(v)
}

fn cmd_analytic(o: &Options, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = resolve(o)?;
    let values = analytic_values(&r.config)?;
    let mut w = open_out(&o.out, stdout)?;
    writeln!(w, "quantity,value")?;
    for (k, x) in values {
        writeln!(w, "{k},{x}")?;
    }
    w.flush()?;
    Ok(())
}

/// Returns whether every gating check passed.
fn cmd_validate(o: &Options, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let r = resolve(o)?;
    let mut s = ValidationSettings { seed: seed(o, &r), ..ValidationSettings::default() };
    if let Some(n) = o.trials {
        s.ks_samples = n as usize;
    }
    let report = run_validation(&r.config, &s)?;
    let mut w = open_out(&o.out, stdout)?;
    report.write(&mut w)?;
    w.flush()?;
    Ok(report.passed())
}

/// Runs the command line `args` (program name first) and returns the
/// process exit status: 0 success, 1 failed validation, 2 bad input,
/// 3 failure while running.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let _ = writeln!(stderr, "{}", CliError::Usage(first).machine_line());
            let _ = write!(stderr, "{}", e.render());
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Simulate(o) => cmd_simulate(o, stdout).map(|_| true),
        Command::Analytic(o) => cmd_analytic(o, stdout).map(|_| true),
        Command::Sweep(o) => cmd_sweep(o, stdout).map(|_| true),
        Command::Validate(o) => cmd_validate(o, stdout),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(stderr, "{}", CliError::Failed("validation checks failed".into()).machine_line());
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.machine_line());
            e.exit_code()
        }
    }
}
