//! Flat `key = value` configuration files.
//!
//! One key per line, `#` starts a comment, list values are comma
//! separated. Grid keys also accept `start:step:stop`. Keys that are
//! absent keep their default.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use polar_rsma_core::analytic::PhiConvention;
use polar_rsma_core::channel::ArrayGeometry;
use polar_rsma_core::config::{default_azimuths, SystemConfig};
use polar_rsma_core::montecarlo::Scheme;
use polar_rsma_core::precoder::BasisOrder;
use polar_rsma_core::scenario::Scenario;

use crate::error::CliError;

/// Sweep settings that a config file may carry next to the system keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOverrides {
    pub snr_grid_db: Option<Vec<f64>>,
    pub chi_grid: Option<Vec<f64>>,
    pub xi_grid: Option<Vec<f64>>,
    pub schemes: Option<Vec<Scheme>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits a file into assignments, rejecting malformed and duplicate lines.
pub fn parse_assignments(text: &str) -> Result<Vec<Assignment>, CliError> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::parse(line, format!("expected 'key = value', got '{content}'")))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(CliError::parse(line, "missing key before '='"));
        }
        if let Some(first) = seen.insert(key.clone(), line) {
            return Err(CliError::parse(line, format!("duplicate key '{key}' (first set on line {first})")));
        }
        out.push(Assignment { line, key, value: value.trim().to_string() });
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(a: &Assignment) -> Result<T, CliError> {
    a.value
        .parse()
        .map_err(|_| CliError::parse(a.line, format!("{}: cannot parse '{}'", a.key, a.value)))
}

fn list(a: &Assignment) -> Result<Vec<f64>, CliError> {
    a.value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::parse(a.line, format!("{}: cannot parse '{}'", a.key, s.trim())))
        })
        .collect()
}

/// A comma list, or `start:step:stop` with the end point included when
/// it falls on the grid.
fn grid(a: &Assignment) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = a.value.split(':').collect();
    if parts.len() == 1 {
        return list(a);
    }
    if parts.len() != 3 {
        return Err(CliError::parse(a.line, format!("{}: expected 'start:step:stop'", a.key)));
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::parse(a.line, format!("{}: cannot parse range '{}'", a.key, a.value)))?;
    let (start, step, stop) = (v[0], v[1], v[2]);
    if !(step > 0.0) || stop < start {
        return Err(CliError::parse(a.line, format!("{}: range needs step > 0 and stop >= start", a.key)));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

fn choice<T: Copy>(a: &Assignment, options: &[(&str, T)]) -> Result<T, CliError> {
    options.iter().find(|(name, _)| *name == a.value).map(|(_, v)| *v).ok_or_else(|| {
        let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
        CliError::parse(a.line, format!("{}: '{}' is not one of {}", a.key, a.value, names.join(", ")))
    })
}

/// Applies assignments on top of `base`. Changing `groups` without
/// `group_azimuths_deg` regenerates the default azimuths.
pub fn apply(base: SystemConfig, items: &[Assignment]) -> Result<(SystemConfig, SweepOverrides), CliError> {
    let mut c = base;
    let mut s = SweepOverrides::default();
    let mut azimuths_given = false;
    let mut groups_given = false;
    for a in items {
        match a.key.as_str() {
            "m_total" => c.m_total = number(a)?,
            "groups" => {
                c.groups = number(a)?;
                groups_given = true;
            }
            "users_per_group" => c.users_per_group = number(a)?,
            "projected_dim" => c.projected_dim = number(a)?,
            "chi" => c.chi = number(a)?,
            "group_azimuths_deg" => {
                c.group_azimuths_deg = list(a)?;
                azimuths_given = true;
            }
            "user_distances_m" => c.user_distances_m = list(a)?,
            "array_gain" => c.array_gain = number(a)?,
            "pathloss_exp" => c.pathloss_exp = number(a)?,
            "alpha" => c.powers.common_alpha = number(a)?,
            "betas" => c.powers.private_betas = list(a)?,
            "noma_powers" => c.powers.noma_powers = list(a)?,
            "xi" => c.powers.sic_error = number(a)?,
            "common_rate" => c.targets.common_rate = number(a)?,
            "private_rates" => c.targets.private_rates = list(a)?,
            "angular_spread_deg" => c.one_ring.angular_spread_deg = number(a)?,
            "spacing_wavelengths" => c.one_ring.spacing_wavelengths = number(a)?,
            "geometry" => {
                c.one_ring.geometry = choice(a, &[("circular", ArrayGeometry::Circular), ("linear", ArrayGeometry::Linear)])?
            }
            "energy_threshold" => c.energy_threshold = number(a)?,
            "basis_order" => {
                c.basis_order = choice(a, &[("own-energy", BasisOrder::OwnEnergy), ("canonical", BasisOrder::Canonical)])?
            }
            "phi_convention" => {
                c.phi_convention = choice(
                    a,
                    &[("precoder-dimension", PhiConvention::PrecoderDimension), ("printed", PhiConvention::Printed)],
                )?
            }
            "reported_group" => {
                let g: usize = number(a)?;
                if g == 0 {
                    return Err(CliError::parse(a.line, "reported_group is one-based"));
                }
                c.reported_group = g - 1;
            }
            "snr_db" => c.snr_db = number(a)?,
            "snr_grid_db" => s.snr_grid_db = Some(grid(a)?),
            "chi_grid" => s.chi_grid = Some(grid(a)?),
            "xi_grid" => s.xi_grid = Some(grid(a)?),
            "schemes" => {
                let v = a
                    .value
                    .split(',')
                    .map(|x| x.trim().parse::<Scheme>().map_err(|e| CliError::parse(a.line, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                s.schemes = Some(v);
            }
            "trials" => s.trials = Some(number(a)?),
            "seed" => s.seed = Some(number(a)?),
            other => return Err(CliError::parse(a.line, format!("unknown key '{other}'"))),
        }
    }
    if groups_given && !azimuths_given {
        c.group_azimuths_deg = default_azimuths(c.groups);
    }
    Ok((c, s))
}

/// Parses `text` over `base` and checks every dimension constraint,
/// including those that need the covariance matrices.
pub fn parse_config(base: SystemConfig, text: &str) -> Result<(SystemConfig, SweepOverrides), CliError> {
    let (c, s) = apply(base, &parse_assignments(text)?)?;
    Scenario::new(c.clone())?;
    Ok((c, s))
}

pub fn load_config(path: &Path) -> Result<(SystemConfig, SweepOverrides), CliError> {
    load_config_over(SystemConfig::default(), path)
}

pub fn load_config_over(base: SystemConfig, path: &Path) -> Result<(SystemConfig, SweepOverrides), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(base, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let (c, s) = parse_config(SystemConfig::default(), "").unwrap();
        assert_eq!(c, SystemConfig::default());
        assert_eq!(s, SweepOverrides::default());
    }

    #[test]
    fn comments_blanks_and_lists() {
        let text = "# scenario\n\nchi = 0.01   # leakage\nprivate_rates = 0.1, 1, 2\nsnr_grid_db = 0:5:20\nschemes = dp-rsma, oma\n";
        let (c, s) = parse_config(SystemConfig::default(), text).unwrap();
        assert_eq!(c.chi, 0.01);
        assert_eq!(c.targets.private_rates, vec![0.1, 1.0, 2.0]);
        assert_eq!(s.snr_grid_db.unwrap(), vec![0.0, 5.0, 10.0, 15.0, 20.0]);
        assert_eq!(s.schemes.unwrap(), vec![Scheme::DpRsma, Scheme::Oma]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_config(SystemConfig::default(), "chi = 0.1\nbogus = 3\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
        let e = parse_config(SystemConfig::default(), "\n\nchi 0.1\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 3, .. }), "{e}");
        let e = parse_config(SystemConfig::default(), "chi = a\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, .. }), "{e}");
        let e = parse_config(SystemConfig::default(), "chi = 0.1\nchi = 0.2\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn projected_dim_too_small_names_the_inequality() {
        let e = parse_config(SystemConfig::default(), "projected_dim = 2\n").unwrap_err();
        assert!(e.to_string().contains("projected_dim/2 > users_per_group − 1"), "{e}");
    }

    #[test]
    fn paper_power_split_passes_budget() {
        let (c, _) = parse_config(SystemConfig::default(), "alpha = 0.7\nbetas = 0.1, 0.1, 0.1\n").unwrap();
        assert_eq!(c.powers.common_alpha, 0.7);
        let over = parse_config(SystemConfig::default(), "alpha = 0.8\n").unwrap_err();
        assert!(matches!(over, CliError::Core(_)), "{over}");
    }

    #[test]
    fn group_count_regenerates_azimuths() {
        let (c, _) = apply(SystemConfig::default(), &parse_assignments("groups = 2\n").unwrap()).unwrap();
        assert_eq!(c.group_azimuths_deg, vec![30.0, 190.0]);
    }

    #[test]
    fn enumerations_and_one_based_group() {
        let text = "geometry = linear\nbasis_order = canonical\nphi_convention = printed\nreported_group = 2\n";
        let (c, _) = apply(SystemConfig::default(), &parse_assignments(text).unwrap()).unwrap();
        assert_eq!(c.one_ring.geometry, ArrayGeometry::Linear);
        assert_eq!(c.basis_order, BasisOrder::Canonical);
        assert_eq!(c.phi_convention, PhiConvention::Printed);
        assert_eq!(c.reported_group, 1);
        assert!(apply(SystemConfig::default(), &parse_assignments("geometry = square").unwrap()).is_err());
    }
}
