//! Scenario description and its static validation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::analytic::PhiConvention;
use crate::channel::{ArrayGeometry, OneRingSpec};
use crate::phy::{PowerAllocation, RateTargets};
use crate::precoder::BasisOrder;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneRingOverrides {
    pub angular_spread_deg: f64,
    pub spacing_wavelengths: f64,
    pub geometry: ArrayGeometry,
}

impl Default for OneRingOverrides {
    fn default() -> Self {
        Self { angular_spread_deg: 10.0, spacing_wavelengths: 0.5, geometry: ArrayGeometry::Circular }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// M, total transmit elements (both polarizations).
    pub m_total: usize,
    /// G
    pub groups: usize,
    /// U
    pub users_per_group: usize,
    /// M̄
    pub projected_dim: usize,
    /// χ
    pub chi: f64,
    /// θ_g in degrees, one per group.
    pub group_azimuths_deg: Vec<f64>,
    /// d_u in metres, shared by every group.
    pub user_distances_m: Vec<f64>,
    /// δ
    pub array_gain: f64,
    /// η
    pub pathloss_exp: f64,
    pub powers: PowerAllocation,
    pub targets: RateTargets,
    pub one_ring: OneRingOverrides,
    /// Relative eigenvalue threshold for counting r_g.
    pub energy_threshold: f64,
    pub basis_order: BasisOrder,
    pub phi_convention: PhiConvention,
    /// Zero-based index of the group whose users are reported.
    pub reported_group: usize,
    pub snr_db: f64,
}

/// θ_g = 30° + (g−1)·160°, reduced modulo 360°.
pub fn default_azimuths(groups: usize) -> Vec<f64> {
    (0..groups).map(|g| (30.0 + 160.0 * g as f64) % 360.0).collect()
}

/// σ² = 10^{−dB/10}.
pub fn noise_var(snr_db: f64) -> f64 {
    libm::pow(10.0, -snr_db / 10.0)
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            m_total: 100,
            groups: 4,
            users_per_group: 3,
            projected_dim: 6,
            chi: 0.001,
            group_azimuths_deg: default_azimuths(4),
            user_distances_m: vec![200.0, 170.0, 140.0],
            array_gain: 4e4,
            pathloss_exp: 2.5,
            powers: PowerAllocation {
                common_alpha: 0.7,
                private_betas: vec![0.1; 3],
                noma_powers: vec![5.0 / 8.0, 2.0 / 8.0, 1.0 / 8.0],
                sic_error: 0.0,
            },
            targets: RateTargets { common_rate: 0.5, private_rates: vec![0.1, 0.5, 1.2] },
            one_ring: OneRingOverrides::default(),
            energy_threshold: 1e-9,
            basis_order: BasisOrder::OwnEnergy,
            phi_convention: PhiConvention::PrecoderDimension,
            reported_group: 0,
            snr_db: 20.0,
        }
    }
}

fn constraint(inequality: &'static str, detail: alloc::string::String) -> Error {
    Error::Constraint { inequality, detail }
}

impl SystemConfig {
    /// Elements per polarization, M/2.
    pub fn antennas_per_pol(&self) -> usize {
        self.m_total / 2
    }

    /// ⌊(M/2 − M̄/2)/(G−1)⌋ for the dual-polarized array.
    pub fn rank_cap(&self) -> usize {
        if self.groups <= 1 {
            return self.antennas_per_pol();
        }
        (self.antennas_per_pol() - self.projected_dim / 2) / (self.groups - 1)
    }

    /// Same rule on the M-element single-polarized array with M̄ columns.
    pub fn single_pol_rank_cap(&self) -> usize {
        if self.groups <= 1 {
            return self.m_total;
        }
        (self.m_total - self.projected_dim) / (self.groups - 1)
    }

    pub fn one_ring_spec(&self, group: usize, antennas: usize) -> OneRingSpec {
        OneRingSpec {
            antennas,
            azimuth_deg: self.group_azimuths_deg[group],
            angular_spread_deg: self.one_ring.angular_spread_deg,
            spacing_wavelengths: self.one_ring.spacing_wavelengths,
            geometry: self.one_ring.geometry,
        }
    }

    /// Checks everything that does not need the covariance matrices.
    pub fn validate(&self) -> Result<()> {
        if self.m_total < 4 || self.m_total % 2 != 0 {
            return Err(Error::Config(format!("m_total = {} must be even and >= 4", self.m_total)));
        }
        if self.groups == 0 || self.users_per_group == 0 {
            return Err(Error::Config("groups and users_per_group must be at least 1".into()));
        }
        if self.projected_dim < 2 || self.projected_dim % 2 != 0 {
            return Err(Error::Config(format!(
                "projected_dim = {} must be even and >= 2",
                self.projected_dim
            )));
        }
        if self.projected_dim / 2 <= self.users_per_group - 1 {
            let weaker = if self.projected_dim > self.users_per_group - 1 {
                "; the weaker form projected_dim > users_per_group − 1 would wrongly pass"
            } else {
                ""
            };
            return Err(constraint(
                "projected_dim/2 > users_per_group − 1",
                format!(
                    "projected_dim/2 = {}, users_per_group − 1 = {}{weaker}",
                    self.projected_dim / 2,
                    self.users_per_group - 1
                ),
            ));
        }
        if self.projected_dim > self.m_total {
            return Err(constraint(
                "projected_dim/2 <= M/2",
                format!("projected_dim = {}, M = {}", self.projected_dim, self.m_total),
            ));
        }
        if self.groups > 1 && self.rank_cap() < 1 {
            return Err(constraint(
                "(M/2 − projected_dim/2)/(G − 1) >= 1",
                format!("M/2 = {}, projected_dim/2 = {}, G = {}", self.m_total / 2, self.projected_dim / 2, self.groups),
            ));
        }
        if self.group_azimuths_deg.len() != self.groups {
            return Err(Error::Config(format!(
                "{} azimuths given for {} groups",
                self.group_azimuths_deg.len(),
                self.groups
            )));
        }
        if self.user_distances_m.len() != self.users_per_group {
            return Err(Error::Config(format!(
                "{} distances given for {} users",
                self.user_distances_m.len(),
                self.users_per_group
            )));
        }
        if self.user_distances_m.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::Config("user distances must be positive".into()));
        }
        if !(self.array_gain > 0.0 && self.array_gain.is_finite() && self.pathloss_exp.is_finite()) {
            return Err(Error::Config("array_gain must be positive and pathloss_exp finite".into()));
        }
        if !(0.0..=1.0).contains(&self.chi) {
            return Err(Error::Config(format!("chi = {} must lie in [0, 1]", self.chi)));
        }
        if !(self.energy_threshold > 0.0 && self.energy_threshold < 1.0) {
            return Err(Error::Config(format!(
                "energy_threshold = {} must lie in (0, 1)",
                self.energy_threshold
            )));
        }
        if self.reported_group >= self.groups {
            return Err(Error::Config(format!(
                "reported_group = {} but only {} groups",
                self.reported_group, self.groups
            )));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::Config("snr_db must be finite".into()));
        }
        self.powers.validate(self.users_per_group)?;
        self.targets.validate(self.users_per_group)?;
        for g in 0..self.groups {
            self.one_ring_spec(g, self.antennas_per_pol()).validate()?;
        }
        Ok(())
    }
}
