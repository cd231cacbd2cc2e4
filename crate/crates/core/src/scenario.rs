//! Fading-independent objects of a configuration: covariances, group
//! precoders, large-scale gains and φ.

use alloc::format;
use alloc::vec::Vec;

use crate::analytic::{phi_parameter, ErgodicParams, LinkParams};
use crate::channel::{GroupModel, UserLink};
use crate::config::SystemConfig;
use crate::precoder::{group_precoder, null_space_projector, GroupPrecoder};
use crate::{CMatrix, Error, Result};

/// Single-polarized array of M elements used by the baselines.
#[derive(Debug, Clone)]
pub struct SinglePolModel {
    pub groups: Vec<GroupModel>,
    /// M×M̄ projection of the reported group.
    pub f: CMatrix,
    /// Fᴴ U Λ^{1/2} of the reported group.
    pub mix: CMatrix,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: SystemConfig,
    pub groups: Vec<GroupModel>,
    pub precoders: Vec<GroupPrecoder>,
    pub users: Vec<UserLink>,
    /// φ of the reported group.
    pub phi: f64,
    /// F_gᴴ U_g Λ_g^{1/2} of the reported group: maps fast fading straight
    /// to the projected channel.
    pub dual_mix: CMatrix,
    pub single: Option<SinglePolModel>,
}

impl Scenario {
    /// Builds and checks the dual-polarized part.
    pub fn new(config: SystemConfig) -> Result<Self> {
        config.validate()?;
        let n = config.antennas_per_pol();
        let cap = config.rank_cap();
        let groups: Vec<GroupModel> = (0..config.groups)
            .map(|g| GroupModel::from_spec(&config.one_ring_spec(g, n), config.energy_threshold, cap))
            .collect::<Result<_>>()?;
        let half = config.projected_dim / 2;
        for (g, m) in groups.iter().enumerate() {
            if m.reduced_rank < half {
                return Err(Error::Constraint {
                    inequality: "projected_dim/2 <= reduced_rank",
                    detail: format!("group {}: reduced rank {} < {half}", g + 1, m.reduced_rank),
                });
            }
        }
        let precoders: Vec<GroupPrecoder> = (0..config.groups)
            .map(|g| {
                let others: Vec<&GroupModel> = groups.iter().enumerate().filter(|&(k, _)| k != g).map(|(_, m)| m).collect();
                group_precoder(&groups[g], &others, config.projected_dim, config.basis_order)
            })
            .collect::<Result<_>>()?;
        let users: Vec<UserLink> = config
            .user_distances_m
            .iter()
            .map(|&d| UserLink::new(config.array_gain, d, config.pathloss_exp))
            .collect::<Result<_>>()?;
        let rg = config.reported_group;
        let phi = phi_parameter(&precoders[rg], &groups[rg].covariance, config.phi_convention)?;
        let dual_mix = precoders[rg].f.adjoint() * groups[rg].mixing_matrix();
        Ok(Self { config, groups, precoders, users, phi, dual_mix, single: None })
    }

    /// Adds the M-element single-polarized model used by the baselines.
    pub fn with_single_pol(mut self) -> Result<Self> {
        let c = &self.config;
        let cap = c.single_pol_rank_cap();
        let groups: Vec<GroupModel> = (0..c.groups)
            .map(|g| GroupModel::from_spec(&c.one_ring_spec(g, c.m_total), c.energy_threshold, cap))
            .collect::<Result<_>>()?;
        let rg = c.reported_group;
        let others: Vec<&GroupModel> = groups.iter().enumerate().filter(|&(k, _)| k != rg).map(|(_, m)| m).collect();
        let f = null_space_projector(&groups[rg], &others, c.projected_dim, c.basis_order).map_err(|(have, want)| {
            Error::Constraint {
                inequality: "projected_dim <= M - sum of other groups' reduced ranks",
                detail: format!("single-polarized null space has {have} dimensions, {want} requested"),
            }
        })?;
        let mix = f.adjoint() * groups[rg].mixing_matrix();
        self.single = Some(SinglePolModel { groups, f, mix });
        Ok(self)
    }

    pub fn zetas(&self) -> Vec<f64> {
        self.users.iter().map(|u| u.large_scale_gain).collect()
    }

    pub fn reported(&self) -> (&GroupModel, &GroupPrecoder) {
        let g = self.config.reported_group;
        (&self.groups[g], &self.precoders[g])
    }

    pub fn link(&self, user: usize, snr_db: f64, chi: f64) -> LinkParams {
        let p = &self.config.powers;
        LinkParams {
            zeta: self.users[user].large_scale_gain,
            alpha: p.common_alpha,
            beta: p.private_betas[user],
            chi,
            phi: self.phi,
            snr: libm::pow(10.0, snr_db / 10.0),
        }
    }

    pub fn ergodic_params(&self, snr_db: f64, chi: f64) -> ErgodicParams {
        let p = &self.config.powers;
        ErgodicParams {
            zetas: self.zetas(),
            alpha: p.common_alpha,
            betas: p.private_betas.clone(),
            chi,
            phi: self.phi,
            snr: libm::pow(10.0, snr_db / 10.0),
        }
    }
}
