//! Structural checks behind the `validate` command: precoder
//! orthonormality and isolation, full-vs-simplified received signal, and
//! goodness of fit of the Gamma gain laws.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{
    ergodic_common, ergodic_common_quadrature, ergodic_private, ergodic_private_quadrature, outage_common,
    outage_common_quadrature, outage_private, outage_private_quadrature, ErgodicParams, GainLaw, LinkParams,
};
use crate::channel::{complex_normal, complex_normal_vector, sample_channel, ChannelRealization};
use crate::montecarlo::sample_dual_effective;
use crate::phy::{dp_rsma_gains, received_full, received_simplified, DualEffective, GroupSymbols};
use crate::precoder::{common_precoder, private_precoders, PrecoderSet};
use crate::scenario::Scenario;
use crate::specialfn::{gamma_cdf, GammaParams};
use crate::{max_modulus, CMatrix, CVector, Result};

/// Largest ‖F_gᴴF_g − I‖_max over groups.
pub fn orthonormality_residual(sc: &Scenario) -> f64 {
    sc.precoders
        .iter()
        .map(|p| {
            let n = p.f.ncols();
            max_modulus(&(p.f.adjoint() * &p.f - CMatrix::identity(n, n)))
        })
        .fold(0.0, f64::max)
}

/// Largest ‖U_{g'}ᴴF_g‖_max over ordered pairs g ≠ g'.
pub fn isolation_residual(sc: &Scenario) -> f64 {
    let mut worst: f64 = 0.0;
    for (g, p) in sc.precoders.iter().enumerate() {
        for (h, m) in sc.groups.iter().enumerate() {
            if g != h {
                worst = worst.max(max_modulus(&(m.eigvecs.adjoint() * &p.f)));
            }
        }
    }
    worst
}

fn reported_channels(sc: &Scenario, chi: f64, rng: &mut ChaCha8Rng) -> Result<Vec<ChannelRealization>> {
    let (group, _) = sc.reported();
    sc.users.iter().map(|u| sample_channel(group, u, chi, rng)).collect()
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Result<CVector> {
    common_precoder(dim, rng)
}

/// Largest |(h^{hh}_{u'})ᴴF p_{u}| / ‖h^{hh}_{u'}‖ over u ≠ u' and draws.
pub fn private_isolation_residual(sc: &Scenario, chi: f64, draws: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, f) = sc.reported();
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let ch = reported_channels(sc, chi, &mut rng)?;
        let hh: Vec<CVector> = ch.iter().map(|c| f.project(&c.h_hh)).collect();
        let p = private_precoders(&hh)?;
        for (u, pu) in p.iter().enumerate() {
            let beam = &f.f * pu;
            for (v, c) in ch.iter().enumerate() {
                if u != v {
                    let r = libm::sqrt(c.h_hh.dotc(&beam).norm_sqr() / c.h_hh.norm_squared());
                    worst = worst.max(r);
                }
            }
        }
    }
    Ok(worst)
}

/// Largest relative gap between the received pair computed from every
/// group's transmit signal and the two-term single-group form.
pub fn received_signal_residual(sc: &Scenario, chi: f64, draws: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = &sc.config;
    let rg = cfg.reported_group;
    let users = cfg.users_per_group;
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let ch = reported_channels(sc, chi, &mut rng)?;
        let mut sets = Vec::with_capacity(sc.precoders.len());
        let mut symbols = Vec::with_capacity(sc.precoders.len());
        for (g, f) in sc.precoders.iter().enumerate() {
            let d = f.dim();
            let private = if g == rg {
                let hh: Vec<CVector> = ch.iter().map(|c| f.project(&c.h_hh)).collect();
                private_precoders(&hh)?
            } else {
                (0..users).map(|_| random_unit(d, &mut rng)).collect::<Result<_>>()?
            };
            sets.push(PrecoderSet { common: random_unit(d, &mut rng)?, private });
            symbols.push(GroupSymbols {
                common: complex_normal(&mut rng),
                private: complex_normal_vector(users, &mut rng).iter().copied().collect(),
            });
        }
        for (u, c) in ch.iter().enumerate() {
            let full = received_full(c, &sc.precoders, &sets, &symbols, &cfg.powers);
            let simple = received_simplified(c, &sc.precoders[rg], &sets[rg], &symbols[rg], u, &cfg.powers);
            let num = (full[0] - simple[0]).norm_sqr() + (full[1] - simple[1]).norm_sqr();
            let den = simple[0].norm_sqr() + simple[1].norm_sqr();
            worst = worst.max(libm::sqrt(num / den));
        }
    }
    Ok(worst)
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance<F: FnMut(f64) -> f64>(samples: &mut [f64], mut cdf: F) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// KS distances of one user's ς^c and ς^p samples from the Gamma laws
/// used by the closed forms, and from moment-matched Gamma laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub common: f64,
    pub private: f64,
    pub common_matched: f64,
    pub private_matched: f64,
}

fn moment_matched(xs: &[f64]) -> Result<GammaParams> {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    GammaParams::new(m * m / v, m / v)
}

pub fn gamma_fit(sc: &Scenario, user: usize, snr_db: f64, chi: f64, samples: usize, seed: u64) -> Result<GammaFit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = sc.dual_mix.nrows();
    let law = GainLaw::new(&sc.link(user, snr_db, chi), sc.config.users_per_group)?;
    let mut common = Vec::with_capacity(samples);
    let mut private = Vec::with_capacity(samples);
    for _ in 0..samples {
        let eff: Vec<DualEffective> = sample_dual_effective(sc, &mut rng);
        let hh: Vec<CVector> = eff.iter().map(|e| e.hh.clone()).collect();
        let pre = PrecoderSet { common: common_precoder(d, &mut rng)?, private: private_precoders(&hh)? };
        let g = &dp_rsma_gains(&eff, &pre, &sc.config.powers, chi)[user];
        common.push(g.signal_common);
        private.push(g.signal_private);
    }
    let ks = |xs: &mut [f64], p: GammaParams| ks_distance(xs, |x| gamma_cdf(p, x).unwrap_or(f64::NAN));
    let (mc, mp) = (moment_matched(&common)?, moment_matched(&private)?);
    Ok(GammaFit {
        common: ks(&mut common, law.signal_common),
        private: ks(&mut private, law.signal_private),
        common_matched: ks(&mut common, mc),
        private_matched: ks(&mut private, mp),
    })
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    libm::exp(rng.gen_range(libm::log(lo)..libm::log(hi)))
}

fn random_chi(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.2) { 0.0 } else { log_uniform(rng, 1e-4, 0.5) }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b { 0.0 } else { libm::fabs(a - b) / libm::fabs(b) }
}

/// Largest relative gap between the closed-form common and private
/// outage probabilities and their double-integral oracles over random
/// parameter points.
pub fn outage_oracle_gap(points: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let alpha = rng.gen_range(0.4..0.9);
        let users = rng.gen_range(1..=4usize);
        let l = LinkParams {
            zeta: log_uniform(&mut rng, 0.02, 2.0),
            alpha,
            beta: (1.0 - alpha) / users as f64,
            chi: random_chi(&mut rng),
            phi: log_uniform(&mut rng, 0.05, 2.0),
            snr: libm::pow(10.0, rng.gen_range(0.0..35.0) / 10.0),
        };
        let (rc, rp) = (rng.gen_range(0.05..2.0), rng.gen_range(0.05..2.0));
        worst = worst.max(relative_gap(outage_common(&l, users, rc)?, outage_common_quadrature(&l, users, rc)?));
        worst = worst.max(relative_gap(outage_private(&l, rp)?, outage_private_quadrature(&l, rp)?));
    }
    Ok(worst)
}

/// Largest relative gap between the closed-form ergodic rates and the
/// CDF quadrature oracle over random parameter points.
pub fn ergodic_oracle_gap(points: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let alpha = rng.gen_range(0.4..0.9);
        let users = rng.gen_range(1..=4usize);
        let p = ErgodicParams {
            zetas: (0..users).map(|_| log_uniform(&mut rng, 0.02, 2.0)).collect(),
            alpha,
            betas: vec![(1.0 - alpha) / users as f64; users],
            chi: random_chi(&mut rng),
            phi: log_uniform(&mut rng, 0.05, 2.0),
            snr: libm::pow(10.0, rng.gen_range(0.0..35.0) / 10.0),
        };
        worst = worst.max(relative_gap(ergodic_common(&p)?, ergodic_common_quadrature(&p)?));
        worst = worst.max(relative_gap(ergodic_private(&p)?, ergodic_private_quadrature(&p)?));
    }
    Ok(worst)
}
