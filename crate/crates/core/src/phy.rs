//! Per-realization SINRs, outage events and rates for the SIC-free
//! dual-polarized scheme and the baselines.

use alloc::format;
use alloc::vec::Vec;

use crate::channel::ChannelRealization;
use crate::precoder::{GroupPrecoder, PrecoderSet};
use crate::{CVector, Error, Result, C64};

const BUDGET_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// α: common-message share.
    pub common_alpha: f64,
    /// β_u: private-message shares.
    pub private_betas: Vec<f64>,
    /// Power-domain NOMA shares, user order.
    pub noma_powers: Vec<f64>,
    /// ξ: residual fraction of a cancelled signal left after SIC.
    pub sic_error: f64,
}

impl PowerAllocation {
    pub fn validate(&self, users: usize) -> Result<()> {
        if self.private_betas.len() != users || self.noma_powers.len() != users {
            return Err(Error::Config(format!(
                "{} private betas and {} NOMA powers given for {users} users",
                self.private_betas.len(),
                self.noma_powers.len()
            )));
        }
        let all = core::iter::once(&self.common_alpha)
            .chain(&self.private_betas)
            .chain(&self.noma_powers);
        for &v in all {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("power coefficient {v} must be finite and >= 0")));
            }
        }
        if !(self.common_alpha > 0.0 && self.common_alpha < 1.0) {
            return Err(Error::Config(format!(
                "common_alpha = {} (need 0 < alpha < 1)",
                self.common_alpha
            )));
        }
        let rsma: f64 = self.common_alpha + self.private_betas.iter().sum::<f64>();
        if rsma > 1.0 + BUDGET_SLACK {
            return Err(Error::Config(format!(
                "common_alpha + sum(private_betas) = {rsma} exceeds 1"
            )));
        }
        let noma: f64 = self.noma_powers.iter().sum();
        if noma > 1.0 + BUDGET_SLACK {
            return Err(Error::Config(format!("sum(noma_powers) = {noma} exceeds 1")));
        }
        if !(self.sic_error >= 0.0 && self.sic_error.is_finite()) {
            return Err(Error::Config(format!("sic_error = {} must be >= 0", self.sic_error)));
        }
        Ok(())
    }
}

/// 2^R − 1.
pub fn rate_threshold(rate: f64) -> f64 {
    libm::exp2(rate) - 1.0
}

/// log₂(1 + γ).
#[inline]
pub fn capacity(sinr: f64) -> f64 {
    libm::log2(1.0 + sinr)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTargets {
    /// R^c in bpcu.
    pub common_rate: f64,
    /// R^p_u in bpcu.
    pub private_rates: Vec<f64>,
}

impl RateTargets {
    pub fn validate(&self, users: usize) -> Result<()> {
        if self.private_rates.len() != users {
            return Err(Error::Config(format!(
                "{} private rates given for {users} users",
                self.private_rates.len()
            )));
        }
        if core::iter::once(&self.common_rate)
            .chain(&self.private_rates)
            .any(|&r| !(r >= 0.0 && r.is_finite()))
        {
            return Err(Error::Config("target rates must be finite and >= 0".into()));
        }
        Ok(())
    }

    pub fn common_threshold(&self) -> f64 {
        rate_threshold(self.common_rate)
    }

    pub fn private_threshold(&self, user: usize) -> f64 {
        rate_threshold(self.private_rates[user])
    }

    /// R^c + R^p_u, the target used by schemes without rate splitting.
    pub fn combined(&self, user: usize) -> f64 {
        self.common_rate + self.private_rates[user]
    }
}

/// F-projected dual-polarized sub-channels of one user (Fᴴh^{ij}).
#[derive(Debug, Clone, PartialEq)]
pub struct DualEffective {
    pub vv: CVector,
    pub vh: CVector,
    pub hv: CVector,
    pub hh: CVector,
    pub zeta: f64,
}

impl DualEffective {
    pub fn project(ch: &ChannelRealization, f: &GroupPrecoder) -> Self {
        Self {
            vv: f.project(&ch.h_vv),
            vh: f.project(&ch.h_vh),
            hv: f.project(&ch.h_hv),
            hh: f.project(&ch.h_hh),
            zeta: ch.large_scale_gain,
        }
    }
}

/// F-projected single-polarized channel of one user.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleEffective {
    pub h: CVector,
    pub zeta: f64,
}

#[inline]
fn gain(eff: &CVector, v: &CVector) -> f64 {
    eff.dotc(v).norm_sqr()
}

/// Numerator and interference terms of one user's two SINRs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GainTerms {
    /// ς^c
    pub signal_common: f64,
    /// ω^c
    pub interference_common: f64,
    /// ς^p
    pub signal_private: f64,
    /// ω^p
    pub interference_private: f64,
}

impl GainTerms {
    pub fn common_sinr(&self, noise_var: f64) -> f64 {
        self.signal_common / (self.interference_common + noise_var)
    }

    pub fn private_sinr(&self, noise_var: f64) -> f64 {
        self.signal_private / (self.interference_private + noise_var)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinrReport {
    pub common_sinr: Vec<f64>,
    pub private_sinr: Vec<f64>,
    /// ρ = 1/σ².
    pub snr: f64,
    pub gains: Vec<GainTerms>,
}

impl SinrReport {
    fn from_gains(gains: Vec<GainTerms>, noise_var: f64) -> Self {
        Self {
            common_sinr: gains.iter().map(|g| g.common_sinr(noise_var)).collect(),
            private_sinr: gains.iter().map(|g| g.private_sinr(noise_var)).collect(),
            snr: 1.0 / noise_var,
            gains,
        }
    }
}

/// Gain terms of the dual-polarized scheme: common message on the
/// vertical polarization, private messages on the horizontal one,
/// cross-polar leakage scaled by χ.
pub fn dp_rsma_gains(users: &[DualEffective], pre: &PrecoderSet, pa: &PowerAllocation, chi: f64) -> Vec<GainTerms> {
    users
        .iter()
        .enumerate()
        .map(|(u, e)| {
            let leak_c: f64 = pre
                .private
                .iter()
                .zip(&pa.private_betas)
                .map(|(p, &b)| gain(&e.hv, p) * b)
                .sum();
            GainTerms {
                signal_common: e.zeta * gain(&e.vv, &pre.common) * pa.common_alpha,
                interference_common: e.zeta * chi * leak_c,
                signal_private: e.zeta * gain(&e.hh, &pre.private[u]) * pa.private_betas[u],
                interference_private: e.zeta * chi * gain(&e.vh, &pre.common) * pa.common_alpha,
            }
        })
        .collect()
}

/// SINRs of the SIC-free dual-polarized scheme on projected channels.
pub fn dp_rsma_sinrs_effective(
    users: &[DualEffective],
    pre: &PrecoderSet,
    pa: &PowerAllocation,
    chi: f64,
    noise_var: f64,
) -> SinrReport {
    SinrReport::from_gains(dp_rsma_gains(users, pre, pa, chi), noise_var)
}

/// SINRs of the SIC-free dual-polarized scheme.
pub fn dp_rsma_sinrs(
    channels: &[ChannelRealization],
    f: &GroupPrecoder,
    pre: &PrecoderSet,
    pa: &PowerAllocation,
    noise_var: f64,
) -> SinrReport {
    let chi = channels.first().map_or(0.0, |c| c.ixpd);
    let eff: Vec<DualEffective> = channels.iter().map(|c| DualEffective::project(c, f)).collect();
    dp_rsma_sinrs_effective(&eff, pre, pa, chi, noise_var)
}

/// Per-user outage: common or private rate strictly below target.
pub fn outage_indicator(report: &SinrReport, targets: &RateTargets) -> Vec<bool> {
    report
        .common_sinr
        .iter()
        .zip(&report.private_sinr)
        .enumerate()
        .map(|(u, (&c, &p))| capacity(c) < targets.common_rate || capacity(p) < targets.private_rates[u])
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsmaRates {
    /// min_l log₂(1 + γ^c_l), decodable by every user.
    pub common: f64,
    pub private: Vec<f64>,
}

impl RsmaRates {
    /// Σ_u min_l log₂(1+γ^c_l) + Σ_u log₂(1+γ^p_u).
    pub fn group_sum(&self) -> f64 {
        self.private.len() as f64 * self.common + self.private.iter().sum::<f64>()
    }
}

pub fn dp_rsma_rates(report: &SinrReport) -> RsmaRates {
    let common = report
        .common_sinr
        .iter()
        .map(|&g| capacity(g))
        .fold(f64::INFINITY, f64::min);
    RsmaRates {
        common: if common.is_finite() { common } else { 0.0 },
        private: report.private_sinr.iter().map(|&g| capacity(g)).collect(),
    }
}

/// Single-polarized RSMA with superposed common and private streams.
/// Private decoding follows SIC of the common stream, leaving ξ of its
/// power behind.
pub fn sp_rsma_sinrs(users: &[SingleEffective], pre: &PrecoderSet, pa: &PowerAllocation, noise_var: f64) -> SinrReport {
    let gains = users
        .iter()
        .enumerate()
        .map(|(u, e)| {
            let per: Vec<f64> = pre
                .private
                .iter()
                .zip(&pa.private_betas)
                .map(|(p, &b)| e.zeta * gain(&e.h, p) * b)
                .collect();
            let common = e.zeta * gain(&e.h, &pre.common) * pa.common_alpha;
            let others: f64 = per.iter().enumerate().filter(|&(n, _)| n != u).map(|(_, v)| v).sum();
            GainTerms {
                signal_common: common,
                interference_common: per.iter().sum(),
                signal_private: per[u],
                interference_private: pa.sic_error * common + others,
            }
        })
        .collect();
    SinrReport::from_gains(gains, noise_var)
}

/// Received power gains of one NOMA stream.
#[derive(Debug, Clone, PartialEq)]
pub struct NomaStream {
    /// ζ_u·|hᴴF c|² on the stream's polarization.
    pub gain: Vec<f64>,
    /// Power from the other polarization's stream (never cancelled).
    pub leakage: Vec<f64>,
    /// Power shares carried by this stream, user order.
    pub powers: Vec<f64>,
}

/// Decoding chain of every user on one stream: `(message, SINR)` in SIC
/// order, the last entry being the user's own message.
#[derive(Debug, Clone, PartialEq)]
pub struct NomaStreamReport {
    pub stages: Vec<Vec<(usize, f64)>>,
}

impl NomaStreamReport {
    pub fn own_sinr(&self, user: usize) -> f64 {
        self.stages[user].last().map_or(0.0, |s| s.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NomaReport {
    pub streams: Vec<NomaStreamReport>,
}

/// SIC order: weakest large-scale gain first (ties by index).
pub fn sic_order(zetas: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..zetas.len()).collect();
    order.sort_by(|&a, &b| zetas[a].total_cmp(&zetas[b]).then(a.cmp(&b)));
    order
}

/// Power-domain NOMA on one or more streams. A user decodes, in `order`,
/// every message up to its own; each cancelled message leaves `sic_error`
/// of its power as interference.
pub fn noma_sinrs(streams: &[NomaStream], order: &[usize], sic_error: f64, noise_var: f64) -> NomaReport {
    let pos: Vec<usize> = {
        let mut p = alloc::vec![0; order.len()];
        for (i, &u) in order.iter().enumerate() {
            p[u] = i;
        }
        p
    };
    let streams = streams
        .iter()
        .map(|s| {
            let stages = (0..order.len())
                .map(|k| {
                    let g = s.gain[k];
                    let floor = s.leakage[k] + noise_var;
                    (0..=pos[k])
                        .map(|i| {
                            let j = order[i];
                            let undecoded: f64 = order[i + 1..].iter().map(|&n| s.powers[n]).sum();
                            let residual: f64 = order[..i].iter().map(|&n| s.powers[n]).sum();
                            let sinr = g * s.powers[j] / (g * (undecoded + sic_error * residual) + floor);
                            (j, sinr)
                        })
                        .collect()
                })
                .collect();
            NomaStreamReport { stages }
        })
        .collect();
    NomaReport { streams }
}

/// Per-user outage: any decoding stage on any stream falls short of the
/// message's per-stream target.
pub fn noma_outage(report: &NomaReport, stream_targets: &[f64]) -> Vec<bool> {
    let users = stream_targets.len();
    (0..users)
        .map(|k| {
            report.streams.iter().any(|s| {
                s.stages[k]
                    .iter()
                    .any(|&(j, sinr)| capacity(sinr) < stream_targets[j])
            })
        })
        .collect()
}

/// Per-user rate summed over streams.
pub fn noma_rates(report: &NomaReport, users: usize) -> Vec<f64> {
    (0..users)
        .map(|k| report.streams.iter().map(|s| capacity(s.own_sinr(k))).sum())
        .collect()
}

/// Time division at full power with a matched filter in the projected
/// space: (1/U)·log₂(1 + ρζ‖Fᴴh‖²).
pub fn oma_rates(users: &[SingleEffective], noise_var: f64) -> Vec<f64> {
    let share = 1.0 / users.len() as f64;
    users
        .iter()
        .map(|e| share * capacity(e.zeta * e.h.norm_squared() / noise_var))
        .collect()
}

/// Unit-power data symbols of one group for one channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSymbols {
    pub common: C64,
    pub private: Vec<C64>,
}

/// Noise-free received pair (v, h) from the full transmit signal of every
/// group: Hᴴ Σ_m K_m [c_m√α s^c_m ; Σ_n p_mn√β_n s^p_mn].
pub fn received_full(
    ch: &ChannelRealization,
    precoders: &[GroupPrecoder],
    sets: &[PrecoderSet],
    symbols: &[GroupSymbols],
    pa: &PowerAllocation,
) -> [C64; 2] {
    let n = ch.h_vv.len();
    let mut x = CVector::zeros(2 * n);
    for ((f, set), sym) in precoders.iter().zip(sets).zip(symbols) {
        let d = f.dim();
        let mut stacked = CVector::zeros(2 * d);
        let common = &set.common * (sym.common * libm::sqrt(pa.common_alpha));
        stacked.rows_mut(0, d).copy_from(&common);
        for ((p, &s), &b) in set.private.iter().zip(&sym.private).zip(&pa.private_betas) {
            let add = p * (s * libm::sqrt(b));
            let mut lower = stacked.rows_mut(d, d);
            lower += add;
        }
        x += f.k() * stacked;
    }
    let y = ch.matrix().ad_mul(&x);
    [y[0], y[1]]
}

/// The same pair from the group's own precoders only, with inter-group
/// and intra-group private interference already dropped.
pub fn received_simplified(
    ch: &ChannelRealization,
    f: &GroupPrecoder,
    set: &PrecoderSet,
    symbols: &GroupSymbols,
    user: usize,
    pa: &PowerAllocation,
) -> [C64; 2] {
    let e = DualEffective::project(ch, f);
    let sz = libm::sqrt(ch.large_scale_gain);
    let szx = libm::sqrt(ch.large_scale_gain * ch.ixpd);
    let sa = libm::sqrt(pa.common_alpha);
    let leak: C64 = set
        .private
        .iter()
        .zip(&symbols.private)
        .zip(&pa.private_betas)
        .map(|((p, &s), &b)| e.hv.dotc(p) * s * libm::sqrt(b))
        .sum();
    let v = e.vv.dotc(&set.common) * (symbols.common * sz * sa) + leak * szx;
    let h = e.hh.dotc(&set.private[user]) * (symbols.private[user] * sz * libm::sqrt(pa.private_betas[user]))
        + e.vh.dotc(&set.common) * (symbols.common * szx * sa);
    [v, h]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::complex_normal_vector;
    use crate::precoder::{common_precoder, private_precoders};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pa() -> PowerAllocation {
        PowerAllocation {
            common_alpha: 0.7,
            private_betas: vec![0.1; 3],
            noma_powers: vec![5.0 / 8.0, 2.0 / 8.0, 1.0 / 8.0],
            sic_error: 0.0,
        }
    }

    fn draw(rng: &mut ChaCha8Rng) -> (Vec<DualEffective>, PrecoderSet) {
        let users: Vec<DualEffective> = [0.0707, 0.106, 0.182]
            .iter()
            .map(|&zeta| DualEffective {
                vv: complex_normal_vector(3, rng),
                vh: complex_normal_vector(3, rng),
                hv: complex_normal_vector(3, rng),
                hh: complex_normal_vector(3, rng),
                zeta,
            })
            .collect();
        let hh: Vec<CVector> = users.iter().map(|u| u.hh.clone()).collect();
        let pre = PrecoderSet {
            common: common_precoder(3, rng).unwrap(),
            private: private_precoders(&hh).unwrap(),
        };
        (users, pre)
    }

    #[test]
    fn power_budget_checks() {
        pa().validate(3).unwrap();
        assert!((0.7 + 0.1 * 3.0 - 1.0f64).abs() < 1e-12);
        let s: f64 = pa().noma_powers.iter().sum();
        assert_eq!(s, 1.0);
        let mut bad = pa();
        bad.private_betas = vec![0.2; 3];
        assert!(bad.validate(3).is_err());
        assert!(pa().validate(2).is_err());
    }

    #[test]
    fn zero_ixpd_common_is_interference_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (users, pre) = draw(&mut rng);
        let r = dp_rsma_sinrs_effective(&users, &pre, &pa(), 0.0, 0.01);
        for (u, e) in users.iter().enumerate() {
            let signal = e.zeta * e.vv.dotc(&pre.common).norm_sqr() * 0.7;
            assert_eq!(r.gains[u].interference_common, 0.0);
            assert_eq!(r.common_sinr[u], signal / 0.01);
            assert!((r.common_sinr[u] - 100.0 * signal).abs() < 1e-12 * r.common_sinr[u]);
        }
    }

    #[test]
    fn huge_noise_kills_sinr() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (users, pre) = draw(&mut rng);
        let r = dp_rsma_sinrs_effective(&users, &pre, &pa(), 0.1, 1e12);
        assert!(r.common_sinr.iter().chain(&r.private_sinr).all(|&g| g < 1e-9));
    }

    #[test]
    fn report_matches_scalar_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (users, pre) = draw(&mut rng);
        let (chi, nv) = (0.01, 0.01);
        let r = dp_rsma_sinrs_effective(&users, &pre, &pa(), chi, nv);
        for u in 0..3 {
            let e = &users[u];
            let mut leak = 0.0;
            for n in 0..3 {
                let z: C64 = (0..3).map(|i| e.hv[i].conj() * pre.private[n][i]).sum();
                leak += z.norm_sqr() * 0.1;
            }
            let zc: C64 = (0..3).map(|i| e.vv[i].conj() * pre.common[i]).sum();
            let gc = e.zeta * zc.norm_sqr() * 0.7 / (e.zeta * chi * leak + nv);
            let zp: C64 = (0..3).map(|i| e.hh[i].conj() * pre.private[u][i]).sum();
            let zx: C64 = (0..3).map(|i| e.vh[i].conj() * pre.common[i]).sum();
            let gp = e.zeta * zp.norm_sqr() * 0.1 / (e.zeta * chi * zx.norm_sqr() * 0.7 + nv);
            assert!((r.common_sinr[u] - gc).abs() <= 1e-14 * gc);
            assert!((r.private_sinr[u] - gp).abs() <= 1e-14 * gp);
        }
    }

    fn report(c: Vec<f64>, p: Vec<f64>) -> SinrReport {
        SinrReport { common_sinr: c, private_sinr: p, snr: 1.0, gains: vec![] }
    }

    #[test]
    fn outage_examples() {
        let zero = RateTargets { common_rate: 0.0, private_rates: vec![0.0; 2] };
        assert_eq!(outage_indicator(&report(vec![0.0, 1.0], vec![0.0, 0.0]), &zero), vec![false, false]);
        let t = RateTargets { common_rate: 2.0, private_rates: vec![1.0] };
        assert_eq!(outage_indicator(&report(vec![0.0], vec![1e9]), &t), vec![true]);
        assert_eq!(outage_indicator(&report(vec![3.0], vec![1.0]), &t), vec![false]);
    }

    #[test]
    fn rate_examples() {
        let r = dp_rsma_rates(&report(vec![3.0, 3.0, 3.0], vec![1.0, 3.0, 7.0]));
        assert_eq!(r.common, 2.0);
        assert_eq!(r.group_sum(), 3.0 * 2.0 + 1.0 + 2.0 + 3.0);
        let r = dp_rsma_rates(&report(vec![1.0], vec![3.0]));
        assert_eq!(r.group_sum(), 1.0 + 2.0);
    }

    #[test]
    fn sp_rsma_sic_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let users: Vec<SingleEffective> = (0..3)
            .map(|_| SingleEffective { h: complex_normal_vector(6, &mut rng), zeta: 0.1 })
            .collect();
        let hs: Vec<CVector> = users.iter().map(|u| u.h.clone()).collect();
        let pre = PrecoderSet {
            common: common_precoder(6, &mut rng).unwrap(),
            private: private_precoders(&hs).unwrap(),
        };
        let mut p = pa();
        let perfect = sp_rsma_sinrs(&users, &pre, &p, 0.01);
        for g in &perfect.gains {
            assert!(g.interference_private < 1e-18);
        }
        p.sic_error = 1.0;
        let failed = sp_rsma_sinrs(&users, &pre, &p, 0.01);
        for g in &failed.gains {
            assert!((g.interference_private - g.signal_common).abs() < 1e-15);
        }
    }

    #[test]
    fn noma_perfect_sic_strongest_user() {
        let s = NomaStream { gain: vec![1.0, 2.0, 4.0], leakage: vec![0.0; 3], powers: pa().noma_powers };
        let order = sic_order(&[0.07, 0.1, 0.18]);
        assert_eq!(order, vec![0, 1, 2]);
        let r = noma_sinrs(&[s.clone()], &order, 0.0, 0.5);
        assert_eq!(r.streams[0].own_sinr(2), 4.0 * 0.125 / 0.5);
        let r = noma_sinrs(&[s], &order, 0.1, 0.5);
        let want = 4.0 * 0.125 / (4.0 * 0.1 * (5.0 / 8.0 + 2.0 / 8.0) + 0.5);
        assert!((r.streams[0].own_sinr(2) - want).abs() < 1e-15);
    }

    #[test]
    fn noma_single_user_power_is_beamforming() {
        let s = NomaStream { gain: vec![2.0, 3.0, 5.0], leakage: vec![0.0; 3], powers: vec![1.0, 0.0, 0.0] };
        let r = noma_sinrs(&[s], &[0, 1, 2], 0.0, 0.1);
        assert_eq!(r.streams[0].own_sinr(0), 20.0);
        assert_eq!(noma_outage(&r, &[1.0, 0.0, 0.0]), vec![false, false, false]);
    }

    #[test]
    fn noma_single_user_equals_oma() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let h = complex_normal_vector(6, &mut rng);
        let mf = &h / C64::from(h.norm());
        let user = SingleEffective { h: h.clone(), zeta: 0.3 };
        let s = NomaStream { gain: vec![0.3 * h.dotc(&mf).norm_sqr()], leakage: vec![0.0], powers: vec![1.0] };
        let noma = noma_rates(&noma_sinrs(&[s], &[0], 0.0, 0.02), 1);
        let oma = oma_rates(&[user], 0.02);
        assert!((noma[0] - oma[0]).abs() < 1e-12);
    }

    #[test]
    fn oma_time_sharing() {
        let users: Vec<SingleEffective> = (0..4)
            .map(|_| SingleEffective { h: CVector::from_element(2, C64::new(1.0, 0.0)), zeta: 1.0 })
            .collect();
        let r = oma_rates(&users, 2.0 / 15.0);
        for v in r {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let r1 = oma_rates(&users[..1], 2.0 / 15.0);
        assert!((r1[0] - 4.0).abs() < 1e-14);
    }
}
