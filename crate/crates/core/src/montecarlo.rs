//! Seeded Monte Carlo estimation of outage and ergodic rates over sweep
//! grids.
//!
//! Every sweep point owns a seed derived from (master seed, SNR, χ), so the
//! results do not depend on enumeration order, and ξ does not enter the
//! seed: all schemes see the same fading draws at every ξ. Trials are cut
//! into fixed-size chunks, each chunk reading its own ChaCha stream, and
//! chunk tallies merge in chunk order. A parallel driver that evaluates
//! chunks on several threads therefore reproduces the sequential result
//! bit for bit.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::{ergodic_common_terms, ergodic_private_terms, outage_common, outage_private, outage_total};
use crate::channel::complex_normal_vector;
use crate::config::noise_var;
use crate::phy::{
    dp_rsma_rates, dp_rsma_sinrs_effective, noma_outage, noma_rates, noma_sinrs, oma_rates,
    outage_indicator, sic_order, sp_rsma_sinrs, DualEffective, NomaStream, PowerAllocation, SingleEffective,
};
use crate::precoder::{common_precoder, private_precoders, PrecoderSet};
use crate::scenario::Scenario;
use crate::{CVector, Error, Result, C64};

/// Trials per RNG stream.
pub const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    DpRsma,
    SpRsma,
    SpNoma,
    DpNoma,
    Oma,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::DpRsma, Scheme::SpRsma, Scheme::SpNoma, Scheme::DpNoma, Scheme::Oma];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::DpRsma => "dp-rsma",
            Scheme::SpRsma => "sp-rsma",
            Scheme::SpNoma => "sp-noma",
            Scheme::DpNoma => "dp-noma",
            Scheme::Oma => "oma",
        }
    }

    fn needs_single_pol(self) -> bool {
        matches!(self, Scheme::SpRsma | Scheme::SpNoma | Scheme::Oma)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown scheme '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub chi: f64,
    /// ξ, residual SIC factor of the baselines.
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub snr_grid_db: Vec<f64>,
    pub chi_grid: Vec<f64>,
    pub xi_grid: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub schemes: Vec<Scheme>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.snr_grid_db.is_empty() || self.chi_grid.is_empty() || self.xi_grid.is_empty() || self.schemes.is_empty() {
            return Err(Error::Config("sweep grids and scheme list must be nonempty".into()));
        }
        if self.chi_grid.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::Config("chi grid values must lie in [0, 1]".into()));
        }
        if self.xi_grid.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(Error::Config("xi grid values must be >= 0".into()));
        }
        if self.snr_grid_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("snr grid values must be finite".into()));
        }
        Ok(())
    }

    /// Cartesian product, SNR outermost and ξ innermost.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut v = Vec::with_capacity(self.snr_grid_db.len() * self.chi_grid.len() * self.xi_grid.len());
        for &snr_db in &self.snr_grid_db {
            for &chi in &self.chi_grid {
                for &xi in &self.xi_grid {
                    v.push(SweepPoint { snr_db, chi, xi });
                }
            }
        }
        v
    }

    pub fn needs_single_pol(&self) -> bool {
        self.schemes.iter().any(|s| s.needs_single_pol())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn canonical_bits(x: f64) -> u64 {
    if x == 0.0 { 0 } else { x.to_bits() }
}

/// Seed of one sweep point; independent of ξ and of grid order.
pub fn point_seed(master_seed: u64, snr_db: f64, chi: f64) -> u64 {
    let h = splitmix64(master_seed);
    let h = splitmix64(h ^ canonical_bits(snr_db));
    splitmix64(h ^ canonical_bits(chi).rotate_left(29))
}

const FAMILY_DUAL_CHANNEL: u64 = 1;
const FAMILY_DUAL_COMMON: u64 = 2;
const FAMILY_SINGLE_CHANNEL: u64 = 3;
const FAMILY_SINGLE_COMMON: u64 = 4;

/// The RNG for one family of draws in one chunk of one point.
pub fn stream(seed: u64, family: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ family.wrapping_mul(0xd6e8_feb8_6659_fd93)));
    rng.set_stream(chunk);
    rng
}

pub fn chunk_count(trials: u64) -> u64 {
    trials.div_ceil(CHUNK)
}

pub fn chunk_len(trials: u64, chunk: u64) -> u64 {
    CHUNK.min(trials - chunk * CHUNK)
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Count, sum and sum of squares of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub n: u64,
    sum: NeumaierSum,
    sum_sq: NeumaierSum,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.sum.merge(&other.sum);
        self.sum_sq.merge(&other.sum_sq);
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 { 0.0 } else { self.sum.value() / self.n as f64 }
    }

    /// Standard error of the mean from the unbiased sample variance.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let m = self.mean();
        let var = ((self.sum_sq.value() - n * m * m) / (n - 1.0)).max(0.0);
        libm::sqrt(var / n)
    }
}

/// Per-scheme accumulators at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct Tally {
    pub trials: u64,
    /// Outage count per user.
    pub outages: Vec<u64>,
    /// Instantaneous rate per user.
    pub user_rate: Vec<Moments>,
    /// Group sum-rate per trial.
    pub group_rate: Moments,
    /// Σ_u R_u·1{no outage} per trial.
    pub outage_rate: Moments,
    /// Common and private parts of the group rate (rate-splitting schemes).
    pub common_rate: Moments,
    pub private_rate: Moments,
}

impl Tally {
    pub fn new(users: usize) -> Self {
        Self {
            trials: 0,
            outages: vec![0; users],
            user_rate: vec![Moments::default(); users],
            group_rate: Moments::default(),
            outage_rate: Moments::default(),
            common_rate: Moments::default(),
            private_rate: Moments::default(),
        }
    }

    pub fn merge(&mut self, o: &Tally) {
        self.trials += o.trials;
        for (a, b) in self.outages.iter_mut().zip(&o.outages) {
            *a += b;
        }
        for (a, b) in self.user_rate.iter_mut().zip(&o.user_rate) {
            a.merge(b);
        }
        self.group_rate.merge(&o.group_rate);
        self.outage_rate.merge(&o.outage_rate);
        self.common_rate.merge(&o.common_rate);
        self.private_rate.merge(&o.private_rate);
    }

    /// Outage estimate p̂ and binomial standard error √(p̂(1−p̂)/n).
    pub fn outage(&self, user: usize) -> (f64, f64) {
        let n = self.trials as f64;
        let p = self.outages[user] as f64 / n;
        (p, libm::sqrt(p * (1.0 - p) / n))
    }

    fn record(&mut self, outage: &[bool], rates: &[f64], targets: &[f64], common: f64, private: f64) {
        self.trials += 1;
        let mut served = 0.0;
        for u in 0..outage.len() {
            if outage[u] {
                self.outages[u] += 1;
            } else {
                served += targets[u];
            }
            self.user_rate[u].push(rates[u]);
        }
        self.group_rate.push(rates.iter().sum());
        self.outage_rate.push(served);
        self.common_rate.push(common);
        self.private_rate.push(private);
    }
}

/// Projected dual-polarized channels of the reported group's users,
/// drawn as g^{vv}, g^{vh}, g^{hv}, g^{hh} per user.
pub fn sample_dual_effective<R: rand::Rng + ?Sized>(sc: &Scenario, rng: &mut R) -> Vec<DualEffective> {
    let r = sc.dual_mix.ncols();
    sc.users
        .iter()
        .map(|u| {
            let mut next = || &sc.dual_mix * complex_normal_vector(r, rng);
            DualEffective { vv: next(), vh: next(), hv: next(), hh: next(), zeta: u.large_scale_gain }
        })
        .collect()
}

/// Projected single-polarized channels of the reported group's users.
pub fn sample_single_effective<R: rand::Rng + ?Sized>(sc: &Scenario, rng: &mut R) -> Result<Vec<SingleEffective>> {
    let single = sc
        .single
        .as_ref()
        .ok_or_else(|| Error::Config("single-polarized model not built for this scenario".into()))?;
    let r = single.mix.ncols();
    Ok(sc
        .users
        .iter()
        .map(|u| SingleEffective { h: &single.mix * complex_normal_vector(r, rng), zeta: u.large_scale_gain })
        .collect())
}

fn matched(v: &CVector) -> CVector {
    let n = libm::sqrt(v.norm_squared());
    if n > 0.0 { v / C64::from(n) } else { v.clone() }
}

#[inline]
fn gain(e: &CVector, b: &CVector) -> f64 {
    e.dotc(b).norm_sqr()
}

/// Runs one chunk and returns one tally per requested scheme.
pub fn simulate_chunk(
    sc: &Scenario,
    point: &SweepPoint,
    schemes: &[Scheme],
    seed: u64,
    chunk: u64,
    trials: u64,
) -> Result<Vec<Tally>> {
    let cfg = &sc.config;
    let users = cfg.users_per_group;
    let nv = noise_var(point.snr_db);
    let pa = PowerAllocation { sic_error: point.xi, ..cfg.powers.clone() };
    let split_targets: Vec<f64> = (0..users).map(|u| cfg.targets.combined(u)).collect();
    let half_targets: Vec<f64> = split_targets.iter().map(|r| r / 2.0).collect();
    let order = sic_order(&sc.zetas());
    let weakest = order[0];
    let want = |s: Scheme| schemes.contains(&s);
    let any_dual = want(Scheme::DpRsma) || want(Scheme::DpNoma);
    let any_single = schemes.iter().any(|s| s.needs_single_pol());
    if any_single && sc.single.is_none() {
        return Err(Error::Config("single-polarized model not built for this scenario".into()));
    }

    let mut dual_ch = stream(seed, FAMILY_DUAL_CHANNEL, chunk);
    let mut dual_c = stream(seed, FAMILY_DUAL_COMMON, chunk);
    let mut single_ch = stream(seed, FAMILY_SINGLE_CHANNEL, chunk);
    let mut single_c = stream(seed, FAMILY_SINGLE_COMMON, chunk);

    let mut tallies: Vec<(Scheme, Tally)> = schemes.iter().map(|&s| (s, Tally::new(users))).collect();
    let d = sc.dual_mix.nrows();
    let dsp = sc.single.as_ref().map_or(0, |s| s.mix.nrows());

    for _ in 0..trials {
        let dual = if any_dual { Some(sample_dual_effective(sc, &mut dual_ch)) } else { None };
        let single = if any_single { Some(sample_single_effective(sc, &mut single_ch)?) } else { None };
        let sp_common = if want(Scheme::SpRsma) { Some(common_precoder(dsp, &mut single_c)?) } else { None };
        let dp_common = if want(Scheme::DpRsma) { Some(common_precoder(d, &mut dual_c)?) } else { None };

        for (scheme, tally) in tallies.iter_mut() {
            match scheme {
                Scheme::DpRsma => {
                    let eff = dual.as_ref().expect("dual draws");
                    let hh: Vec<CVector> = eff.iter().map(|e| e.hh.clone()).collect();
                    let pre = PrecoderSet { common: dp_common.clone().expect("common"), private: private_precoders(&hh)? };
                    let rep = dp_rsma_sinrs_effective(eff, &pre, &pa, point.chi, nv);
                    let out = outage_indicator(&rep, &cfg.targets);
                    let r = dp_rsma_rates(&rep);
                    let rates: Vec<f64> = r.private.iter().map(|p| r.common + p).collect();
                    tally.record(&out, &rates, &split_targets, users as f64 * r.common, r.private.iter().sum());
                }
                Scheme::SpRsma => {
                    let eff = single.as_ref().expect("single draws");
                    let hs: Vec<CVector> = eff.iter().map(|e| e.h.clone()).collect();
                    let pre = PrecoderSet { common: sp_common.clone().expect("common"), private: private_precoders(&hs)? };
                    let rep = sp_rsma_sinrs(eff, &pre, &pa, nv);
                    let out = outage_indicator(&rep, &cfg.targets);
                    let r = dp_rsma_rates(&rep);
                    let rates: Vec<f64> = r.private.iter().map(|p| r.common + p).collect();
                    tally.record(&out, &rates, &split_targets, users as f64 * r.common, r.private.iter().sum());
                }
                Scheme::SpNoma => {
                    let eff = single.as_ref().expect("single draws");
                    let beam = matched(&eff[weakest].h);
                    let s = NomaStream {
                        gain: eff.iter().map(|e| e.zeta * gain(&e.h, &beam)).collect(),
                        leakage: vec![0.0; users],
                        powers: pa.noma_powers.clone(),
                    };
                    let rep = noma_sinrs(&[s], &order, point.xi, nv);
                    let out = noma_outage(&rep, &split_targets);
                    let rates = noma_rates(&rep, users);
                    tally.record(&out, &rates, &split_targets, 0.0, rates.iter().sum());
                }
                Scheme::DpNoma => {
                    let eff = dual.as_ref().expect("dual draws");
                    let bv = matched(&eff[weakest].vv);
                    let bh = matched(&eff[weakest].hh);
                    let half: Vec<f64> = pa.noma_powers.iter().map(|a| a / 2.0).collect();
                    let per_stream: f64 = half.iter().sum();
                    let v = NomaStream {
                        gain: eff.iter().map(|e| e.zeta * gain(&e.vv, &bv)).collect(),
                        leakage: eff.iter().map(|e| e.zeta * point.chi * gain(&e.hv, &bh) * per_stream).collect(),
                        powers: half.clone(),
                    };
                    let h = NomaStream {
                        gain: eff.iter().map(|e| e.zeta * gain(&e.hh, &bh)).collect(),
                        leakage: eff.iter().map(|e| e.zeta * point.chi * gain(&e.vh, &bv) * per_stream).collect(),
                        powers: half,
                    };
                    let rep = noma_sinrs(&[v, h], &order, point.xi, nv);
                    let out = noma_outage(&rep, &half_targets);
                    let rates = noma_rates(&rep, users);
                    tally.record(&out, &rates, &split_targets, 0.0, rates.iter().sum());
                }
                Scheme::Oma => {
                    let eff = single.as_ref().expect("single draws");
                    let rates = oma_rates(eff, nv);
                    let out: Vec<bool> = rates.iter().zip(&split_targets).map(|(r, t)| r < t).collect();
                    tally.record(&out, &rates, &split_targets, 0.0, rates.iter().sum());
                }
            }
        }
    }
    Ok(tallies.into_iter().map(|(_, t)| t).collect())
}

/// Sequential evaluation of one point.
pub fn run_point(sc: &Scenario, point: &SweepPoint, schemes: &[Scheme], trials: u64, master_seed: u64) -> Result<Vec<Tally>> {
    if trials < 1 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let seed = point_seed(master_seed, point.snr_db, point.chi);
    let mut acc: Vec<Tally> = schemes.iter().map(|_| Tally::new(sc.config.users_per_group)).collect();
    for k in 0..chunk_count(trials) {
        let part = simulate_chunk(sc, point, schemes, seed, k, chunk_len(trials, k))?;
        for (a, p) in acc.iter_mut().zip(&part) {
            a.merge(p);
        }
    }
    Ok(acc)
}

/// Per-user outage estimate and standard error for the SIC-free scheme.
pub fn estimate_outage(sc: &Scenario, point: &SweepPoint, trials: u64, seed: u64) -> Result<Vec<(f64, f64)>> {
    if trials < 100 {
        return Err(Error::Config("outage estimation needs at least 100 trials".into()));
    }
    let t = run_point(sc, point, &[Scheme::DpRsma], trials, seed)?;
    Ok((0..sc.config.users_per_group).map(|u| t[0].outage(u)).collect())
}

/// Ergodic rates of one scheme: (mean, stderr) of common, private and total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicEstimate {
    pub common: (f64, f64),
    pub private: (f64, f64),
    pub total: (f64, f64),
}

pub fn estimate_ergodic(sc: &Scenario, point: &SweepPoint, scheme: Scheme, trials: u64, seed: u64) -> Result<ErgodicEstimate> {
    if trials < 100 {
        return Err(Error::Config("ergodic estimation needs at least 100 trials".into()));
    }
    let t = &run_point(sc, point, &[scheme], trials, seed)?[0];
    let ms = |m: &Moments| (m.mean(), m.stderr());
    Ok(ErgodicEstimate { common: ms(&t.common_rate), private: ms(&t.private_rate), total: ms(&t.group_rate) })
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub chi: f64,
    pub xi: f64,
    /// One-based user index.
    pub user: usize,
    pub outage_mc: f64,
    pub outage_se: f64,
    pub outage_cf: Option<f64>,
    pub erg_mc: f64,
    pub erg_se: f64,
    pub erg_cf: Option<f64>,
}

/// Group-level figures of one scheme at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub scheme: Scheme,
    pub point: SweepPoint,
    /// Σ_u R_u(1 − P_u) (mean, stderr).
    pub outage_sum_rate: (f64, f64),
    /// Ergodic group sum-rate (mean, stderr).
    pub ergodic: (f64, f64),
    pub ergodic_common: (f64, f64),
    pub ergodic_private: (f64, f64),
    pub outage_sum_rate_cf: Option<f64>,
    pub ergodic_cf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<Row>,
    pub summaries: Vec<GroupSummary>,
    /// Points that could not be evaluated.
    pub failures: Vec<(SweepPoint, String)>,
}

impl ResultTable {
    pub fn summary(&self, scheme: Scheme, point: &SweepPoint) -> Option<&GroupSummary> {
        self.summaries.iter().find(|s| s.scheme == scheme && s.point == *point)
    }

    pub fn rows_for(&self, scheme: Scheme) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.scheme == scheme)
    }
}

/// Closed-form outage and ergodic rate per user of the SIC-free scheme.
pub fn analytic_user_values(sc: &Scenario, snr_db: f64, chi: f64) -> Result<Vec<(f64, f64)>> {
    let cfg = &sc.config;
    let p = sc.ergodic_params(snr_db, chi);
    let common = ergodic_common_terms(&p)?;
    let private = ergodic_private_terms(&p)?;
    (0..cfg.users_per_group)
        .map(|u| {
            let l = sc.link(u, snr_db, chi);
            let pc = outage_common(&l, cfg.users_per_group, cfg.targets.common_rate)?;
            let pp = outage_private(&l, cfg.targets.private_rates[u])?;
            Ok((outage_total(pc, pp), common[u] + private[u]))
        })
        .collect()
}

/// Turns merged tallies of one point into rows and summaries.
pub fn tabulate(sc: &Scenario, point: &SweepPoint, schemes: &[Scheme], tallies: &[Tally], table: &mut ResultTable) {
    let cfg = &sc.config;
    let users = cfg.users_per_group;
    let analytic = if schemes.contains(&Scheme::DpRsma) {
        match analytic_user_values(sc, point.snr_db, point.chi) {
            Ok(v) => Some(v),
            Err(e) => {
                log::warn!("closed forms unavailable at {point:?}: {e}");
                None
            }
        }
    } else {
        None
    };
    for (&scheme, t) in schemes.iter().zip(tallies) {
        let cf = if scheme == Scheme::DpRsma { analytic.as_ref() } else { None };
        for u in 0..users {
            let (p, se) = t.outage(u);
            table.rows.push(Row {
                scheme,
                snr_db: point.snr_db,
                chi: point.chi,
                xi: point.xi,
                user: u + 1,
                outage_mc: p,
                outage_se: se,
                outage_cf: cf.map(|v| v[u].0),
                erg_mc: t.user_rate[u].mean(),
                erg_se: t.user_rate[u].stderr(),
                erg_cf: cf.map(|v| v[u].1),
            });
        }
        let ms = |m: &Moments| (m.mean(), m.stderr());
        table.summaries.push(GroupSummary {
            scheme,
            point: *point,
            outage_sum_rate: ms(&t.outage_rate),
            ergodic: ms(&t.group_rate),
            ergodic_common: ms(&t.common_rate),
            ergodic_private: ms(&t.private_rate),
            outage_sum_rate_cf: cf.map(|v| (0..users).map(|u| cfg.targets.combined(u) * (1.0 - v[u].0)).sum()),
            ergodic_cf: cf.map(|v| v.iter().map(|x| x.1).sum()),
        });
    }
}

/// Sequential sweep over the whole grid. Failing points are recorded and
/// skipped.
pub fn run_sweep(spec: &SweepSpec, sc: &Scenario) -> Result<ResultTable> {
    spec.validate()?;
    let mut table = ResultTable::default();
    for point in spec.points() {
        match run_point(sc, &point, &spec.schemes, spec.trials, spec.master_seed) {
            Ok(t) => tabulate(sc, &point, &spec.schemes, &t, &mut table),
            Err(e) => table.failures.push((point, format!("{e}"))),
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SystemConfig;
    use crate::phy::RateTargets;

    fn scenario() -> Scenario {
        Scenario::new(SystemConfig::default()).unwrap().with_single_pol().unwrap()
    }

    fn pt(snr_db: f64, chi: f64, xi: f64) -> SweepPoint {
        SweepPoint { snr_db, chi, xi }
    }

    #[test]
    fn scheme_names_roundtrip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!("rsma".parse::<Scheme>().is_err());
    }

    #[test]
    fn point_seed_ignores_signed_zero_and_depends_on_point() {
        assert_eq!(point_seed(7, 0.0, 0.0), point_seed(7, -0.0, 0.0));
        assert_ne!(point_seed(7, 20.0, 0.0), point_seed(7, 20.0, 0.01));
        assert_ne!(point_seed(7, 20.0, 0.0), point_seed(8, 20.0, 0.0));
    }

    #[test]
    fn chunking_covers_all_trials() {
        for t in [1u64, 4095, 4096, 4097, 10_000] {
            let s: u64 = (0..chunk_count(t)).map(|k| chunk_len(t, k)).sum();
            assert_eq!(s, t);
        }
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn moments_match_direct_formulas() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let mut m = Moments::default();
        xs.iter().for_each(|&x| m.push(x));
        assert!((m.mean() - 3.5).abs() < 1e-15);
        let var: f64 = xs.iter().map(|x| (x - 3.5) * (x - 3.5)).sum::<f64>() / 3.0;
        assert!((m.stderr() - (var / 4.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn same_seed_gives_identical_estimates() {
        let sc = scenario();
        let a = estimate_outage(&sc, &pt(10.0, 0.01, 0.0), 500, 3).unwrap();
        let b = estimate_outage(&sc, &pt(10.0, 0.01, 0.0), 500, 3).unwrap();
        assert_eq!(a, b);
        let c = estimate_outage(&sc, &pt(10.0, 0.01, 0.0), 500, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_targets_never_outage() {
        let mut cfg = SystemConfig::default();
        cfg.targets = RateTargets { common_rate: 0.0, private_rates: vec![0.0; 3] };
        let sc = Scenario::new(cfg).unwrap();
        for (p, se) in estimate_outage(&sc, &pt(0.0, 0.1, 0.0), 300, 1).unwrap() {
            assert_eq!(p, 0.0);
            assert_eq!(se, 0.0);
        }
    }

    #[test]
    fn too_few_trials_rejected() {
        let sc = scenario();
        assert!(estimate_outage(&sc, &pt(10.0, 0.0, 0.0), 99, 1).is_err());
        assert!(estimate_ergodic(&sc, &pt(10.0, 0.0, 0.0), Scheme::DpRsma, 99, 1).is_err());
    }

    #[test]
    fn vanishing_snr_gives_vanishing_rate() {
        let sc = scenario();
        for s in Scheme::ALL {
            let e = estimate_ergodic(&sc, &pt(-100.0, 0.001, 0.0), s, 200, 1).unwrap();
            assert!(e.total.0 < 1e-6, "{s}: {}", e.total.0);
        }
    }

    #[test]
    fn outages_are_probabilities_with_nonnegative_stderr() {
        let sc = scenario();
        let spec = SweepSpec {
            snr_grid_db: vec![0.0, 20.0],
            chi_grid: vec![0.01],
            xi_grid: vec![0.1],
            trials: 300,
            master_seed: 5,
            schemes: Scheme::ALL.to_vec(),
        };
        let t = run_sweep(&spec, &sc).unwrap();
        assert_eq!(t.rows.len(), 2 * 5 * 3);
        for r in &t.rows {
            assert!((0.0..=1.0).contains(&r.outage_mc));
            assert!(r.outage_se >= 0.0 && r.erg_se >= 0.0);
            assert_eq!(r.outage_cf.is_some(), r.scheme == Scheme::DpRsma);
            assert_eq!(r.erg_cf.is_some(), r.scheme == Scheme::DpRsma);
        }
    }

    #[test]
    fn dp_rsma_rows_identical_across_xi() {
        let sc = scenario();
        let spec = SweepSpec {
            snr_grid_db: vec![24.0],
            chi_grid: vec![0.001],
            xi_grid: vec![0.0, 0.25, 0.5, 1.0],
            trials: 400,
            master_seed: 11,
            schemes: vec![Scheme::DpRsma, Scheme::SpNoma],
        };
        let t = run_sweep(&spec, &sc).unwrap();
        let dp: Vec<&Row> = t.rows_for(Scheme::DpRsma).collect();
        for r in &dp[3..] {
            let base = dp[r.user - 1];
            assert_eq!(r.outage_mc.to_bits(), base.outage_mc.to_bits());
            assert_eq!(r.erg_mc.to_bits(), base.erg_mc.to_bits());
            assert_eq!(r.erg_se.to_bits(), base.erg_se.to_bits());
        }
    }

    #[test]
    fn permuting_grid_only_reorders_rows() {
        let sc = scenario();
        let mut spec = SweepSpec {
            snr_grid_db: vec![5.0, 15.0],
            chi_grid: vec![0.0, 0.1],
            xi_grid: vec![0.0],
            trials: 200,
            master_seed: 9,
            schemes: vec![Scheme::DpRsma, Scheme::Oma],
        };
        let a = run_sweep(&spec, &sc).unwrap();
        spec.snr_grid_db.reverse();
        spec.chi_grid.reverse();
        spec.schemes.reverse();
        let b = run_sweep(&spec, &sc).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for r in &a.rows {
            assert!(b.rows.contains(r), "missing {r:?}");
        }
    }

    #[test]
    fn scheme_subset_does_not_change_draws() {
        let sc = scenario();
        let p = pt(12.0, 0.01, 0.2);
        let all = run_point(&sc, &p, &Scheme::ALL, 300, 2).unwrap();
        for (i, s) in Scheme::ALL.iter().enumerate() {
            let one = run_point(&sc, &p, &[*s], 300, 2).unwrap();
            assert_eq!(one[0], all[i], "{s}");
        }
    }

    #[test]
    fn noma_single_user_equals_single_user_beamforming() {
        let mut cfg = SystemConfig::default();
        cfg.users_per_group = 1;
        cfg.user_distances_m = vec![170.0];
        cfg.projected_dim = 2;
        cfg.powers.private_betas = vec![0.3];
        cfg.powers.noma_powers = vec![1.0];
        cfg.targets.private_rates = vec![0.5];
        let sc = Scenario::new(cfg).unwrap().with_single_pol().unwrap();
        let p = pt(10.0, 0.0, 0.0);
        let t = run_point(&sc, &p, &[Scheme::SpNoma, Scheme::Oma], 500, 1).unwrap();
        assert!((t[0].user_rate[0].mean() - t[1].user_rate[0].mean()).abs() < 1e-12);
        assert_eq!(t[0].outages, t[1].outages);
    }

    #[test]
    fn outage_stderr_halves_with_four_times_trials() {
        let sc = scenario();
        let p = pt(10.0, 0.01, 0.0);
        let a = estimate_ergodic(&sc, &p, Scheme::DpRsma, 1000, 1).unwrap();
        let b = estimate_ergodic(&sc, &p, Scheme::DpRsma, 4000, 1).unwrap();
        let ratio = a.total.1 / b.total.1;
        assert!((ratio - 2.0).abs() < 0.3, "{ratio}");
    }
}
