//! Gamma-law approximations of the effective gains, closed-form outage
//! probabilities and ergodic rates, and the quadrature oracles they are
//! checked against.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use libm::{exp, expm1, fabs, log1p};

use crate::precoder::GroupPrecoder;
use crate::specialfn::{
    exp_integral_ei, gamma_pdf, scaled_ei_neg, scaled_exp_integral_en, trunc_exp_taylor, GammaParams,
};
use crate::{quad, CMatrix, Error, Result};

/// Numerator of φ = (·)/tr(FᴴRF).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiConvention {
    /// Length of the common/private precoding vectors, M̄/2. This is the
    /// value for which E{ς^c} = ζα/φ holds.
    #[default]
    PrecoderDimension,
    /// M̄, both polarizations counted.
    Printed,
}

/// φ for one group.
pub fn phi_parameter(f: &GroupPrecoder, covariance: &CMatrix, convention: PhiConvention) -> Result<f64> {
    let tr = (f.f.adjoint() * covariance * &f.f).trace().re;
    let scale = covariance.trace().re.max(1.0);
    if !(tr > 1e-12 * scale) {
        return Err(Error::Numerical(alloc::format!(
            "tr(FᴴRF) = {tr:e}: the group's covariance is orthogonal to its precoder"
        )));
    }
    let numerator = match convention {
        PhiConvention::PrecoderDimension => f.dim(),
        PhiConvention::Printed => f.projected_dim,
    };
    Ok(numerator as f64 / tr)
}

/// Scalars describing one user's link in the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// ζ
    pub zeta: f64,
    /// α
    pub alpha: f64,
    /// β_u
    pub beta: f64,
    /// χ
    pub chi: f64,
    /// φ
    pub phi: f64,
    /// ρ = 1/σ²
    pub snr: f64,
}

impl LinkParams {
    fn check(&self) -> Result<()> {
        let ok = self.zeta > 0.0
            && self.alpha > 0.0
            && self.beta > 0.0
            && self.phi > 0.0
            && self.snr > 0.0
            && (0.0..=1.0).contains(&self.chi);
        if ok { Ok(()) } else { Err(Error::Domain("link parameters out of range")) }
    }
}

/// Approximate laws of ς^c, ω^c, ς^p, ω^p. The interference laws are
/// `None` at χ = 0, where the interference is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainLaw {
    pub signal_common: GammaParams,
    pub interference_common: Option<GammaParams>,
    pub signal_private: GammaParams,
    pub interference_private: Option<GammaParams>,
    pub phi: f64,
}

impl GainLaw {
    pub fn new(l: &LinkParams, users: usize) -> Result<Self> {
        l.check()?;
        let (z, p) = (l.zeta, l.phi);
        let ic = if l.chi > 0.0 {
            Some(GammaParams::new(users as f64, p / (z * l.chi * l.beta))?)
        } else {
            None
        };
        let ip = if l.chi > 0.0 {
            Some(GammaParams::new(1.0, p / (z * l.chi * l.alpha))?)
        } else {
            None
        };
        Ok(Self {
            signal_common: GammaParams::new(1.0, p / (z * l.alpha))?,
            interference_common: ic,
            signal_private: GammaParams::new(1.0, p / (z * l.beta))?,
            interference_private: ip,
            phi: p,
        })
    }
}

/// Common-message outage:
/// 1 − (α/(α+χβτ))^U · exp(−φτ/(ρζα)), τ = 2^{R^c} − 1.
pub fn outage_common(l: &LinkParams, users: usize, common_rate: f64) -> Result<f64> {
    l.check()?;
    let tau = crate::phy::rate_threshold(common_rate);
    let e = -(users as f64) * log1p(l.chi * l.beta * tau / l.alpha) - l.phi * tau / (l.snr * l.zeta * l.alpha);
    Ok(-expm1(e))
}

/// Private-message outage:
/// 1 − β/(χατ+β) · exp(−φτ/(ρζβ)), τ = 2^{R^p} − 1.
pub fn outage_private(l: &LinkParams, private_rate: f64) -> Result<f64> {
    l.check()?;
    let tau = crate::phy::rate_threshold(private_rate);
    let e = -log1p(l.chi * l.alpha * tau / l.beta) - l.phi * tau / (l.snr * l.zeta * l.beta);
    Ok(-expm1(e))
}

/// Union of the two outage events under independence.
pub fn outage_total(pc: f64, pp: f64) -> f64 {
    pc + pp - pc * pp
}

/// Common-message outage as the double integral of the (independent)
/// joint density of ς^c and ω^c over {ς < τ(ω + σ²)}.
pub fn outage_common_quadrature(l: &LinkParams, users: usize, common_rate: f64) -> Result<f64> {
    let law = GainLaw::new(l, users)?;
    let tau = crate::phy::rate_threshold(common_rate);
    outage_by_double_integral(law.signal_common, law.interference_common, tau, 1.0 / l.snr)
}

/// Private-message outage by the same double-integral oracle.
pub fn outage_private_quadrature(l: &LinkParams, private_rate: f64) -> Result<f64> {
    let law = GainLaw::new(l, 1)?;
    let tau = crate::phy::rate_threshold(private_rate);
    outage_by_double_integral(law.signal_private, law.interference_private, tau, 1.0 / l.snr)
}

const ORACLE_TOL: f64 = 1e-13;

// Both variables are rescaled to unit rate so the integration ranges are O(1).
fn outage_by_double_integral(
    signal: GammaParams,
    interference: Option<GammaParams>,
    tau: f64,
    noise_var: f64,
) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let unit_signal = GammaParams::new(signal.shape, 1.0)?;
    let inner = |upper: f64| -> Result<f64> {
        let upper = signal.rate * upper;
        let q = quad::integrate(|x| gamma_pdf(unit_signal, x), 0.0, upper.min(60.0 + 4.0 * signal.shape), 0.0, ORACLE_TOL)?;
        Ok(q.value)
    };
    match interference {
        None => inner(tau * noise_var),
        Some(w) => {
            let unit_w = GammaParams::new(w.shape, 1.0)?;
            let mut failure = None;
            let q = quad::integrate_to_infinity(
                |s| {
                    let d = gamma_pdf(unit_w, s);
                    if d == 0.0 {
                        return 0.0;
                    }
                    match inner(tau * (s / w.rate + noise_var)) {
                        Ok(v) => d * v,
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    }
                },
                0.0,
                0.0,
                ORACLE_TOL,
            )?;
            match failure {
                Some(e) => Err(e),
                None => Ok(q.value),
            }
        }
    }
}

/// Per-group parameters of the ergodic-rate closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicParams {
    /// ζ_l for every user of the group.
    pub zetas: Vec<f64>,
    pub alpha: f64,
    /// β_u for every user of the group.
    pub betas: Vec<f64>,
    pub chi: f64,
    pub phi: f64,
    pub snr: f64,
}

impl ErgodicParams {
    pub fn users(&self) -> usize {
        self.zetas.len()
    }

    fn check(&self) -> Result<()> {
        let ok = !self.zetas.is_empty()
            && self.zetas.len() == self.betas.len()
            && self.zetas.iter().all(|&z| z > 0.0)
            && self.betas.iter().all(|&b| b > 0.0)
            && self.alpha > 0.0
            && self.phi > 0.0
            && self.snr > 0.0
            && (0.0..=1.0).contains(&self.chi);
        if ok { Ok(()) } else { Err(Error::Domain("ergodic parameters out of range")) }
    }

    /// φΣ_l(1/ζ_l)/(ρα), the exponent rate of min_l γ^c_l.
    fn common_rate_s(&self) -> f64 {
        self.phi * self.zetas.iter().map(|z| 1.0 / z).sum::<f64>() / (self.snr * self.alpha)
    }

    pub fn link(&self, user: usize) -> LinkParams {
        LinkParams {
            zeta: self.zetas[user],
            alpha: self.alpha,
            beta: self.betas[user],
            chi: self.chi,
            phi: self.phi,
            snr: self.snr,
        }
    }
}

/// (1/ln2)∫₀^∞ (a/(a+bz))ⁿ e^{−sz}/(1+z) dz in closed form.
///
/// Near b = a the exact expansion Σ_k ((a−b)/a)^k e^Y E_{n+k+1}(Y),
/// Y = sa/b, is summed; elsewhere the finite form
/// ((−1)^{n−1}(a/c)ⁿ)[e^s Ei(−s) + Σ_{m<n} (−c/a)^m e^Y E_{m+1}(Y)],
/// c = b − a, is used. b = 0 gives e^s E₁(s).
pub fn rate_integral(n: u32, a: f64, b: f64, s: f64) -> Result<f64> {
    if !(a > 0.0 && b >= 0.0 && s > 0.0 && n >= 1) {
        return Err(Error::Domain("rate_integral requires a > 0, b >= 0, s > 0, n >= 1"));
    }
    if b == 0.0 {
        return Ok(-scaled_ei_neg(s)? / LN_2);
    }
    let c = b - a;
    let r = c / a;
    let y = s * a / b;
    if fabs(r) <= 0.9 {
        let mut sum = 0.0;
        let mut w = 1.0;
        for k in 0..4000u32 {
            let t = w * scaled_exp_integral_en(n + k + 1, y)?;
            sum += t;
            if fabs(t) <= 1e-17 * fabs(sum) {
                return Ok(sum / LN_2);
            }
            w *= -r;
        }
        return Err(Error::Numerical(alloc::format!(
            "rate_integral series did not converge (n={n}, a={a}, b={b}, s={s})"
        )));
    }
    let mut bracket = scaled_ei_neg(s)?;
    let mut w = 1.0;
    for m in 0..n {
        bracket += w * scaled_exp_integral_en(m + 1, y)?;
        w *= -r;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * libm::pow(a / c, n as f64) * bracket / LN_2)
}

/// Per-user terms of the common-message ergodic sum-rate.
pub fn ergodic_common_terms(p: &ErgodicParams) -> Result<Vec<f64>> {
    p.check()?;
    let u = p.users() as u32;
    let s = p.common_rate_s();
    p.betas
        .iter()
        .map(|&beta| {
            let b = p.chi * beta;
            if b > 0.0 && fabs(b - p.alpha) <= 1e-9 * p.alpha {
                log::warn!("chi*beta = alpha: printed common-rate form is singular, using the series form");
            }
            rate_integral(u * u, p.alpha, b, s)
        })
        .collect()
}

/// Common-message ergodic sum-rate C^c.
pub fn ergodic_common(p: &ErgodicParams) -> Result<f64> {
    Ok(ergodic_common_terms(p)?.iter().sum())
}

/// C^c evaluated term by term exactly as the closed form is written:
/// Ei, the truncated exponential e_{U²−1} and the double finite sum.
/// Loses all accuracy once φΣ(1/ζ)/(ρχβ) grows past a few tens; kept
/// for cross-checking [`ergodic_common`].
pub fn ergodic_common_printed(p: &ErgodicParams) -> Result<f64> {
    p.check()?;
    let u = p.users() as u32;
    let n = u * u;
    let a = p.alpha;
    let s = p.common_rate_s();
    let mut total = 0.0;
    for &beta in &p.betas {
        let b = p.chi * beta;
        let c = b - a;
        if b == 0.0 || c == 0.0 {
            return Err(Error::Domain("printed common-rate form needs chi > 0 and chi*beta != alpha"));
        }
        let x = s * c / b;
        let y = s * a / b;
        let mut inner = 0.0;
        let mut fact_m = 1.0;
        for m in 1..n {
            fact_m *= m as f64;
            let mut ks = 0.0;
            let mut fact = 1.0; // (m−k−1)!
            for j in 1..m {
                fact *= j as f64;
            }
            for k in 0..m {
                ks += fact * libm::pow(-y, k as f64);
                let denom = (m - k - 1) as f64;
                if denom > 0.0 {
                    fact /= denom;
                }
            }
            inner += libm::pow(-c / a, m as f64) / fact_m * ks;
        }
        let bracket = exp_integral_ei(-s)? - trunc_exp_taylor(n - 1, x) * exp(-x) * exp_integral_ei(-y)?
            + exp(-s) * inner;
        let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign / LN_2 * libm::pow(a / c, n as f64) * exp(s) * bracket;
    }
    Ok(total)
}

/// Per-user terms of the private-message ergodic sum-rate.
pub fn ergodic_private_terms(p: &ErgodicParams) -> Result<Vec<f64>> {
    p.check()?;
    (0..p.users())
        .map(|u| {
            let beta = p.betas[u];
            let b = p.chi * p.alpha;
            if b > 0.0 && fabs(beta - b) <= 1e-9 * beta {
                log::warn!("beta = chi*alpha: printed private-rate form is singular, using the series form");
            }
            rate_integral(1, beta, b, p.phi / (p.snr * p.zetas[u] * beta))
        })
        .collect()
}

/// Private-message ergodic sum-rate C^p.
pub fn ergodic_private(p: &ErgodicParams) -> Result<f64> {
    Ok(ergodic_private_terms(p)?.iter().sum())
}

/// C^p exactly as written: β/((β−χα)ln2)·[e^{A₁}Ei(−A₁) − e^{A₂}Ei(−A₂)].
pub fn ergodic_private_printed(p: &ErgodicParams) -> Result<f64> {
    p.check()?;
    let mut total = 0.0;
    for u in 0..p.users() {
        let (beta, z) = (p.betas[u], p.zetas[u]);
        let ca = p.chi * p.alpha;
        if ca == 0.0 || beta == ca {
            return Err(Error::Domain("printed private-rate form needs chi > 0 and beta != chi*alpha"));
        }
        let a1 = p.phi / (p.snr * z * ca);
        let a2 = p.phi / (p.snr * z * beta);
        total += beta / ((beta - ca) * LN_2)
            * (exp(a1) * exp_integral_ei(-a1)? - exp(a2) * exp_integral_ei(-a2)?);
    }
    Ok(total)
}

/// CDF of min_l γ^c_l with all users sharing β:
/// 1 − α^{U²}(α+χβz)^{−U²} exp(−zφΣ_l(1/ζ_l)/(ρα)).
pub fn cdf_min_common(z: f64, p: &ErgodicParams, beta: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    let n = (p.users() * p.users()) as f64;
    -expm1(-n * log1p(p.chi * beta * z / p.alpha) - z * p.common_rate_s())
}

/// CDF of γ^p_u: 1 − β/(χαz+β) · exp(−zφ/(ρζβ)).
pub fn cdf_private(z: f64, l: &LinkParams) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    -expm1(-log1p(l.chi * l.alpha * z / l.beta) - z * l.phi / (l.snr * l.zeta * l.beta))
}

/// Survival below which the rate integrand counts as negligible.
pub const TAIL_TOL: f64 = 1e-15;

/// E{log₂(1+Z)} = ∫₀^{max_z} (1−F(z))/((1+z)ln2) dz for a CDF F, with the
/// remainder required to be negligible: 1 − F(max_z) ≤ [`TAIL_TOL`].
pub fn ergodic_by_quadrature<F: FnMut(f64) -> f64>(mut cdf: F, max_z: f64) -> Result<f64> {
    if !(max_z > 0.0) {
        return Err(Error::Domain("max_z must be positive"));
    }
    let tail = 1.0 - cdf(max_z);
    if tail > TAIL_TOL {
        return Err(Error::Quadrature { achieved: tail, requested: TAIL_TOL });
    }
    // z = eᵘ − 1 turns dz/(1+z) into du.
    let q = quad::integrate(|u| 1.0 - cdf(expm1(u)), 0.0, log1p(max_z), 1e-15, 1e-12)?;
    Ok(q.value / LN_2)
}

/// [`ergodic_by_quadrature`] with the cut-off found by doubling.
pub fn ergodic_oracle<F: FnMut(f64) -> f64>(mut cdf: F) -> Result<f64> {
    let mut max_z = 1.0;
    while 1.0 - cdf(max_z) > TAIL_TOL {
        max_z *= 2.0;
        if max_z > 1e300 {
            return Err(Error::Quadrature { achieved: 1.0 - cdf(max_z), requested: TAIL_TOL });
        }
    }
    ergodic_by_quadrature(cdf, max_z)
}

/// C^c by quadrature of the order-statistics CDF, one term per user.
pub fn ergodic_common_quadrature(p: &ErgodicParams) -> Result<f64> {
    p.check()?;
    p.betas.iter().map(|&b| ergodic_oracle(|z| cdf_min_common(z, p, b))).sum()
}

/// C^p by quadrature of each user's private-SINR CDF.
pub fn ergodic_private_quadrature(p: &ErgodicParams) -> Result<f64> {
    p.check()?;
    (0..p.users()).map(|u| ergodic_oracle(|z| cdf_private(z, &p.link(u)))).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(chi: f64, snr_db: f64, zeta: f64) -> LinkParams {
        LinkParams { zeta, alpha: 0.7, beta: 0.1, chi, phi: 0.18, snr: 10f64.powf(snr_db / 10.0) }
    }

    fn erg(chi: f64, snr_db: f64, users: usize) -> ErgodicParams {
        let z = [0.0707, 0.1061, 0.1822, 0.09, 0.12];
        ErgodicParams {
            zetas: z[..users].to_vec(),
            alpha: 0.7,
            betas: vec![0.1; users],
            chi,
            phi: 0.18,
            snr: 10f64.powf(snr_db / 10.0),
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn phi_identity_covariance() {
        let f = GroupPrecoder { f: CMatrix::identity(8, 3), projected_dim: 6 };
        let r = CMatrix::identity(8, 8);
        assert_eq!(phi_parameter(&f, &r, PhiConvention::Printed).unwrap(), 2.0);
        assert_eq!(phi_parameter(&f, &r, PhiConvention::PrecoderDimension).unwrap(), 1.0);
    }

    #[test]
    fn phi_degenerate_geometry() {
        let f = GroupPrecoder { f: CMatrix::identity(4, 1), projected_dim: 2 };
        let mut r = CMatrix::zeros(4, 4);
        r[(3, 3)] = crate::C64::from(1.0);
        assert!(phi_parameter(&f, &r, PhiConvention::Printed).is_err());
    }

    #[test]
    fn outage_edge_cases() {
        let l = link(0.01, 20.0, 0.1);
        assert_eq!(outage_common(&l, 3, 0.0).unwrap(), 0.0);
        assert_eq!(outage_private(&l, 0.0).unwrap(), 0.0);
        let l0 = link(0.0, 20.0, 0.1);
        let tau = 2f64.powf(0.5) - 1.0;
        let want = 1.0 - (-0.18 * tau / (100.0 * 0.1 * 0.7)).exp();
        assert!(rel(outage_common(&l0, 3, 0.5).unwrap(), want) < 1e-14);
        let tau = 2f64.powf(1.2) - 1.0;
        let want = 1.0 - (-0.18 * tau / (100.0 * 0.1 * 0.1)).exp();
        assert!(rel(outage_private(&l0, 1.2).unwrap(), want) < 1e-14);
        assert_eq!(outage_total(0.0, 0.3), 0.3);
        assert_eq!(outage_total(1.0, 0.42), 1.0);
        assert!((outage_total(0.1, 0.2) - 0.28).abs() < 1e-15);
    }

    #[test]
    fn outage_matches_double_integral() {
        let l = link(0.01, 20.0, 0.10615);
        let cf = outage_common(&l, 3, 0.5).unwrap();
        let q = outage_common_quadrature(&l, 3, 0.5).unwrap();
        assert!(rel(cf, q) < 1e-8, "{cf} vs {q}");
        let l = link(0.01, 20.0, 0.18218);
        let cf = outage_private(&l, 1.2).unwrap();
        let q = outage_private_quadrature(&l, 1.2).unwrap();
        assert!(rel(cf, q) < 1e-8, "{cf} vs {q}");
        let l = link(0.0, 5.0, 0.07);
        assert!(rel(outage_common(&l, 3, 0.5).unwrap(), outage_common_quadrature(&l, 3, 0.5).unwrap()) < 1e-8);
    }

    #[test]
    fn rate_integral_matches_quadrature() {
        for &(n, a, b, s) in &[
            (9, 0.7, 1e-4, 0.5),
            (9, 0.7, 0.6, 0.5),
            (9, 0.7, 0.7, 0.3),
            (9, 0.7, 0.8, 0.05),
            (4, 0.7, 2.5, 0.2),
            (1, 0.1, 7e-4, 30.0),
            (1, 0.1, 0.1, 3.0),
            (1, 0.1, 0.5, 1e-3),
            (16, 0.5, 0.04, 200.0),
        ] {
            let cf = rate_integral(n, a, b, s).unwrap();
            let q = ergodic_oracle(|z| -expm1(-(n as f64) * log1p(b * z / a) - s * z)).unwrap();
            assert!(rel(cf, q) < 1e-9, "n={n} a={a} b={b} s={s}: {cf} vs {q}");
        }
    }

    #[test]
    fn printed_forms_agree_where_conditioned() {
        for &(chi, db) in &[(0.1, 20.0), (0.1, 30.0), (0.5, 10.0), (1.0, 25.0)] {
            let p = erg(chi, db, 3);
            let a = ergodic_common(&p).unwrap();
            let b = ergodic_common_printed(&p).unwrap();
            assert!(rel(a, b) < 1e-6, "chi={chi} snr={db}: {a} vs {b}");
            let a = ergodic_private(&p).unwrap();
            let b = ergodic_private_printed(&p).unwrap();
            assert!(rel(a, b) < 1e-10);
        }
        let p = erg(0.0, 20.0, 3);
        assert!(ergodic_common_printed(&p).is_err());
    }

    #[test]
    fn singular_manifold_is_continuous() {
        let mut p = erg(0.1, 15.0, 3);
        p.alpha = 0.01; // chi*beta = alpha
        let at = ergodic_common(&p).unwrap();
        let q = ergodic_common_quadrature(&p).unwrap();
        assert!(rel(at, q) < 1e-9);
        let mut p = erg(0.1, 15.0, 2);
        p.betas = vec![0.07; 2]; // beta = chi*alpha
        let at = ergodic_private(&p).unwrap();
        let q = ergodic_private_quadrature(&p).unwrap();
        assert!(rel(at, q) < 1e-9);
    }

    #[test]
    fn single_user_small_chi_reduces_to_single_ei() {
        let p = erg(1e-12, 10.0, 1);
        let s = p.phi / (p.zetas[0] * p.snr * p.alpha);
        let want = -(s.exp() * exp_integral_ei(-s).unwrap()) / LN_2;
        assert!(rel(ergodic_common(&p).unwrap(), want) < 1e-9);
    }

    #[test]
    fn private_low_snr_and_user_scaling() {
        let mut p = erg(0.01, -200.0, 3);
        assert!(ergodic_private(&p).unwrap() < 1e-9);
        p = erg(0.01, 20.0, 3);
        p.zetas = vec![0.1; 3];
        let one = ErgodicParams { zetas: vec![0.1], betas: vec![0.1], ..p.clone() };
        assert!(rel(ergodic_private(&p).unwrap(), 3.0 * ergodic_private(&one).unwrap()) < 1e-14);
    }

    #[test]
    fn cdf_min_properties() {
        let p = erg(0.01, 20.0, 3);
        assert_eq!(cdf_min_common(0.0, &p, 0.1), 0.0);
        let p1 = erg(0.01, 20.0, 1);
        let l = p1.link(0);
        for z in [0.1, 1.0, 5.0] {
            let r = (z + 1.0f64).log2();
            assert!(rel(cdf_min_common(z, &p1, 0.1), outage_common(&l, 1, r).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn quadrature_oracle_examples() {
        let z0 = 3.7;
        let v = ergodic_by_quadrature(|z| if z < z0 { 0.0 } else { 1.0 }, 10.0).unwrap();
        assert!((v - (1.0 + z0).log2()).abs() < 1e-9);
        let v = ergodic_oracle(|z| 1.0 - (-z).exp()).unwrap();
        let want = -(1f64.exp() * exp_integral_ei(-1.0).unwrap()) / LN_2;
        assert!((v - 0.860347382270886).abs() < 1e-12 && rel(v, want) < 1e-12);
        assert!(matches!(ergodic_by_quadrature(|_| 0.0, 1e6), Err(Error::Quadrature { .. })));
    }

    #[test]
    fn monotone_in_snr() {
        let mut last = (1.0, 1.0, 0.0, 0.0);
        for db in (0..=40).step_by(2) {
            let p = erg(0.01, db as f64, 3);
            let l = p.link(1);
            let now = (
                outage_common(&l, 3, 0.5).unwrap(),
                outage_private(&l, 0.5).unwrap(),
                ergodic_common(&p).unwrap(),
                ergodic_private(&p).unwrap(),
            );
            assert!(now.0 <= last.0 && now.1 <= last.1 && now.2 >= last.2 && now.3 >= last.3);
            last = now;
        }
    }
}
