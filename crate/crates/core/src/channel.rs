//! One-ring spatial covariance, its eigen-structure and dual-polarized
//! channel draws.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{quad, CMatrix, CVector, Error, Result, C64};

/// Per-polarization array layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArrayGeometry {
    /// Elements on a ring, adjacent spacing `spacing_wavelengths`.
    #[default]
    Circular,
    /// Elements on a line, phase `2πD(m−p)·sin(θ+ω)`.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneRingSpec {
    /// Elements per polarization (M/2).
    pub antennas: usize,
    pub azimuth_deg: f64,
    /// Half-width Δ of the scattering ring seen from the array.
    pub angular_spread_deg: f64,
    pub spacing_wavelengths: f64,
    pub geometry: ArrayGeometry,
}

impl OneRingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.antennas < 2 {
            return Err(Error::Config(format!("antennas = {} (need >= 2)", self.antennas)));
        }
        if !(self.angular_spread_deg > 0.0 && self.angular_spread_deg < 90.0) {
            return Err(Error::Config(format!(
                "angular_spread_deg = {} (need 0 < spread < 90)",
                self.angular_spread_deg
            )));
        }
        if !(self.spacing_wavelengths > 0.0 && self.spacing_wavelengths.is_finite()) {
            return Err(Error::Config(format!(
                "spacing_wavelengths = {} (need > 0)",
                self.spacing_wavelengths
            )));
        }
        if !self.azimuth_deg.is_finite() {
            return Err(Error::Config("azimuth_deg must be finite".into()));
        }
        Ok(())
    }

    /// Ring radius in wavelengths for the circular layout.
    pub fn ring_radius(&self) -> f64 {
        self.spacing_wavelengths / (2.0 * libm::sin(PI / self.antennas as f64))
    }

    /// Phase of element `m` for a plane wave from angle `phi` (radians).
    fn phase(&self, m: usize, phi: f64) -> f64 {
        match self.geometry {
            ArrayGeometry::Linear => 2.0 * PI * self.spacing_wavelengths * m as f64 * libm::sin(phi),
            ArrayGeometry::Circular => {
                let psi = 2.0 * PI * m as f64 / self.antennas as f64;
                2.0 * PI * self.ring_radius() * libm::cos(phi - psi)
            }
        }
    }

    /// Unit-modulus steering vector towards `phi_deg`.
    pub fn steering(&self, phi_deg: f64) -> CVector {
        let phi = phi_deg.to_radians();
        CVector::from_iterator(
            self.antennas,
            (0..self.antennas).map(|m| { let a = self.phase(m, phi); C64::new(libm::cos(a), libm::sin(a)) }),
        )
    }
}

/// Spatial covariance [R]_{m,p} = (1/2Δ)∫_{−Δ}^{Δ} e^{j(φ_m(θ+ω) − φ_p(θ+ω))} dω.
///
/// Unit diagonal and Hermitian by construction.
pub fn one_ring_covariance(spec: &OneRingSpec) -> Result<CMatrix> {
    spec.validate()?;
    let n = spec.antennas;
    let theta = spec.azimuth_deg.to_radians();
    let delta = spec.angular_spread_deg.to_radians();
    let entry = |m: usize, p: usize| -> Result<C64> {
        let arg = |w: f64| spec.phase(m, theta + w) - spec.phase(p, theta + w);
        let re = quad::integrate(|w| libm::cos(arg(w)), -delta, delta, 1e-14, 1e-13);
        let im = quad::integrate(|w| libm::sin(arg(w)), -delta, delta, 1e-14, 1e-13);
        match (re, im) {
            (Ok(re), Ok(im)) => Ok(C64::new(re.value, im.value) / (2.0 * delta)),
            (Err(e), _) | (_, Err(e)) => Err(Error::Numerical(format!(
                "covariance entry ({m}, {p}) at azimuth {}°: {e}",
                spec.azimuth_deg
            ))),
        }
    };
    let mut r = CMatrix::identity(n, n);
    match spec.geometry {
        ArrayGeometry::Linear => {
            // Toeplitz: only the lag matters.
            let lags: Vec<C64> = (1..n).map(|k| entry(k, 0)).collect::<Result<_>>()?;
            for m in 0..n {
                for p in 0..m {
                    r[(m, p)] = lags[m - p - 1];
                    r[(p, m)] = lags[m - p - 1].conj();
                }
            }
        }
        ArrayGeometry::Circular => {
            for m in 0..n {
                for p in 0..m {
                    let v = entry(m, p)?;
                    r[(m, p)] = v;
                    r[(p, m)] = v.conj();
                }
            }
        }
    }
    Ok(r)
}

/// Dominant eigen-pairs of one group's covariance.
#[derive(Debug, Clone)]
pub struct GroupModel {
    pub covariance: CMatrix,
    /// Column-orthonormal U_g, (M/2)×r̄_g.
    pub eigvecs: CMatrix,
    /// Descending, all positive.
    pub eigvals: Vec<f64>,
    /// r_g: eigenvalues above the rank threshold.
    pub full_rank: usize,
    /// r̄_g = min(r_g, rank cap).
    pub reduced_rank: usize,
    pub azimuth_deg: Option<f64>,
}

impl GroupModel {
    pub fn antennas(&self) -> usize {
        self.covariance.nrows()
    }

    /// U_g·Λ_g^{1/2}, the map from fast fading g to h.
    pub fn mixing_matrix(&self) -> CMatrix {
        let mut b = self.eigvecs.clone();
        for (k, mut col) in b.column_iter_mut().enumerate() {
            col *= C64::from(libm::sqrt(self.eigvals[k]));
        }
        b
    }

    /// Covariance, rank cap and azimuth in one step.
    pub fn from_spec(spec: &OneRingSpec, energy_threshold: f64, rank_cap: usize) -> Result<Self> {
        let cov = one_ring_covariance(spec)?;
        let mut g = eigen_structure(&cov, energy_threshold, rank_cap)?;
        g.azimuth_deg = Some(spec.azimuth_deg);
        Ok(g)
    }
}

/// Rank of a Hermitian PSD matrix counts eigenvalues above
/// `energy_threshold · λ_max`; the kept pairs are capped at `rank_cap`.
pub fn eigen_structure(covariance: &CMatrix, energy_threshold: f64, rank_cap: usize) -> Result<GroupModel> {
    if rank_cap < 1 {
        return Err(Error::Config("rank_cap must be at least 1".into()));
    }
    if !(energy_threshold > 0.0 && energy_threshold < 1.0) {
        return Err(Error::Config(format!(
            "energy_threshold = {energy_threshold} (need 0 < threshold < 1)"
        )));
    }
    let n = covariance.nrows();
    if n == 0 || covariance.ncols() != n {
        return Err(Error::Config("covariance must be square and nonempty".into()));
    }
    let eig = covariance.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let lmax = eig.eigenvalues[order[0]];
    if !(lmax > 0.0) {
        return Err(Error::Numerical("covariance has no positive eigenvalue".into()));
    }
    let full_rank = order
        .iter()
        .filter(|&&i| eig.eigenvalues[i] > energy_threshold * lmax)
        .count();
    let reduced_rank = full_rank.min(rank_cap);
    let mut eigvecs = CMatrix::zeros(n, reduced_rank);
    let mut eigvals = Vec::with_capacity(reduced_rank);
    for (k, &i) in order.iter().take(reduced_rank).enumerate() {
        eigvecs.set_column(k, &eig.eigenvectors.column(i));
        eigvals.push(eig.eigenvalues[i]);
    }
    Ok(GroupModel {
        covariance: covariance.clone(),
        eigvecs,
        eigvals,
        full_rank,
        reduced_rank,
        azimuth_deg: None,
    })
}

/// ζ = δ·d^{−η}.
pub fn large_scale_gain(array_gain: f64, distance_m: f64, pathloss_exp: f64) -> f64 {
    array_gain * libm::pow(distance_m, -pathloss_exp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserLink {
    pub large_scale_gain: f64,
    pub distance_m: f64,
}

impl UserLink {
    pub fn new(array_gain: f64, distance_m: f64, pathloss_exp: f64) -> Result<Self> {
        if !(distance_m > 0.0) || !(array_gain > 0.0) {
            return Err(Error::Config(format!(
                "distance {distance_m} m and array gain {array_gain} must be positive"
            )));
        }
        Ok(Self {
            large_scale_gain: large_scale_gain(array_gain, distance_m, pathloss_exp),
            distance_m,
        })
    }
}

/// One user's fast-fading draw.
///
/// The sub-channels are stored without the large-scale factor:
/// `h_ij = U_g Λ_g^{1/2} g_ij`. [`ChannelRealization::matrix`] applies
/// √ζ and √χ.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_vv: CVector,
    pub h_vh: CVector,
    pub h_hv: CVector,
    pub h_hh: CVector,
    pub large_scale_gain: f64,
    pub ixpd: f64,
}

impl ChannelRealization {
    /// The M×2 channel with vertical rows first.
    pub fn matrix(&self) -> CMatrix {
        let n = self.h_vv.len();
        let s = C64::from(libm::sqrt(self.large_scale_gain));
        let x = C64::from(libm::sqrt(self.ixpd));
        let mut h = CMatrix::zeros(2 * n, 2);
        h.view_mut((0, 0), (n, 1)).copy_from(&(&self.h_vv * s));
        h.view_mut((0, 1), (n, 1)).copy_from(&(&self.h_vh * (s * x)));
        h.view_mut((n, 0), (n, 1)).copy_from(&(&self.h_hv * (s * x)));
        h.view_mut((n, 1), (n, 1)).copy_from(&(&self.h_hh * s));
        h
    }
}

/// One CN(0, 1) sample.
#[inline]
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// `n` i.i.d. CN(0, 1) samples.
pub fn complex_normal_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    CVector::from_iterator(n, (0..n).map(|_| complex_normal(rng)))
}

/// Draws g^{vv}, g^{vh}, g^{hv}, g^{hh} in that order.
pub fn sample_channel<R: Rng + ?Sized>(
    group: &GroupModel,
    user: &UserLink,
    ixpd: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if !(0.0..=1.0).contains(&ixpd) {
        return Err(Error::Domain("ixpd must lie in [0, 1]"));
    }
    let b = group.mixing_matrix();
    let r = group.reduced_rank;
    let mut next = || &b * complex_normal_vector(r, rng);
    Ok(ChannelRealization {
        h_vv: next(),
        h_vh: next(),
        h_hv: next(),
        h_hh: next(),
        large_scale_gain: user.large_scale_gain,
        ixpd,
    })
}
