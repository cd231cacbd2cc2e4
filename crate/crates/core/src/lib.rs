//! Dual-polarized massive MIMO downlink with SIC-free rate splitting.
//!
//! The common message rides the vertical polarization and the private
//! messages the horizontal one, so no receiver runs successive interference
//! cancellation. This crate holds everything that does not need an operating
//! system: special functions, one-ring channel synthesis, two-stage
//! precoding, per-draw SINR evaluation for the proposed scheme and the
//! baselines, closed-form outage and ergodic-rate approximations with
//! quadrature oracles, and seeded Monte Carlo estimators.
//!
//! Threading, file formats and the command line live in the `polar-rsma`
//! crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod analytic;
pub mod channel;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod montecarlo;
pub mod phy;
pub mod precoder;
pub mod quad;
pub mod scenario;
pub mod specialfn;

pub use error::{Error, Result};

/// Complex double.
pub type C64 = nalgebra::Complex<f64>;
/// Dynamically sized complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dynamically sized complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Largest entry modulus of a complex matrix (0 for an empty one).
pub fn max_modulus(m: &CMatrix) -> f64 {
    libm::sqrt(m.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max))
}
