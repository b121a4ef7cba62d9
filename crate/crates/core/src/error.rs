//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the slab solver.
#[derive(Debug, Clone, Error)]
pub enum SlabError {
    /// A material response violates passivity (negative imaginary part).
    #[error("non-passive material: Im(eps_r) = {eps_im:e}, Im(mu_r) = {mu_im:e}")]
    NonPassiveMaterial { eps_im: f64, mu_im: f64 },

    /// A custom material table was sampled outside its tabulated range.
    #[error("material table sampled at omega = {omega:e} rad/s outside [{min:e}, {max:e}]")]
    MaterialTableRange { omega: f64, min: f64, max: f64 },

    /// Loss parameter outside (0, 1); no evanescent enhancement exists.
    #[error("relative loss delta_pp = {delta_pp:e} outside (0, 1)")]
    InvalidLoss { delta_pp: f64 },

    /// Observation point outside the validity band of an asymptotic formula.
    #[error("z = {z:e} m outside asymptotic validity band ({lo:e}, {hi:e}) m")]
    OutsideValidityBand { z: f64, lo: f64, hi: f64 },

    /// Geometry violates the assumption under which a region map is stated.
    #[error("region map requires {requirement}; got d = {d:e} m, L = {l:e} m")]
    RegionMapAssumption {
        requirement: &'static str,
        d: f64,
        l: f64,
    },

    /// A quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound:e}")]
    QuadratureNonConvergence {
        estimate: Complex64,
        error_bound: f64,
    },

    /// An invalid quadrature specification.
    #[error("invalid quadrature spec: {reason}")]
    InvalidQuadratureSpec { reason: String },

    /// Grid spacing too coarse for the finite-difference stencil.
    #[error("grid spacing {spacing:e} m exceeds required {required:e} m")]
    GridTooCoarse { spacing: f64, required: f64 },

    /// Grid not uniform or too small for the finite-difference stencil.
    #[error("invalid field grid: {reason}")]
    InvalidGrid { reason: String },

    /// Elapsed time too small for the logarithmic truncation formula.
    #[error("time t = {t:e} s below asymptotic validity (omega0*t must exceed {min_omega0_t:e})")]
    TimeTooSmall { t: f64, min_omega0_t: f64 },

    /// Transverse wavenumber outside the calibrated frequency-grid range.
    #[error("h/k00 = {value} outside calibrated range [0, {max})")]
    HOverK00OutOfRange { value: f64, max: f64 },

    /// The time-domain integrand overflowed at a frequency sample.
    #[error("non-finite integrand at omega = {omega:e} rad/s")]
    NonFiniteIntegrand { omega: f64 },

    /// Bisection bracket does not contain a sign change.
    #[error("no sign change in bracket [{lo:e}, {hi:e}]")]
    NoSignChange { lo: f64, hi: f64 },
}
