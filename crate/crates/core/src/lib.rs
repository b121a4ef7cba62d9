//! Plane-wave spectrum solutions for a transverse-electric line source
//! illuminating a magnetodielectric slab.
//!
//! The library evaluates the exact frequency-domain fields of a 2-D magnetic
//! line current placed a distance `d` in front of a slab of width `L` with
//! complex relative permittivity and permeability, together with the
//! time-domain (analytic-signal) fields of the same source switched on at
//! `t = 0`. The main application is the double-negative slab with
//! `eps_r = mu_r = -1` at a design frequency, where the slab relays the
//! source spectrum and sub-wavelength resolution becomes a question of how
//! far the evanescent spectrum survives material loss or finite on-time.
//!
//! Organization:
//! - [`constants`], [`geometry`], [`material`], [`wavenumber`]: SI constants,
//!   slab geometry, dispersion models, and branch-correct wavenumbers.
//! - [`spectrum`]: closed-form spectral coefficients of the slab (exact
//!   transmission coefficient, per-layer amplitudes, loss-limited truncation
//!   wavenumbers and the asymptotically divergent field).
//! - [`quadrature`]: adaptive Gauss-Kronrod / uniform-trapezoid engine for
//!   the transverse-wavenumber integrals.
//! - [`field`]: numerical field evaluation, closed-form image profiles,
//!   region maps and a Helmholtz-residual diagnostic.
//! - [`timedomain`]: windowed-source spectra, the clustered frequency grid,
//!   the analytic-signal spectrum and field, and time-limited truncation.
//! - [`resolution`]: the 3 dB two-source criterion and the resolution
//!   enhancement / inverse design formulas.

pub mod constants;
pub mod error;
pub mod field;
pub mod geometry;
pub mod material;
pub mod quadrature;
pub mod resolution;
pub mod spectrum;
pub mod timedomain;
pub mod wavenumber;

pub use error::SlabError;
pub use geometry::{Frequency, SlabGeometry};
pub use material::{MaterialModel, MaterialResponse};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SlabError>;
