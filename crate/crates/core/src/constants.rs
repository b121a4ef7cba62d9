//! Physical constants in SI units.

/// Speed of light in free space, m/s.
pub const C0: f64 = 299_792_458.0;

/// Permeability of free space, H/m.
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Permittivity of free space, F/m.
pub const EPS0: f64 = 1.0 / (MU0 * C0 * C0);

/// Impedance of free space, ohm.
pub const Z0: f64 = MU0 * C0;
