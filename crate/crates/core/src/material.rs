//! Material dispersion models.

use num_complex::Complex64;

use crate::error::SlabError;
use crate::geometry::Frequency;
use crate::Result;

/// Complex relative permittivity and permeability at one frequency.
///
/// Passivity requires `Im(eps_r) >= 0` and `Im(mu_r) >= 0`; the checked
/// constructor enforces it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialResponse {
    /// Complex relative permittivity, dimensionless.
    pub eps_r: Complex64,
    /// Complex relative permeability, dimensionless.
    pub mu_r: Complex64,
}

impl MaterialResponse {
    /// Checked constructor rejecting non-passive responses.
    pub fn new(eps_r: Complex64, mu_r: Complex64) -> Result<Self> {
        if eps_r.im < 0.0 || mu_r.im < 0.0 {
            return Err(SlabError::NonPassiveMaterial {
                eps_im: eps_r.im,
                mu_im: mu_r.im,
            });
        }
        Ok(Self { eps_r, mu_r })
    }

    /// Free space: `eps_r = mu_r = 1`.
    pub fn vacuum() -> Self {
        Self {
            eps_r: Complex64::new(1.0, 0.0),
            mu_r: Complex64::new(1.0, 0.0),
        }
    }

    /// `eps_r * mu_r`, the square of the relative refractive index.
    pub fn index_squared(&self) -> Complex64 {
        self.eps_r * self.mu_r
    }

    /// Passivity check used by operations that receive a raw response.
    pub fn check_passive(&self) -> Result<()> {
        if self.eps_r.im < 0.0 || self.mu_r.im < 0.0 {
            return Err(SlabError::NonPassiveMaterial {
                eps_im: self.eps_r.im,
                mu_im: self.mu_r.im,
            });
        }
        Ok(())
    }
}

/// Slope lower bound imposed by causality and energy conservation on the
/// frequency derivative of the relative constitutive parameters of a
/// material that is lossless at its design frequency.
pub const MIN_DISPERSION_SLOPE: f64 = 4.0;

/// Map from angular frequency to a [`MaterialResponse`].
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    /// `eps_r = mu_r = -1 + i*delta_pp` at every frequency.
    ConstantLossyDng {
        /// Relative loss `delta_pp >= 0`.
        delta_pp: f64,
    },
    /// Near-resonance double-negative model, lossless at `omega0`:
    /// `eps_r = mu_r = -1 + slope*(omega-omega0)/omega0
    ///                    + i*(loss_coeff*(omega-omega0)/omega0)^2`.
    ///
    /// The imaginary part vanishes quadratically at `omega0`, the slowest
    /// passive behavior, and `slope >= 4` keeps the model causal.
    DispersiveDng {
        /// Design frequency, rad/s.
        omega0: f64,
        /// Dimensionless coefficient of `(omega-omega0)/omega0`.
        slope: f64,
        /// Dimensionless loss coefficient (squared with the detuning).
        loss_coeff: f64,
    },
    /// Free space.
    Vacuum,
    /// Table of `(omega, eps_r, mu_r)` rows, interpolated linearly in omega
    /// on both real and imaginary parts. Sampling outside the tabulated
    /// range is an error.
    Custom {
        /// Rows sorted by strictly increasing omega.
        table: Vec<(f64, Complex64, Complex64)>,
    },
}

impl MaterialModel {
    /// Dispersive model with the default slope (4) and loss coefficient (1000).
    pub fn dispersive_dng(omega0: f64) -> Self {
        MaterialModel::DispersiveDng {
            omega0,
            slope: MIN_DISPERSION_SLOPE,
            loss_coeff: 1000.0,
        }
    }

    /// Evaluate the model at a frequency.
    pub fn response_at(&self, freq: Frequency) -> Result<MaterialResponse> {
        let omega = freq.omega();
        match self {
            MaterialModel::ConstantLossyDng { delta_pp } => {
                if *delta_pp < 0.0 {
                    return Err(SlabError::NonPassiveMaterial {
                        eps_im: *delta_pp,
                        mu_im: *delta_pp,
                    });
                }
                let v = Complex64::new(-1.0, *delta_pp);
                MaterialResponse::new(v, v)
            }
            MaterialModel::DispersiveDng {
                omega0,
                slope,
                loss_coeff,
            } => {
                assert!(
                    *slope >= MIN_DISPERSION_SLOPE,
                    "dispersion slope {slope} below causal lower bound {MIN_DISPERSION_SLOPE}"
                );
                let detuning = (omega - omega0) / omega0;
                let v = Complex64::new(
                    -1.0 + slope * detuning,
                    (loss_coeff * detuning) * (loss_coeff * detuning),
                );
                MaterialResponse::new(v, v)
            }
            MaterialModel::Vacuum => Ok(MaterialResponse::vacuum()),
            MaterialModel::Custom { table } => {
                let (min, max) = match (table.first(), table.last()) {
                    (Some(a), Some(b)) => (a.0, b.0),
                    _ => {
                        return Err(SlabError::MaterialTableRange {
                            omega,
                            min: f64::NAN,
                            max: f64::NAN,
                        })
                    }
                };
                if omega < min || omega > max {
                    return Err(SlabError::MaterialTableRange { omega, min, max });
                }
                let idx = table.partition_point(|row| row.0 <= omega);
                if idx == 0 {
                    let row = &table[0];
                    return MaterialResponse::new(row.1, row.2);
                }
                if idx == table.len() {
                    let row = table.last().unwrap();
                    return MaterialResponse::new(row.1, row.2);
                }
                let (w0, e0, m0) = table[idx - 1];
                let (w1, e1, m1) = table[idx];
                let s = (omega - w0) / (w1 - w0);
                MaterialResponse::new(e0 + (e1 - e0) * s, m0 + (m1 - m0) * s)
            }
        }
    }
}
