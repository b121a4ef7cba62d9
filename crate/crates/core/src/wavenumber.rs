//! Branch-correct longitudinal wavenumbers.
//!
//! For a plane wave `e^{i(hx + gamma z)}` the longitudinal wavenumber is
//! `gamma = (k^2 - h^2)^(1/2)` and the branch of the square root decides
//! whether energy flows (and evanescent fields decay) away from the source.
//! In free space the root is positive real for propagating components and
//! positive imaginary for evanescent ones. Inside the slab the branch keeps
//! `Im(gamma) >= 0`; when the root is exactly real the sign follows the
//! vanishing-loss limit, which is negative when both `eps_r` and `mu_r` are
//! negative real.

use num_complex::Complex64;

use crate::geometry::Frequency;
use crate::material::MaterialResponse;
use crate::Result;

/// Free-space longitudinal wavenumber `gamma0 = (k0^2 - h^2)^(1/2)`, rad/m.
///
/// Positive real for `h^2 < k0^2`, positive imaginary for `h^2 > k0^2`, and
/// exactly zero at the branch points `h = +/-k0`.
pub fn gamma0(freq: Frequency, h: f64) -> Complex64 {
    let k0 = freq.k0();
    let disc = (k0 - h) * (k0 + h);
    if disc > 0.0 {
        Complex64::new(disc.sqrt(), 0.0)
    } else if disc < 0.0 {
        Complex64::new(0.0, (-disc).sqrt())
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Longitudinal wavenumber in the slab, `gamma = (k^2 - h^2)^(1/2)` with
/// `k^2 = k0^2 * eps_r * mu_r`, rad/m.
///
/// The principal square root is flipped when its imaginary part is negative;
/// exactly-real results take the sign of the vanishing-loss limit (negative
/// when both `eps_r` and `mu_r` are negative real). Rejects non-passive
/// responses.
pub fn gamma_slab(freq: Frequency, h: f64, m: &MaterialResponse) -> Result<Complex64> {
    m.check_passive()?;
    Ok(gamma_slab_passive(freq, h, m))
}

/// Branch-correct slab wavenumber for a response already known to be passive.
pub(crate) fn gamma_slab_passive(freq: Frequency, h: f64, m: &MaterialResponse) -> Complex64 {
    debug_assert!(m.check_passive().is_ok());
    let k0 = freq.k0();
    let n2 = m.index_squared();

    if n2.im == 0.0 {
        // Lossless medium: real discriminant arithmetic. For |n| = 1 the
        // expression is the one gamma0 uses, so the slab wavenumber agrees
        // with the free-space one to the last bit; the resonant combinations
        // in the transmission coefficient then cancel exactly.
        let disc = if n2.re == 1.0 {
            (k0 - h) * (k0 + h)
        } else {
            n2.re * (k0 * k0) - h * h
        };
        let mut root = if disc > 0.0 {
            Complex64::new(disc.sqrt(), 0.0)
        } else if disc < 0.0 {
            Complex64::new(0.0, (-disc).sqrt())
        } else {
            Complex64::new(0.0, 0.0)
        };
        // Exactly real root: the vanishing-loss sign rule.
        if root.im == 0.0 && m.eps_r.re < 0.0 && m.mu_r.re < 0.0 {
            root = -root;
        }
        return root;
    }

    let arg = n2 * (k0 * k0) - Complex64::new(h * h, 0.0);
    let mut root = arg.sqrt();
    if root.im < 0.0 {
        root = -root;
    }
    root
}

/// The wavenumber set of one spectral sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    /// Free-space longitudinal wavenumber, rad/m.
    pub gamma0: Complex64,
    /// Slab longitudinal wavenumber, rad/m.
    pub gamma: Complex64,
    /// Free-space wavenumber `k0 = omega/c`, rad/m.
    pub k0: f64,
    /// Transverse wavenumber, rad/m.
    pub h: f64,
}

impl WaveNumbers {
    /// Compute both longitudinal wavenumbers at `(omega, h)`.
    pub fn compute(freq: Frequency, h: f64, m: &MaterialResponse) -> Result<Self> {
        Ok(Self {
            gamma0: gamma0(freq, h),
            gamma: gamma_slab(freq, h, m)?,
            k0: freq.k0(),
            h,
        })
    }

    /// Whether the sample sits exactly on the free-space branch point.
    pub fn at_branch_point(&self) -> bool {
        self.gamma0 == Complex64::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::C0;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn freq_with_k0(k0: f64) -> Frequency {
        Frequency::from_omega(k0 * C0)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma0_normal_incidence() {
        let f = freq_with_k0(1.0);
        assert_eq!(gamma0(f, 0.0), c(1.0, 0.0));
    }

    #[test]
    fn gamma0_evanescent_branch() {
        let f = freq_with_k0(1.0);
        let g = gamma0(f, 2.0_f64.sqrt());
        assert!(g.re == 0.0);
        assert_relative_eq!(g.im, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn gamma0_three_four_five() {
        let f = freq_with_k0(1.0);
        let g = gamma0(f, 0.6);
        assert_relative_eq!(g.re, 0.8, max_relative = 1e-14);
        assert_eq!(g.im, 0.0);
    }

    #[test]
    fn gamma0_branch_point_is_exact_zero() {
        let f = freq_with_k0(1.0);
        assert_eq!(gamma0(f, 1.0), c(0.0, 0.0));
        assert_eq!(gamma0(f, -1.0), c(0.0, 0.0));
        let m = MaterialResponse::vacuum();
        let w = WaveNumbers::compute(f, 1.0, &m).unwrap();
        assert!(w.at_branch_point());
    }

    #[test]
    fn gamma_slab_vacuum_is_positive() {
        let f = freq_with_k0(1.0);
        let m = MaterialResponse::vacuum();
        assert_eq!(gamma_slab(f, 0.0, &m).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn gamma_slab_negative_index_flips_sign() {
        let f = freq_with_k0(1.0);
        let m = MaterialResponse::new(c(-1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let g = gamma_slab(f, 0.0, &m).unwrap();
        assert_relative_eq!(g.re, -1.0, max_relative = 1e-14);
        assert_eq!(g.im, 0.0);
    }

    #[test]
    fn gamma_slab_small_loss_sits_in_upper_half_plane() {
        // Both square roots of k^2 - h^2 exist; the passive branch has
        // Im >= 0 and continues the lossless -1 limit.
        let f = freq_with_k0(1.0);
        let m = MaterialResponse::new(c(-1.0, 1e-6), c(-1.0, 1e-6)).unwrap();
        let g = gamma_slab(f, 0.0, &m).unwrap();
        assert!(g.im > 0.0);
        assert_relative_eq!(g.re, -1.0, epsilon = 1e-5);
    }

    #[test]
    fn gamma_slab_rejects_gain() {
        let f = freq_with_k0(1.0);
        let m = MaterialResponse {
            eps_r: c(1.0, -1e-3),
            mu_r: c(1.0, 0.0),
        };
        assert!(gamma_slab(f, 0.0, &m).is_err());
    }

    #[test]
    fn branch_consistency_square_recovers_argument() {
        // Squaring either wavenumber must reproduce k^2 - h^2.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = freq_with_k0(1.0);
        for _ in 0..500 {
            let h: f64 = rng.gen_range(-3.0..3.0);
            let g0 = gamma0(f, h);
            let want0 = 1.0 - h * h;
            let got0 = g0 * g0;
            assert!(
                (got0.re - want0).abs() <= 1e-14 * want0.abs().max(1.0),
                "h = {h}"
            );

            let m = MaterialResponse::new(
                c(rng.gen_range(-3.0..3.0), rng.gen_range(0.0..0.5)),
                c(rng.gen_range(-3.0..3.0), rng.gen_range(0.0..0.5)),
            )
            .unwrap();
            let g = gamma_slab(f, h, &m).unwrap();
            let want = m.index_squared() - c(h * h, 0.0);
            let got = g * g;
            assert!(
                (got - want).norm() <= 1e-14 * want.norm().max(1.0),
                "h = {h}, m = {m:?}"
            );
            assert!(g.im >= 0.0);
        }
    }

    #[test]
    fn gamma_slab_limit_continuity_in_loss() {
        // gamma for eps_r = mu_r = -1 + i*delta converges to the lossless -1
        // value over a decade sweep, with Im monotone for propagating h.
        let f = freq_with_k0(1.0);
        let lossless = MaterialResponse::new(c(-1.0, 0.0), c(-1.0, 0.0)).unwrap();
        for h in [0.0, 0.5, 0.9] {
            let g_ll = gamma_slab(f, h, &lossless).unwrap();
            let mut prev_err = f64::INFINITY;
            let mut prev_im = f64::INFINITY;
            for k in 1..=6 {
                let delta = 10f64.powi(-2 * k); // 1e-2 ... 1e-12
                let m = MaterialResponse::new(c(-1.0, delta), c(-1.0, delta)).unwrap();
                let g = gamma_slab(f, h, &m).unwrap();
                let err = (g - g_ll).norm();
                assert!(err < prev_err, "not converging at h = {h}, delta = {delta}");
                assert!(g.im >= 0.0 && g.im < prev_im);
                prev_err = err;
                prev_im = g.im;
            }
            assert!(prev_err < 1e-11);
        }
    }
}
