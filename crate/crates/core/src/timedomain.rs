//! Analytic-signal time-domain synthesis.
//!
//! A sinusoidal line source switched on at `t = 0` has nonzero bandwidth, so
//! the field it drives through the slab is a frequency integral over the
//! window spectrum times the single-frequency response. Everything here
//! works with the analytic signal: the complex field synthesized from
//! positive frequencies only, whose real part is the physical field.
//!
//! The chain is: a window spectrum ([`cosine_window_spectrum`],
//! [`sine_window_spectrum`]), a frequency grid clustered around the carrier
//! ([`OmegaGridSpec`], [`build_omega_grid`]), the inner frequency integral
//! ([`analytic_spectrum`]) giving the time-domain spectrum `W(h, z, t)`, and
//! the outer transverse-wavenumber integral ([`time_domain_field`],
//! [`field_profile`]). The on-time-limited truncation wavenumber
//! ([`truncation_from_time`]) and the late-time asymptotic field
//! ([`asymptotic_field_time`]) mirror their loss-limited counterparts.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::C0;
use crate::error::SlabError;
use crate::geometry::{Frequency, SlabGeometry};
use crate::material::MaterialModel;
use crate::quadrature::QuadratureSpec;
use crate::spectrum::{TruncationOrigin, TruncationRegion, TruncationWavenumber};
use crate::wavenumber::gamma0;
use crate::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cosine source on `[-t0, +t0]`: `v(t) = cos(omega0 t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineWindow {
    /// Half-duration, s.
    pub t0: f64,
    /// Carrier angular frequency, rad/s.
    pub omega0: f64,
}

/// Sine source on `[0, Te]`: `v(t) = sin(omega0 t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineWindow {
    /// On-time, s.
    pub te: f64,
    /// Carrier angular frequency, rad/s.
    pub omega0: f64,
}

impl SineWindow {
    /// Window lasting exactly `n` carrier periods, which keeps the spectrum
    /// over the carrier bounded down to zero frequency.
    pub fn with_periods(n: u64, omega0: f64) -> Self {
        Self {
            te: std::f64::consts::TAU * n as f64 / omega0,
            omega0,
        }
    }

    /// Number of carrier periods in the window.
    pub fn periods(&self) -> f64 {
        self.te * self.omega0 / std::f64::consts::TAU
    }

    /// Whether the on-time is an integer number of carrier periods, the
    /// condition for `V_omega / omega` to stay bounded at zero frequency.
    pub fn has_integral_periods(&self) -> bool {
        let n = self.periods();
        (n - n.round()).abs() < 1e-9 * n.max(1.0)
    }
}

/// Either window shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceWindow {
    /// Cosine on `[-t0, t0]`.
    Cosine(CosineWindow),
    /// Sine on `[0, Te]`.
    Sine(SineWindow),
}

/// complex (e^{i a u} - 1)/u with the removable singularity by series.
fn expm1_over(a: f64, u: f64) -> Complex64 {
    let au = a * u;
    if au.abs() < 1e-4 {
        // (e^{iau} - 1)/u = ia (1 + iau/2 + (iau)^2/6 + ...)
        let iau = Complex64::new(0.0, au);
        Complex64::new(0.0, a) * (Complex64::new(1.0, 0.0) + iau / 2.0 + iau * iau / 6.0)
    } else {
        (Complex64::new(0.0, au).exp() - 1.0) / u
    }
}

/// sin(a u)/u with the removable singularity by series.
fn sin_over(a: f64, u: f64) -> f64 {
    let au = a * u;
    if au.abs() < 1e-4 {
        a * (1.0 - au * au / 6.0 + au * au * au * au / 120.0)
    } else {
        au.sin() / u
    }
}

/// Spectrum of the two-sided cosine window,
/// `(1/2pi) [sin((w+w0)t0)/(w+w0) + sin((w-w0)t0)/(w-w0)]`.
///
/// Real-valued; the removable singularities at `w = +/-w0` are expanded in
/// series. As `t0` grows the spectrum concentrates into half-weight spikes
/// at `+/-w0`.
pub fn cosine_window_spectrum(omega: f64, w: &CosineWindow) -> Complex64 {
    let plus = sin_over(w.t0, omega + w.omega0);
    let minus = sin_over(w.t0, omega - w.omega0);
    Complex64::new((plus + minus) / std::f64::consts::TAU, 0.0)
}

/// Spectrum of the switched-on sine window,
/// `(1/4pi) [(e^{i Te (w-w0)} - 1)/(w-w0) - (e^{i Te (w+w0)} - 1)/(w+w0)]`.
///
/// The removable singularities at `w = +/-w0` are expanded in series. With
/// an integer number of carrier periods the value vanishes at `w = 0` so
/// the ratio `V_w / w` stays bounded there.
pub fn sine_window_spectrum(omega: f64, w: &SineWindow) -> Complex64 {
    let minus = expm1_over(w.te, omega - w.omega0);
    let plus = expm1_over(w.te, omega + w.omega0);
    (minus - plus) / (4.0 * std::f64::consts::PI)
}

/// Shape of the clustered frequency grid and the per-band window rule.
///
/// The integration window is `|omega/omega0 - 1| < halfwidth`, with the wide
/// halfwidth below `split_h_over_k00` and the narrow one above it. Points
/// cluster toward the carrier: a floor zone of constant fine step, a
/// power-law zone where the step grows as `(omega - omega0)^exponent`, and a
/// uniform outer zone. `inner_fraction` of each side's points go to the
/// floor-plus-power zones and `floor_ratio` sets the floor step relative to
/// the side's uniform step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaGridSpec {
    /// h/k00 at which the window switches from wide to narrow.
    pub split_h_over_k00: f64,
    /// Relative halfwidth for h/k00 below the split.
    pub wide_halfwidth_rel: f64,
    /// Relative halfwidth for h/k00 at or above the split.
    pub narrow_halfwidth_rel: f64,
    /// Largest calibrated h/k00 (exclusive).
    pub max_h_over_k00: f64,
    /// Total number of grid points (made odd, center at the carrier).
    pub n_points: usize,
    /// Step-growth exponent of the power-law zone.
    pub exponent: u32,
    /// Fraction of each side's points spent on the floor and power zones.
    pub inner_fraction: f64,
    /// Floor step as a fraction of the side's uniform step.
    pub floor_ratio: f64,
}

impl Default for OmegaGridSpec {
    fn default() -> Self {
        Self {
            split_h_over_k00: 2.5,
            wide_halfwidth_rel: 1e-3,
            narrow_halfwidth_rel: 1e-9,
            max_h_over_k00: 3.5,
            n_points: 100_000,
            exponent: 4,
            inner_fraction: 0.3,
            floor_ratio: 1e-2,
        }
    }
}

/// Frequency grid clustered around the carrier, with trapezoid weights.
#[derive(Debug, Clone)]
pub struct OmegaGrid {
    /// Strictly increasing sample frequencies, rad/s; the center sample is
    /// the carrier itself.
    pub points: Vec<f64>,
    /// Trapezoid weights, rad/s.
    pub weights: Vec<f64>,
    /// Shape the grid was built from.
    pub spec: OmegaGridSpec,
    /// Relative halfwidth actually used.
    pub halfwidth_rel: f64,
}

/// Grid steps never drop below this many units of machine epsilon relative
/// to the carrier, so consecutive points stay distinct in f64.
const MIN_FLOOR_REL: f64 = 8.0 * f64::EPSILON;

impl OmegaGridSpec {
    /// Build the grid for a transverse wavenumber, choosing the per-band
    /// halfwidth. Errors above the calibrated `max_h_over_k00`.
    pub fn build(&self, h_over_k00: f64, omega0: f64) -> Result<OmegaGrid> {
        if !(0.0..self.max_h_over_k00).contains(&h_over_k00) {
            return Err(SlabError::HOverK00OutOfRange {
                value: h_over_k00,
                max: self.max_h_over_k00,
            });
        }
        let halfwidth = if h_over_k00 < self.split_h_over_k00 {
            self.wide_halfwidth_rel
        } else {
            self.narrow_halfwidth_rel
        };
        self.build_with_halfwidth(halfwidth, omega0)
    }

    /// Build the grid with an explicit relative halfwidth.
    pub fn build_with_halfwidth(&self, halfwidth_rel: f64, omega0: f64) -> Result<OmegaGrid> {
        assert!(omega0 > 0.0 && halfwidth_rel > 0.0 && halfwidth_rel < 1.0);
        assert!(self.n_points >= 51, "grid needs at least 51 points");
        assert!(self.exponent >= 2, "clustering exponent must be >= 2");
        assert!(
            self.inner_fraction > 0.0 && self.inner_fraction < 1.0,
            "inner_fraction must lie in (0, 1)"
        );
        assert!(
            self.floor_ratio > 0.0 && self.floor_ratio <= 1.0,
            "floor_ratio must lie in (0, 1]"
        );

        let n_side = (self.n_points - 1) / 2;
        let n_in = ((self.inner_fraction * n_side as f64).round() as usize).clamp(1, n_side - 1);
        let n_out = n_side - n_in;
        let m = self.exponent as f64;
        let delta = halfwidth_rel;

        // Floor step: a fraction of the side's uniform step, clamped so
        // consecutive frequencies stay representable.
        let s_uniform = delta / n_side as f64;
        let s_min = (self.floor_ratio * s_uniform).max(MIN_FLOOR_REL);

        // K converts the floor-zone extent into the inner point count:
        // n_in = (u1/s_min) * K with the power zone costing the rest.
        let count_factor = |ratio: f64| 1.0 + (1.0 - ratio.powf((m - 1.0) / m)) / (m - 1.0);

        // Solve the outer step so the zones exactly tile [0, delta]:
        // n_out * s_max + u2(s_max) = delta, u2 = u1 (s_max/s_min)^(1/m).
        let residual = |s_max: f64| {
            let k = count_factor(s_min / s_max);
            let u1 = n_in as f64 * s_min / k;
            let u2 = u1 * (s_max / s_min).powf(1.0 / m);
            n_out as f64 * s_max + u2 - delta
        };
        let mut lo = s_min;
        let mut hi = delta;
        if residual(lo) > 0.0 {
            // Band so dense that even the floor step overfills it; fall back
            // to a uniform grid.
            return Ok(self.uniform_grid(delta, omega0, halfwidth_rel));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let s_max = 0.5 * (lo + hi);
        let k = count_factor(s_min / s_max);
        let u1 = n_in as f64 * s_min / k;
        let u2 = u1 * (s_max / s_min).powf(1.0 / m);
        let j1 = u1 / s_min;

        // Positive-side detunings by inverting the point-density CDF.
        let mut side: Vec<f64> = Vec::with_capacity(n_side);
        for j in 1..=n_in {
            let jf = j as f64;
            let u = if jf <= j1 {
                jf * s_min
            } else {
                u1 * (1.0 - (m - 1.0) * s_min * (jf - j1) / u1).powf(-1.0 / (m - 1.0))
            };
            side.push(u.min(u2));
        }
        for i in 1..=n_out {
            side.push(u2 + (delta - u2) * i as f64 / n_out as f64);
        }

        let mut points = Vec::with_capacity(2 * n_side + 1);
        for &u in side.iter().rev() {
            points.push(omega0 * (1.0 - u));
        }
        points.push(omega0);
        for &u in side.iter() {
            points.push(omega0 * (1.0 + u));
        }
        points.dedup();

        Ok(OmegaGrid {
            weights: trapezoid_weights(&points),
            points,
            spec: *self,
            halfwidth_rel,
        })
    }

    fn uniform_grid(&self, delta: f64, omega0: f64, halfwidth_rel: f64) -> OmegaGrid {
        let n_side = (self.n_points - 1) / 2;
        let mut points = Vec::with_capacity(2 * n_side + 1);
        for j in -(n_side as i64)..=(n_side as i64) {
            points.push(omega0 * (1.0 + delta * j as f64 / n_side as f64));
        }
        points.dedup();
        OmegaGrid {
            weights: trapezoid_weights(&points),
            points,
            spec: *self,
            halfwidth_rel,
        }
    }
}

fn trapezoid_weights(points: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut w = vec![0.0; n];
    for i in 0..n {
        let left = if i == 0 { points[0] } else { points[i - 1] };
        let right = if i == n - 1 { points[n - 1] } else { points[i + 1] };
        w[i] = 0.5 * (right - left);
    }
    w
}

/// Convenience wrapper: default shape with an explicit point count.
pub fn build_omega_grid(h_over_k00: f64, omega0: f64, n_points: usize) -> Result<OmegaGrid> {
    OmegaGridSpec {
        n_points,
        ..OmegaGridSpec::default()
    }
    .build(h_over_k00, omega0)
}

/// One analytic-signal sample: the physical field is `Re(value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSignalSample {
    /// Analytic-signal field value.
    pub value: Complex64,
    /// Transverse observation coordinate, m.
    pub x: f64,
    /// Longitudinal observation coordinate, m.
    pub z: f64,
    /// Elapsed time since switch-on, s.
    pub t: f64,
}

/// Analytic-signal time-domain spectrum of the switched-on sine source,
///
/// ```text
/// W(h, z, t) = 2 E0 c int (V_w / w) T_TE(h; w) e^{i gamma0(w) z} e^{-i w t} dw
/// ```
///
/// summed over the clustered grid (the spectrum outside the window is
/// negligible by construction). Valid right of the back face, `z > d + L`.
/// A non-finite integrand sample reports the offending frequency.
pub fn analytic_spectrum(
    h: f64,
    z: f64,
    t: f64,
    geom: &SlabGeometry,
    model: &MaterialModel,
    window: &SineWindow,
    grid: &OmegaGrid,
    e0: f64,
) -> Result<Complex64> {
    assert!(
        z > geom.back_face(),
        "time-domain spectrum defined right of the back face"
    );
    let mut acc = Complex64::new(0.0, 0.0);
    for (&omega, &weight) in grid.points.iter().zip(&grid.weights) {
        let freq = Frequency::from_omega(omega);
        let m = model.response_at(freq)?;
        let t_te = crate::spectrum::t_te_passive(freq, h, &m, geom.l);
        let v = sine_window_spectrum(omega, window);
        let phase = (I * (gamma0(freq, h) * z - omega * t)).exp();
        let sample = v / omega * t_te * phase;
        if !sample.re.is_finite() || !sample.im.is_finite() {
            return Err(SlabError::NonFiniteIntegrand { omega });
        }
        acc += weight * sample;
    }
    Ok(2.0 * e0 * C0 * acc)
}

/// `|W|` over a set of transverse wavenumbers, evaluated in parallel.
///
/// Each wavenumber gets its own grid because the window rule is per-band.
pub fn spectrum_profile(
    h_over_k00: &[f64],
    z: f64,
    t: f64,
    geom: &SlabGeometry,
    model: &MaterialModel,
    window: &SineWindow,
    grid_spec: &OmegaGridSpec,
    e0: f64,
) -> Result<Vec<Complex64>> {
    let k00 = window.omega0 / C0;
    h_over_k00
        .par_iter()
        .map(|&hk| {
            let grid = grid_spec.build(hk, window.omega0)?;
            analytic_spectrum(hk * k00, z, t, geom, model, window, &grid, e0)
        })
        .collect()
}

/// Analytic-signal time-domain field of line sources at `(x_s, 0)`,
///
/// ```text
/// E(x, z, t) = (1/2pi) int W(h, z, t) sum_s e^{i h (x - x_s)} dh
/// ```
///
/// evaluated on a uniform trapezoid h-grid of `spec.n_base` nodes up to
/// `spec.h_max`, sharing the `W` samples across all observation points.
/// Returns one sample per entry of `xs`.
pub fn field_profile(
    xs: &[f64],
    source_xs: &[f64],
    z: f64,
    t: f64,
    geom: &SlabGeometry,
    model: &MaterialModel,
    window: &SineWindow,
    grid_spec: &OmegaGridSpec,
    spec: &QuadratureSpec,
    e0: f64,
) -> Result<Vec<AnalyticSignalSample>> {
    let k00 = window.omega0 / C0;
    let n_h = spec.n_base.max(32);
    let h_step = spec.h_max / (n_h - 1) as f64;

    // W is even in h, so sample the positive half only.
    let w_samples: Result<Vec<Complex64>> = (0..n_h)
        .into_par_iter()
        .map(|j| {
            let h = h_step * j as f64;
            let grid = grid_spec.build(h / k00, window.omega0)?;
            analytic_spectrum(h, z, t, geom, model, window, &grid, e0)
        })
        .collect();
    let w_samples = w_samples?;

    Ok(xs
        .iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, w) in w_samples.iter().enumerate() {
                let h = h_step * j as f64;
                let trap = if j == 0 || j == n_h - 1 { 0.5 } else { 1.0 };
                let mut phases = Complex64::new(0.0, 0.0);
                for &xs_k in source_xs {
                    phases += Complex64::new(0.0, h * (x - xs_k)).exp();
                }
                // e^{ihx} + e^{-ihx} folding of the even spectrum keeps only
                // the cosine part.
                acc += trap * h_step * *w * Complex64::new(phases.re, 0.0);
            }
            AnalyticSignalSample {
                value: acc / std::f64::consts::PI,
                x,
                z,
                t,
            }
        })
        .collect())
}

/// Single-point convenience wrapper over [`field_profile`] for one centered
/// source.
pub fn time_domain_field(
    x: f64,
    z: f64,
    t: f64,
    geom: &SlabGeometry,
    model: &MaterialModel,
    window: &SineWindow,
    grid_spec: &OmegaGridSpec,
    spec: &QuadratureSpec,
    e0: f64,
) -> Result<AnalyticSignalSample> {
    Ok(field_profile(
        &[x],
        &[0.0],
        z,
        t,
        geom,
        model,
        window,
        grid_spec,
        spec,
        e0,
    )?
    .remove(0))
}

/// Minimum `omega0 t` for the logarithmic truncation formula (one e-fold of
/// margin above `2 pi`).
pub const MIN_OMEGA0_T_TRUNCATION: f64 = std::f64::consts::TAU * std::f64::consts::E;

/// On-time-limited truncation wavenumber,
/// `sqrt((2 ln(w0 t / 2pi) / (d+L))^2 + k00^2)` between the back face and
/// the image plane and `sqrt((ln(w0 t / 2pi) / L)^2 + k00^2)` beyond it.
pub fn truncation_from_time(
    t: f64,
    freq0: Frequency,
    geom: &SlabGeometry,
    region: TruncationRegion,
) -> Result<TruncationWavenumber> {
    let omega0_t = freq0.omega() * t;
    if !(omega0_t > MIN_OMEGA0_T_TRUNCATION) {
        return Err(SlabError::TimeTooSmall {
            t,
            min_omega0_t: MIN_OMEGA0_T_TRUNCATION,
        });
    }
    let log = (omega0_t / std::f64::consts::TAU).ln();
    let rate = match region {
        TruncationRegion::BetweenFaceAnd2L => 2.0 * log / geom.back_face(),
        TruncationRegion::Beyond2L => log / geom.l,
    };
    Ok(TruncationWavenumber {
        value: rate.hypot(freq0.k0()),
        region,
        origin: TruncationOrigin::Time(t),
    })
}

/// Direct and closed-form values of the evanescent frequency-kernel
/// integral that controls the on-time truncation.
#[derive(Debug, Clone, Copy)]
pub struct KernelIntegralComparison {
    /// Principal-value numerical integration of the kernel.
    pub direct: f64,
    /// Closed-form estimate
    /// `-(w0 t0/4) e^{-w0 |zeta0| (z-L)} ln|(1-q)/(1+q)|`,
    /// `q = (w0 t0 / 2pi) e^{-w0 |zeta0| L}`.
    pub closed_form: f64,
}

/// Evaluate both sides of the evanescent kernel integral
///
/// ```text
/// I = PV int_0^inf sin((w-w0)t0) e^{-w |zeta0| z}
///     / ((w-w0) [e^{-2 w |zeta0| L} - 4 (w-w0)^2 / w0^2]) dw
/// ```
///
/// (transverse position and elapsed time set to zero) against its
/// closed-form estimate. The lossless kernel has a simple pole either side
/// of the carrier; the direct route subtracts both residues analytically and
/// integrates the regular remainder. The estimate is an order-of-magnitude
/// asymptotic: factor-level agreement is the expectation. Supports the
/// propagating limit `zeta0 = 0` and the evanescent regime
/// `w0 zeta0 L >= 1/2`.
pub fn evanescent_kernel_integral(
    zeta0_abs: f64,
    z: f64,
    t0: f64,
    omega0: f64,
    l: f64,
) -> Result<KernelIntegralComparison> {
    assert!(zeta0_abs >= 0.0 && z > l && t0 > 0.0 && omega0 > 0.0);
    assert!(
        zeta0_abs == 0.0 || omega0 * zeta0_abs * l >= 0.5,
        "kernel integral supports zeta0 = 0 or omega0 zeta0 L >= 1/2"
    );

    let q = omega0 * t0 / std::f64::consts::TAU * (-omega0 * zeta0_abs * l).exp();
    let closed_form = -(omega0 * t0 / 4.0)
        * (-omega0 * zeta0_abs * (z - l)).exp()
        * ((1.0 - q).abs() / (1.0 + q)).ln();

    // Kernel pieces.
    let denom = |omega: f64| {
        let nu = omega - omega0;
        (-2.0 * omega * zeta0_abs * l).exp() - 4.0 * nu * nu / (omega0 * omega0)
    };
    let numer = |omega: f64| {
        let nu = omega - omega0;
        sin_over(t0, nu) * (-omega * zeta0_abs * z).exp()
    };
    let f = |omega: f64| numer(omega) / denom(omega);

    // Integration window around the carrier; the oscillatory-decaying tail
    // beyond it is negligible at the factor-level tolerance used here.
    let window = 0.4 * omega0;
    let (a, b) = (omega0 - window, omega0 + window);

    // Locate the kernel poles (real zeros of the denominator) by Newton
    // iteration from the analytic estimate; absent in the propagating limit.
    let mut poles: Vec<f64> = Vec::new();
    if zeta0_abs > 0.0 {
        for sign in [-1.0, 1.0] {
            let mut nu = sign * 0.5 * omega0 * (-omega0 * zeta0_abs * l).exp();
            for _ in 0..100 {
                let omega = omega0 + nu;
                let g = (-2.0 * omega * zeta0_abs * l).exp() - 4.0 * nu * nu / (omega0 * omega0);
                let dg = -2.0 * zeta0_abs * l * (-2.0 * omega * zeta0_abs * l).exp()
                    - 8.0 * nu / (omega0 * omega0);
                let step = g / dg;
                nu -= step;
                if step.abs() < 1e-15 * omega0 {
                    break;
                }
            }
            let pole = omega0 + nu;
            if pole > a && pole < b {
                poles.push(pole);
            }
        }
    }

    // Residues r = numer / denom' at each pole; the principal value of the
    // subtracted 1/(omega - pole) term over [a, b] is ln((b-p)/(p-a)).
    let denom_prime = |omega: f64| {
        let nu = omega - omega0;
        -2.0 * zeta0_abs * l * (-2.0 * omega * zeta0_abs * l).exp() - 8.0 * nu / (omega0 * omega0)
    };
    let residues: Vec<f64> = poles.iter().map(|&p| numer(p) / denom_prime(p)).collect();

    let regular = |omega: f64| {
        let mut v = f(omega);
        for (&p, &r) in poles.iter().zip(&residues) {
            v -= r / (omega - p);
        }
        Complex64::new(v, 0.0)
    };

    let oscillations = (b - a) * t0 / std::f64::consts::TAU;
    let init = (oscillations.ceil() as usize).clamp(16, 20_000);
    let quad = crate::quadrature::integrate_adaptive(
        &regular,
        a,
        b,
        1e-6,
        closed_form.abs().max(1.0),
        init,
        80_000,
    )?;

    let mut direct = quad.value.re;
    for (&p, &r) in poles.iter().zip(&residues) {
        direct += r * ((b - p) / (p - a)).ln();
    }

    Ok(KernelIntegralComparison {
        direct,
        closed_form,
    })
}

/// Late-time asymptotic field between the back face and the image plane,
///
/// ```text
/// E0 e^{-i w0 t} / (pi k00 sqrt(x^2 + (2L-z)^2)) * tau^(2 - z/L)
///    * cos((x/L) ln(tau) - atan2(x, 2L - z)),   tau = f0 t
/// ```
///
/// the on-time twin of the loss-limited divergent field under
/// `delta'' <-> 1/tau`. Same validity band: `L < z <= 2L - lambda0/20`.
pub fn asymptotic_field_time(
    x: f64,
    z: f64,
    t: f64,
    e0: f64,
    freq0: Frequency,
    l: f64,
) -> Result<Complex64> {
    let tau = freq0.hz() * t;
    if !(tau > std::f64::consts::E) {
        return Err(SlabError::TimeTooSmall {
            t,
            min_omega0_t: MIN_OMEGA0_T_TRUNCATION,
        });
    }
    let hi = 2.0 * l - crate::spectrum::DIVERGENT_BAND_MARGIN * freq0.wavelength();
    if !(z > l && z <= hi) {
        return Err(SlabError::OutsideValidityBand { z, lo: l, hi });
    }
    let k00 = freq0.k0();
    let envelope = e0 / (std::f64::consts::PI * k00 * x.hypot(2.0 * l - z));
    let growth = tau.powf(2.0 - z / l);
    let phase = (x / l) * tau.ln() - x.atan2(2.0 * l - z);
    let carrier = (-I * freq0.omega() * t).exp();
    Ok(carrier * envelope * growth * phase.cos())
}
