//! Angular frequency and slab geometry.

use std::f64::consts::TAU;

use crate::constants::C0;

/// Angular frequency of a time-harmonic (`e^{-i omega t}`, `omega > 0`) source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    omega: f64,
}

impl Frequency {
    /// Construct from an angular frequency in rad/s. Panics unless `omega > 0`.
    pub fn from_omega(omega: f64) -> Self {
        assert!(
            omega > 0.0 && omega.is_finite(),
            "angular frequency must be positive and finite, got {omega}"
        );
        Self { omega }
    }

    /// Construct from a cyclic frequency in Hz.
    pub fn from_hz(f: f64) -> Self {
        Self::from_omega(TAU * f)
    }

    /// Construct from a free-space wavelength in m.
    pub fn from_wavelength(lambda: f64) -> Self {
        assert!(
            lambda > 0.0 && lambda.is_finite(),
            "wavelength must be positive and finite, got {lambda}"
        );
        Self::from_omega(TAU * C0 / lambda)
    }

    /// Angular frequency, rad/s.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Cyclic frequency, Hz.
    pub fn hz(&self) -> f64 {
        self.omega / TAU
    }

    /// Free-space wavenumber `k0 = omega/c`, rad/m.
    pub fn k0(&self) -> f64 {
        self.omega / C0
    }

    /// Free-space wavelength, m.
    pub fn wavelength(&self) -> f64 {
        TAU / self.k0()
    }
}

/// Source-to-slab distance and slab width.
///
/// The line source sits at `z = 0`; the slab occupies `d <= z <= d + L`.
/// The image and divergence region maps assume `d < L`, which
/// [`SlabGeometry::source_within_width`] records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabGeometry {
    /// Source-to-front-face distance, m.
    pub d: f64,
    /// Slab width, m.
    pub l: f64,
}

impl SlabGeometry {
    /// Construct a geometry. Panics unless `d > 0` and `l > 0`.
    pub fn new(d: f64, l: f64) -> Self {
        assert!(d > 0.0 && d.is_finite(), "d must be positive, got {d}");
        assert!(l > 0.0 && l.is_finite(), "L must be positive, got {l}");
        Self { d, l }
    }

    /// Whether `d < L`, the assumption behind the image/divergence maps.
    pub fn source_within_width(&self) -> bool {
        self.d < self.l
    }

    /// Front face position `z = d`, m.
    pub fn front_face(&self) -> f64 {
        self.d
    }

    /// Back face position `z = d + L`, m.
    pub fn back_face(&self) -> f64 {
        self.d + self.l
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_conversions_are_consistent() {
        let f = Frequency::from_hz(10.0e9);
        assert!((f.omega() - TAU * 10.0e9).abs() < 1e-3);
        assert!((f.wavelength() - C0 / 10.0e9).abs() < 1e-15);
        let g = Frequency::from_wavelength(f.wavelength());
        assert!((g.omega() / f.omega() - 1.0).abs() < 1e-14);
        assert!((f.k0() * f.wavelength() - TAU).abs() < 1e-12);
    }

    #[test]
    #[should_panic]
    fn frequency_rejects_nonpositive_omega() {
        let _ = Frequency::from_omega(0.0);
    }

    #[test]
    fn geometry_faces_and_flag() {
        let g = SlabGeometry::new(0.5, 1.0);
        assert!(g.source_within_width());
        assert_eq!(g.front_face(), 0.5);
        assert_eq!(g.back_face(), 1.5);
        let far = SlabGeometry::new(2.0, 1.0);
        assert!(!far.source_within_width());
    }
}
