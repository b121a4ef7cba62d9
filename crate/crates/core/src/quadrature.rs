//! Panel quadrature for the transverse-wavenumber integrals.
//!
//! Two strategies: adaptive Gauss-Kronrod (G7/K15) panels with worst-first
//! refinement, and a uniform trapezoid rule whose nodes depend only on the
//! interval and the node count (useful when two integrals must share the
//! exact same samples).

use num_complex::Complex64;

use crate::error::SlabError;
use crate::geometry::Frequency;
use crate::Result;

/// Node placement strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridStrategy {
    /// Fixed uniform trapezoid with `n_base` nodes.
    UniformTrapezoid,
    /// Adaptive Gauss-Kronrod panels refined to `rel_tol`.
    AdaptivePanels,
}

/// Truncation, node budget and tolerance for an h-integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Truncation of the |h| integration, rad/m. Must exceed k0.
    pub h_max: f64,
    /// Trapezoid node count, or adaptive panel budget.
    pub n_base: usize,
    /// Node placement strategy.
    pub strategy: GridStrategy,
    /// Relative tolerance for adaptive refinement, in (0, 1e-2].
    pub rel_tol: f64,
    /// Half-width of the exclusion guard around the branch points +/-k0,
    /// rad/m. Nodes are never placed inside it.
    pub branch_point_exclusion: f64,
}

impl QuadratureSpec {
    /// Defaults for a frequency: `h_max = 12 k0`, adaptive panels at 1e-8,
    /// and a guard of `1e-9 / lambda0` around the branch points.
    pub fn default_for(freq: Frequency) -> Self {
        Self {
            h_max: 12.0 * freq.k0(),
            n_base: 2048,
            strategy: GridStrategy::AdaptivePanels,
            rel_tol: 1e-8,
            branch_point_exclusion: 1e-9 / freq.wavelength(),
        }
    }

    /// Same defaults but truncated at `h_max`.
    pub fn with_h_max(freq: Frequency, h_max: f64) -> Self {
        Self {
            h_max,
            ..Self::default_for(freq)
        }
    }

    /// Check the invariants against the operating wavenumber.
    pub fn validate(&self, k0: f64) -> Result<()> {
        if !(self.h_max > k0) {
            return Err(SlabError::InvalidQuadratureSpec {
                reason: format!("h_max = {:e} must exceed k0 = {:e}", self.h_max, k0),
            });
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(SlabError::InvalidQuadratureSpec {
                reason: format!("rel_tol = {:e} outside (0, 1e-2]", self.rel_tol),
            });
        }
        if self.n_base < 8 {
            return Err(SlabError::InvalidQuadratureSpec {
                reason: format!("n_base = {} too small", self.n_base),
            });
        }
        if self.branch_point_exclusion < 0.0 {
            return Err(SlabError::InvalidQuadratureSpec {
                reason: "branch_point_exclusion must be nonnegative".to_string(),
            });
        }
        Ok(())
    }
}

/// Integral estimate with an error bound.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    /// Integral estimate.
    pub value: Complex64,
    /// Absolute error bound.
    pub error_bound: f64,
}

// Gauss-Kronrod 7-15 abscissae (positive half) and weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 panel: returns (K15 estimate, |K15 - G7| error estimate).
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * sum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * sum;
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).norm())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

/// Adaptive Gauss-Kronrod integration of a complex integrand.
///
/// Starts from `init_panels` equal panels and repeatedly bisects the
/// worst-error panel until the summed error bound drops below
/// `0.25 * rel_tol * max(|value|, scale_floor)` or the panel budget
/// `max_panels` is exhausted (an error carrying the last estimate).
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    scale_floor: f64,
    init_panels: usize,
    max_panels: usize,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_bound: 0.0,
        });
    }
    let init = init_panels.clamp(1, max_panels.max(1));
    let mut panels: Vec<Panel> = Vec::with_capacity(max_panels.max(init));
    let step = (b - a) / init as f64;
    for i in 0..init {
        let pa = a + step * i as f64;
        let pb = if i + 1 == init { b } else { a + step * (i + 1) as f64 };
        let (value, error) = gk15(f, pa, pb);
        panels.push(Panel {
            a: pa,
            b: pb,
            value,
            error,
        });
    }

    loop {
        let mut total = Complex64::new(0.0, 0.0);
        let mut err: f64 = 0.0;
        for p in &panels {
            total += p.value;
            err += p.error;
        }
        let target = 0.25 * rel_tol * total.norm().max(scale_floor);
        if err <= target {
            return Ok(QuadResult {
                value: total,
                error_bound: err,
            });
        }
        if panels.len() >= max_panels {
            return Err(SlabError::QuadratureNonConvergence {
                estimate: total,
                error_bound: err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.error.total_cmp(&q.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        panels[worst] = Panel {
            a: pa,
            b: mid,
            value: v1,
            error: e1,
        };
        panels.push(Panel {
            a: mid,
            b: pb,
            value: v2,
            error: e2,
        });
    }
}

/// Uniform trapezoid rule with `n` nodes (n >= 2), plus a Richardson-style
/// error estimate from the half-resolution grid.
pub fn integrate_trapezoid<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, n: usize) -> QuadResult {
    let n = n.max(2);
    let full = trapezoid_sum(f, a, b, n);
    let half = trapezoid_sum(f, a, b, n.div_ceil(2).max(2));
    QuadResult {
        value: full,
        error_bound: (full - half).norm() / 3.0,
    }
}

fn trapezoid_sum<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, n: usize) -> Complex64 {
    let step = (b - a) / (n - 1) as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for i in 1..n - 1 {
        acc += f(a + step * i as f64);
    }
    acc * step
}
