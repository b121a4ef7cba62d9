//! Run configuration: JSON schema, defaults, overrides and hashing.
//!
//! The defaults reproduce the reference setup: a 10 GHz line source, a slab
//! one wavelength wide observed at `z = 2L + lambda0/1000`, a 1 ms sine
//! window, and a 100000-point clustered frequency grid.

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use slablens::material::MaterialModel;
use slablens::quadrature::{GridStrategy, QuadratureSpec};
use slablens::timedomain::{OmegaGridSpec, SineWindow, SourceWindow};
use slablens::{Frequency, SlabGeometry};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Carrier frequency, Hz.
    pub f0_hz: f64,
    /// Slab width in free-space wavelengths.
    pub l_over_lambda0: f64,
    /// Source-to-slab distance in free-space wavelengths.
    pub d_over_lambda0: f64,
    /// Source field amplitude, field units.
    pub e0: f64,
    /// Slab material.
    pub material: MaterialConfig,
    /// Source time window.
    pub window: WindowConfig,
    /// Numerical grids shared by the commands.
    pub grids: GridConfig,
    /// Figure-specific settings.
    pub fig2: Fig2Config,
    pub fig3: Fig3Config,
    pub fig4: Fig4Config,
    pub resolution_table: ResolutionTableConfig,
    pub field_map: FieldMapConfig,
    /// Seed for randomized property sweeps (recorded for reproducibility).
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            f0_hz: 10.0e9,
            l_over_lambda0: 1.0,
            d_over_lambda0: 0.75,
            e0: 1.0,
            material: MaterialConfig::default(),
            window: WindowConfig::default(),
            grids: GridConfig::default(),
            fig2: Fig2Config::default(),
            fig3: Fig3Config::default(),
            fig4: Fig4Config::default(),
            resolution_table: ResolutionTableConfig::default(),
            field_map: FieldMapConfig::default(),
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialConfig {
    /// `eps_r = mu_r = -1 + i delta_pp` at every frequency.
    ConstantLossyDng { delta_pp: f64 },
    /// Near-resonance double-negative model, lossless at the carrier.
    DispersiveDng {
        #[serde(default = "default_slope")]
        slope: f64,
        #[serde(default = "default_loss_coeff")]
        loss_coeff: f64,
    },
    /// Free space.
    Vacuum,
    /// Table of `[omega_rad_s, eps_re, eps_im, mu_re, mu_im]` rows.
    Custom { table: Vec<[f64; 5]> },
}

fn default_slope() -> f64 {
    4.0
}
fn default_loss_coeff() -> f64 {
    1000.0
}

impl Default for MaterialConfig {
    fn default() -> Self {
        MaterialConfig::DispersiveDng {
            slope: default_slope(),
            loss_coeff: default_loss_coeff(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowConfig {
    /// sin(omega0 t) on [0, te_s].
    Sine { te_s: f64 },
    /// sin(omega0 t) lasting an integer number of carrier periods.
    SinePeriods { periods: u64 },
    /// cos(omega0 t) on [-t0_s, t0_s].
    Cosine { t0_s: f64 },
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig::Sine { te_s: 1.0e-3 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Truncation of frequency-domain h-integrals, in unit of k00.
    pub h_max_over_k00: f64,
    /// Node budget of the h-quadrature.
    pub n_base: usize,
    /// "adaptive" or "uniform".
    pub strategy: String,
    /// Relative tolerance of adaptive refinement.
    pub rel_tol: f64,
    /// Observation offset past the image plane, in wavelengths.
    pub z_offset_over_lambda0: f64,
    /// Clustered frequency grid shape.
    pub omega: OmegaConfig,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            h_max_over_k00: 12.0,
            n_base: 2048,
            strategy: "adaptive".to_string(),
            rel_tol: 1e-8,
            z_offset_over_lambda0: 1.0e-3,
            omega: OmegaConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OmegaConfig {
    pub n_points: usize,
    pub split_h_over_k00: f64,
    pub wide_halfwidth_rel: f64,
    pub narrow_halfwidth_rel: f64,
    pub max_h_over_k00: f64,
    pub exponent: u32,
    pub inner_fraction: f64,
    pub floor_ratio: f64,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        let d = OmegaGridSpec::default();
        Self {
            n_points: d.n_points,
            split_h_over_k00: d.split_h_over_k00,
            wide_halfwidth_rel: d.wide_halfwidth_rel,
            narrow_halfwidth_rel: d.narrow_halfwidth_rel,
            max_h_over_k00: d.max_h_over_k00,
            exponent: d.exponent,
            inner_fraction: d.inner_fraction,
            floor_ratio: d.floor_ratio,
        }
    }
}

impl OmegaConfig {
    pub fn to_spec(&self) -> OmegaGridSpec {
        OmegaGridSpec {
            split_h_over_k00: self.split_h_over_k00,
            wide_halfwidth_rel: self.wide_halfwidth_rel,
            narrow_halfwidth_rel: self.narrow_halfwidth_rel,
            max_h_over_k00: self.max_h_over_k00,
            n_points: self.n_points,
            exponent: self.exponent,
            inner_fraction: self.inner_fraction,
            floor_ratio: self.floor_ratio,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig2Config {
    /// Loss values, one curve each.
    pub delta_pp_list: Vec<f64>,
    /// Scan range and sample count; samples are half-step offset so none
    /// lands exactly on the branch point.
    pub h_max_over_k00: f64,
    pub h_count: usize,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            delta_pp_list: vec![5.6e-7, 1.0e-10, 4.3e-14],
            h_max_over_k00: 7.0,
            h_count: 700,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3Config {
    pub times_s: Vec<f64>,
    pub h_min_over_k00: f64,
    pub h_max_over_k00: f64,
    pub h_count: usize,
    /// Frequency-grid size for this command (the spectrum scan dominates
    /// runtime, so it gets its own knob).
    pub omega_n_points: usize,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            times_s: vec![1.0e-6, 1.0e-5, 1.0e-4],
            h_min_over_k00: 0.05,
            h_max_over_k00: 3.45,
            h_count: 137,
            omega_n_points: 100_001,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig4Config {
    pub times_s: Vec<f64>,
    pub source_offsets_over_lambda0: Vec<f64>,
    pub x_half_range_over_lambda0: f64,
    pub x_count: usize,
    pub h_max_over_k00: f64,
    pub h_count: usize,
    pub omega_n_points: usize,
    /// Narrow-band halfwidth for this command. Wider than the reference
    /// scheme so wavenumbers between the band split and the latest-time
    /// truncation front keep their build-up physics.
    pub narrow_halfwidth_rel: f64,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Self {
            times_s: vec![9.0e-6, 9.0e-5, 9.0e-4],
            source_offsets_over_lambda0: vec![-0.125, 0.125],
            x_half_range_over_lambda0: 0.75,
            x_count: 121,
            h_max_over_k00: 3.4,
            h_count: 257,
            omega_n_points: 100_001,
            narrow_halfwidth_rel: 1.0e-6,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResolutionTableConfig {
    pub delta_pp_list: Vec<f64>,
    pub times_s: Vec<f64>,
    pub enhancements: Vec<f64>,
}

impl Default for ResolutionTableConfig {
    fn default() -> Self {
        Self {
            delta_pp_list: vec![5.6e-7, 1.0e-10, 4.3e-14],
            times_s: vec![1.0e-6, 1.0e-5, 1.0e-4, 9.0e-4],
            enhancements: vec![1.0, 2.5, 3.8, 5.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldMapConfig {
    pub x_half_range_over_lambda0: f64,
    pub x_count: usize,
    pub z_min_over_lambda0: f64,
    pub z_max_over_lambda0: f64,
    pub z_count: usize,
    /// "loss_first" (four-region map) or "truncation_first" (five-region).
    pub limit_order: String,
}

impl Default for FieldMapConfig {
    fn default() -> Self {
        Self {
            x_half_range_over_lambda0: 1.0,
            x_count: 41,
            z_min_over_lambda0: 0.05,
            z_max_over_lambda0: 3.0,
            z_count: 60,
            limit_order: "loss_first".to_string(),
        }
    }
}

/// Configuration resolved into solver inputs.
pub struct Resolved {
    pub config: RunConfig,
    pub config_hash: String,
    pub freq0: Frequency,
    pub lambda0: f64,
    pub geometry: SlabGeometry,
    pub material: MaterialModel,
    pub window: SourceWindow,
    pub quadrature: QuadratureSpec,
    pub omega_spec: OmegaGridSpec,
}

impl RunConfig {
    /// Parse a config from JSON text, applying `key=value` overrides with
    /// dotted paths into the document before validation.
    pub fn from_json(text: &str, overrides: &[String]) -> anyhow::Result<Self> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).context("config is not valid JSON")?;
        apply_overrides(&mut value, overrides)?;
        let config: RunConfig =
            serde_json::from_value(value).context("config does not match the schema")?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.f0_hz > 0.0 && self.f0_hz.is_finite()) {
            bail!("f0_hz must be positive");
        }
        if !(self.l_over_lambda0 > 0.0 && self.d_over_lambda0 > 0.0) {
            bail!("slab width and source distance must be positive");
        }
        if !(self.grids.rel_tol > 0.0 && self.grids.rel_tol <= 1e-2) {
            bail!("grids.rel_tol must lie in (0, 1e-2]");
        }
        match self.grids.strategy.as_str() {
            "adaptive" | "uniform" => {}
            other => bail!("grids.strategy must be 'adaptive' or 'uniform', got '{other}'"),
        }
        match self.field_map.limit_order.as_str() {
            "loss_first" | "truncation_first" => {}
            other => bail!(
                "field_map.limit_order must be 'loss_first' or 'truncation_first', got '{other}'"
            ),
        }
        if let MaterialConfig::ConstantLossyDng { delta_pp } = &self.material {
            if *delta_pp < 0.0 {
                bail!("material.delta_pp must be nonnegative");
            }
        }
        if let MaterialConfig::DispersiveDng { slope, .. } = &self.material {
            if *slope < 4.0 {
                bail!("material.slope must be at least 4 (causal lower bound)");
            }
        }
        match &self.window {
            WindowConfig::Sine { te_s } if *te_s <= 0.0 => bail!("window.te_s must be positive"),
            WindowConfig::Cosine { t0_s } if *t0_s <= 0.0 => bail!("window.t0_s must be positive"),
            WindowConfig::SinePeriods { periods } if *periods == 0 => {
                bail!("window.periods must be positive")
            }
            _ => {}
        }
        Ok(())
    }

    /// Resolve the config into solver inputs.
    pub fn resolve(self) -> anyhow::Result<Resolved> {
        let freq0 = Frequency::from_hz(self.f0_hz);
        let lambda0 = freq0.wavelength();
        let geometry = SlabGeometry::new(
            self.d_over_lambda0 * lambda0,
            self.l_over_lambda0 * lambda0,
        );
        let omega0 = freq0.omega();
        let material = match &self.material {
            MaterialConfig::ConstantLossyDng { delta_pp } => MaterialModel::ConstantLossyDng {
                delta_pp: *delta_pp,
            },
            MaterialConfig::DispersiveDng { slope, loss_coeff } => MaterialModel::DispersiveDng {
                omega0,
                slope: *slope,
                loss_coeff: *loss_coeff,
            },
            MaterialConfig::Vacuum => MaterialModel::Vacuum,
            MaterialConfig::Custom { table } => MaterialModel::Custom {
                table: table
                    .iter()
                    .map(|row| {
                        (
                            row[0],
                            num_complex::Complex64::new(row[1], row[2]),
                            num_complex::Complex64::new(row[3], row[4]),
                        )
                    })
                    .collect(),
            },
        };
        let window = match &self.window {
            WindowConfig::Sine { te_s } => SourceWindow::Sine(SineWindow {
                te: *te_s,
                omega0,
            }),
            WindowConfig::SinePeriods { periods } => {
                SourceWindow::Sine(SineWindow::with_periods(*periods, omega0))
            }
            WindowConfig::Cosine { t0_s } => {
                SourceWindow::Cosine(slablens::timedomain::CosineWindow {
                    t0: *t0_s,
                    omega0,
                })
            }
        };
        let quadrature = QuadratureSpec {
            h_max: self.grids.h_max_over_k00 * freq0.k0(),
            n_base: self.grids.n_base,
            strategy: if self.grids.strategy == "uniform" {
                GridStrategy::UniformTrapezoid
            } else {
                GridStrategy::AdaptivePanels
            },
            rel_tol: self.grids.rel_tol,
            branch_point_exclusion: 1e-9 / lambda0,
        };
        let omega_spec = self.grids.omega.to_spec();
        let config_hash = hash_config(&self)?;
        Ok(Resolved {
            config: self,
            config_hash,
            freq0,
            lambda0,
            geometry,
            material,
            window,
            quadrature,
            omega_spec,
        })
    }
}

impl Resolved {
    /// The sine window, for commands that require one.
    pub fn sine_window(&self) -> anyhow::Result<SineWindow> {
        match &self.window {
            SourceWindow::Sine(w) => Ok(*w),
            SourceWindow::Cosine(_) => {
                bail!("this command requires a sine window (window.type = 'sine')")
            }
        }
    }
}

/// Canonical JSON serialization hashed to a short hex tag carried by every
/// output file.
pub fn hash_config(config: &RunConfig) -> anyhow::Result<String> {
    let canonical = serde_json::to_string(config)?;
    let digest = Sha256::digest(canonical.as_bytes());
    Ok(hex_prefix(&digest, 16))
}

fn hex_prefix(bytes: &[u8], chars: usize) -> String {
    let mut s = String::with_capacity(chars);
    for b in bytes {
        use std::fmt::Write;
        let _ = write!(s, "{b:02x}");
        if s.len() >= chars {
            break;
        }
    }
    s.truncate(chars);
    s
}

fn apply_overrides(value: &mut serde_json::Value, overrides: &[String]) -> anyhow::Result<()> {
    for entry in overrides {
        let (path, raw) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("override '{entry}' is not of the form key=value"))?;
        let parsed: serde_json::Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let segments: Vec<&str> = path.split('.').collect();
        let (last, parents) = segments.split_last().unwrap();
        let mut node = &mut *value;
        for segment in parents {
            let map = node
                .as_object_mut()
                .ok_or_else(|| anyhow!("override path '{path}' walks through a non-object"))?;
            node = map
                .entry(segment.to_string())
                .or_insert_with(|| serde_json::Value::Object(Default::default()));
        }
        let map = node
            .as_object_mut()
            .ok_or_else(|| anyhow!("override path '{path}' walks through a non-object"))?;
        map.insert(last.to_string(), parsed);
    }
    Ok(())
}
