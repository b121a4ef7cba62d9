//! The six subcommands: figure data, resolution tables, field maps and
//! config validation.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use num_complex::Complex64;

use slablens::field::{
    evaluate_field, incident_field, region_map, FieldGrid, LimitOrder, RegionTag,
};
use slablens::resolution::{
    enhancement_lossy, enhancement_lossy_smith, enhancement_time, required_loss, required_time,
    resolution_lossy,
};
use slablens::spectrum::t_te;
use slablens::timedomain::{field_profile, spectrum_profile, OmegaGridSpec};
use slablens::wavenumber::gamma0;
use slablens::MaterialResponse;

use crate::config::Resolved;
use crate::output::{float17, out_path, write_json, CsvTable};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Magnitude of the transmission coefficient referenced to the image plane,
/// one curve per loss value, with enhancement markers as sidecar rows.
pub fn cmd_fig2(resolved: &Resolved, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cfg = &resolved.config.fig2;
    let freq = resolved.freq0;
    let k00 = freq.k0();
    let l = resolved.geometry.l;
    let lambda0 = resolved.lambda0;

    let mut table = CsvTable::new(
        &["kind", "h_over_k00", "abs_value", "delta_pp"],
        &resolved.config_hash,
    );
    for &delta in &cfg.delta_pp_list {
        let m = MaterialResponse::new(
            Complex64::new(-1.0, delta),
            Complex64::new(-1.0, delta),
        )?;
        // Half-step offset keeps samples off the branch-point notch.
        for i in 0..cfg.h_count {
            let hk = (i as f64 + 0.5) * cfg.h_max_over_k00 / cfg.h_count as f64;
            let h = hk * k00;
            let g0 = gamma0(freq, h);
            let value = (t_te(freq, h, &m, l)? * (2.0 * I * g0 * l).exp()).norm();
            table.push(vec![
                "magnitude".to_string(),
                float17(hk),
                float17(value),
                float17(delta),
            ]);
        }
        let re = enhancement_lossy(delta, l, lambda0)?;
        table.push(vec![
            "re_marker".to_string(),
            float17(re),
            float17(1.0),
            float17(delta),
        ]);
    }

    let path = out_path(out_dir, "fig2.csv");
    table.write(&path)?;
    Ok(vec![path])
}

/// Normalized magnitude of the analytic-signal time-domain spectrum versus
/// transverse wavenumber, one curve per elapsed time, with enhancement
/// markers.
pub fn cmd_fig3(resolved: &Resolved, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cfg = &resolved.config.fig3;
    let window = resolved.sine_window()?;
    let lambda0 = resolved.lambda0;
    let geom = &resolved.geometry;
    let z = 2.0 * geom.l + resolved.config.grids.z_offset_over_lambda0 * lambda0;

    let omega_spec = OmegaGridSpec {
        n_points: cfg.omega_n_points,
        ..resolved.omega_spec
    };
    if cfg.h_max_over_k00 >= omega_spec.max_h_over_k00 {
        bail!(
            "fig3.h_max_over_k00 = {} must stay below the calibrated limit {}",
            cfg.h_max_over_k00,
            omega_spec.max_h_over_k00
        );
    }
    let hks: Vec<f64> = (0..cfg.h_count)
        .map(|i| {
            cfg.h_min_over_k00
                + (cfg.h_max_over_k00 - cfg.h_min_over_k00) * i as f64
                    / (cfg.h_count - 1).max(1) as f64
        })
        .collect();

    let mut table = CsvTable::new(
        &["kind", "h_over_k00", "normalized_abs_w", "t_s"],
        &resolved.config_hash,
    );
    for &t in &cfg.times_s {
        let mags: Vec<f64> = spectrum_profile(
            &hks,
            z,
            t,
            geom,
            &resolved.material,
            &window,
            &omega_spec,
            resolved.config.e0,
        )?
        .iter()
        .map(|w| w.norm())
        .collect();
        let peak = mags.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
        for (hk, mag) in hks.iter().zip(&mags) {
            table.push(vec![
                "spectrum".to_string(),
                float17(*hk),
                float17(mag / peak),
                float17(t),
            ]);
        }
        let re = enhancement_time(t, resolved.freq0.hz(), geom.l, lambda0)?.enhancement;
        table.push(vec![
            "re_marker".to_string(),
            float17(re),
            float17(1.0),
            float17(t),
        ]);
    }

    let path = out_path(out_dir, "fig3.csv");
    table.write(&path)?;
    Ok(vec![path])
}

/// Normalized magnitude of the two-source time-domain field along the image
/// line, one curve per elapsed time, with predicted-resolution markers.
pub fn cmd_fig4(resolved: &Resolved, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cfg = &resolved.config.fig4;
    let window = resolved.sine_window()?;
    let lambda0 = resolved.lambda0;
    let geom = &resolved.geometry;
    let z = 2.0 * geom.l + resolved.config.grids.z_offset_over_lambda0 * lambda0;

    let omega_spec = OmegaGridSpec {
        n_points: cfg.omega_n_points,
        narrow_halfwidth_rel: cfg.narrow_halfwidth_rel,
        ..resolved.omega_spec
    };
    let spec = slablens::quadrature::QuadratureSpec {
        h_max: cfg.h_max_over_k00 * resolved.freq0.k0(),
        n_base: cfg.h_count,
        ..resolved.quadrature
    };
    let sources: Vec<f64> = cfg
        .source_offsets_over_lambda0
        .iter()
        .map(|s| s * lambda0)
        .collect();
    let xs: Vec<f64> = (0..cfg.x_count)
        .map(|i| {
            (2.0 * i as f64 / (cfg.x_count - 1).max(1) as f64 - 1.0)
                * cfg.x_half_range_over_lambda0
                * lambda0
        })
        .collect();

    let mut table = CsvTable::new(
        &["kind", "x_over_lambda0", "normalized_abs_e", "t_s"],
        &resolved.config_hash,
    );
    for &t in &cfg.times_s {
        let profile = field_profile(
            &xs,
            &sources,
            z,
            t,
            geom,
            &resolved.material,
            &window,
            &omega_spec,
            &spec,
            resolved.config.e0,
        )?;
        let mags: Vec<f64> = profile.iter().map(|s| s.value.norm()).collect();
        let peak = mags.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
        for (x, mag) in xs.iter().zip(&mags) {
            table.push(vec![
                "field".to_string(),
                float17(x / lambda0),
                float17(mag / peak),
                float17(t),
            ]);
        }
        let delta_x = enhancement_time(t, resolved.freq0.hz(), geom.l, lambda0)?.delta_x;
        table.push(vec![
            "delta_x_marker".to_string(),
            float17(delta_x / lambda0),
            float17(1.0),
            float17(t),
        ]);
    }

    let path = out_path(out_dir, "fig4.csv");
    table.write(&path)?;
    Ok(vec![path])
}

/// Forward and inverse resolution tables plus the loss/on-time duality
/// column, as JSON.
pub fn cmd_resolution_table(resolved: &Resolved, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cfg = &resolved.config.resolution_table;
    let lambda0 = resolved.lambda0;
    let l = resolved.geometry.l;
    let f0 = resolved.freq0.hz();

    let forward_loss: Vec<serde_json::Value> = cfg
        .delta_pp_list
        .iter()
        .map(|&delta| {
            let report = resolution_lossy(delta, l, lambda0)?;
            Ok(serde_json::json!({
                "delta_pp": delta,
                "enhancement": report.enhancement,
                "enhancement_large_loss_limit": enhancement_lossy_smith(delta, l, lambda0)?,
                "delta_x_over_lambda0": report.delta_x / lambda0,
            }))
        })
        .collect::<anyhow::Result<_>>()?;

    let forward_time: Vec<serde_json::Value> = cfg
        .times_s
        .iter()
        .map(|&t| {
            let report = enhancement_time(t, f0, l, lambda0)?;
            Ok(serde_json::json!({
                "t_s": t,
                "enhancement": report.enhancement,
                "delta_x_over_lambda0": report.delta_x / lambda0,
            }))
        })
        .collect::<anyhow::Result<_>>()?;

    let inverse: Vec<serde_json::Value> = cfg
        .enhancements
        .iter()
        .map(|&re| {
            serde_json::json!({
                "enhancement": re,
                "required_delta_pp": required_loss(re, l, lambda0),
                "required_time_s": required_time(re, f0, l, lambda0),
            })
        })
        .collect();

    // Duality: the on-time enhancement equals the loss enhancement at
    // delta'' = 1/(f0 t).
    let duality: Vec<serde_json::Value> = cfg
        .times_s
        .iter()
        .map(|&t| {
            let delta_equiv = 1.0 / (f0 * t);
            Ok(serde_json::json!({
                "t_s": t,
                "delta_pp_equivalent": delta_equiv,
                "enhancement_from_time": enhancement_time(t, f0, l, lambda0)?.enhancement,
                "enhancement_from_loss": enhancement_lossy(delta_equiv, l, lambda0)?,
            }))
        })
        .collect::<anyhow::Result<_>>()?;

    let value = serde_json::json!({
        "config_hash": resolved.config_hash,
        "f0_hz": f0,
        "l_over_lambda0": l / lambda0,
        "forward_loss": forward_loss,
        "forward_time": forward_time,
        "inverse": inverse,
        "duality": duality,
    });

    let path = out_path(out_dir, "resolution_table.json");
    write_json(&path, &value)?;
    Ok(vec![path])
}

fn region_name(tag: &RegionTag) -> &'static str {
    match tag {
        RegionTag::Incident => "incident",
        RegionTag::MirrorImage { .. } => "mirror_image",
        RegionTag::Bounded => "bounded",
        RegionTag::DivergentInner => "divergent_inner",
        RegionTag::DivergentOuter => "divergent_outer",
        RegionTag::PerfectImage { .. } => "perfect_image",
    }
}

/// Frequency-domain field map over an (x, z) window with region tags and
/// diagnostic columns: the deviation from the free-space incident field and,
/// beyond the image plane, from the incident field translated by twice the
/// slab width.
pub fn cmd_field_map(resolved: &Resolved, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cfg = &resolved.config.field_map;
    let lambda0 = resolved.lambda0;
    let geom = &resolved.geometry;
    let freq = resolved.freq0;
    let order = if cfg.limit_order == "truncation_first" {
        LimitOrder::TruncationBeforeLoss
    } else {
        LimitOrder::LossBeforeTruncation
    };

    let xs: Vec<f64> = (0..cfg.x_count)
        .map(|i| {
            (2.0 * i as f64 / (cfg.x_count - 1).max(1) as f64 - 1.0)
                * cfg.x_half_range_over_lambda0
                * lambda0
        })
        .collect();
    let zs: Vec<f64> = (0..cfg.z_count)
        .map(|i| {
            (cfg.z_min_over_lambda0
                + (cfg.z_max_over_lambda0 - cfg.z_min_over_lambda0) * i as f64
                    / (cfg.z_count - 1).max(1) as f64)
                * lambda0
        })
        .collect();

    // Region tags are per z; computing them first also validates the
    // geometry against the requested map.
    let tags: Vec<RegionTag> = zs
        .iter()
        .map(|&z| region_map(geom, z, order))
        .collect::<slablens::Result<_>>()
        .context("field_map.limit_order is incompatible with the geometry")?;

    let e0 = resolved.config.e0;
    let spec = resolved.quadrature;
    let grid = FieldGrid::from_fn(xs.clone(), zs.clone(), |x, z| {
        evaluate_field(freq, x, z, e0, geom, &resolved.material, &spec)
    })?;
    let incident = FieldGrid::from_fn(xs.clone(), zs.clone(), |x, z| {
        incident_field(freq, x, z, e0, &spec)
    })?;
    let translated = FieldGrid::from_fn(xs.clone(), zs.clone(), |x, z| {
        if z > 2.0 * geom.l {
            incident_field(freq, x, z - 2.0 * geom.l, e0, &spec)
        } else {
            Ok(Complex64::new(f64::NAN, f64::NAN))
        }
    })?;

    let mut table = CsvTable::new(
        &[
            "x_over_lambda0",
            "z_over_lambda0",
            "region",
            "re_e",
            "im_e",
            "abs_e",
            "abs_err_vs_incident",
            "abs_err_vs_translated_incident",
        ],
        &resolved.config_hash,
    );
    for (iz, &z) in zs.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            let e = grid.value(ix, iz);
            let inc = incident.value(ix, iz);
            let trans = translated.value(ix, iz);
            let err_translated = if z > 2.0 * geom.l {
                float17((e - trans).norm())
            } else {
                String::new()
            };
            table.push(vec![
                float17(x / lambda0),
                float17(z / lambda0),
                region_name(&tags[iz]).to_string(),
                float17(e.re),
                float17(e.im),
                float17(e.norm()),
                float17((e - inc).norm()),
                err_translated,
            ]);
        }
    }

    let path = out_path(out_dir, "field_map.csv");
    table.write(&path)?;
    Ok(vec![path])
}

/// Echo the resolved configuration and its hash.
pub fn cmd_validate_config(resolved: &Resolved) -> anyhow::Result<()> {
    let echo = serde_json::json!({
        "config_hash": resolved.config_hash,
        "config": serde_json::to_value(&resolved.config)?,
    });
    println!("{}", serde_json::to_string_pretty(&echo)?);
    Ok(())
}
