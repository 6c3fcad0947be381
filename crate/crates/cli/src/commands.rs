//! Subcommand implementations. Each builds its table or report from a
//! configuration; writing happens in [`crate::app`].

use serde::Serialize;

use olever_core::evasion::{effective_curvature, evasion_quadrature, ray_diagram, EvasionTarget, MirrorKind};
use olever_core::mechanics::ring_down_q;
use olever_core::noise_spectra::{cooperativity, sql, thermal_snr, ClassicalDrive};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{fmt_f64, Table, SCHEMA_VERSION};

pub const SPECTRUM_COLUMNS: [&str; 10] = [
    "f_hz", "s_ba", "s_imp", "s_baimp", "s_th", "s_zp", "s_detc", "s_cla", "s_total", "sql",
];

/// Tilt noise budget over the configured frequency sweep at quadrature
/// `theta` (rad).
pub fn spectrum(cfg: &ExperimentConfig, theta: f64) -> Result<Table, CliError> {
    let model = cfg.noise_model()?;
    let mut table = Table::new(SPECTRUM_COLUMNS.to_vec());
    for f in cfg.sweep.f_grid()? {
        let t = model.tilt_terms(f, theta)?;
        table.push_numbers(&[
            f,
            t.s_ba,
            t.s_imp,
            t.s_baimp,
            t.s_th,
            t.s_zp,
            t.s_detc,
            t.s_cla,
            t.total(),
            sql(f, &cfg.mode),
        ]);
    }
    Ok(table)
}

/// Quadrature read out at path position `z` (m) of the beamline.
pub fn theta_at_plane(cfg: &ExperimentConfig, z: f64) -> Result<f64, CliError> {
    Ok(cfg.beamline()?.quadrature_at(z)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensitySummary {
    pub schema_version: u32,
    pub min_db: f64,
    pub max_db: f64,
    pub argmin_f_hz: f64,
    pub argmin_theta_deg: f64,
    pub f_points: usize,
    pub theta_points: usize,
    pub quantum_only: bool,
}

/// Long-format dB map `(f_hz, theta_deg, db)` with its summary.
pub fn density_map(cfg: &ExperimentConfig, quantum_only: bool) -> Result<(Table, DensitySummary), CliError> {
    let mut model = cfg.noise_model()?;
    if quantum_only {
        model.drive = ClassicalDrive::None;
    }
    let f_grid = cfg.sweep.f_grid()?;
    let theta_grid = cfg.sweep.theta_grid()?;
    let map = model.density_map(&f_grid, &theta_grid)?;
    let mut table = Table::new(vec!["f_hz", "theta_deg", "db"]);
    for (i, &f) in f_grid.iter().enumerate() {
        for (j, &theta) in theta_grid.iter().enumerate() {
            table.push_numbers(&[f, theta.to_degrees(), map.get(i, j)]);
        }
    }
    let (f_min, theta_min, _) = map.argmin();
    let summary = DensitySummary {
        schema_version: SCHEMA_VERSION,
        min_db: map.min_db,
        max_db: map.max_db,
        argmin_f_hz: f_min,
        argmin_theta_deg: theta_min.to_degrees(),
        f_points: f_grid.len(),
        theta_points: theta_grid.len(),
        quantum_only,
    };
    Ok((table, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoopReport {
    pub schema_version: u32,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C_corr")]
    pub c_corr: f64,
    pub eta_net: f64,
    pub n_th: f64,
    pub snr: f64,
    /// SQL at the resonance (rad²/Hz).
    pub sql_peak: f64,
}

pub fn coop(cfg: &ExperimentConfig) -> Result<CoopReport, CliError> {
    let coop = cooperativity(&cfg.laser, &cfg.mode, &cfg.corrections);
    let eta_net = cfg.detection.eta_net(&cfg.corrections)?;
    let n_th = cfg.mode.thermal_occupancy();
    Ok(CoopReport {
        schema_version: SCHEMA_VERSION,
        c: coop.c,
        c_corr: coop.c_corr,
        eta_net,
        n_th,
        snr: thermal_snr(eta_net, n_th, coop.c)?,
        sql_peak: sql(cfg.mode.f_m(), &cfg.mode),
    })
}

/// Accumulated Gouy angle, beam radius and curvature along the beamline.
pub fn gouy(cfg: &ExperimentConfig, points: usize) -> Result<Table, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!("--points must be at least 2, got {points}")));
    }
    let bl = cfg.beamline()?;
    let total = bl.total_length();
    let mut zs: Vec<f64> = (0..points).map(|i| total * i as f64 / (points - 1) as f64).collect();
    zs.extend(bl.boundaries());
    zs.sort_by(f64::total_cmp);
    zs.dedup();
    let mut table = Table::new(vec!["z_m", "theta_a_deg", "w_m", "R_m"]);
    for z in zs {
        let state = bl.state_at(z)?;
        let w = state
            .q
            .width(bl.wavelength())
            .ok_or(olever_core::Error::DegenerateBeam { element: format!("z = {z}") })?;
        table.push_numbers(&[z, (state.theta_a + bl.theta_offset).to_degrees(), w, state.q.curvature()]);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaysInfo {
    pub theta_star_deg: f64,
    pub curvature: f64,
    pub p1_m: Option<f64>,
    pub p2_m: Option<f64>,
}

/// Ray segments for the flat, tilted and effective parabolic mirror at the
/// evasion quadrature for `freq`, plus plane markers.
pub fn rays(cfg: &ExperimentConfig, freq: f64, n_rays: usize, tilt: f64) -> Result<(Table, RaysInfo), CliError> {
    let bl = cfg.beamline()?;
    let model = cfg.noise_model()?;
    let target = if model.drive == ClassicalDrive::None {
        EvasionTarget::Quantum
    } else {
        EvasionTarget::Classical
    };
    let sol = evasion_quadrature(freq, &model, bl, target)?;
    let kappa = effective_curvature(sol.theta_star, bl);
    let bundle = ray_diagram(tilt, kappa, bl, n_rays)?;
    let mut table = Table::new(vec!["record", "kind", "ray", "x0_m", "slope_out", "z_m", "x_m"]);
    for (i, ray) in bundle.rays.iter().enumerate() {
        let kind = match ray.kind {
            MirrorKind::Flat => "flat",
            MirrorKind::Tilted => "tilted",
            MirrorKind::Parabolic => "parabolic",
        };
        for &(z, x) in &ray.points {
            table.rows.push(vec![
                "ray".into(),
                kind.into(),
                (i % n_rays).to_string(),
                fmt_f64(ray.x0),
                fmt_f64(ray.slope_out),
                fmt_f64(z),
                fmt_f64(x),
            ]);
        }
    }
    let markers = [("p1", bundle.p1, bundle.tilted_offset_at_p1.unwrap_or(0.0)), ("p2", bundle.p2, 0.0)];
    for (name, z, x) in markers {
        match z {
            Some(z) => table.rows.push(vec![
                "marker".into(),
                name.into(),
                String::new(),
                String::new(),
                String::new(),
                fmt_f64(z),
                fmt_f64(x),
            ]),
            None => log::warn!("{} not reached within the beamline", name.to_uppercase()),
        }
    }
    let info = RaysInfo {
        theta_star_deg: sol.theta_star.to_degrees(),
        curvature: kappa,
        p1_m: bundle.p1,
        p2_m: bundle.p2,
    };
    Ok((table, info))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingdownReport {
    pub schema_version: u32,
    pub tau_s: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub amplitude0: f64,
}

/// Fits `(t, amplitude)` samples.
pub fn ringdown(samples: &[(f64, f64)], f_m: f64) -> Result<RingdownReport, CliError> {
    let fit = ring_down_q(samples, f_m)?;
    Ok(RingdownReport {
        schema_version: SCHEMA_VERSION,
        tau_s: fit.tau,
        q: fit.q_factor,
        amplitude0: fit.amplitude0,
    })
}
