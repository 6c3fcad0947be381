//! Acceptance criteria, one check each. Every check prints a PASS/FAIL line
//! and the test fails at the end if any check failed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use olever_cli::config::ExperimentConfig;
use olever_core::beamline::{Beamline, BeamlineElement};
use olever_core::constants::{HBAR, K_B};
use olever_core::hermite_gauss::{hg_profile, overlap_f_numeric, HermiteIndex, SplitWeight};
use olever_core::mechanics::{fit_sound_speed, mode_frequency, ring_down_q, MechanicalMode, ModePeak};
use olever_core::noise_spectra::{
    finite_waist_factors, sql, ClassicalDrive, Corrections, DetectionModel, NoiseModel,
};
use olever_core::quadrature::{integrate, integrate_with_breaks, scan_min, Tolerance};

type Check = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel_err(x: f64, reference: f64) -> f64 {
    ((x - reference) / reference).abs()
}

fn preset(name: &str) -> ExperimentConfig {
    ExperimentConfig::preset(name).expect("preset loads")
}

fn membrane_cooperativity() -> Outcome {
    let cfg = preset("membrane_fig4a");
    let c = cfg.noise_model().unwrap().cooperativity().c;
    outcome((1.6..=2.2).contains(&c), format!("C = {c:.4}, expected in [1.6, 2.2]"))
}

fn string_cooperativity() -> Outcome {
    let cfg = preset("string_fig4b");
    let c = cfg.noise_model().unwrap().cooperativity().c;
    outcome((50.0..=200.0).contains(&c), format!("C = {c:.2}, expected in [50, 200]"))
}

fn membrane_noise_levels() -> Outcome {
    let cfg = preset("membrane_fig4a");
    let model = cfg.noise_model().unwrap();
    let f_m = model.mode.f_m();
    let t = model.tilt_terms(f_m, FRAC_PI_2).unwrap();
    let zp = t.s_zp.sqrt() * 1e12;
    let imp = (t.s_imp / 0.21).sqrt() * 1e12;
    let (zp_ref, imp_ref) = (5.23, 5.45);
    let pass = rel_err(zp, zp_ref) <= 0.3 && rel_err(imp, imp_ref) <= 0.3;
    outcome(
        pass,
        format!(
            "sqrt(S_zp) = {zp:.3} prad/rtHz vs {zp_ref} ({:+.1}%), sqrt(S_imp/0.21) = {imp:.3} vs {imp_ref} ({:+.1}%)",
            100.0 * (zp / zp_ref - 1.0),
            100.0 * (imp / imp_ref - 1.0)
        ),
    )
}

fn finite_waist_corrections() -> Outcome {
    let k_m = 2.0 * PI / 580e-6;
    let corr = finite_waist_factors(k_m, 100e-6).unwrap();
    let pass = (corr.c_factor - 0.86).abs() <= 0.01 && (corr.d_factor - 0.55).abs() <= 0.01;
    outcome(pass, format!("c = {:.4}, d = {:.4}", corr.c_factor, corr.d_factor))
}

fn split_detector_overlap() -> Outcome {
    let f = overlap_f_numeric(HermiteIndex::new(0, 0), HermiteIndex::new(1, 0), SplitWeight::default()).unwrap();
    let f2 = f * f;
    let pass = (f2 - 2.0 / PI).abs() <= 1e-6;
    outcome(pass, format!("F^2 = {f2:.12}, 2/pi = {:.12}", 2.0 / PI))
}

/// Quantum model for the SQL checks: fig4a laser and mode, corrections off.
fn sql_model(power: f64) -> NoiseModel {
    let cfg = preset("membrane_fig4a");
    let laser = cfg.laser.with_power(power).unwrap();
    NoiseModel::new(laser, cfg.mode, DetectionModel::default(), Corrections::NONE, ClassicalDrive::None).unwrap()
}

fn sql_checks() -> Outcome {
    let base = sql_model(1e-3);
    let mode = base.mode;
    let f_m = mode.f_m();
    let k2 = mode.k_m * mode.k_m;
    let (ln_lo, ln_hi) = (1e-12f64.ln(), 1e16f64.ln());

    // (a) minimum over power of the phase-quadrature budget.
    let offsets: Vec<f64> = (0..25).map(|i| 10f64.powf(-7.0 + 6.5 * i as f64 / 24.0)).collect();
    let freqs: Vec<f64> = offsets.iter().flat_map(|&s| [f_m * (1.0 - s), f_m * (1.0 + s)]).collect();
    let mut worst_a = 0.0f64;
    for &f in &freqs {
        let budget = |ln_p: f64| sql_model(ln_p.exp()).quantum_terms(f, FRAC_PI_2).unwrap();
        let (_, s_min) = scan_min(budget, ln_lo, ln_hi, 600, 1e-10);
        worst_a = worst_a.max(rel_err(s_min, HBAR * k2 * mode.chi_at(f).norm()));
    }

    // (b) minimum over power and quadrature; the quadrature is searched
    // through u = cot θ so steep optima stay resolved.
    let mut worst_b = 0.0f64;
    for &f in &[f_m * (1.0 - 1e-6), f_m, f_m * (1.0 + 3e-6), f_m * 0.9, f_m * 1.2] {
        let inner = |ln_p: f64| {
            let model = sql_model(ln_p.exp());
            let by_u = |u: f64| model.quantum_terms(f, 1f64.atan2(u)).unwrap();
            scan_min(by_u, -1e9, 1e9, 2001, 1e-9).1
        };
        let (_, s_min) = scan_min(inner, ln_lo, ln_hi, 300, 1e-9);
        worst_b = worst_b.max(rel_err(s_min, HBAR * k2 * mode.chi_at(f).im.abs()));
    }

    // (c) SQL at resonance equals the zero-point density there.
    let err_c = rel_err(sql(f_m, &mode), mode.zp_tilt_psd(f_m));

    let pass = worst_a <= 1e-9 && worst_b <= 1e-6 && err_c <= 1e-12;
    outcome(
        pass,
        format!(
            "min over N: {worst_a:.2e} ({} freqs, tol 1e-9); min over (N, theta): {worst_b:.2e} (tol 1e-6); SQL vs S_zp at f_m: {err_c:.2e} (tol 1e-12)",
            freqs.len()
        ),
    )
}

fn classical_evasion_map() -> Outcome {
    let cfg = preset("membrane_fig3");
    let model = cfg.noise_model().unwrap();
    let f_grid = cfg.sweep.f_grid().unwrap();
    let theta_grid = cfg.sweep.theta_grid().unwrap();
    let map = model.density_map(&f_grid, &theta_grid).unwrap();
    let f_m = model.mode.f_m();
    let linewidth = model.mode.gamma() / (2.0 * PI);

    let off_res_negative = f_grid
        .iter()
        .enumerate()
        .filter(|(_, &f)| (f - f_m).abs() > linewidth)
        .any(|(i, _)| (0..theta_grid.len()).any(|j| map.get(i, j) < 0.0));

    // At θ = 90° the classical part is the drive times the Lorentzian gain.
    let j90 = theta_grid.iter().position(|t| (t - FRAC_PI_2).abs() < 1e-12).unwrap();
    let d = model.coupling_d();
    let m = model.mode;
    let mut worst = 0.0f64;
    for &f in &f_grid {
        let spec = model.detector(f, theta_grid[j90]).unwrap();
        let w = 2.0 * PI * f;
        let lorentzian = (2.0 * HBAR * d).powi(2)
            / (m.m_eff * m.m_eff * ((m.omega_m.powi(2) - w * w).powi(2) + (w * m.gamma()).powi(2)));
        worst = worst.max(rel_err(spec.classical / spec.classical_input, lorentzian));
    }
    let peak = 2.0 * HBAR * d * m.chi_at(f_m).norm();

    let pass = off_res_negative && worst <= 1e-9 && (1.2..=1.6).contains(&peak);
    outcome(
        pass,
        format!(
            "min {:.2} dB (off-resonance < 0 dB: {off_res_negative}); 90 deg column vs Lorentzian {worst:.1e}; peak 2hbar D|chi| = {peak:.3}",
            map.min_db
        ),
    )
}

fn gouy_phase_checks() -> Outcome {
    let wavelength = 1064e-9;
    let mut worst_2f = 0.0f64;
    let mut worst_free = 0.0f64;
    for &z_r in &[1e-4, 1e-3, 1e-2, 1e-1, 1.0] {
        let w0 = (z_r * wavelength / PI).sqrt();
        for &f in &[0.025, 0.125, 0.5] {
            let bl = Beamline::two_f(wavelength, w0, f).unwrap();
            worst_2f = worst_2f.max((bl.quadrature_at(2.0 * f).unwrap() - FRAC_PI_2).abs());
        }
        let length = 10.0 * z_r;
        let bare = Beamline::new(wavelength, w0, vec![BeamlineElement::space(length).unwrap()]).unwrap();
        for i in 0..=50 {
            let z = length * i as f64 / 50.0;
            worst_free = worst_free.max((bare.quadrature_at(z).unwrap() - (z / z_r).atan()).abs());
        }
    }
    let pass = worst_2f <= 1e-12 && worst_free <= 1e-12;
    outcome(pass, format!("2f error {worst_2f:.1e} rad, free-space error {worst_free:.1e} rad (tol 1e-12)"))
}

fn sanity_checks() -> Outcome {
    // Equipartition of the thermal displacement density.
    let mode = MechanicalMode::new(371e3, 3.2e6, 4.06e-10, 1.0, 297.5).unwrap();
    let f_m = mode.f_m();
    let lw = mode.gamma() / (2.0 * PI);
    let mut breaks = vec![f_m / 100.0];
    for s in [-1e4, -1e3, -1e2, -10.0, -1.0, 0.0, 1.0, 10.0, 1e2, 1e3, 1e4] {
        breaks.push(f_m + s * lw);
    }
    breaks.push(100.0 * f_m);
    let one_sided =
        integrate_with_breaks(|f| mode.thermal_displacement_psd(f), &breaks, Tolerance::new(0.0, 1e-10)).unwrap();
    let variance = 2.0 * one_sided.value;
    let expected = K_B * mode.temperature / (mode.m_eff * mode.omega_m * mode.omega_m);
    let equip = rel_err(variance, expected);

    // Orthonormality of the one-dimensional profiles up to order 5.
    let w = 1.0;
    let mut ortho = 0.0f64;
    for a in 0..=5u32 {
        for b in a..=5u32 {
            let v = integrate(|x| hg_profile(a, x, w) * hg_profile(b, x, w), -8.0, 8.0, Tolerance::new(1e-13, 1e-12))
                .unwrap()
                .value;
            let target = if a == b { 1.0 } else { 0.0 };
            ortho = ortho.max((v - target).abs());
        }
    }

    // Ring-down of a synthetic exponential.
    let q_true = 3.2e6;
    let tau = q_true / (PI * f_m);
    let samples: Vec<(f64, f64)> = (0..200)
        .map(|i| {
            let t = 3.0 * tau * i as f64 / 199.0;
            (t, 2.5e-3 * (-t / tau).exp())
        })
        .collect();
    let q_fit = ring_down_q(&samples, f_m).unwrap().q_factor;
    let ring = rel_err(q_fit, q_true);

    // Mode identification of the (12, 3) mode from its measured peak.
    let (a, b) = (3.5e-3, 1.5e-3);
    let fit = fit_sound_speed(&[ModePeak { l: 12, p: 3, f_measured: 371e3 }], a, b).unwrap();
    let f_pred = mode_frequency(12, 3, a, b, fit.c_sound);
    let mode_ok = (fit.c_sound - 187.0).abs() <= 2.0 && (f_pred - 371e3).abs() <= 1.0;

    let pass = equip <= 1e-3 && ortho <= 1e-6 && ring <= 1e-6 && mode_ok;
    outcome(
        pass,
        format!(
            "equipartition {equip:.1e}; orthonormality {ortho:.1e}; ring-down Q {q_fit:.6e} ({ring:.1e}); c = {:.2} m/s, f(12,3) = {:.1} Hz",
            fit.c_sound, f_pred
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let checks: [Check; 9] = [
        ("membrane cooperativity", membrane_cooperativity),
        ("string cooperativity", string_cooperativity),
        ("membrane zero-point and imprecision levels", membrane_noise_levels),
        ("finite-waist corrections", finite_waist_corrections),
        ("split-detector overlap", split_detector_overlap),
        ("standard quantum limit", sql_checks),
        ("classical evasion density map", classical_evasion_map),
        ("Gouy phase along the beamline", gouy_phase_checks),
        ("equipartition, modes, ring-down", sanity_checks),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        // Written to the process stdout directly so the report shows without --nocapture.
        writeln!(std::io::stdout().lock(), "{tag} [{}] {name}: {}", i + 1, o.detail).unwrap();
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
