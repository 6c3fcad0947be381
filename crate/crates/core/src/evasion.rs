//! Back-action-evasion quadrature, its plane along a beamline, and the
//! paraxial ray picture of the same cancellation.
//!
//! In the ray picture the back action makes the resonator look like a weak
//! parabolic mirror. Rays launched parallel at height `x0` then follow
//! `x(z) = x0 (A(z) + 2κ B(z))`, so they all cross the axis where
//! `A + 2κB = 0`. For a beam leaving a waist the accumulated Gouy angle obeys
//! `cot θ_a = A z_R / B`, which fixes `κ = −cot θ* / (2 z_R)` as the curvature
//! whose crossing plane is the wave-picture evasion plane.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::beamline::{Abcd, Beamline, BeamlineElement};
use crate::error::{Error, Result};
use crate::noise_spectra::NoiseModel;
use crate::quadrature::scan_min;

/// Samples of the θ scan before golden-section refinement.
const THETA_SCAN_SAMPLES: usize = 721;
/// Distance kept from the amplitude quadrature during the scan.
const THETA_EDGE: f64 = 1e-9;

/// Which spectrum the evasion quadrature minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvasionTarget {
    /// Detector spectrum over its injected floor, with the model's drive.
    Classical,
    /// Sum of back action, imprecision and their correlation.
    Quantum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvasionSolution {
    pub f: f64,
    pub theta_star: f64,
    /// Path positions where the beamline reads out `theta_star` (mod π).
    pub z_positions: Vec<f64>,
    /// Classical: spectrum over floor at θ*. Quantum: spectrum at θ* over
    /// the phase-quadrature value.
    pub suppression_db: f64,
}

/// Best quadrature at `f` and the planes along `beamline` that measure it.
///
/// For the classical target the ratio tends to 0 dB at the amplitude
/// quadrature; when no interior angle does better, `θ* = 0` is returned as
/// that limit with 0 dB.
pub fn evasion_quadrature(f: f64, model: &NoiseModel, beamline: &Beamline, target: EvasionTarget) -> Result<EvasionSolution> {
    let (theta_star, suppression_db) = match target {
        EvasionTarget::Quantum => {
            let opt = model.optimal_quadrature(f)?;
            let phase = model.quantum_terms(f, FRAC_PI_2)?;
            (opt.theta, 10.0 * (opt.s_min / phase).log10())
        }
        EvasionTarget::Classical => {
            // Surface evaluation errors before the scan swallows them.
            model.detector(f, FRAC_PI_2)?;
            let db = |t: f64| model.detector(f, t).map(|d| d.db()).unwrap_or(f64::INFINITY);
            let (theta, value) = scan_min(db, THETA_EDGE, PI - THETA_EDGE, THETA_SCAN_SAMPLES, 1e-12);
            if value < 0.0 {
                (theta, value)
            } else {
                (0.0, 0.0)
            }
        }
    };
    Ok(EvasionSolution {
        f,
        theta_star,
        z_positions: beamline.find_quadrature_plane(theta_star)?,
        suppression_db,
    })
}

/// Curvature of the equivalent parabolic mirror whose rays re-cross the
/// axis where the beamline measures `theta_star` (1/m).
pub fn effective_curvature(theta_star: f64, beamline: &Beamline) -> f64 {
    let theta = theta_star - beamline.theta_offset;
    -theta.cos() / theta.sin() / (2.0 * beamline.rayleigh_range())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorKind {
    Flat,
    Tilted,
    Parabolic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub kind: MirrorKind,
    /// Launch height at the device (m).
    pub x0: f64,
    pub slope_in: f64,
    /// Slope after reflection.
    pub slope_out: f64,
    /// `(z, x)` polyline through the beamline (m).
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayBundle {
    pub rays: Vec<Ray>,
    /// Where the flat-mirror rays converge; `None` if beyond the beamline.
    pub p1: Option<f64>,
    /// Where the parabolic-mirror rays re-cross the axis.
    pub p2: Option<f64>,
    /// Height of the tilted bundle at P1 (m).
    pub tilted_offset_at_p1: Option<f64>,
}

/// First path position where `a(z) + 2κ b(z) = 0`, searched segment by
/// segment (both are linear inside free space).
fn first_axis_crossing(beamline: &Beamline, kappa: f64) -> Option<f64> {
    let mut m = Abcd::IDENTITY;
    let mut z = 0.0;
    for elem in beamline.elements() {
        if let BeamlineElement::FreeSpace { length } = *elem {
            let v0 = m.a + 2.0 * kappa * m.b;
            let v1 = m.c + 2.0 * kappa * m.d;
            if v0 == 0.0 {
                return Some(z);
            }
            if v1 != 0.0 {
                let t = -v0 / v1;
                if t > 0.0 && t <= length {
                    return Some(z + t);
                }
            }
            z += length;
        }
        m = elem.abcd().after(&m);
    }
    None
}

/// Traces `n_rays` parallel rays spread over `±w0` off a flat, a tilted and
/// a parabolic mirror and through `beamline`.
pub fn ray_diagram(mirror_tilt: f64, curvature: f64, beamline: &Beamline, n_rays: usize) -> Result<RayBundle> {
    if n_rays < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: n_rays,
        });
    }
    if !(mirror_tilt.is_finite() && curvature.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "mirror",
            reason: format!("tilt {mirror_tilt} and curvature {curvature} must be finite"),
        });
    }
    let p1 = first_axis_crossing(beamline, 0.0);
    let p2 = first_axis_crossing(beamline, curvature);

    let mut stops = beamline.boundaries();
    stops.extend(p1.iter().chain(p2.iter()).copied());
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let matrices = stops.iter().map(|&z| beamline.abcd_to(z)).collect::<Result<Vec<_>>>()?;

    let w0 = beamline.waist();
    let mut rays = Vec::with_capacity(3 * n_rays);
    for kind in [MirrorKind::Flat, MirrorKind::Tilted, MirrorKind::Parabolic] {
        for i in 0..n_rays {
            let x0 = w0 * (2.0 * i as f64 / (n_rays - 1) as f64 - 1.0);
            let slope_out = match kind {
                MirrorKind::Flat => 0.0,
                MirrorKind::Tilted => 2.0 * mirror_tilt,
                MirrorKind::Parabolic => 2.0 * curvature * x0,
            };
            let points = stops
                .iter()
                .zip(&matrices)
                .map(|(&z, m)| (z, m.apply_ray(x0, slope_out).0))
                .collect();
            rays.push(Ray {
                kind,
                x0,
                slope_in: 0.0,
                slope_out,
                points,
            });
        }
    }
    let tilted_offset_at_p1 = match p1 {
        Some(z) => Some(beamline.abcd_to(z)?.apply_ray(0.0, 2.0 * mirror_tilt).0),
        None => None,
    };
    Ok(RayBundle {
        rays,
        p1,
        p2,
        tilted_offset_at_p1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;
    use crate::mechanics::MechanicalMode;
    use crate::noise_spectra::{ClassicalDrive, Corrections, DetectionModel, LaserField};

    const F_M: f64 = 371e3;
    const LAMBDA: f64 = 1064e-9;
    const W0: f64 = 100e-6;

    fn model(power: f64, drive: ClassicalDrive) -> NoiseModel {
        let mode = MechanicalMode::new(F_M, 3.2e6, 4.06e-10, 2.0 * PI / 583e-6, 297.5).unwrap();
        let laser = LaserField::new(LAMBDA, power, W0).unwrap();
        NoiseModel::new(laser, mode, DetectionModel::default(), Corrections::NONE, drive).unwrap()
    }

    fn chirp() -> ClassicalDrive {
        ClassicalDrive::chirp(2.9e-6, (F_M - 1500.0, F_M + 1500.0), 1.0).unwrap()
    }

    /// Device → 0.25 m → lens 0.25 m → 3 m: θ_a runs from 0 to about 2.5 rad.
    fn line() -> Beamline {
        Beamline::new(
            LAMBDA,
            W0,
            vec![
                BeamlineElement::space(0.25).unwrap(),
                BeamlineElement::lens(0.25).unwrap(),
                BeamlineElement::space(3.0).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fourier_plane_of_two_f_line() {
        let bundle = ray_diagram(0.0, 0.0, &line(), 5).unwrap();
        let p1 = bundle.p1.unwrap();
        assert!((p1 - 0.5).abs() < 1e-12);
        for ray in bundle.rays.iter().filter(|r| r.kind == MirrorKind::Flat) {
            let &(_, x) = ray.points.iter().find(|(z, _)| *z == p1).unwrap();
            assert!(x.abs() < 1e-15);
        }
    }

    #[test]
    fn tilt_displaces_focus_by_lever_arm() {
        let tilt = 1e-6;
        let bundle = ray_diagram(tilt, 0.0, &line(), 5).unwrap();
        let p1 = bundle.p1.unwrap();
        assert!((bundle.tilted_offset_at_p1.unwrap() - 0.25 * 2.0 * tilt).abs() < 1e-18);
        for ray in bundle.rays.iter().filter(|r| r.kind == MirrorKind::Tilted) {
            let &(_, x) = ray.points.iter().find(|(z, _)| *z == p1).unwrap();
            assert!((x - 0.25 * 2.0 * tilt).abs() < 1e-15);
        }
    }

    #[test]
    fn parabolic_rays_cross_at_p2() {
        let bl = line();
        let kappa = effective_curvature(1.0, &bl);
        let bundle = ray_diagram(0.0, kappa, &bl, 7).unwrap();
        let p2 = bundle.p2.unwrap();
        for ray in bundle.rays.iter().filter(|r| r.kind == MirrorKind::Parabolic) {
            let &(_, x) = ray.points.iter().find(|(z, _)| *z == p2).unwrap();
            assert!(x.abs() < 1e-12 * W0, "{x}");
        }
    }

    #[test]
    fn too_few_rays_rejected() {
        assert!(ray_diagram(0.0, 0.0, &line(), 2).is_err());
    }

    #[test]
    fn unreached_crossing_is_none() {
        let bare = Beamline::new(LAMBDA, W0, vec![BeamlineElement::space(0.1).unwrap()]).unwrap();
        let bundle = ray_diagram(0.0, 0.0, &bare, 3).unwrap();
        assert!(bundle.p1.is_none());
        assert!(bundle.tilted_offset_at_p1.is_none());
    }

    #[test]
    fn ray_and_wave_planes_agree() {
        let bl = line();
        let m = model(21e-3, ClassicalDrive::None);
        for f in [0.2 * F_M, 0.5 * F_M, F_M - 0.3, F_M + 0.3, 1.5 * F_M] {
            let sol = evasion_quadrature(f, &m, &bl, EvasionTarget::Quantum).unwrap();
            let kappa = effective_curvature(sol.theta_star, &bl);
            let bundle = ray_diagram(0.0, kappa, &bl, 3).unwrap();
            let ray = bundle.p2.unwrap();
            assert!((ray - sol.z_positions[0]).abs() < 0.01 * bl.total_length());
            assert!((ray - sol.z_positions[0]).abs() < 1e-9, "f = {f}");
        }
    }

    #[test]
    fn p2_before_p1_above_resonance() {
        let bl = line();
        let m = model(21e-3, ClassicalDrive::None);
        let p1 = bl.find_quadrature_plane(FRAC_PI_2).unwrap()[0];
        let above = evasion_quadrature(F_M + 0.3, &m, &bl, EvasionTarget::Quantum).unwrap();
        assert!(above.z_positions[0] < p1);
        let below = evasion_quadrature(F_M - 0.3, &m, &bl, EvasionTarget::Quantum).unwrap();
        assert!(below.z_positions[0] > p1);
    }

    #[test]
    fn weak_coupling_returns_phase_quadrature() {
        let m = model(1e-15, ClassicalDrive::None);
        let sol = evasion_quadrature(F_M + 0.3, &m, &line(), EvasionTarget::Quantum).unwrap();
        assert!((sol.theta_star - FRAC_PI_2).abs() < 1e-6);
        assert!(sol.suppression_db.abs() < 1e-6);
    }

    #[test]
    fn classical_suppression_off_resonance() {
        let m = model(21e-3, chirp());
        for df in [-0.6, -0.3, 0.3, 0.6] {
            let sol = evasion_quadrature(F_M + df, &m, &line(), EvasionTarget::Classical).unwrap();
            assert!(sol.suppression_db < 0.0, "df = {df}: {}", sol.suppression_db);
            let brute = (1..3600)
                .map(|i| m.detector(F_M + df, f64::from(i) * PI / 3600.0).unwrap().db())
                .fold(f64::INFINITY, f64::min);
            assert!(sol.suppression_db <= brute + 1e-9);
        }
    }

    #[test]
    fn theta_star_crosses_phase_quadrature_at_resonance() {
        let m = model(21e-3, ClassicalDrive::None);
        let bl = line();
        let theta = |f: f64| evasion_quadrature(f, &m, &bl, EvasionTarget::Quantum).unwrap().theta_star;
        assert!((theta(F_M) - FRAC_PI_2).abs() < 1e-6);
        assert!(theta(F_M + 0.1) < FRAC_PI_2 && theta(F_M - 0.1) > FRAC_PI_2);
        // Continuity: neighbouring frequencies give neighbouring angles.
        let mut prev = theta(F_M - 2.0);
        for i in 1..=4000 {
            let cur = theta(F_M - 2.0 + 0.001 * f64::from(i));
            assert!((cur - prev).abs() < 0.05, "step {i}");
            prev = cur;
        }
    }

    #[test]
    fn low_frequency_curvature_tracks_static_gain() {
        let m = model(21e-3, ClassicalDrive::None);
        let bl = line();
        let f = 1e-3 * F_M;
        let sol = evasion_quadrature(f, &m, &bl, EvasionTarget::Quantum).unwrap();
        let g = 2.0 * HBAR * m.coupling_d() * m.mode.chi_at(f).re;
        let kappa = effective_curvature(sol.theta_star, &bl);
        assert!((kappa - g / (2.0 * bl.rayleigh_range())).abs() < 1e-9 * kappa.abs());
    }
}
