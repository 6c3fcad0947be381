//! Mechanical resonator model.
//!
//! Tilt spectra follow the density convention used throughout the crate:
//! `S(f) = 2π S(ω)` per Hz, symmetric in f, with variances recovered by
//! integrating over both signs of f. See [`MechanicalMode::thermal_tilt_psd`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{HBAR, K_B};
use crate::error::{ensure_positive, Error, Result};

/// Rectangular membrane with a sinusoidal out-of-plane mode shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneGeometry {
    /// Side length along x (m).
    pub a: f64,
    /// Side length along y (m).
    pub b: f64,
    /// Thickness (m).
    pub h: f64,
    /// Density (kg/m³).
    pub rho: f64,
    /// Anti-node counts along x and y.
    pub l: u32,
    pub p: u32,
}

impl MembraneGeometry {
    pub fn validate(self) -> Result<Self> {
        ensure_positive("a", self.a)?;
        ensure_positive("b", self.b)?;
        ensure_positive("h", self.h)?;
        ensure_positive("rho", self.rho)?;
        if self.l == 0 || self.p == 0 {
            return Err(Error::InvalidParameter {
                name: "l/p",
                reason: "mode indices must be >= 1".into(),
            });
        }
        Ok(self)
    }

    /// ρabh/4 for a sinusoidal mode normalized to unit peak.
    pub fn effective_mass(&self) -> f64 {
        0.25 * self.rho * self.a * self.b * self.h
    }

    /// lπ/a.
    pub fn wavenumber(&self) -> f64 {
        f64::from(self.l) * PI / self.a
    }

    /// Mode shape with the origin at the membrane centre.
    pub fn mode_shape(&self, x: f64, y: f64) -> f64 {
        (f64::from(self.l) * PI / self.a * (x - self.a / 2.0)).sin()
            * (f64::from(self.p) * PI / self.b * (y - self.b / 2.0)).sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalMode {
    /// Angular resonance frequency (rad/s).
    pub omega_m: f64,
    pub q_factor: f64,
    /// Effective mass (kg).
    pub m_eff: f64,
    /// Tilt per unit modal displacement at the probed point (rad/m).
    pub k_m: f64,
    /// Mode temperature (K).
    pub temperature: f64,
    pub geometry: Option<MembraneGeometry>,
}

impl MechanicalMode {
    pub fn new(f_m: f64, q_factor: f64, m_eff: f64, k_m: f64, temperature: f64) -> Result<Self> {
        Ok(MechanicalMode {
            omega_m: 2.0 * PI * ensure_positive("f_m", f_m)?,
            q_factor: ensure_positive("q_factor", q_factor)?,
            m_eff: ensure_positive("m_eff", m_eff)?,
            k_m: ensure_positive("k_m", k_m)?,
            temperature: ensure_positive("temperature", temperature)?,
            geometry: None,
        })
    }

    /// Mode whose mass and wavenumber come from membrane geometry.
    pub fn from_membrane(f_m: f64, q_factor: f64, temperature: f64, geometry: MembraneGeometry) -> Result<Self> {
        let geometry = geometry.validate()?;
        let mut mode = Self::new(f_m, q_factor, geometry.effective_mass(), geometry.wavenumber(), temperature)?;
        mode.geometry = Some(geometry);
        Ok(mode)
    }

    pub fn f_m(&self) -> f64 {
        self.omega_m / (2.0 * PI)
    }

    /// Energy damping rate Γ = ω_m / Q (rad/s).
    pub fn gamma(&self) -> f64 {
        self.omega_m / self.q_factor
    }

    /// χ_m(ω) = 1 / (m_eff [(ω_m² − ω²) + iωΓ]) in m/N.
    pub fn chi(&self, omega: f64) -> Complex64 {
        let denom = Complex64::new(self.omega_m * self.omega_m - omega * omega, omega * self.gamma());
        denom.inv() / self.m_eff
    }

    pub fn chi_at(&self, f: f64) -> Complex64 {
        self.chi(2.0 * PI * f)
    }

    /// Thermal phonon number k_B T / ħω_m.
    pub fn thermal_occupancy(&self) -> f64 {
        K_B * self.temperature / (HBAR * self.omega_m)
    }

    /// Whether k_B T exceeds ħω_m by at least a factor of 10.
    pub fn is_classical(&self) -> bool {
        self.thermal_occupancy() >= 10.0
    }

    /// Thermal force density S_R(f) = 2 m_eff Γ k_B T (N²/Hz).
    pub fn thermal_force_psd(&self) -> f64 {
        2.0 * self.m_eff * self.gamma() * K_B * self.temperature
    }

    /// Displacement density |χ|² S_R (m²/Hz).
    pub fn thermal_displacement_psd(&self, f: f64) -> f64 {
        self.chi_at(f).norm_sqr() * self.thermal_force_psd()
    }

    /// Thermal tilt density 2|k_m χ|² m_eff Γ k_B T (rad²/Hz).
    ///
    /// Uses the high-temperature form; logs a warning when the mode is not
    /// in the classical regime.
    pub fn thermal_tilt_psd(&self, f: f64) -> f64 {
        if !self.is_classical() {
            log::warn!(
                "thermal tilt spectrum used with n_th = {:.3} (k_B T not >> ħω_m)",
                self.thermal_occupancy()
            );
        }
        self.k_m * self.k_m * self.thermal_displacement_psd(f)
    }

    /// Zero-point tilt density |k_m χ|² m_eff Γ ħω_m (rad²/Hz).
    pub fn zp_tilt_psd(&self, f: f64) -> f64 {
        let kc = self.k_m * self.chi_at(f).norm();
        kc * kc * self.m_eff * self.gamma() * HBAR * self.omega_m
    }
}

/// Membrane mode frequency (Hz) for anti-node counts `(l, p)`.
pub fn mode_frequency(l: u32, p: u32, a: f64, b: f64, c_sound: f64) -> f64 {
    c_sound * mode_geometry_factor(l, p, a, b)
}

/// f / c for mode `(l, p)`.
fn mode_geometry_factor(l: u32, p: u32, a: f64, b: f64) -> f64 {
    let kx = f64::from(l) * PI / a;
    let ky = f64::from(p) * PI / b;
    kx.hypot(ky) / (2.0 * PI)
}

/// Observed resonance, labelled by its anti-node counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePeak {
    pub l: u32,
    pub p: u32,
    pub f_measured: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoundSpeedFit {
    pub c_sound: f64,
    /// Model minus measured frequency per peak (Hz).
    pub residuals: Vec<f64>,
}

/// Single-parameter least-squares fit of the sound speed to observed peaks
/// on an `a × b` membrane.
pub fn fit_sound_speed(peaks: &[ModePeak], a: f64, b: f64) -> Result<SoundSpeedFit> {
    if peaks.is_empty() {
        return Err(Error::TooFewSamples { need: 1, got: 0 });
    }
    ensure_positive("a", a)?;
    ensure_positive("b", b)?;
    let factors: Vec<f64> = peaks.iter().map(|p| mode_geometry_factor(p.l, p.p, a, b)).collect();
    let num: f64 = factors.iter().zip(peaks).map(|(g, p)| g * p.f_measured).sum();
    let den: f64 = factors.iter().map(|g| g * g).sum();
    let c_sound = num / den;
    let residuals = factors
        .iter()
        .zip(peaks)
        .map(|(g, p)| c_sound * g - p.f_measured)
        .collect();
    Ok(SoundSpeedFit { c_sound, residuals })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingDownFit {
    /// Amplitude decay time (s).
    pub tau: f64,
    pub q_factor: f64,
    pub amplitude0: f64,
}

/// Fits `A(t) = A₀ e^{−t/τ}` by log-linear least squares; Q = π f_m τ.
pub fn ring_down_q(samples: &[(f64, f64)], f_m: f64) -> Result<RingDownFit> {
    const MIN_SAMPLES: usize = 10;
    ensure_positive("f_m", f_m)?;
    if samples.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            need: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    if let Some(&(t, amp)) = samples.iter().find(|(_, a)| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "amplitude",
            reason: format!("non-positive amplitude {amp} at t = {t}"),
        });
    }
    let n = samples.len() as f64;
    let t_mean = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let y_mean = samples.iter().map(|s| s.1.ln()).sum::<f64>() / n;
    let (sxy, sxx) = samples.iter().fold((0.0, 0.0), |(sxy, sxx), &(t, a)| {
        let dt = t - t_mean;
        (sxy + dt * (a.ln() - y_mean), sxx + dt * dt)
    });
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "time",
            reason: "all samples share one time stamp".into(),
        });
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::NoDecay { slope });
    }
    let tau = -1.0 / slope;
    Ok(RingDownFit {
        tau,
        q_factor: PI * f_m * tau,
        amplitude0: (y_mean - slope * t_mean).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_2d, integrate_with_breaks, Tolerance};

    fn membrane() -> MechanicalMode {
        MechanicalMode::new(371e3, 3.2e6, 4.06e-10, 2.0 * PI / 583e-6, 297.5).unwrap()
    }

    #[test]
    fn static_and_resonant_susceptibility() {
        let m = membrane();
        let chi0 = m.chi(0.0);
        assert_eq!(chi0.im, 0.0);
        assert!((chi0.re - 1.0 / (m.m_eff * m.omega_m.powi(2))).abs() < 1e-15 * chi0.re);
        assert!((chi0.re - 4.533e-4).abs() < 1e-3 * 4.533e-4);

        let chi_res = m.chi(m.omega_m);
        assert!(chi_res.re.abs() < 1e-12 * chi_res.norm());
        let expected = m.q_factor / (m.m_eff * m.omega_m.powi(2));
        assert!((chi_res.norm() - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn free_mass_rolloff() {
        let m = membrane();
        let w = 1e4 * m.omega_m;
        let chi = m.chi(w);
        let free = 1.0 / (m.m_eff * w * w);
        assert!((chi.norm() - free).abs() < 1e-6 * free);
    }

    #[test]
    fn susceptibility_is_hermitian() {
        let m = membrane();
        for &w in &[1e3, m.omega_m * 0.999, m.omega_m, 3.0 * m.omega_m] {
            assert!((m.chi(-w) - m.chi(w).conj()).norm() < 1e-15 * m.chi(w).norm());
        }
    }

    #[test]
    fn thermal_over_zero_point_is_twice_occupancy() {
        let m = membrane();
        for &f in &[100e3, m.f_m(), 371.001e3] {
            let ratio = m.thermal_tilt_psd(f) / m.zp_tilt_psd(f);
            assert!((ratio - 2.0 * m.thermal_occupancy()).abs() < 1e-9 * ratio);
        }
    }

    #[test]
    fn zero_point_peak_is_sql() {
        let m = membrane();
        let sql = HBAR * m.k_m * m.k_m * m.chi(m.omega_m).norm();
        assert!((m.zp_tilt_psd(m.f_m()) - sql).abs() < 1e-12 * sql);
        // ≈ 4.2 prad/√Hz with these parameters.
        assert!((m.zp_tilt_psd(m.f_m()).sqrt() * 1e12 - 4.215).abs() < 0.01);
    }

    #[test]
    fn equipartition() {
        // Low Q keeps this fast; the acceptance suite repeats it at Q = 3.2e6.
        let m = MechanicalMode::new(1e3, 50.0, 1e-9, 1.0, 300.0).unwrap();
        let fm = m.f_m();
        let lw = fm / m.q_factor;
        let breaks = [fm / 100.0, fm - 50.0 * lw, fm, fm + 50.0 * lw, 100.0 * fm];
        let one_side = integrate_with_breaks(|f| m.thermal_displacement_psd(f), &breaks, Tolerance::new(0.0, 1e-10)).unwrap();
        let variance = 2.0 * one_side.value;
        let expected = K_B * m.temperature / (m.m_eff * m.omega_m.powi(2));
        assert!((variance - expected).abs() < 1e-3 * expected, "{variance} vs {expected}");
    }

    #[test]
    fn membrane_effective_mass_by_quadrature() {
        let g = MembraneGeometry {
            a: 3.5e-3,
            b: 1.5e-3,
            h: 100e-9,
            rho: 3100.0,
            l: 12,
            p: 3,
        };
        let m_quad = integrate_2d(
            |x, y| g.rho * g.h * g.mode_shape(x, y).powi(2),
            (-g.a / 2.0, g.a / 2.0),
            (-g.b / 2.0, g.b / 2.0),
            Tolerance::new(0.0, 1e-8),
        )
        .unwrap()
        .value;
        assert!((m_quad - g.effective_mass()).abs() < 5e-3 * g.effective_mass());
        assert!((2.0 * PI / g.wavenumber() - 583.3e-6).abs() < 0.1e-6);
        let mode = MechanicalMode::from_membrane(371e3, 3.2e6, 297.5, g).unwrap();
        assert!((mode.m_eff - 4.07e-10).abs() < 0.01e-10);
    }

    #[test]
    fn mode_frequency_examples() {
        let f = mode_frequency(12, 3, 3.5e-3, 1.5e-3, 187.0);
        assert!((f - 371e3).abs() < 0.5e3, "{f}");
        let a = 1e-3;
        let fund = mode_frequency(1, 1, a, a, 100.0);
        assert!((fund - 100.0 / (2.0 * a) * 2f64.sqrt()).abs() < 1e-9 * fund);
        for &(l, p) in &[(1, 1), (4, 7), (12, 3)] {
            let f1 = mode_frequency(l, p, 2e-3, 1e-3, 150.0);
            let f2 = mode_frequency(l, p, 2e-3, 1e-3, 300.0);
            assert!((f2 - 2.0 * f1).abs() < 1e-9 * f2);
        }
    }

    #[test]
    fn sound_speed_fit() {
        let (a, b) = (3.5e-3, 1.5e-3);
        let single = [ModePeak {
            l: 12,
            p: 3,
            f_measured: 371e3,
        }];
        let fit = fit_sound_speed(&single, a, b).unwrap();
        assert!(fit.residuals[0].abs() < 1e-9);
        assert!((fit.c_sound - 186.936).abs() < 1e-3);
        let doubled = fit_sound_speed(&[single[0], single[0]], a, b).unwrap();
        assert!((doubled.c_sound - fit.c_sound).abs() < 1e-12 * fit.c_sound);
        assert!(matches!(fit_sound_speed(&[], a, b), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn sound_speed_from_noisy_peaks() {
        let (a, b) = (3.5e-3, 1.5e-3);
        // Fixed ±0.1 % perturbations stand in for measurement noise.
        let jitter = [1e-3, -1e-3, 0.5e-3, -0.7e-3, 0.9e-3, -0.2e-3, 0.3e-3];
        let modes = [(1, 1), (2, 1), (3, 2), (5, 1), (8, 2), (12, 3), (10, 4)];
        let peaks: Vec<ModePeak> = modes
            .iter()
            .zip(jitter)
            .map(|(&(l, p), j)| ModePeak {
                l,
                p,
                f_measured: mode_frequency(l, p, a, b, 200.0) * (1.0 + j),
            })
            .collect();
        let fit = fit_sound_speed(&peaks, a, b).unwrap();
        assert!((fit.c_sound - 200.0).abs() < 0.4, "{}", fit.c_sound);
    }

    #[test]
    fn ring_down_round_trip() {
        let (fm, tau) = (371_696.0, 2.74);
        let samples: Vec<(f64, f64)> = (0..50).map(|i| (0.1 * i as f64, 3.0 * (-0.1 * i as f64 / tau).exp())).collect();
        let fit = ring_down_q(&samples, fm).unwrap();
        assert!((fit.tau - tau).abs() < 1e-10 * tau);
        assert!((fit.q_factor - PI * fm * tau).abs() < 1e-10 * fit.q_factor);
        assert!((fit.q_factor - 3.2e6).abs() < 0.01e6);
        assert!((fit.amplitude0 - 3.0).abs() < 1e-10);
    }

    #[test]
    fn ring_down_errors() {
        let flat: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, 1.0)).collect();
        assert!(matches!(ring_down_q(&flat, 1e3), Err(Error::NoDecay { .. })));
        let mut neg = flat.clone();
        neg[3].1 = -0.1;
        assert!(matches!(ring_down_q(&neg, 1e3), Err(Error::InvalidParameter { .. })));
        assert!(matches!(ring_down_q(&flat[..5], 1e3), Err(Error::TooFewSamples { .. })));
        let growing: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, (0.1 * i as f64).exp())).collect();
        match ring_down_q(&growing, 1e3) {
            Err(Error::NoDecay { slope }) => assert!(slope > 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_non_positive_parameters() {
        assert!(MechanicalMode::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(MechanicalMode::new(1.0, 1.0, -1.0, 1.0, 1.0).is_err());
    }
}
