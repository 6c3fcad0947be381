//! Quantum and classical tilt spectra, the standard quantum limit,
//! detection efficiency and detector-referred density maps.
//!
//! Notation used below: `A = 1/(4 N w0² k²)` is the ideal shot-noise
//! imprecision at the phase quadrature and `D = N (k k_m w0)²` the
//! optomechanical coupling, so that the three quantum terms add up to
//! `A (1 + |cot θ + 2ħDχ|²)`.
//!
//! Detector-referred (V) spectra are tilt spectra multiplied by the split
//! detector transfer `4 F² N w0² k² sin²θ` with `F = F_{00,10}`. In that
//! domain the shot-noise floor does not depend on θ, and a classical
//! pointing jitter is amplified by the same `|cos θ + 2ħDχ sin θ|²` gain as
//! the vacuum amplitude fluctuations.
//!
//! Spectral densities share the convention of [`crate::mechanics`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::{C_LIGHT, HBAR};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::hermite_gauss::{overlap_f, split_overlap_fundamental, HermiteIndex, SplitWeight, MAX_MODE_ORDER};
use crate::mechanics::MechanicalMode;
use crate::quadrature::golden_section_min;

/// Smallest `|sin θ|` accepted before the imprecision is declared divergent.
pub const MIN_SIN_THETA: f64 = 1e-12;

/// Upper end of `k_m w0` for which the finite-waist factors are trusted.
pub const CORRECTION_RANGE: f64 = 4.0;

/// Probe laser at the device plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserField {
    /// Vacuum wavelength (m).
    pub wavelength: f64,
    /// Power (W).
    pub power: f64,
    /// Waist radius at the device (m).
    pub w0: f64,
}

impl LaserField {
    pub fn new(wavelength: f64, power: f64, w0: f64) -> Result<Self> {
        Ok(LaserField {
            wavelength: ensure_positive("wavelength", wavelength)?,
            power: ensure_non_negative("power", power)?,
            w0: ensure_positive("w0", w0)?,
        })
    }

    pub fn with_power(self, power: f64) -> Result<Self> {
        Self::new(self.wavelength, power, self.w0)
    }

    /// Optical wavenumber (rad/m).
    pub fn k(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Optical angular frequency (rad/s).
    pub fn omega_l(&self) -> f64 {
        2.0 * PI * C_LIGHT / self.wavelength
    }

    /// Photon flux N = P / ħω_L (1/s).
    pub fn photon_flux(&self) -> f64 {
        self.power / (HBAR * self.omega_l())
    }

    /// Coherent amplitude, taken real.
    pub fn alpha(&self) -> f64 {
        self.photon_flux().sqrt()
    }

    /// `A = 1/(4 N w0² k²)` (rad²/Hz).
    pub fn imprecision_scale(&self) -> f64 {
        let kw = self.k() * self.w0;
        1.0 / (4.0 * self.photon_flux() * kw * kw)
    }
}

/// Coupling `D = N (k k_m w0)²` (1/(m² s)), uncorrected.
pub fn coupling_d(laser: &LaserField, mode: &MechanicalMode) -> f64 {
    let kkw = laser.k() * mode.k_m * laser.w0;
    laser.photon_flux() * kkw * kkw
}

/// Finite-waist corrections to the small-waist overlaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corrections {
    /// Exact over linear `C_{00,10}` for a sinusoidal mode shape.
    pub c_factor: f64,
    /// Reduction of the effective coupling D.
    pub d_factor: f64,
    pub c_enabled: bool,
    pub d_enabled: bool,
    /// `k_m w0` below [`CORRECTION_RANGE`].
    pub in_range: bool,
}

impl Corrections {
    pub const NONE: Corrections = Corrections {
        c_factor: 1.0,
        d_factor: 1.0,
        c_enabled: false,
        d_enabled: false,
        in_range: true,
    };

    pub fn with_flags(mut self, c_enabled: bool, d_enabled: bool) -> Self {
        self.c_enabled = c_enabled;
        self.d_enabled = d_enabled;
        self
    }

    /// Factor applied to the back-action overlap (1 when disabled).
    pub fn c_eff(&self) -> f64 {
        if self.c_enabled {
            self.c_factor
        } else {
            1.0
        }
    }

    /// Factor applied to D in detector-plane gains (1 when disabled).
    pub fn d_eff(&self) -> f64 {
        if self.d_enabled {
            self.d_factor
        } else {
            1.0
        }
    }
}

impl Default for Corrections {
    fn default() -> Self {
        Corrections::NONE
    }
}

/// `c = exp(−(k_m w0)²/8)` and `d = exp(−2 (k_m w0/2)²)`, both enabled.
///
/// Outside `k_m w0 < 4` the factors are still returned, flagged with
/// `in_range = false`.
pub fn finite_waist_factors(k_m: f64, w0: f64) -> Result<Corrections> {
    let x = ensure_non_negative("k_m", k_m)? * ensure_non_negative("w0", w0)?;
    let in_range = x < CORRECTION_RANGE;
    if !in_range {
        log::warn!("finite-waist corrections used at k_m w0 = {x:.3}, outside the expansion range");
    }
    Ok(Corrections {
        c_factor: (-x * x / 8.0).exp(),
        d_factor: (-2.0 * (0.5 * x).powi(2)).exp(),
        c_enabled: true,
        d_enabled: true,
        in_range,
    })
}

/// Detection chain after the split photodiode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionModel {
    /// Optical path and detector efficiency.
    pub eta_path: f64,
    /// Highest HG order summed in the higher-mode penalty; `None` uses the
    /// exact infinite sum.
    pub include_orders: Option<u32>,
}

impl Default for DetectionModel {
    fn default() -> Self {
        DetectionModel {
            eta_path: 0.87,
            include_orders: None,
        }
    }
}

impl DetectionModel {
    pub fn new(eta_path: f64, include_orders: Option<u32>) -> Result<Self> {
        if !(eta_path > 0.0 && eta_path <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "eta_path",
                reason: format!("must lie in (0, 1], got {eta_path}"),
            });
        }
        if let Some(order) = include_orders {
            if order > MAX_MODE_ORDER {
                return Err(Error::OrderTooHigh {
                    order,
                    max: MAX_MODE_ORDER,
                });
            }
        }
        Ok(DetectionModel {
            eta_path,
            include_orders,
        })
    }

    /// `F²_{00,10} = 2/π`.
    pub fn eta_split(&self) -> f64 {
        split_overlap_fundamental(SplitWeight::default()).powi(2)
    }

    /// `Σ_{mn≠10} F²_{00,mn} / F²_{00,10}`.
    ///
    /// The split weight squares to one, so the full sum over all modes is
    /// `1 − 2/π` and the infinite penalty is `π/2 − 1`.
    pub fn higher_mode_penalty(&self) -> Result<f64> {
        let f10 = self.eta_split();
        match self.include_orders {
            None => Ok((1.0 - f10) / f10),
            Some(order) => {
                let u00 = HermiteIndex::new(0, 0);
                (3..=order).step_by(2).try_fold(0.0, |acc, l| {
                    let f = overlap_f(u00, HermiteIndex::new(l, 0), SplitWeight::default())?;
                    Ok(acc + f * f / f10)
                })
            }
        }
    }

    /// `η_path · d c² / (1 + penalty)`.
    pub fn eta_net(&self, corr: &Corrections) -> Result<f64> {
        let waist = corr.d_eff() * corr.c_eff().powi(2);
        Ok(self.eta_path * waist / (1.0 + self.higher_mode_penalty()?))
    }
}

/// Injected classical beam-pointing jitter.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ClassicalDrive {
    #[default]
    None,
    /// Flat displacement density (m²/Hz).
    Flat { s_dx: f64 },
    /// Displacement density sampled at increasing frequencies, linearly
    /// interpolated and zero outside the table.
    Tabulated { freqs: Vec<f64>, s_dx: Vec<f64> },
    /// Linear chirp of amplitude `delta_x0` swept over `band`.
    ///
    /// Converted to the flat density `Δx0² / (2 (f_hi − f_lo))` inside the
    /// band. `duration` is kept for reference and does not enter.
    Chirp {
        delta_x0: f64,
        band: (f64, f64),
        duration: f64,
    },
}

impl ClassicalDrive {
    pub fn flat(s_dx: f64) -> Result<Self> {
        Ok(ClassicalDrive::Flat {
            s_dx: ensure_non_negative("s_dx", s_dx)?,
        })
    }

    pub fn tabulated(freqs: Vec<f64>, s_dx: Vec<f64>) -> Result<Self> {
        if freqs.len() != s_dx.len() || freqs.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "s_dx table",
                reason: format!("need matching columns of length >= 2, got {} and {}", freqs.len(), s_dx.len()),
            });
        }
        if freqs.windows(2).any(|w| !(w[1] > w[0])) || freqs.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "s_dx table",
                reason: "frequencies must be finite and strictly increasing".into(),
            });
        }
        for &s in &s_dx {
            ensure_non_negative("s_dx", s)?;
        }
        Ok(ClassicalDrive::Tabulated { freqs, s_dx })
    }

    pub fn chirp(delta_x0: f64, band: (f64, f64), duration: f64) -> Result<Self> {
        ensure_positive("delta_x0", delta_x0)?;
        ensure_positive("duration", duration)?;
        if !(band.0.is_finite() && band.1.is_finite() && band.1 > band.0) {
            return Err(Error::InvalidParameter {
                name: "band",
                reason: format!("need f_lo < f_hi, got {:?}", band),
            });
        }
        Ok(ClassicalDrive::Chirp {
            delta_x0,
            band,
            duration,
        })
    }

    /// Displacement density at `f` (m²/Hz).
    pub fn s_dx(&self, f: f64) -> f64 {
        match self {
            ClassicalDrive::None => 0.0,
            ClassicalDrive::Flat { s_dx } => *s_dx,
            ClassicalDrive::Tabulated { freqs, s_dx } => {
                if f < freqs[0] || f > freqs[freqs.len() - 1] {
                    return 0.0;
                }
                let i = freqs.partition_point(|&x| x <= f).clamp(1, freqs.len() - 1);
                let t = (f - freqs[i - 1]) / (freqs[i] - freqs[i - 1]);
                s_dx[i - 1] + t * (s_dx[i] - s_dx[i - 1])
            }
            ClassicalDrive::Chirp { delta_x0, band, .. } => {
                if f >= band.0 && f <= band.1 {
                    delta_x0 * delta_x0 / (2.0 * (band.1 - band.0))
                } else {
                    0.0
                }
            }
        }
    }

    /// Largest displacement scale, used to check `Δx ≪ w0`.
    fn amplitude_hint(&self) -> Option<f64> {
        match self {
            ClassicalDrive::Chirp { delta_x0, .. } => Some(*delta_x0),
            _ => None,
        }
    }
}

/// One frequency and quadrature of the tilt noise budget (rad²/Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltTerms {
    pub f: f64,
    pub theta: f64,
    pub s_ba: f64,
    pub s_imp: f64,
    /// Correlation term; negative where it cancels back action.
    pub s_baimp: f64,
    pub s_th: f64,
    /// Zero-point motion, reported only; not part of [`TiltTerms::total`].
    pub s_zp: f64,
    pub s_detc: f64,
    pub s_cla: f64,
    /// Uncorrected coupling D.
    pub coupling_d: f64,
}

impl TiltTerms {
    pub fn quantum(&self) -> f64 {
        self.s_ba + self.s_imp + self.s_baimp
    }

    pub fn total(&self) -> f64 {
        self.quantum() + self.s_th + self.s_detc + self.s_cla
    }
}

/// Classical tilt spectrum with its injected floor (rad²/Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalTilt {
    /// Driven spectrum plus thermal motion.
    pub s_beta: f64,
    /// Jitter as read through the quadrature without optomechanical gain.
    pub s_floor: f64,
}

/// Detector-referred spectrum at one `(f, θ)`, in units of the shot-noise
/// level of a perfect split detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpectrum {
    /// Shot noise with quantum back action and correlation.
    pub quantum: f64,
    /// Imprecision from higher-order modes.
    pub higher_modes: f64,
    /// Driven pointing jitter.
    pub classical: f64,
    pub thermal: f64,
    /// Shot-noise floor plus the injected jitter without gain.
    pub floor: f64,
    /// Jitter level at θ = 0, the gain-free input.
    pub classical_input: f64,
}

impl DetectorSpectrum {
    pub fn total(&self) -> f64 {
        self.quantum + self.higher_modes + self.classical + self.thermal
    }

    /// `10 log10(total / floor)`.
    pub fn db(&self) -> f64 {
        10.0 * (self.total() / self.floor).log10()
    }
}

/// Analytic or numeric optimum of the quantum terms over θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptimum {
    pub theta: f64,
    pub s_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cooperativity {
    pub c: f64,
    /// With the `d` factor applied.
    pub c_corr: f64,
}

/// dB values over an `f × θ` grid, stored f-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    pub f_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    pub db: Vec<f64>,
    pub min_db: f64,
    pub max_db: f64,
}

impl DensityMap {
    pub fn get(&self, i_f: usize, i_theta: usize) -> f64 {
        self.db[i_f * self.theta_grid.len() + i_theta]
    }

    /// `(f, θ, dB)` of the smallest entry.
    pub fn argmin(&self) -> (f64, f64, f64) {
        let (i, &v) = self
            .db
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("density map is never empty");
        let n = self.theta_grid.len();
        (self.f_grid[i / n], self.theta_grid[i % n], v)
    }

    /// Row of dB values at `theta_grid[i_theta]`.
    pub fn column(&self, i_theta: usize) -> Vec<f64> {
        (0..self.f_grid.len()).map(|i| self.get(i, i_theta)).collect()
    }
}

fn quadrature_trig(theta: f64) -> Result<(f64, f64)> {
    let (s, c) = theta.sin_cos();
    if !theta.is_finite() || s.abs() < MIN_SIN_THETA {
        return Err(Error::AmplitudeQuadrature { theta });
    }
    // The double nearest π/2 has a cosine of 6e-17; treat that as the
    // phase quadrature itself.
    let c = if c.abs() < f64::EPSILON { 0.0 } else { c };
    Ok((s, c))
}

/// Everything needed to evaluate spectra, with the detection penalty and
/// net efficiency evaluated once.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub laser: LaserField,
    pub mode: MechanicalMode,
    pub detection: DetectionModel,
    pub corrections: Corrections,
    pub drive: ClassicalDrive,
    penalty: f64,
    eta_net: f64,
}

impl NoiseModel {
    pub fn new(
        laser: LaserField,
        mode: MechanicalMode,
        detection: DetectionModel,
        corrections: Corrections,
        drive: ClassicalDrive,
    ) -> Result<Self> {
        if let Some(dx) = drive.amplitude_hint() {
            if dx > 0.1 * laser.w0 {
                log::warn!("pointing jitter {dx:e} m is not small against the waist {:e} m", laser.w0);
            }
        }
        Ok(NoiseModel {
            penalty: detection.higher_mode_penalty()?,
            eta_net: detection.eta_net(&corrections)?,
            laser,
            mode,
            detection,
            corrections,
            drive,
        })
    }

    pub fn higher_mode_penalty(&self) -> f64 {
        self.penalty
    }

    pub fn eta_net(&self) -> f64 {
        self.eta_net
    }

    pub fn coupling_d(&self) -> f64 {
        coupling_d(&self.laser, &self.mode)
    }

    /// Quantum gain `2ħDχ` on the tilt side, with the `c` correction.
    fn quantum_gain(&self, chi: Complex64) -> Complex64 {
        chi * (2.0 * HBAR * self.coupling_d() * self.corrections.c_eff())
    }

    /// Gain `2ħDχ` acting on detector-plane fields, with the `d` correction.
    fn detector_gain(&self, chi: Complex64) -> Complex64 {
        chi * (2.0 * HBAR * self.coupling_d() * self.corrections.d_eff())
    }

    fn require_light(&self) -> Result<()> {
        ensure_positive("power", self.laser.power).map(|_| ())
    }

    /// Full tilt budget at `(f, θ)`, including the classical drive.
    pub fn tilt_terms(&self, f: f64, theta: f64) -> Result<TiltTerms> {
        let (s, c) = quadrature_trig(theta)?;
        self.require_light()?;
        let cot = c / s;
        let chi = self.mode.chi_at(f);
        let a = self.laser.imprecision_scale();
        let g = self.quantum_gain(chi);
        let s_imp = a / (s * s);
        let jitter = self.jitter_scale(f);
        Ok(TiltTerms {
            f,
            theta,
            s_ba: a * g.norm_sqr(),
            s_imp,
            s_baimp: 2.0 * a * cot * g.re,
            s_th: self.mode.thermal_tilt_psd(f),
            s_zp: self.mode.zp_tilt_psd(f),
            s_detc: s_imp * (1.0 / self.eta_net - 1.0),
            s_cla: jitter * (self.detector_gain(chi) + cot).norm_sqr(),
            coupling_d: self.coupling_d(),
        })
    }

    /// `(S_Δx / w0²) / (w0² k²)`, the jitter seen as tilt at θ = 0 gain.
    fn jitter_scale(&self, f: f64) -> f64 {
        let w0 = self.laser.w0;
        let kw = self.laser.k() * w0;
        self.drive.s_dx(f) / (w0 * w0) / (kw * kw)
    }

    pub fn classical_tilt(&self, f: f64, theta: f64) -> Result<ClassicalTilt> {
        let (s, c) = quadrature_trig(theta)?;
        let cot = c / s;
        let jitter = self.jitter_scale(f);
        let gain = (self.detector_gain(self.mode.chi_at(f)) + cot).norm_sqr();
        Ok(ClassicalTilt {
            s_beta: jitter * gain + self.mode.thermal_tilt_psd(f),
            s_floor: jitter * cot * cot,
        })
    }

    /// `|cos θ + 2ħDχ sin θ|²` with the `d` correction.
    pub fn classical_gain(&self, f: f64, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        (self.detector_gain(self.mode.chi_at(f)) * s + c).norm_sqr()
    }

    /// Detector-referred spectrum and floor at `(f, θ)`.
    pub fn detector(&self, f: f64, theta: f64) -> Result<DetectorSpectrum> {
        let (s, c) = quadrature_trig(theta)?;
        self.require_light()?;
        let f2 = self.detection.eta_split();
        let kw = self.laser.k() * self.laser.w0;
        let n = self.laser.photon_flux();
        let transfer = 4.0 * f2 * n * kw * kw * s * s;
        let readout = (self.detector_gain(self.mode.chi_at(f)) * s + c).norm_sqr();
        let k_in = 4.0 * f2 * n * self.drive.s_dx(f) / (self.laser.w0 * self.laser.w0);
        let shot = f2 * (1.0 + self.penalty);
        Ok(DetectorSpectrum {
            quantum: f2 * (s * s + readout),
            higher_modes: f2 * self.penalty,
            classical: k_in * readout,
            thermal: transfer * self.mode.thermal_tilt_psd(f),
            floor: shot + k_in * c * c,
            classical_input: k_in,
        })
    }

    /// dB map of detector spectrum over floor; evaluated in parallel, stored
    /// in grid order.
    pub fn density_map(&self, f_grid: &[f64], theta_grid: &[f64]) -> Result<DensityMap> {
        if f_grid.is_empty() {
            return Err(Error::EmptyGrid { name: "f_grid" });
        }
        if theta_grid.is_empty() {
            return Err(Error::EmptyGrid { name: "theta_grid" });
        }
        for &theta in theta_grid {
            quadrature_trig(theta)?;
        }
        self.require_light()?;
        let n_theta = theta_grid.len();
        let db = (0..f_grid.len() * n_theta)
            .into_par_iter()
            .map(|i| self.detector(f_grid[i / n_theta], theta_grid[i % n_theta]).map(|d| d.db()))
            .collect::<Result<Vec<f64>>>()?;
        let min_db = db.iter().copied().fold(f64::INFINITY, f64::min);
        let max_db = db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(DensityMap {
            f_grid: f_grid.to_vec(),
            theta_grid: theta_grid.to_vec(),
            db,
            min_db,
            max_db,
        })
    }

    /// Sum of the three quantum terms at `(f, θ)`, evaluated as
    /// `A (1 + |cot θ + gχ|²)`. Adding the terms one by one loses precision
    /// off resonance, where they are large and cancel.
    pub fn quantum_terms(&self, f: f64, theta: f64) -> Result<f64> {
        let (s, c) = quadrature_trig(theta)?;
        self.require_light()?;
        let g = self.quantum_gain(self.mode.chi_at(f));
        Ok(self.laser.imprecision_scale() * (1.0 + (g + c / s).norm_sqr()))
    }

    /// Closed-form optimum: `cot θ* = −Re(g)`, `S_min = A (1 + Im(g)²)` with
    /// `g = 2ħDχ`.
    pub fn optimal_quadrature(&self, f: f64) -> Result<QuadratureOptimum> {
        self.require_light()?;
        let g = self.quantum_gain(self.mode.chi_at(f));
        let a = self.laser.imprecision_scale();
        Ok(QuadratureOptimum {
            theta: 1f64.atan2(-g.re),
            s_min: a * (1.0 + g.im * g.im),
        })
    }

    /// Golden-section search of the quantum terms over θ.
    pub fn optimal_quadrature_numeric(&self, f: f64) -> Result<QuadratureOptimum> {
        self.require_light()?;
        let eps = 1e-9;
        let (theta, s_min) = golden_section_min(
            |t| self.quantum_terms(f, t).unwrap_or(f64::INFINITY),
            eps,
            PI - eps,
            1e-12,
        );
        Ok(QuadratureOptimum { theta, s_min })
    }

    pub fn cooperativity(&self) -> Cooperativity {
        cooperativity(&self.laser, &self.mode, &self.corrections)
    }
}

/// Quantum tilt budget (no classical drive).
pub fn quantum_tilt_psd(
    f: f64,
    theta: f64,
    laser: &LaserField,
    mode: &MechanicalMode,
    det: &DetectionModel,
    corr: &Corrections,
) -> Result<TiltTerms> {
    NoiseModel::new(*laser, *mode, *det, *corr, ClassicalDrive::None)?.tilt_terms(f, theta)
}

pub fn classical_tilt_psd(
    f: f64,
    theta: f64,
    laser: &LaserField,
    mode: &MechanicalMode,
    drive: &ClassicalDrive,
    corr: &Corrections,
) -> Result<ClassicalTilt> {
    NoiseModel::new(*laser, *mode, DetectionModel::default(), *corr, drive.clone())?.classical_tilt(f, theta)
}

/// `ħ k_m² |χ(2πf)|` (rad²/Hz).
pub fn sql(f: f64, mode: &MechanicalMode) -> f64 {
    HBAR * mode.k_m * mode.k_m * mode.chi_at(f).norm()
}

/// Floor reachable with correlations: `ħ k_m² |Im χ|`.
pub fn correlated_floor(f: f64, mode: &MechanicalMode) -> f64 {
    HBAR * mode.k_m * mode.k_m * mode.chi_at(f).im.abs()
}

/// The same bound with `Re χ` in place of `Im χ`, kept for comparison.
pub fn correlated_floor_re_variant(f: f64, mode: &MechanicalMode) -> f64 {
    HBAR * mode.k_m * mode.k_m * mode.chi_at(f).re.abs()
}

pub fn optimal_quadrature(f: f64, laser: &LaserField, mode: &MechanicalMode, corr: &Corrections) -> Result<QuadratureOptimum> {
    NoiseModel::new(*laser, *mode, DetectionModel::default(), *corr, ClassicalDrive::None)?.optimal_quadrature(f)
}

/// `C = 2 P Q k w0² k_m² / (m_eff c ω_m²)`.
pub fn cooperativity(laser: &LaserField, mode: &MechanicalMode, corr: &Corrections) -> Cooperativity {
    let c = 2.0 * laser.power * mode.q_factor * laser.k() * laser.w0 * laser.w0 * mode.k_m * mode.k_m
        / (mode.m_eff * C_LIGHT * mode.omega_m * mode.omega_m);
    Cooperativity {
        c,
        c_corr: c * corr.d_factor,
    }
}

/// Peak thermal density over the imprecision floor, `4 η n_th C`.
pub fn thermal_snr(eta: f64, n_th: f64, c: f64) -> Result<f64> {
    Ok(4.0 * ensure_non_negative("eta", eta)? * ensure_non_negative("n_th", n_th)? * ensure_non_negative("C", c)?)
}
