//! Hermite-Gaussian modes and the overlap integrals built on them.
//!
//! Modes are normalized so that `∬ U_{lm} U*_{pq} dx dy = δ_lp δ_mq`. The
//! split-detector overlap `F_ab` weighs the product of two modes with ±1 on
//! the two half planes; the mode-shape overlap `C_ab` weighs it with the
//! mechanical out-of-plane profile φ(x, y).

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{ensure_positive, Error, Result};
use crate::quadrature::{integrate, integrate_2d, Tolerance};

/// Highest Hermite polynomial order evaluated by [`hermite_poly`].
pub const HERMITE_MAX_ORDER: u32 = 30;
/// Highest transverse mode order per axis accepted by the mode functions.
pub const MAX_MODE_ORDER: u32 = 12;
/// Integration window half-width in beam radii.
pub const WINDOW_RADII: f64 = 6.0;

fn overlap_tolerance() -> Tolerance {
    Tolerance::new(1e-15, 1e-9)
}

/// Transverse mode label: `l` along x, `m` along y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HermiteIndex {
    pub l: u32,
    pub m: u32,
}

impl HermiteIndex {
    pub const fn new(l: u32, m: u32) -> Self {
        HermiteIndex { l, m }
    }

    fn check(self) -> Result<Self> {
        let order = self.l.max(self.m);
        if order > MAX_MODE_ORDER {
            return Err(Error::OrderTooHigh {
                order,
                max: MAX_MODE_ORDER,
            });
        }
        Ok(self)
    }
}

/// Gaussian beam parameters with independent x and y waists at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    pub w0x: f64,
    pub w0y: f64,
    pub wavelength: f64,
}

impl BeamGeometry {
    pub fn circular(w0: f64, wavelength: f64) -> Result<Self> {
        Self::astigmatic(w0, w0, wavelength)
    }

    pub fn astigmatic(w0x: f64, w0y: f64, wavelength: f64) -> Result<Self> {
        Ok(BeamGeometry {
            w0x: ensure_positive("w0x", w0x)?,
            w0y: ensure_positive("w0y", w0y)?,
            wavelength: ensure_positive("wavelength", wavelength)?,
        })
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn rayleigh_range_x(&self) -> f64 {
        PI * self.w0x * self.w0x / self.wavelength
    }

    pub fn rayleigh_range_y(&self) -> f64 {
        PI * self.w0y * self.w0y / self.wavelength
    }

    pub fn width_x(&self, z: f64) -> f64 {
        width(self.w0x, self.rayleigh_range_x(), z)
    }

    pub fn width_y(&self, z: f64) -> f64 {
        width(self.w0y, self.rayleigh_range_y(), z)
    }

    /// Wavefront radius of curvature along x; infinite at the waist.
    pub fn curvature_x(&self, z: f64) -> f64 {
        curvature(self.rayleigh_range_x(), z)
    }

    pub fn curvature_y(&self, z: f64) -> f64 {
        curvature(self.rayleigh_range_y(), z)
    }

    pub fn gouy_x(&self, z: f64) -> f64 {
        (z / self.rayleigh_range_x()).atan()
    }

    pub fn gouy_y(&self, z: f64) -> f64 {
        (z / self.rayleigh_range_y()).atan()
    }
}

fn width(w0: f64, z_r: f64, z: f64) -> f64 {
    w0 * (1.0 + (z / z_r).powi(2)).sqrt()
}

fn curvature(z_r: f64, z: f64) -> f64 {
    if z == 0.0 {
        f64::INFINITY
    } else {
        z * (1.0 + (z_r / z).powi(2))
    }
}

/// Which half plane of the split detector carries weight +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitWeight {
    /// +1 for x < 0, −1 for x ≥ 0.
    #[default]
    LeftPositive,
    /// +1 for x > 0, −1 for x ≤ 0.
    RightPositive,
}

impl SplitWeight {
    pub fn weight(self, x: f64) -> f64 {
        match self {
            SplitWeight::LeftPositive => {
                if x < 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            SplitWeight::RightPositive => {
                if x > 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Sign of the weight on the right (x > 0) half plane.
    fn right_sign(self) -> f64 {
        match self {
            SplitWeight::LeftPositive => -1.0,
            SplitWeight::RightPositive => 1.0,
        }
    }
}

/// Physicists' Hermite polynomial `H_n(x)` by forward recurrence.
pub fn hermite_poly(n: u32, x: f64) -> Result<f64> {
    if n > HERMITE_MAX_ORDER {
        return Err(Error::OrderTooHigh {
            order: n,
            max: HERMITE_MAX_ORDER,
        });
    }
    Ok(hermite_unchecked(n, x))
}

fn hermite_unchecked(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Normalized 1-D Hermite-Gaussian profile at the waist.
///
/// `∫ u_l(x, w) u_p(x, w) dx = δ_lp`.
pub fn hg_profile(l: u32, x: f64, w: f64) -> f64 {
    let norm = (FRAC_2_PI.sqrt() / (2f64.powi(l as i32) * factorial(l))).sqrt() / w.sqrt();
    let s = x / w;
    norm * hermite_unchecked(l, SQRT_2 * s) * (-s * s).exp()
}

/// Full Hermite-Gaussian amplitude `U_{l,m}(x, y, z)` in 1/m.
///
/// Includes the plane-wave phase `e^{-ikz}`, the wavefront curvature and the
/// Gouy factor `e^{i(l+1/2)θx + i(m+1/2)θy}`.
pub fn hg_amplitude(idx: HermiteIndex, x: f64, y: f64, z: f64, geom: &BeamGeometry) -> Result<Complex64> {
    let idx = idx.check()?;
    let (wx, wy) = (geom.width_x(z), geom.width_y(z));
    let real = hg_profile(idx.l, x, wx) * hg_profile(idx.m, y, wy);
    if z == 0.0 {
        return Ok(Complex64::new(real, 0.0));
    }
    let k = geom.wavenumber();
    let curvature_phase = x * x / (2.0 * geom.curvature_x(z)) + y * y / (2.0 * geom.curvature_y(z));
    let gouy = (f64::from(idx.l) + 0.5) * geom.gouy_x(z) + (f64::from(idx.m) + 0.5) * geom.gouy_y(z);
    let phase = -k * z - k * curvature_phase + gouy;
    Ok(Complex64::from_polar(real, phase))
}

/// `F_{00,10}` for a split detector in the closed form `√(2/π)`, signed by
/// the weight convention.
pub fn split_overlap_fundamental(weight: SplitWeight) -> f64 {
    weight.right_sign() * FRAC_2_PI.sqrt()
}

/// Split-detector overlap `F_ab = ∬ U_a U_b* F_weight dx dy` at the waist.
///
/// The y integral reduces to orthonormality, and the x integral vanishes
/// whenever `l_a + l_b` is even. The `00,10` pair uses its closed form;
/// everything else goes through adaptive quadrature.
pub fn overlap_f(a: HermiteIndex, b: HermiteIndex, weight: SplitWeight) -> Result<f64> {
    let (a, b) = (a.check()?, b.check()?);
    if a.m != b.m || (a.l + b.l) % 2 == 0 {
        return Ok(0.0);
    }
    if a.l.min(b.l) == 0 && a.l.max(b.l) == 1 {
        return Ok(split_overlap_fundamental(weight));
    }
    overlap_f_numeric(a, b, weight)
}

/// Same as [`overlap_f`] but always by quadrature (apart from the exact
/// parity and y-orthogonality zeros).
pub fn overlap_f_numeric(a: HermiteIndex, b: HermiteIndex, weight: SplitWeight) -> Result<f64> {
    let (a, b) = (a.check()?, b.check()?);
    if a.m != b.m || (a.l + b.l) % 2 == 0 {
        return Ok(0.0);
    }
    // Odd integrand: the two half planes contribute equally.
    let half = integrate(
        |x| hg_profile(a.l, x, 1.0) * hg_profile(b.l, x, 1.0),
        0.0,
        WINDOW_RADII,
        overlap_tolerance(),
    )?;
    Ok(2.0 * weight.right_sign() * half.value)
}

/// Mode-shape overlap `C_ab = ∬ U_a U_b* φ(x, y) dx dy` at the waist.
pub fn overlap_c<F>(a: HermiteIndex, b: HermiteIndex, mode_shape: F, geom: &BeamGeometry) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let (a, b) = (a.check()?, b.check()?);
    let (wx, wy) = (geom.w0x, geom.w0y);
    let r = integrate_2d(
        |x, y| {
            hg_profile(a.l, x, wx) * hg_profile(b.l, x, wx) * hg_profile(a.m, y, wy) * hg_profile(b.m, y, wy) * mode_shape(x, y)
        },
        (-WINDOW_RADII * wx, WINDOW_RADII * wx),
        (-WINDOW_RADII * wy, WINDOW_RADII * wy),
        overlap_tolerance(),
    )?;
    Ok(r.value)
}

/// Small-waist limit of `C_{00,10}` for a mode shape linear in x: `k_m w0 / 2`.
pub fn c_fundamental_small_waist(k_m: f64, w0: f64) -> f64 {
    0.5 * k_m * w0
}

/// `C_{00,10}` for φ = sin(k_m x), both exactly (quadrature) and in the
/// small-waist limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidalCoupling {
    pub exact: f64,
    pub linear: f64,
}

impl SinusoidalCoupling {
    pub fn ratio(&self) -> f64 {
        self.exact / self.linear
    }
}

pub fn c_fundamental_sinusoidal(k_m: f64, geom: &BeamGeometry) -> Result<SinusoidalCoupling> {
    let exact = overlap_c(
        HermiteIndex::new(0, 0),
        HermiteIndex::new(1, 0),
        |x, _| (k_m * x).sin(),
        geom,
    )?;
    Ok(SinusoidalCoupling {
        exact,
        linear: c_fundamental_small_waist(k_m, geom.w0x),
    })
}
