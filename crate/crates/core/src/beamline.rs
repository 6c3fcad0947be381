//! ABCD propagation of a Gaussian beam through free space and thin lenses.
//!
//! The complex radius follows `q_out = (A q_in + B) / (C q_in + D)` with
//! `1/q = 1/R − iλ/(πw²)`, so `q = z + i z_R` a distance `z` past a waist.
//! The inverted printed form `1/q = (A + B/q')/(C + D/q')` is a typographical
//! slip; the convention here reproduces the free-space `arctan(z/z_R)` law.
//!
//! The Gouy angle of a beam behind a lens does not give the relative phase
//! between Hermite-Gaussian modes. The accumulated Gouy angle does: it grows
//! only across free-space segments, by the ordinary Gouy increment computed
//! from the local `q`, and is unchanged by a thin lens.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Complex beam radius `q` (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRadius(pub Complex64);

impl ComplexRadius {
    /// Beam a distance `z` past a waist with Rayleigh range `z_r`.
    pub fn from_waist(z: f64, z_r: f64) -> Self {
        ComplexRadius(Complex64::new(z, z_r))
    }

    pub fn inverse(&self) -> Complex64 {
        self.0.inv()
    }

    /// Signed distance past the local waist.
    pub fn distance_from_waist(&self) -> f64 {
        self.0.re
    }

    pub fn rayleigh_range(&self) -> f64 {
        self.0.im
    }

    /// Beam radius `w` at this plane; `None` when `Im(1/q) ≥ 0`.
    pub fn width(&self, wavelength: f64) -> Option<f64> {
        let im = self.inverse().im;
        (im < 0.0).then(|| (-wavelength / (PI * im)).sqrt())
    }

    /// Wavefront radius of curvature; infinite at a waist.
    pub fn curvature(&self) -> f64 {
        let re = self.inverse().re;
        if re == 0.0 {
            f64::INFINITY
        } else {
            re.recip()
        }
    }

    fn is_valid(&self) -> bool {
        self.0.im > 0.0 && self.0.re.is_finite() && self.0.im.is_finite()
    }
}

/// 2×2 ray-transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Abcd {
    pub const IDENTITY: Abcd = Abcd {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// `self` applied after `first`.
    pub fn after(&self, first: &Abcd) -> Abcd {
        Abcd {
            a: self.a * first.a + self.b * first.c,
            b: self.a * first.b + self.b * first.d,
            c: self.c * first.a + self.d * first.c,
            d: self.c * first.b + self.d * first.d,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply_q(&self, q: ComplexRadius) -> ComplexRadius {
        ComplexRadius((q.0 * self.a + self.b) / (q.0 * self.c + self.d))
    }

    /// Maps a ray `(x, slope)`.
    pub fn apply_ray(&self, x: f64, slope: f64) -> (f64, f64) {
        (self.a * x + self.b * slope, self.c * x + self.d * slope)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamlineElement {
    FreeSpace { length: f64 },
    ThinLens { focal_length: f64 },
}

impl BeamlineElement {
    pub fn space(length: f64) -> Result<Self> {
        Ok(BeamlineElement::FreeSpace {
            length: ensure_non_negative("length", length)?,
        })
    }

    pub fn lens(focal_length: f64) -> Result<Self> {
        if focal_length == 0.0 || !focal_length.is_finite() {
            return Err(Error::InvalidParameter {
                name: "focal_length",
                reason: format!("must be finite and non-zero, got {focal_length}"),
            });
        }
        Ok(BeamlineElement::ThinLens { focal_length })
    }

    pub fn abcd(&self) -> Abcd {
        match *self {
            BeamlineElement::FreeSpace { length } => Abcd {
                a: 1.0,
                b: length,
                c: 0.0,
                d: 1.0,
            },
            BeamlineElement::ThinLens { focal_length } => Abcd {
                a: 1.0,
                b: 0.0,
                c: -1.0 / focal_length,
                d: 1.0,
            },
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            BeamlineElement::FreeSpace { length } => length,
            BeamlineElement::ThinLens { .. } => 0.0,
        }
    }

    fn describe(&self) -> String {
        match *self {
            BeamlineElement::FreeSpace { length } => format!("space {length}"),
            BeamlineElement::ThinLens { focal_length } => format!("lens {focal_length}"),
        }
    }
}

/// Beam state at a point along the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatedState {
    pub q: ComplexRadius,
    /// Accumulated Gouy angle since the device plane (rad).
    pub theta_a: f64,
    /// Physical distance from the device plane (m).
    pub z_path: f64,
}

impl PropagatedState {
    /// State at a waist of Rayleigh range `z_r`, at the origin.
    pub fn at_waist(z_r: f64) -> Self {
        PropagatedState {
            q: ComplexRadius::from_waist(0.0, z_r),
            theta_a: 0.0,
            z_path: 0.0,
        }
    }
}

/// Free-space Gouy increment over `length` for a beam currently at `q`.
fn gouy_increment(q: ComplexRadius, length: f64) -> f64 {
    let (z, z_r) = (q.distance_from_waist(), q.rayleigh_range());
    ((z + length) / z_r).atan() - (z / z_r).atan()
}

/// Propagates `state` through one element.
pub fn propagate_element(state: PropagatedState, elem: &BeamlineElement) -> Result<PropagatedState> {
    let q = elem.abcd().apply_q(state.q);
    if !q.is_valid() {
        return Err(Error::DegenerateBeam {
            element: elem.describe(),
        });
    }
    let (theta_a, z_path) = match *elem {
        BeamlineElement::FreeSpace { length } => (state.theta_a + gouy_increment(state.q, length), state.z_path + length),
        BeamlineElement::ThinLens { .. } => (state.theta_a, state.z_path),
    };
    Ok(PropagatedState { q, theta_a, z_path })
}

/// Ordered lens system starting at the device plane, where the source beam
/// has its waist.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamline {
    wavelength: f64,
    waist: f64,
    elements: Vec<BeamlineElement>,
    /// Constant added to the accumulated Gouy angle when reporting the
    /// measured quadrature.
    pub theta_offset: f64,
}

impl Beamline {
    pub fn new(wavelength: f64, waist: f64, elements: Vec<BeamlineElement>) -> Result<Self> {
        let line = Beamline {
            wavelength: ensure_positive("wavelength", wavelength)?,
            waist: ensure_positive("waist", waist)?,
            elements,
            theta_offset: 0.0,
        };
        // Validates every element and that the beam never degenerates.
        line.state_at(line.total_length())?;
        Ok(line)
    }

    /// Waist → `space f` → lens `f` → `space f`.
    pub fn two_f(wavelength: f64, waist: f64, focal_length: f64) -> Result<Self> {
        Self::new(
            wavelength,
            waist,
            vec![
                BeamlineElement::space(focal_length)?,
                BeamlineElement::lens(focal_length)?,
                BeamlineElement::space(focal_length)?,
            ],
        )
    }

    pub fn with_offset(mut self, theta_offset: f64) -> Self {
        self.theta_offset = theta_offset;
        self
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn elements(&self) -> &[BeamlineElement] {
        &self.elements
    }

    pub fn rayleigh_range(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }

    pub fn total_length(&self) -> f64 {
        self.elements.iter().map(BeamlineElement::length).sum()
    }

    /// State at path position `z_path`. Lenses sitting exactly at `z_path`
    /// are applied.
    pub fn state_at(&self, z_path: f64) -> Result<PropagatedState> {
        let total = self.total_length();
        if !(0.0..=total).contains(&z_path) {
            return Err(Error::OutOfRange { z: z_path, total });
        }
        let mut state = PropagatedState::at_waist(self.rayleigh_range());
        for elem in &self.elements {
            let remaining = z_path - state.z_path;
            match *elem {
                BeamlineElement::FreeSpace { length } if length > remaining => {
                    let partial = BeamlineElement::FreeSpace {
                        length: remaining.max(0.0),
                    };
                    let mut s = propagate_element(state, &partial)?;
                    s.z_path = z_path;
                    return Ok(s);
                }
                _ => state = propagate_element(state, elem)?,
            }
        }
        state.z_path = z_path;
        Ok(state)
    }

    /// Measured quadrature at `z_path`: accumulated Gouy angle plus offset.
    pub fn quadrature_at(&self, z_path: f64) -> Result<f64> {
        Ok(self.state_at(z_path)?.theta_a + self.theta_offset)
    }

    /// Ray-transfer matrix from the device plane to `z_path`.
    pub fn abcd_to(&self, z_path: f64) -> Result<Abcd> {
        let total = self.total_length();
        if !(0.0..=total).contains(&z_path) {
            return Err(Error::OutOfRange { z: z_path, total });
        }
        let mut m = Abcd::IDENTITY;
        let mut z = 0.0;
        for elem in &self.elements {
            let len = elem.length();
            if len > z_path - z {
                let partial = BeamlineElement::FreeSpace { length: z_path - z };
                return Ok(partial.abcd().after(&m));
            }
            m = elem.abcd().after(&m);
            z += len;
        }
        Ok(m)
    }

    /// Positions of the element boundaries, including both ends.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        let mut z = 0.0;
        for elem in &self.elements {
            if let BeamlineElement::FreeSpace { length } = elem {
                z += length;
                out.push(z);
            }
        }
        out
    }

    /// All path positions where the measured quadrature equals
    /// `theta_target` modulo π, in increasing order.
    ///
    /// The accumulated angle is continuous and nondecreasing, so each
    /// branch `theta_target + nπ` inside the covered range is found by
    /// bisection. An empty result means the target is never reached.
    pub fn find_quadrature_plane(&self, theta_target: f64) -> Result<Vec<f64>> {
        let total = self.total_length();
        let start = self.quadrature_at(0.0)?;
        let end = self.quadrature_at(total)?;
        let n_lo = ((start - theta_target) / PI).ceil() as i64;
        let n_hi = ((end - theta_target) / PI).floor() as i64;
        let mut out = Vec::new();
        for n in n_lo..=n_hi {
            let target = theta_target + n as f64 * PI;
            out.push(self.bisect_quadrature(target, total)?);
        }
        Ok(out)
    }

    fn bisect_quadrature(&self, target: f64, total: f64) -> Result<f64> {
        let (mut lo, mut hi) = (0.0, total);
        if self.quadrature_at(lo)? >= target {
            return Ok(lo);
        }
        let tol = 1e-13 * total.max(1e-300);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.quadrature_at(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
