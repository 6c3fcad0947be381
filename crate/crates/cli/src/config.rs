//! Experiment configuration: laser, mechanical mode, beamline, detection,
//! classical drive and sweep grids. All values in SI units.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use olever_core::beamline::{Beamline, BeamlineElement};
use olever_core::mechanics::{MechanicalMode, MembraneGeometry};
use olever_core::noise_spectra::{finite_waist_factors, ClassicalDrive, Corrections, DetectionModel, LaserField};

use crate::error::CliError;
use crate::ini::{Ini, Section};
use crate::presets;

/// Grid specification for frequency and quadrature sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub f_start: Option<f64>,
    pub f_stop: Option<f64>,
    pub f_points: usize,
    pub theta_start_deg: f64,
    pub theta_stop_deg: f64,
    pub theta_points: usize,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            f_start: None,
            f_stop: None,
            f_points: 201,
            theta_start_deg: 1.0,
            theta_stop_deg: 179.0,
            theta_points: 179,
        }
    }
}

fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl Sweep {
    pub fn f_grid(&self) -> Result<Vec<f64>, CliError> {
        let start = self.f_start.ok_or_else(|| CliError::config("sweep", "f_start", "required for this command"))?;
        let stop = self.f_stop.ok_or_else(|| CliError::config("sweep", "f_stop", "required for this command"))?;
        if self.f_points == 0 {
            return Err(CliError::config("sweep", "f_points", "empty frequency sweep"));
        }
        if !(stop >= start) || start < 0.0 {
            return Err(CliError::config("sweep", "f_stop", format!("need 0 <= f_start <= f_stop, got {start} and {stop}")));
        }
        Ok(linspace(start, stop, self.f_points))
    }

    /// Quadrature grid in radians.
    pub fn theta_grid(&self) -> Result<Vec<f64>, CliError> {
        if self.theta_points == 0 {
            return Err(CliError::config("sweep", "theta_points", "empty quadrature sweep"));
        }
        let (a, b) = (self.theta_start_deg, self.theta_stop_deg);
        if !(b >= a) {
            return Err(CliError::config("sweep", "theta_stop_deg", format!("must not be below theta_start_deg ({a})")));
        }
        Ok(linspace(a, b, self.theta_points).into_iter().map(f64::to_radians).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub laser: LaserField,
    pub mode: MechanicalMode,
    pub beamline: Option<Beamline>,
    pub detection: DetectionModel,
    pub corrections: Corrections,
    pub drive: ClassicalDrive,
    pub sweep: Sweep,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("laser", &["wavelength", "power", "w0"]),
    (
        "mode",
        &[
            "f_m",
            "q_factor",
            "temperature",
            "m_eff",
            "wavenumber",
            "a",
            "b",
            "h",
            "rho",
            "l",
            "p",
            "string_width",
        ],
    ),
    ("beamline", &["theta_offset"]),
    ("detection", &["eta_path", "include_orders", "c_correction", "d_correction"]),
    ("drive", &["kind", "s_dx", "delta_x0", "band_lo", "band_hi", "duration", "table"]),
    (
        "sweep",
        &["f_start", "f_stop", "f_points", "theta_start_deg", "theta_stop_deg", "theta_points"],
    ),
];

/// Typed view of one section; every lookup is checked against the allowed
/// keys up front.
struct View<'a> {
    name: &'static str,
    values: HashMap<&'a str, &'a str>,
}

impl<'a> View<'a> {
    fn new(name: &'static str, section: Option<&'a Section>) -> Result<Self, CliError> {
        let allowed = SECTIONS.iter().find(|(n, _)| *n == name).map(|(_, k)| *k).unwrap_or(&[]);
        let mut values = HashMap::new();
        if let Some(section) = section {
            for (key, value, _) in section.pairs() {
                if !allowed.contains(&key) {
                    return Err(CliError::config(name, key, "unknown key"));
                }
                values.insert(key, value);
            }
            if name != "beamline" {
                if let Some((rec, _, line)) = section.records().next() {
                    return Err(CliError::config(name, rec, format!("expected `key = value` on line {line}")));
                }
            }
        }
        Ok(View { name, values })
    }

    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::config(self.name, key, format!("expected a finite number, got `{v}`")))
            })
            .transpose()
    }

    fn f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64_opt(key)?.ok_or_else(|| CliError::config(self.name, key, "missing"))
    }

    fn u32_opt(&self, key: &str) -> Result<Option<u32>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<u32>()
                    .map_err(|_| CliError::config(self.name, key, format!("expected a non-negative integer, got `{v}`")))
            })
            .transpose()
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(&"true") | Some(&"on") | Some(&"yes") => Ok(true),
            Some(&"false") | Some(&"off") | Some(&"no") => Ok(false),
            Some(v) => Err(CliError::config(self.name, key, format!("expected true or false, got `{v}`"))),
        }
    }

    fn str(&self, key: &str) -> Option<&'a str> {
        self.values.get(key).copied()
    }

    /// Maps an engine validation error onto this section.
    fn engine(&self, e: olever_core::Error) -> CliError {
        match e {
            olever_core::Error::InvalidParameter { name, reason } => CliError::config(self.name, name, reason),
            other => CliError::Numeric(other),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        let ini = Ini::parse(&text, &path.display().to_string())?;
        Self::from_ini(&ini, path.parent())
    }

    pub fn preset(name: &str) -> Result<Self, CliError> {
        let text = presets::get(name).ok_or_else(|| {
            CliError::Usage(format!("unknown preset `{name}` (available: {})", presets::NAMES.join(", ")))
        })?;
        Self::from_ini(&Ini::parse(text, name)?, None)
    }

    /// Builds a configuration; relative table paths resolve against `base`.
    pub fn from_ini(ini: &Ini, base: Option<&Path>) -> Result<Self, CliError> {
        for s in &ini.sections {
            if !SECTIONS.iter().any(|(n, _)| *n == s.name) {
                return Err(CliError::config(&s.name, "", "unknown section"));
            }
        }
        let laser = parse_laser(&View::new("laser", ini.section("laser"))?)?;
        let mode = parse_mode(&View::new("mode", ini.section("mode"))?)?;
        let beamline = match ini.section("beamline") {
            Some(s) => Some(parse_beamline(s, &laser)?),
            None => None,
        };
        let det_view = View::new("detection", ini.section("detection"))?;
        let detection = parse_detection(&det_view)?;
        let corrections = finite_waist_factors(mode.k_m, laser.w0)
            .map_err(|e| det_view.engine(e))?
            .with_flags(det_view.bool_or("c_correction", true)?, det_view.bool_or("d_correction", true)?);
        let drive = parse_drive(&View::new("drive", ini.section("drive"))?, base)?;
        let sweep = parse_sweep(&View::new("sweep", ini.section("sweep"))?)?;
        Ok(ExperimentConfig {
            laser,
            mode,
            beamline,
            detection,
            corrections,
            drive,
            sweep,
        })
    }

    pub fn beamline(&self) -> Result<&Beamline, CliError> {
        self.beamline
            .as_ref()
            .ok_or_else(|| CliError::config("beamline", "", "this command needs a [beamline] section"))
    }

    pub fn noise_model(&self) -> Result<olever_core::noise_spectra::NoiseModel, CliError> {
        Ok(olever_core::noise_spectra::NoiseModel::new(
            self.laser,
            self.mode,
            self.detection,
            self.corrections,
            self.drive.clone(),
        )?)
    }
}

fn parse_laser(v: &View) -> Result<LaserField, CliError> {
    LaserField::new(v.f64("wavelength")?, v.f64("power")?, v.f64("w0")?).map_err(|e| v.engine(e))
}

fn parse_mode(v: &View) -> Result<MechanicalMode, CliError> {
    let f_m = v.f64("f_m")?;
    let q = v.f64("q_factor")?;
    let t = v.f64("temperature")?;
    let membrane_keys = ["a", "b", "h", "rho", "l", "p"];
    let groups = [
        ("wavenumber", v.has("wavenumber")),
        ("membrane geometry", membrane_keys.iter().any(|k| v.has(k))),
        ("string_width", v.has("string_width")),
    ];
    let chosen: Vec<&str> = groups.iter().filter(|g| g.1).map(|g| g.0).collect();
    if chosen.len() != 1 {
        return Err(CliError::config(
            "mode",
            "wavenumber",
            format!(
                "give exactly one of `wavenumber`, membrane geometry (a, b, h, rho, l, p) or `string_width`; found {}",
                if chosen.is_empty() { "none".to_string() } else { chosen.join(" and ") }
            ),
        ));
    }
    let mode = match chosen[0] {
        "wavenumber" => MechanicalMode::new(f_m, q, v.f64("m_eff")?, v.f64("wavenumber")?, t),
        "string_width" => {
            // Torsional mode read out across the string: k_m = 2 / width.
            let width = v.f64("string_width")?;
            if width <= 0.0 {
                return Err(CliError::config("mode", "string_width", "must be > 0"));
            }
            MechanicalMode::new(f_m, q, v.f64("m_eff")?, 2.0 / width, t)
        }
        _ => {
            let geometry = MembraneGeometry {
                a: v.f64("a")?,
                b: v.f64("b")?,
                h: v.f64("h")?,
                rho: v.f64("rho")?,
                l: v.u32_opt("l")?.ok_or_else(|| CliError::config("mode", "l", "missing"))?,
                p: v.u32_opt("p")?.ok_or_else(|| CliError::config("mode", "p", "missing"))?,
            };
            let m_eff_override = v.f64_opt("m_eff")?;
            MechanicalMode::from_membrane(f_m, q, t, geometry).and_then(|m| match m_eff_override {
                Some(m_eff) => MechanicalMode::new(f_m, q, m_eff, m.k_m, t).map(|n| MechanicalMode {
                    geometry: m.geometry,
                    ..n
                }),
                None => Ok(m),
            })
        }
    };
    mode.map_err(|e| v.engine(e))
}

fn parse_beamline(section: &Section, laser: &LaserField) -> Result<Beamline, CliError> {
    let v = View::new("beamline", Some(section))?;
    let mut elements = Vec::new();
    for (name, value, line) in section.records() {
        let x: f64 = value
            .parse()
            .map_err(|_| CliError::config("beamline", name, format!("line {line}: expected a number, got `{value}`")))?;
        let elem = match name {
            "space" => BeamlineElement::space(x),
            "lens" => BeamlineElement::lens(x),
            _ => return Err(CliError::config("beamline", name, format!("line {line}: unknown element (use `space` or `lens`)"))),
        };
        elements.push(elem.map_err(|e| v.engine(e))?);
    }
    let offset = v.f64_opt("theta_offset")?.unwrap_or(0.0);
    Ok(Beamline::new(laser.wavelength, laser.w0, elements)?.with_offset(offset))
}

fn parse_detection(v: &View) -> Result<DetectionModel, CliError> {
    let eta_path = v.f64_opt("eta_path")?.unwrap_or(0.87);
    let include_orders = match v.str("include_orders") {
        None | Some("all") => None,
        Some(_) => v.u32_opt("include_orders")?,
    };
    DetectionModel::new(eta_path, include_orders).map_err(|e| match e {
        olever_core::Error::OrderTooHigh { order, max } => {
            CliError::config("detection", "include_orders", format!("{order} exceeds the supported maximum {max}"))
        }
        other => v.engine(other),
    })
}

fn parse_drive(v: &View, base: Option<&Path>) -> Result<ClassicalDrive, CliError> {
    let kind = v.str("kind").unwrap_or("none");
    let drive = match kind {
        "none" => Ok(ClassicalDrive::None),
        "flat" => ClassicalDrive::flat(v.f64("s_dx")?),
        "chirp" => ClassicalDrive::chirp(v.f64("delta_x0")?, (v.f64("band_lo")?, v.f64("band_hi")?), v.f64("duration")?),
        "table" => {
            let file = v.str("table").ok_or_else(|| CliError::config("drive", "table", "missing"))?;
            let path = match base {
                Some(dir) => dir.join(file),
                None => PathBuf::from(file),
            };
            let (freqs, s_dx) = read_two_columns(&path)?;
            ClassicalDrive::tabulated(freqs, s_dx)
        }
        other => return Err(CliError::config("drive", "kind", format!("unknown drive `{other}` (none, flat, chirp, table)"))),
    };
    drive.map_err(|e| v.engine(e))
}

/// Reads a two-column numeric CSV; a non-numeric first row is a header.
pub fn read_two_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;
    read_two_columns_from(file, &path.display().to_string())
}

pub fn read_two_columns_from<R: std::io::Read>(reader: R, origin: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Csv {
            context: origin.to_string(),
            source: e,
        })?;
        let parse = |j: usize| rec.get(j).and_then(|s| s.parse::<f64>().ok());
        match (parse(0), parse(1), rec.len()) {
            (Some(x), Some(y), 2) => {
                xs.push(x);
                ys.push(y);
            }
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::Usage(format!(
                    "{origin}: row {}: expected two numeric columns",
                    i + 1
                )))
            }
        }
    }
    Ok((xs, ys))
}

fn parse_sweep(v: &View) -> Result<Sweep, CliError> {
    let d = Sweep::default();
    let count = |key: &str, default: usize| -> Result<usize, CliError> { Ok(v.u32_opt(key)?.map_or(default, |n| n as usize)) };
    let sweep = Sweep {
        f_start: v.f64_opt("f_start")?,
        f_stop: v.f64_opt("f_stop")?,
        f_points: count("f_points", d.f_points)?,
        theta_start_deg: v.f64_opt("theta_start_deg")?.unwrap_or(d.theta_start_deg),
        theta_stop_deg: v.f64_opt("theta_stop_deg")?.unwrap_or(d.theta_stop_deg),
        theta_points: count("theta_points", d.theta_points)?,
    };
    if sweep.theta_start_deg.rem_euclid(180.0) == 0.0 || sweep.theta_stop_deg.rem_euclid(180.0) == 0.0 {
        return Err(CliError::config("sweep", "theta_start_deg", "quadrature grid must avoid 0° and 180°"));
    }
    Ok(sweep)
}

/// Degrees to radians, rejecting the amplitude quadrature.
pub fn theta_from_degrees(deg: f64) -> Result<f64, CliError> {
    let rad = deg.to_radians();
    if !deg.is_finite() || rad.sin().abs() < 1e-12 || (deg / 180.0).fract() == 0.0 {
        return Err(CliError::Usage(format!(
            "--theta {deg}: imprecision diverges at the amplitude quadrature (0° or 180°)"
        )));
    }
    Ok(rad.rem_euclid(2.0 * PI))
}
