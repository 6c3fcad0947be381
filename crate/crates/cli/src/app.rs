//! Argument parsing and dispatch.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::{read_two_columns, read_two_columns_from, theta_from_degrees, ExperimentConfig};
use crate::error::CliError;
use crate::output::write_json;
use crate::presets;

#[derive(Debug, Parser)]
#[command(name = "olever", version, about = "Noise budget and back-action evasion for optical-lever readout")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the experiment parameters come from.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// INI configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Built-in parameter set (see `olever presets`).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
}

impl Source {
    pub fn load(&self) -> Result<ExperimentConfig, CliError> {
        match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path),
            (None, Some(name)) => ExperimentConfig::preset(name),
            (None, None) => Err(CliError::Usage("give --config or --preset".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tilt noise budget over the frequency sweep at one quadrature.
    Spectrum {
        #[command(flatten)]
        source: Source,
        /// Quadrature angle in degrees.
        #[arg(long, value_name = "DEG", allow_negative_numbers = true, conflicts_with = "plane", required_unless_present = "plane")]
        theta: Option<f64>,
        /// Detector position along the beamline in metres.
        #[arg(long, value_name = "Z_M")]
        plane: Option<f64>,
        /// Output CSV (standard output if omitted).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Detector-referred dB map over the frequency and quadrature sweeps.
    Densitymap {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// JSON summary; defaults to the output path with `.summary.json`.
        #[arg(long, value_name = "PATH")]
        summary: Option<PathBuf>,
        /// Ignore the classical drive.
        #[arg(long)]
        quantum_only: bool,
    },
    /// Cooperativity, efficiency, thermal SNR and SQL as JSON.
    Coop {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Accumulated Gouy angle, beam radius and curvature along the beamline.
    Gouy {
        #[command(flatten)]
        source: Source,
        /// Evenly spaced samples (element boundaries are always included).
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Ray picture of the evasion plane at one frequency.
    Rays {
        #[command(flatten)]
        source: Source,
        /// Frequency in Hz.
        #[arg(long, value_name = "HZ")]
        freq: f64,
        #[arg(long, default_value_t = 7)]
        n_rays: usize,
        /// Mirror tilt for the tilted bundle (rad).
        #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
        tilt: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Quality factor from ring-down samples `(t_s, amplitude)`.
    Ringdown {
        /// CSV input, `-` for standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Mode frequency in Hz.
        #[arg(long, value_name = "HZ")]
        fm: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// List presets, or print one as INI.
    Presets { name: Option<String> },
}

fn summary_path(out: Option<&Path>, summary: Option<PathBuf>) -> Option<PathBuf> {
    summary.or_else(|| {
        out.filter(|p| *p != Path::new("-"))
            .map(|p| p.with_extension("summary.json"))
    })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            source,
            theta,
            plane,
            out,
        } => {
            let cfg = source.load()?;
            let theta = match (theta, plane) {
                (Some(deg), _) => theta_from_degrees(deg)?,
                (None, Some(z)) => commands::theta_at_plane(&cfg, z)?,
                (None, None) => return Err(CliError::Usage("give --theta or --plane".into())),
            };
            commands::spectrum(&cfg, theta)?.write(out.as_deref())
        }
        Command::Densitymap {
            source,
            out,
            summary,
            quantum_only,
        } => {
            let cfg = source.load()?;
            let (table, info) = commands::density_map(&cfg, quantum_only)?;
            table.write(out.as_deref())?;
            match summary_path(out.as_deref(), summary) {
                Some(path) => write_json(&info, Some(&path)),
                None => {
                    eprintln!("{}", serde_json::to_string(&info)?);
                    Ok(())
                }
            }
        }
        Command::Coop { source, out } => write_json(&commands::coop(&source.load()?)?, out.as_deref()),
        Command::Gouy { source, points, out } => commands::gouy(&source.load()?, points)?.write(out.as_deref()),
        Command::Rays {
            source,
            freq,
            n_rays,
            tilt,
            out,
        } => {
            let (table, info) = commands::rays(&source.load()?, freq, n_rays, tilt)?;
            log::info!("{}", serde_json::to_string(&info)?);
            table.write(out.as_deref())
        }
        Command::Ringdown { input, fm, out } => {
            let (t, a) = if input == Path::new("-") {
                let mut buf = Vec::new();
                std::io::stdin()
                    .read_to_end(&mut buf)
                    .map_err(|e| CliError::io("reading standard input", e))?;
                read_two_columns_from(buf.as_slice(), "<stdin>")?
            } else {
                read_two_columns(&input)?
            };
            let samples: Vec<(f64, f64)> = t.into_iter().zip(a).collect();
            write_json(&commands::ringdown(&samples, fm)?, out.as_deref())
        }
        Command::Presets { name } => {
            match name {
                None => presets::NAMES.iter().for_each(|n| println!("{n}")),
                Some(n) => {
                    let text = presets::get(&n).ok_or_else(|| CliError::Usage(format!("unknown preset `{n}`")))?;
                    print!("{text}");
                }
            }
            Ok(())
        }
    }
}
