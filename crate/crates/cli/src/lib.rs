//! Command-line front end for the optical-lever noise budget.
//!
//! Configurations are INI files with `[laser]`, `[mode]`, `[beamline]`,
//! `[detection]`, `[drive]` and `[sweep]` sections in SI units; see the
//! presets under `presets/` for complete examples.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod ini;
pub mod output;
pub mod presets;
