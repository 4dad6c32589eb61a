use std::sync::Arc;

use hedrop::evap::{integrate_cooling_with, CoolingOptions, CoolingState, CoolingTrajectory};
use hedrop::heprops::{Isotope, IsotopeProperties};
use hedrop::modes::Drop;
use serde_json::json;

use super::load_isotope;
use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, json_text};

/// Starting temperatures of the reference cooldowns.
pub fn default_start_temperature(iso: Isotope) -> f64 {
    match iso {
        Isotope::He4 => 4.0,
        Isotope::He3 => 2.5,
    }
}

/// One cooldown run; the drop starts at `radius` and `t_start`.
#[derive(Debug, Clone, Copy)]
pub struct Cooldown {
    pub radius: f64,
    pub t_start: f64,
    pub heat_load: f64,
    pub wavelength: f64,
    pub t_end: f64,
    pub tol: f64,
    pub per_decade: u32,
}

impl Cooldown {
    /// Samples on the log grid plus `1 s` and `t_end`.
    pub fn integrate(&self, iso: Arc<IsotopeProperties<f64>>) -> CliResult<CoolingTrajectory<f64>> {
        let atoms = Drop::new(iso.clone(), self.radius, self.t_start)?.atom_count();
        let initial = CoolingState {
            t: 0.0,
            temperature: self.t_start,
            atoms,
        };
        let opts = CoolingOptions {
            samples_per_decade: self.per_decade,
            extra_times: vec![1.0, self.t_end],
            wavelength: self.wavelength,
            ..CoolingOptions::default()
        };
        Ok(integrate_cooling_with(initial, iso, self.heat_load, self.t_end, self.tol, &opts)?)
    }
}

pub fn run(cfg: &RunConfig, t_start: Option<f64>, t_end: f64, tol: f64, per_decade: u32) -> CliResult<()> {
    if !(t_end > 1e-3) {
        return Err(CliError::Usage("t_end must exceed the first sample at 1 ms".into()));
    }
    if !(tol > 1e-12 && tol < 1e-2) {
        return Err(CliError::Usage(format!("tol {tol} outside (1e-12, 1e-2)")));
    }
    if per_decade == 0 {
        return Err(CliError::Usage("per_decade must be positive".into()));
    }
    let t0 = t_start.unwrap_or_else(|| default_start_temperature(cfg.isotope));
    if !(t0 > 0.0) {
        return Err(CliError::Usage("t_start must be positive".into()));
    }
    let iso = load_isotope(cfg, cfg.isotope)?;
    let tr = Cooldown {
        radius: cfg.radius,
        t_start: t0,
        heat_load: cfg.heat_load,
        wavelength: cfg.wavelength,
        t_end,
        tol,
        per_decade,
    }
    .integrate(iso)?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => tr.to_csv(),
        Format::Json => json_text(&json!({
            "isotope": cfg.isotope.label(),
            "radius_m": cfg.radius,
            "t_start_K": t0,
            "heat_load_W": cfg.heat_load,
            "tol": tol,
            "steps": {"accepted": tr.stats.accepted, "rejected": tr.stats.rejected},
            "samples": tr.samples,
        }))?,
    };
    emit(&text, cfg.output.as_deref())
}
