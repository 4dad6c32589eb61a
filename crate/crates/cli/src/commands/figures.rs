//! Datasets behind the parameter table and the figures.

use std::path::Path;
use std::thread;

use hedrop::heprops::Isotope;
use hedrop::mechloss::classify_regime;
use hedrop::modes::{sound_mode_frequency, surface_mode_frequency, zpf_amplitude, Drop};
use hedrop::optics::{coupling_g0, q_total, WgmMode};
use serde_json::json;

use super::cool::{default_start_temperature, Cooldown};
use super::{configured_drop, label, load_isotope, log_grid, spectrum_table};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{json_text, Table};

/// Radius sweep of the loss and coupling dataset, m.
pub const RADIUS_SWEEP: (f64, f64, u32) = (0.05e-3, 5e-3, 41);

fn hz(omega: f64) -> f64 {
    omega / std::f64::consts::TAU
}

fn write(dir: &Path, name: &str, text: &str) -> CliResult<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| CliError::write(e, &path.display().to_string()))
}

fn table1(cfg: &RunConfig, drop: &Drop<f64>) -> CliResult<String> {
    let optical = q_total(drop, cfg.wavelength)?;
    let wgm = WgmMode::equatorial(drop, cfg.wavelength, optical.q_total)?;
    let omega_vib = surface_mode_frequency(drop, 2);
    let g0 = coupling_g0(drop, &wgm)?;
    let mech = classify_regime(drop)?;
    let sound = sound_mode_frequency(drop, 1, 0)?.frequency;
    json_text(&json!({
        "isotope": cfg.isotope.label(),
        "radius_m": cfg.radius,
        "temperature_K": cfg.temperature,
        "wavelength_m": cfg.wavelength,
        "omega_vib_rad_per_s": omega_vib,
        "f_vib_Hz": hz(omega_vib),
        "x_zpf_m": zpf_amplitude(drop).x_zpf,
        "lowest_sound_mode_Hz": hz(sound),
        "q_mech": {
            "regime": label(&mech.regime),
            "channel": label(&mech.dominant_channel),
            "value": mech.q_mech,
            "bounds": mech.q_bounds.map(|(lo, hi)| [lo, hi]),
        },
        "q_opt": optical.q_total,
        "q_opt_dominant": label(&optical.dominant),
        "kappa_rad_per_s": wgm.linewidth(),
        "g0_rad_per_s": g0,
        "g0_Hz": hz(g0),
        "g0_over_omega_vib": g0 / omega_vib,
    }))
}

fn fig3(cfg: &RunConfig, drop: &Drop<f64>) -> CliResult<Table> {
    let mut t = Table::new(&[
        "R_m",
        "omega_vib_rad_per_s",
        "f_vib_Hz",
        "g0_rad_per_s",
        "g0_Hz",
        "kappa_rad_per_s",
        "kappa_surface_rad_per_s",
        "kappa_radiative_rad_per_s",
        "kappa_bulk_rad_per_s",
        "Q_surface",
        "Q_radiative",
        "Q_opt",
        "Q_mech",
    ]);
    let (a, b, n) = RADIUS_SWEEP;
    for r in log_grid(a, b, n) {
        let d = drop.with_radius(r)?;
        let loss = q_total(&d, cfg.wavelength)?;
        let wgm = WgmMode::equatorial(&d, cfg.wavelength, loss.q_total)?;
        let w_opt = wgm.frequency();
        let w = surface_mode_frequency(&d, 2);
        let g0 = coupling_g0(&d, &wgm)?;
        t.push(vec![
            r.into(),
            w.into(),
            hz(w).into(),
            g0.into(),
            hz(g0).into(),
            (w_opt / loss.q_total).into(),
            (w_opt / loss.q_surface).into(),
            (w_opt / loss.q_radiative).into(),
            (w_opt / loss.q_bulk_floor).into(),
            loss.q_surface.into(),
            loss.q_radiative.into(),
            loss.q_total.into(),
            classify_regime(&d)?.q_mech.into(),
        ]);
    }
    Ok(t)
}

/// Cooldowns of both isotopes from their reference start temperatures, run concurrently.
fn fig4(cfg: &RunConfig) -> CliResult<Table> {
    let runs: Vec<_> = Isotope::ALL
        .iter()
        .map(|&iso| Ok((iso, load_isotope(cfg, iso)?)))
        .collect::<CliResult<_>>()?;
    let results = thread::scope(|s| {
        let handles: Vec<_> = runs
            .iter()
            .map(|(iso, props)| {
                let job = Cooldown {
                    radius: cfg.radius,
                    t_start: default_start_temperature(*iso),
                    heat_load: cfg.heat_load,
                    wavelength: cfg.wavelength,
                    t_end: 60.0,
                    tol: 1e-8,
                    per_decade: 10,
                };
                s.spawn(move || job.integrate(props.clone()))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CliError::Internal("cooling worker panicked".into()))))
            .collect::<Vec<_>>()
    });

    let mut t = Table::new(&[
        "isotope",
        "t_s",
        "T_K",
        "N",
        "R_m",
        "Gamma_per_s",
        "Pcool_W",
        "drift_Hz_per_s",
    ]);
    for ((iso, _), tr) in runs.iter().zip(results) {
        for s in tr?.samples {
            t.push(vec![
                iso.label().into(),
                s.t.into(),
                s.temperature.into(),
                s.atoms.into(),
                s.radius.into(),
                s.evaporation_rate.into(),
                s.cooling_power.into(),
                s.drift_hz_per_s.into(),
            ]);
        }
    }
    Ok(t)
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let dir = cfg.output.clone().unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir).map_err(|e| CliError::write(e, &dir.display().to_string()))?;
    let drop = configured_drop(cfg)?;
    let table = table1(cfg, &drop)?;
    let fig2 = spectrum_table(&drop, 10, 3)?.to_csv()?;
    let fig3 = fig3(cfg, &drop)?.to_csv()?;
    let fig4 = fig4(cfg)?.to_csv()?;
    write(&dir, "table1.json", &table)?;
    write(&dir, "fig2.csv", &fig2)?;
    write(&dir, "fig3.csv", &fig3)?;
    write(&dir, "fig4.csv", &fig4)
}
