//! Subcommand implementations. Each reads a validated [`RunConfig`] and emits
//! SI values with the unit in the column name.

pub mod cool;
pub mod figures;
pub mod qnd;
pub mod rovib;

use std::sync::Arc;

use hedrop::evap::{cooling_power, evaporation_rate};
use hedrop::heprops::{viscosity_he3, Isotope, IsotopeProperties};
use hedrop::mechloss::{classify_regime, q_ripplon_phonon, q_viscous};
use hedrop::modes::{self, spectrum as mode_spectrum, surface_mode, zpf_amplitude, Branch, Drop};
use hedrop::optics::{
    coupling_g0, estimate_l, free_spectral_range_hz, q_surface_scattering_quadrature, q_total, wgm_splitting,
    WgmMode,
};
use hedrop::rotation::{g_l, reference_constants};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, Cell, Table};

pub fn load_isotope(cfg: &RunConfig, iso: Isotope) -> CliResult<Arc<IsotopeProperties<f64>>> {
    Ok(Arc::new(IsotopeProperties::load(iso, &cfg.resolved_data_dir())?))
}

pub fn configured_drop(cfg: &RunConfig) -> CliResult<Drop<f64>> {
    Ok(Drop::new(load_isotope(cfg, cfg.isotope)?, cfg.radius, cfg.temperature)?)
}

fn hz(omega: f64) -> f64 {
    omega / std::f64::consts::TAU
}

fn finish(cfg: &RunConfig, table: &Table) -> CliResult<()> {
    emit(&table.render(cfg.format.unwrap_or(Format::Csv))?, cfg.output.as_deref())
}

/// Log-spaced points from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, points: u32) -> Vec<f64> {
    if points <= 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..points)
        .map(|i| match i {
            0 => a,
            i if i == points - 1 => b,
            i => (la + (lb - la) * i as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

pub fn props(cfg: &RunConfig, t_min: Option<f64>, t_max: Option<f64>, points: u32) -> CliResult<()> {
    let t_min = t_min.unwrap_or(cfg.temperature);
    let t_max = t_max.unwrap_or(t_min);
    if !(t_min > 0.0 && t_max >= t_min) || points == 0 || (points == 1 && t_max != t_min) {
        return Err(CliError::Usage("need 0 < t_min <= t_max, and points > 1 for a sweep".into()));
    }
    let iso = load_isotope(cfg, cfg.isotope)?;
    let mut table = Table::new(&[
        "T_K",
        "vapor_pressure_Pa",
        "latent_heat_J_per_atom",
        "specific_heat_J_per_K_atom",
        "heat_capacity_J_per_K",
        "viscosity_Pa_s",
        "Gamma_per_s",
        "Pcool_W",
    ]);
    for t in log_grid(t_min, t_max, points) {
        let drop = Drop::new(iso.clone(), cfg.radius, t)?;
        let n = drop.atom_count();
        let per_atom = iso.specific_heat(1.0, t)?;
        // only normal-fluid ³He has a viscosity model
        let viscosity = match iso.isotope {
            Isotope::He3 => viscosity_he3(t).map(Cell::Num).unwrap_or_else(|_| "".into()),
            Isotope::He4 => "".into(),
        };
        table.push(vec![
            t.into(),
            iso.vapor_pressure(t)?.into(),
            iso.latent_heat(t)?.into(),
            per_atom.into(),
            iso.specific_heat(n, t)?.into(),
            viscosity,
            evaporation_rate(&drop)?.into(),
            cooling_power(&drop)?.into(),
        ]);
    }
    finish(cfg, &table)
}

pub fn spectrum_table(drop: &Drop<f64>, l_max: u32, n_max: u32) -> CliResult<Table> {
    let mut table = Table::new(&["branch", "n", "l", "omega_rad_per_s", "f_Hz"]);
    for e in mode_spectrum(drop, l_max, n_max)? {
        let branch = match e.branch {
            Branch::Surface => "surface",
            Branch::Sound => "sound",
        };
        table.push(vec![branch.into(), e.n.into(), e.l.into(), e.frequency.into(), hz(e.frequency).into()]);
    }
    Ok(table)
}

pub fn spectrum(cfg: &RunConfig, l_max: u32, n_max: u32) -> CliResult<()> {
    if l_max < 2 {
        return Err(CliError::Usage("l_max must be at least 2".into()));
    }
    finish(cfg, &spectrum_table(&configured_drop(cfg)?, l_max, n_max)?)
}

pub fn couplings(cfg: &RunConfig, distortion: f64) -> CliResult<()> {
    if !(distortion > 0.0 && distortion < 1.0) {
        return Err(CliError::Usage("distortion must lie in (0, 1)".into()));
    }
    let drop = configured_drop(cfg)?;
    let wgm = WgmMode::equatorial(&drop, cfg.wavelength, cfg.q_opt)?;
    let omega_vib = modes::surface_mode_frequency(&drop, 2);
    let g0 = coupling_g0(&drop, &wgm)?;
    let zpf = zpf_amplitude(&drop);
    let split = wgm_splitting(&drop, estimate_l(&drop, cfg.wavelength), distortion * drop.radius(), cfg.wavelength)?;
    let gl = g_l(&drop, &wgm);

    let mut t = Table::quantities();
    t.quantity("omega_vib", omega_vib, "rad/s");
    t.quantity("f_vib", hz(omega_vib), "Hz");
    t.quantity("x_zpf", zpf.x_zpf, "m");
    t.quantity("delta_r_zpf", zpf.delta_r_zpf, "m");
    t.quantity("wgm_l", wgm.l, "");
    t.quantity("omega_opt", wgm.frequency(), "rad/s");
    t.quantity("g0", g0, "rad/s");
    t.quantity("g0_hz", hz(g0), "Hz");
    t.quantity("g0_over_omega_vib", g0 / omega_vib, "");
    t.quantity("fsr", split.fsr, "rad/s");
    t.quantity("fsr_hz", free_spectral_range_hz(&drop), "Hz");
    t.quantity("splitting_bandwidth", split.bandwidth, "rad/s");
    t.quantity("splitting_bandwidth_hz", hz(split.bandwidth), "Hz");
    t.quantity("bandwidth_over_fsr", split.bandwidth_over_fsr, "");
    t.quantity("g_L", gl, "rad/s");
    t.quantity("g_L_over_omega_opt", gl / wgm.frequency(), "");
    t.quantity("moment_of_inertia", drop.moment_of_inertia(), "kg m^2");
    for c in reference_constants(&drop) {
        t.quantity(c.label, c.value, c.units);
    }
    finish(cfg, &t)
}

pub fn qfactors(cfg: &RunConfig, quadrature: bool) -> CliResult<()> {
    let drop = configured_drop(cfg)?;
    let optical = q_total(&drop, cfg.wavelength)?;
    let mech = classify_regime(&drop)?;

    let mut t = Table::quantities();
    t.quantity("q_surface", optical.q_surface, "");
    if quadrature {
        t.quantity("q_surface_quadrature", q_surface_scattering_quadrature(&drop, cfg.wavelength)?, "");
    }
    t.quantity("q_radiative", optical.q_radiative, "");
    t.quantity("q_bulk", optical.q_bulk_floor, "");
    t.quantity("q_opt_total", optical.q_total, "");
    t.quantity("optical_dominant", label(&optical.dominant), "");
    t.quantity("mech_regime", label(&mech.regime), "");
    t.quantity("q_mech", mech.q_mech, "");
    if let Some((lo, hi)) = mech.q_bounds {
        t.quantity("q_mech_lower_bound", lo, "");
        t.quantity("q_mech_upper_bound", hi, "");
    }
    t.quantity("mech_dominant", label(&mech.dominant_channel), "");
    t.quantity("phonon_mean_free_path", mech.mean_free_path, "m");
    t.quantity("q_ripplon_phonon", q_ripplon_phonon(&drop, &surface_mode(&drop, 2, 0)?)?, "");
    if let Ok(q) = q_viscous(&drop, 2) {
        t.quantity("q_viscous", q, "");
    }
    finish(cfg, &t)
}

/// Snake-case name of a serialisable enum variant, as it appears in JSON.
pub fn label<E: serde::Serialize>(v: &E) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}
