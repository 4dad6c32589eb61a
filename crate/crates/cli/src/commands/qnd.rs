use hedrop::optics::WgmMode;
use hedrop::rotation::{angular_momentum, qnd_budget};
use serde_json::json;

use super::configured_drop;
use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, json_text, Table};

pub fn run(cfg: &RunConfig, omega: Option<f64>, lz: Option<f64>, scatter: f64) -> CliResult<()> {
    let drop = configured_drop(cfg)?;
    let l_z = match (omega, lz) {
        (Some(w), None) => {
            if !(w > 0.0) {
                return Err(CliError::Usage("--omega must be positive".into()));
            }
            angular_momentum(&drop, w)
        }
        (None, Some(l)) => {
            if !(l > 0.0) {
                return Err(CliError::Usage("--lz must be positive".into()));
            }
            l
        }
        _ => return Err(CliError::Usage("give exactly one of --omega and --lz".into())),
    };
    if !(0.0..=1.0).contains(&scatter) {
        return Err(CliError::Usage("--scatter must lie in [0, 1]".into()));
    }
    let wgm = WgmMode::equatorial(&drop, cfg.wavelength, cfg.q_opt)?;
    let b = qnd_budget(&drop, &wgm, l_z, cfg.input_power, scatter)?;
    let n = &b.noise;
    let below = |v: f64| v < b.heisenberg_spread;

    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "isotope": cfg.isotope.label(),
            "radius_m": cfg.radius,
            "temperature_K": cfg.temperature,
            "input_power_W": cfg.input_power,
            "q_opt": cfg.q_opt,
            "scatter_fraction": scatter,
            "L_z_Js": l_z,
            "L_z_over_hbar": b.l_over_hbar,
            "g_L_rad_per_s": b.g_l,
            "g_L_over_omega_opt": b.g_l / wgm.frequency(),
            "detuning_rad_per_s": b.detuning,
            "detuning_Hz": b.detuning / std::f64::consts::TAU,
            "sqrt_S_L_hbar_per_sqrt_Hz": b.sqrt_s_l,
            "heisenberg_spread_hbar": b.heisenberg_spread,
            "t_meas_s": b.t_meas,
            "noise": {
                "atom_number_spread": n.atom_number_spread,
                "evap_number_shift_Hz": n.evap_number_shift_hz,
                "single_atom_kick_hbar": n.single_atom_kick,
                "evap_L_kick_hbar": n.evap_l_kick,
                "per_photon_kick_hbar": n.per_photon_kick,
                "photon_L_kick_hbar": n.photon_l_kick,
            },
            "below_spread": {
                "single_atom_kick": below(n.single_atom_kick),
                "evap_L_kick": below(n.evap_l_kick),
                "per_photon_kick": below(n.per_photon_kick),
                "photon_L_kick": below(n.photon_l_kick),
                "all": b.noise_below_spread(),
            },
        }))?,
        Format::Csv => {
            let mut t = Table::quantities();
            t.quantity("L_z", l_z, "J s");
            t.quantity("L_z_over_hbar", b.l_over_hbar, "");
            t.quantity("g_L", b.g_l, "rad/s");
            t.quantity("g_L_over_omega_opt", b.g_l / wgm.frequency(), "");
            t.quantity("detuning", b.detuning, "rad/s");
            t.quantity("sqrt_S_L", b.sqrt_s_l, "hbar/sqrt(Hz)");
            t.quantity("heisenberg_spread", b.heisenberg_spread, "hbar");
            t.quantity("t_meas", b.t_meas, "s");
            t.quantity("evap_number_shift", n.evap_number_shift_hz, "Hz");
            t.quantity("single_atom_kick", n.single_atom_kick, "hbar");
            t.quantity("evap_L_kick", n.evap_l_kick, "hbar");
            t.quantity("per_photon_kick", n.per_photon_kick, "hbar");
            t.quantity("photon_L_kick", n.photon_l_kick, "hbar");
            t.quantity("noise_below_spread", if b.noise_below_spread() { "pass" } else { "fail" }, "");
            t.to_csv()?
        }
    };
    emit(&text, cfg.output.as_deref())
}
