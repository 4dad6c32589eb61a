//! Rotation-vibration runs in radius units (`R = ρ = σ = 1`).

use std::path::Path;

use hedrop::numerics::ode::Method;
use hedrop::rovib::{integrate_with, linearized_spectrum, DeformationAmplitudes, EulerAngles, RotorVibState, RovibParams};
use num_complex::Complex;
use serde::Deserialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{emit, json_text};

/// Initial state file. Amplitudes are `[re, im]` pairs ordered `m = −2..=2`;
/// omitted fields are zero.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateFile {
    pub euler: [f64; 3],
    pub euler_rates: [f64; 3],
    pub x_rot: [[f64; 2]; 5],
    pub x_rot_rates: [[f64; 2]; 5],
}

impl StateFile {
    pub fn to_state(&self) -> RotorVibState<f64> {
        let amps = |x: &[[f64; 2]; 5]| DeformationAmplitudes {
            x: x.map(|[re, im]| Complex::new(re, im)),
        };
        RotorVibState {
            euler: EulerAngles::new(self.euler[0], self.euler[1], self.euler[2]),
            euler_rates: self.euler_rates,
            x_rot: amps(&self.x_rot),
            x_rot_rates: amps(&self.x_rot_rates),
        }
    }
}

fn read_state(path: &Path) -> CliResult<RotorVibState<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read state {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("state {}: {e}", path.display())))?;
    let state = file.to_state();
    state.validate()?;
    Ok(state)
}

pub fn run(
    cfg: &RunConfig,
    state: Option<&Path>,
    t_end: f64,
    tol: f64,
    samples: usize,
    linearize_at: Option<f64>,
) -> CliResult<()> {
    if !(t_end > 0.0) || samples == 0 {
        return Err(CliError::Usage("t_end and samples must be positive".into()));
    }
    if !(tol > 1e-12 && tol < 1e-3) {
        return Err(CliError::Usage(format!("tol {tol} outside (1e-12, 1e-3)")));
    }
    let st = match state {
        Some(p) => read_state(p)?,
        None => RotorVibState::default(),
    };
    let params = RovibParams::dimensionless();
    let times: Vec<f64> = (0..=samples).map(|i| t_end * i as f64 / samples as f64).collect();
    let tr = integrate_with(&st, &params, &times, tol, Method::Dop853)?;
    if let Some(path) = cfg.output.as_deref() {
        emit(&tr.to_csv(), Some(path))?;
    }

    let mut summary = json!({
        "units": "R = rho = sigma = 1",
        "omega_vib": params.omega_vib(),
        "t_end": t_end,
        "tol": tol,
        "samples": tr.samples.len(),
        "max_energy_drift": tr.max_energy_drift(),
        "max_angular_momentum_drift": tr.max_angular_momentum_drift(),
        "steps": {"accepted": tr.stats.accepted, "rejected": tr.stats.rejected},
    });
    if let Some(ratio) = linearize_at {
        if !(ratio >= 0.0) {
            return Err(CliError::Usage("--omega must be non-negative".into()));
        }
        let bryan = linearized_spectrum(ratio * params.omega_vib(), &params)?;
        summary["bryan"] = json!({
            "m": [-2, -1, 0, 1, 2],
            "omega_z": bryan.omega_z,
            "frequencies": bryan.frequencies,
            "slopes": bryan.slopes,
            "lab_slopes": bryan.lab_slopes(),
            "multiplicity": bryan.multiplicity,
            "block_leakage": bryan.block_leakage,
        });
    }
    emit(&json_text(&summary)?, None)
}
