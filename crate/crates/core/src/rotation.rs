//! Quantum non-demolition readout of the drop's angular momentum through the
//! rotational bulge, and the competing noise sources.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evap::evaporation_rate;
use crate::modes::Drop;
use crate::optics::WgmMode;
use crate::scalar::Real;

/// Default fraction of probe photons scattered stochastically.
pub const DEFAULT_SCATTER_FRACTION: f64 = 0.1;

/// Rotational flattening of the equator, `δR = (ρ/σ) R⁴ Ω²/24`.
pub fn rotational_bulge<T: Real>(drop: &Drop<T>, omega_z: T) -> Result<T> {
    let iso = &drop.iso;
    let r = drop.radius();
    let dr = iso.density / iso.surface_tension * r.powi(4) * omega_z * omega_z / T::lit(24.0);
    let ratio = dr / r;
    if ratio > T::lit(0.1) {
        return Err(Error::InstabilityGuard { ratio: ratio.as_f64() });
    }
    Ok(dr)
}

/// `L_z = I Ω_z`.
pub fn angular_momentum<T: Real>(drop: &Drop<T>, omega_z: T) -> T {
    drop.moment_of_inertia() * omega_z
}

/// Quadratic opto-rotational coupling `g_L = ω (ħ²/ρσR⁷)(1/24)(15/8π)²`.
pub fn g_l<T: Real>(drop: &Drop<T>, wgm: &WgmMode<T>) -> T {
    let iso = &drop.iso;
    let hbar = iso.constants().hbar;
    let shape = T::lit(15.0) / (T::lit(8.0) * T::PI());
    wgm.frequency() * hbar * hbar / (iso.density * iso.surface_tension * drop.radius().powi(7))
        / T::lit(24.0)
        * shape
        * shape
}

/// Optical detuning `2 g_L L_z/ħ` in rad/s.
pub fn detuning_per_quantum<T: Real>(drop: &Drop<T>, wgm: &WgmMode<T>, l_z: T) -> Result<T> {
    if !(l_z >= T::zero()) {
        return Err(Error::InvalidInput("L_z must be non-negative".into()));
    }
    Ok(T::lit(2.0) * g_l(drop, wgm) * l_z / drop.iso.constants().hbar)
}

/// Photons per second carried by `power` at the mode frequency.
pub fn photon_flux<T: Real>(wgm: &WgmMode<T>, power: T) -> T {
    power / (T::lit(crate::constants::HBAR) * wgm.frequency())
}

/// Angular-momentum imprecision `√S_L` in units of `ħ/√Hz`.
pub fn imprecision_sqrt_s_l<T: Real>(drop: &Drop<T>, wgm: &WgmMode<T>, photon_flux: T, l_z: T) -> Result<T> {
    if !(photon_flux > T::zero()) {
        return Err(Error::InvalidInput("photon flux must be positive".into()));
    }
    if !(l_z > T::zero()) {
        return Err(Error::UndefinedSensitivity(
            "the coupling is quadratic in L, so there is no linear signal at L_z = 0".into(),
        ));
    }
    let hbar = drop.iso.constants().hbar;
    let lever = wgm.frequency() / (T::lit(2.0) * g_l(drop, wgm)) * hbar / l_z;
    Ok(lever / (T::lit(2.0) * wgm.q_opt * photon_flux.sqrt()))
}

/// Time for the imprecision to reach the spread `√(ħL)`, `t = S_L/(ħL)`.
pub fn heisenberg_resolution_time<T: Real>(drop: &Drop<T>, wgm: &WgmMode<T>, photon_flux: T, l: T) -> Result<T> {
    if !(l > T::zero()) {
        return Err(Error::InvalidInput("L must be positive".into()));
    }
    let s = imprecision_sqrt_s_l(drop, wgm, photon_flux, l)?;
    Ok(s * s * drop.iso.constants().hbar / l)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseTerms<T> {
    /// Atoms evaporated during the measurement, shot-noise spread.
    pub atom_number_spread: T,
    /// Optical shift from that spread, Hz.
    pub evap_number_shift_hz: T,
    /// Angular momentum one evaporating atom can carry off, ħ.
    pub single_atom_kick: T,
    /// Random walk of `L_z` from evaporation, ħ.
    pub evap_l_kick: T,
    /// Angular momentum per scattered photon, ħ.
    pub per_photon_kick: T,
    /// Random walk of `L_z` from photon scattering, ħ.
    pub photon_l_kick: T,
}

/// The three stochastic disturbances over a measurement of duration `t_meas`.
pub fn noise_budget<T: Real>(
    drop: &Drop<T>,
    wgm: &WgmMode<T>,
    input_power: T,
    scatter_fraction: T,
    t_meas: T,
) -> Result<NoiseTerms<T>> {
    if !(t_meas > T::zero()) {
        return Err(Error::InvalidInput("t_meas must be positive".into()));
    }
    if !(scatter_fraction >= T::zero() && scatter_fraction <= T::one()) {
        return Err(Error::InvalidInput("scatter fraction must lie in [0, 1]".into()));
    }
    let iso = &drop.iso;
    let c = iso.constants();
    let r = drop.radius();
    let gamma = evaporation_rate(drop)?;
    let spread = (gamma * t_meas).sqrt();
    let delta_r = spread * iso.atomic_mass / iso.density / (T::lit(4.0) * T::PI() * r * r);
    let nu_opt = wgm.frequency() / T::TAU();
    let v_bar = (T::lit(2.0) * c.k_b * drop.temperature() / iso.atomic_mass).sqrt();
    let single = iso.atomic_mass * v_bar * r / c.hbar;
    let per_photon = r * wgm.k0();
    let photons = scatter_fraction * photon_flux(wgm, input_power) * t_meas;
    Ok(NoiseTerms {
        atom_number_spread: spread,
        evap_number_shift_hz: nu_opt * delta_r / r,
        single_atom_kick: single,
        evap_l_kick: spread * single,
        per_photon_kick: per_photon,
        photon_l_kick: photons.sqrt() * per_photon,
    })
}

/// Complete readout budget for a drop spinning at `Ω_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QndBudget<T> {
    /// rad/s
    pub g_l: T,
    /// `L_z/ħ`
    pub l_over_hbar: T,
    /// rad/s
    pub detuning: T,
    /// ħ/√Hz
    pub sqrt_s_l: T,
    /// Heisenberg-limited spread `√(ħL)`, ħ.
    pub heisenberg_spread: T,
    /// s
    pub t_meas: T,
    pub noise: NoiseTerms<T>,
}

impl<T: Real> QndBudget<T> {
    /// True when every angular-momentum disturbance stays below the Heisenberg spread.
    pub fn noise_below_spread(&self) -> bool {
        let n = &self.noise;
        [n.single_atom_kick, n.evap_l_kick, n.per_photon_kick, n.photon_l_kick]
            .iter()
            .all(|&k| k < self.heisenberg_spread)
    }
}

/// Evaluates the readout chain and the noise terms at the resolution time.
pub fn qnd_budget<T: Real>(
    drop: &Drop<T>,
    wgm: &WgmMode<T>,
    l_z: T,
    input_power: T,
    scatter_fraction: T,
) -> Result<QndBudget<T>> {
    if !(input_power > T::zero()) {
        return Err(Error::InvalidInput("input power must be positive".into()));
    }
    let hbar = drop.iso.constants().hbar;
    let flux = photon_flux(wgm, input_power);
    let sqrt_s_l = imprecision_sqrt_s_l(drop, wgm, flux, l_z)?;
    let t_meas = heisenberg_resolution_time(drop, wgm, flux, l_z)?;
    Ok(QndBudget {
        g_l: g_l(drop, wgm),
        l_over_hbar: l_z / hbar,
        detuning: detuning_per_quantum(drop, wgm, l_z)?,
        sqrt_s_l,
        heisenberg_spread: (l_z / hbar).sqrt(),
        t_meas,
        noise: noise_budget(drop, wgm, input_power, scatter_fraction, t_meas)?,
    })
}

/// `L_z² − (L_x² + L_y²)/3`, the combination the optical readout is sensitive to.
pub fn measured_operator_value<T: Real>(l_x: T, l_y: T, l_z: T) -> T {
    l_z * l_z - (l_x * l_x + l_y * l_y) / T::lit(3.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceConstant<T> {
    pub label: &'static str,
    pub value: T,
    pub units: &'static str,
}

/// Quoted reference scales: Fizeau coupling, optical spring per photon, and
/// the angular momentum of a single quantised vortex line (`N ħ`).
pub fn reference_constants<T: Real>(drop: &Drop<T>) -> Vec<ReferenceConstant<T>> {
    vec![
        ReferenceConstant {
            label: "fizeau_coupling",
            value: T::TAU() * T::lit(1e-20),
            units: "rad/s",
        },
        ReferenceConstant {
            label: "optical_spring_per_photon",
            value: T::TAU(),
            units: "rad/s",
        },
        ReferenceConstant {
            label: "vortex_angular_momentum",
            value: drop.atom_count(),
            units: "hbar",
        },
    ]
}
