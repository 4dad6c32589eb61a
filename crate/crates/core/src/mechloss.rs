//! Mechanical damping of surface modes and the temperature-regime classifier.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heprops::{viscosity_he3, Isotope};
use crate::modes::{surface_mode_frequency, Drop, SurfaceMode};
use crate::scalar::Real;

/// Reference length at which the phonon mean free path equals 1 mm (0.4 K).
pub const MEAN_FREE_PATH_REF_M: f64 = 1e-3;
pub const MEAN_FREE_PATH_REF_K: f64 = 0.4;
/// Upper edge of the ⁴He hydrodynamic window, where the measured Q peaks.
pub const HYDRODYNAMIC_PEAK_K: f64 = 1.2;
pub const HYDRODYNAMIC_Q_BOUNDS: (f64, f64) = (1e2, 1.2e3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    VaporDominated,
    ViscousHydrodynamic,
    BallisticRipplonPhonon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MechChannel {
    RipplonPhonon,
    ChandrasekharViscous,
    HydrodynamicWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MechLossReport<T> {
    pub regime: Regime,
    /// Point estimate; for the bounded ⁴He window this is the upper bound.
    pub q_mech: T,
    /// Interval reported instead of a curve where only bounds are known.
    pub q_bounds: Option<(T, T)>,
    pub dominant_channel: MechChannel,
    pub mean_free_path: T,
}

/// How a surface mode of index `l` is assigned a planar ripplon wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RipplonWavenumber {
    /// `k = (l(l−1)(l+2))^{1/3}/R`: the planar dispersion `ω² = σk³/ρ` then
    /// returns the Rayleigh frequency for every `l` (`k = 2/R` at `l = 2`).
    #[default]
    DispersionMatched,
    /// `k = √(l(l+2))/R`.
    Angular,
}

impl RipplonWavenumber {
    pub fn wavenumber<T: Real>(self, l: u32, radius: T) -> T {
        let l = T::int(l as i64);
        match self {
            Self::DispersionMatched => (l * (l - T::one()) * (l + T::lit(2.0))).cbrt() / radius,
            Self::Angular => (l * (l + T::lit(2.0))).sqrt() / radius,
        }
    }
}

/// Ripplon–phonon–phonon scattering,
/// `1/Q = (π²/90)(ħk/ρω)(k_B T/ħ v_s)⁴`.
pub fn q_ripplon_phonon<T: Real>(drop: &Drop<T>, mode: &SurfaceMode<T>) -> Result<T> {
    q_ripplon_phonon_with(drop, mode, RipplonWavenumber::default())
}

pub fn q_ripplon_phonon_with<T: Real>(
    drop: &Drop<T>,
    mode: &SurfaceMode<T>,
    k_rule: RipplonWavenumber,
) -> Result<T> {
    let t = drop.temperature();
    if !(t > T::zero()) {
        return Err(Error::InvalidInput("ripplon-phonon damping needs T > 0".into()));
    }
    if mode.l < 2 {
        return Err(Error::InvalidInput("mode must lie on the surface branch".into()));
    }
    let c = drop.iso.constants();
    let k = k_rule.wavenumber(mode.l, drop.radius());
    let omega = mode.frequency;
    let thermal = (c.k_b * t / (c.hbar * drop.iso.sound_speed)).powi(4);
    let inv_q = T::PI() * T::PI() / T::lit(90.0) * c.hbar * k / (drop.iso.density * omega) * thermal;
    Ok(inv_q.recip())
}

/// Chandrasekhar viscous damping of normal-fluid ³He,
/// `1/Q = μ(l−1)(2l+1)/(ωR²ρ)`.
pub fn q_viscous<T: Real>(drop: &Drop<T>, l: u32) -> Result<T> {
    if drop.iso.isotope != Isotope::He3 {
        return Err(Error::UnsupportedRegime(
            "viscous damping model applies to normal-fluid ³He".into(),
        ));
    }
    if l < 2 {
        return Err(Error::InvalidInput("surface modes start at l = 2".into()));
    }
    let mu = viscosity_he3(drop.temperature())?;
    let li = T::int(l as i64);
    let omega = surface_mode_frequency(drop, l);
    let r = drop.radius();
    let inv_q = mu * (li - T::one()) * (T::lit(2.0) * li + T::one()) / (omega * r * r * drop.iso.density);
    Ok(inv_q.recip())
}

/// Thermal phonon mean free path `Λ = 1 mm · (0.4 K / T)⁴`.
pub fn mean_free_path<T: Real>(t: T) -> T {
    T::lit(MEAN_FREE_PATH_REF_M) * (T::lit(MEAN_FREE_PATH_REF_K) / t).powi(4)
}

/// Chooses the damping regime of the `l = 2` mode and evaluates its Q.
pub fn classify_regime<T: Real>(drop: &Drop<T>) -> Result<MechLossReport<T>> {
    let t = drop.temperature();
    if !(t > T::zero()) {
        return Err(Error::InvalidInput("regime classification needs T > 0".into()));
    }
    let lambda = mean_free_path(t);
    match drop.iso.isotope {
        Isotope::He4 => {
            if lambda > drop.radius() {
                let mode = crate::modes::surface_mode(drop, 2, 0)?;
                Ok(MechLossReport {
                    regime: Regime::BallisticRipplonPhonon,
                    q_mech: q_ripplon_phonon(drop, &mode)?,
                    q_bounds: None,
                    dominant_channel: MechChannel::RipplonPhonon,
                    mean_free_path: lambda,
                })
            } else {
                let (lo, hi) = HYDRODYNAMIC_Q_BOUNDS;
                let regime = if t <= T::lit(HYDRODYNAMIC_PEAK_K) {
                    Regime::ViscousHydrodynamic
                } else {
                    Regime::VaporDominated
                };
                Ok(MechLossReport {
                    regime,
                    q_mech: T::lit(hi),
                    q_bounds: Some((T::lit(lo), T::lit(hi))),
                    dominant_channel: MechChannel::HydrodynamicWindow,
                    mean_free_path: lambda,
                })
            }
        }
        Isotope::He3 => Ok(MechLossReport {
            regime: Regime::ViscousHydrodynamic,
            q_mech: q_viscous(drop, 2)?,
            q_bounds: None,
            dominant_channel: MechChannel::ChandrasekharViscous,
            mean_free_path: lambda,
        }),
    }
}
