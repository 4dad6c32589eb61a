//! Surface (ripplon) and bulk (compressional) mode spectra of a drop.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heprops::IsotopeProperties;
use crate::numerics::bessel::spherical_jn_zero;
use crate::scalar::Real;

/// A levitated drop of one isotope at a uniform temperature.
#[derive(Debug, Clone)]
pub struct Drop<T> {
    pub iso: Arc<IsotopeProperties<T>>,
    radius: T,
    temperature: T,
}

impl<T: Real> Drop<T> {
    pub fn new(iso: Arc<IsotopeProperties<T>>, radius: T, temperature: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("radius {radius} m must be positive")));
        }
        if !(temperature >= T::zero()) || !temperature.is_finite() {
            return Err(Error::InvalidInput(format!(
                "temperature {temperature} K must be non-negative"
            )));
        }
        Ok(Self {
            iso,
            radius,
            temperature,
        })
    }

    /// Drop holding `n` atoms.
    pub fn from_atom_count(iso: Arc<IsotopeProperties<T>>, n: T, temperature: T) -> Result<Self> {
        if !(n > T::zero()) {
            return Err(Error::InvalidInput(format!("atom count {n} must be positive")));
        }
        let r = (T::lit(3.0) * n * iso.atomic_mass / (T::lit(4.0) * T::PI() * iso.density)).cbrt();
        Self::new(iso, r, temperature)
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn temperature(&self) -> T {
        self.temperature
    }

    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(self.iso.clone(), radius, self.temperature)
    }

    pub fn with_temperature(&self, temperature: T) -> Result<Self> {
        Self::new(self.iso.clone(), self.radius, temperature)
    }

    /// `N = (4π/3) R³ ρ / m`.
    pub fn atom_count(&self) -> T {
        T::lit(4.0 / 3.0) * T::PI() * self.radius.powi(3) * self.iso.density / self.iso.atomic_mass
    }

    pub fn mass(&self) -> T {
        T::lit(4.0 / 3.0) * T::PI() * self.radius.powi(3) * self.iso.density
    }

    /// `I = (8π/15) ρ R⁵`.
    pub fn moment_of_inertia(&self) -> T {
        T::lit(8.0 / 15.0) * T::PI() * self.iso.density * self.radius.powi(5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceMode<T> {
    pub l: u32,
    pub m: i32,
    /// rad/s
    pub frequency: T,
    /// Zero-point amplitude of the mode coordinate, m. Set for `l = 2`.
    pub zpf: Option<T>,
    /// Equatorial radius fluctuation, m. Set for `l = 2`.
    pub equator_zpf: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SoundMode<T> {
    pub n: u32,
    pub l: u32,
    /// rad/s
    pub frequency: T,
    /// 1/m
    pub wavenumber: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zpf<T> {
    /// `X_ZPF`, m
    pub x_zpf: T,
    /// `δR_ZPF`, m
    pub delta_r_zpf: T,
}

/// Rayleigh capillary frequency `√(l(l−1)(l+2) σ / (ρ R³))`; zero for `l < 2`.
pub fn surface_mode_frequency<T: Real>(drop: &Drop<T>, l: u32) -> T {
    let l = l as i64;
    let shape = T::int(l * (l - 1) * (l + 2));
    if shape <= T::zero() {
        return T::zero();
    }
    (shape * drop.iso.surface_tension / (drop.iso.density * drop.radius.powi(3))).sqrt()
}

/// Fully specified surface mode. Rejects `l < 2` and `|m| > l`.
pub fn surface_mode<T: Real>(drop: &Drop<T>, l: u32, m: i32) -> Result<SurfaceMode<T>> {
    if l < 2 {
        return Err(Error::InvalidInput(format!("surface modes start at l = 2, got {l}")));
    }
    if m.unsigned_abs() > l {
        return Err(Error::InvalidInput(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let (zpf, equator_zpf) = if l == 2 {
        let z = zpf_amplitude(drop);
        (Some(z.x_zpf), Some(z.delta_r_zpf))
    } else {
        (None, None)
    };
    Ok(SurfaceMode {
        l,
        m,
        frequency: surface_mode_frequency(drop, l),
        zpf,
        equator_zpf,
    })
}

/// Compressional mode with a pressure node at the free surface: `j_l(kR) = 0`.
pub fn sound_mode_frequency<T: Real>(drop: &Drop<T>, n: u32, l: u32) -> Result<SoundMode<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("radial index n starts at 1".into()));
    }
    let x: T = spherical_jn_zero(l, n)?;
    let k = x / drop.radius;
    Ok(SoundMode {
        n,
        l,
        frequency: drop.iso.sound_speed * k,
        wavenumber: k,
    })
}

/// Zero-point amplitudes of the `l = 2` mode: `X = √(ħω/8σ)`, `δR = √(5/16π) X`.
pub fn zpf_amplitude<T: Real>(drop: &Drop<T>) -> Zpf<T> {
    let hbar = drop.iso.constants().hbar;
    let omega = surface_mode_frequency(drop, 2);
    let x_zpf = (hbar * omega / (T::lit(8.0) * drop.iso.surface_tension)).sqrt();
    Zpf {
        x_zpf,
        delta_r_zpf: equator_factor::<T>() * x_zpf,
    }
}

/// `√(5/16π)`, the equatorial value of the normalised `m = 0` quadrupole.
pub fn equator_factor<T: Real>() -> T {
    (T::lit(5.0) / (T::lit(16.0) * T::PI())).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Surface,
    Sound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry<T> {
    pub branch: Branch,
    /// 0 on the surface branch, radial index on sound branches.
    pub n: u32,
    pub l: u32,
    /// rad/s
    pub frequency: T,
}

/// Surface branch `l = 2..=l_max` followed by sound branches `n = 1..=n_max`, `l = 0..=l_max`.
pub fn spectrum<T: Real>(drop: &Drop<T>, l_max: u32, n_max: u32) -> Result<Vec<SpectrumEntry<T>>> {
    let mut out = Vec::new();
    for l in 2..=l_max {
        out.push(SpectrumEntry {
            branch: Branch::Surface,
            n: 0,
            l,
            frequency: surface_mode_frequency(drop, l),
        });
    }
    for n in 1..=n_max {
        for l in 0..=l_max {
            out.push(SpectrumEntry {
                branch: Branch::Sound,
                n,
                l,
                frequency: sound_mode_frequency(drop, n, l)?.frequency,
            });
        }
    }
    Ok(out)
}
