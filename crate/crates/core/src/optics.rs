//! Whispering-gallery modes, optomechanical couplings and optical loss channels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{zpf_amplitude, Drop};
use crate::numerics::quad::adaptive_simpson;
use crate::scalar::Real;

/// Quality factor assigned to bulk Brillouin scattering.
pub const Q_BULK_FLOOR: f64 = 1e13;

/// An optical whispering-gallery mode at fixed vacuum wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WgmMode<T> {
    pub l: u32,
    pub m: i32,
    pub n: u32,
    /// m
    pub wavelength: T,
    pub q_opt: T,
}

impl<T: Real> WgmMode<T> {
    pub fn new(l: u32, m: i32, n: u32, wavelength: T, q_opt: T) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::InvalidInput(format!("|m̃| = {} exceeds l̃ = {l}", m.abs())));
        }
        if n == 0 {
            return Err(Error::InvalidInput("radial index ñ starts at 1".into()));
        }
        if !(wavelength > T::zero()) || !(q_opt > T::zero()) {
            return Err(Error::InvalidInput("wavelength and Q must be positive".into()));
        }
        Ok(Self {
            l,
            m,
            n,
            wavelength,
            q_opt,
        })
    }

    /// Fundamental equatorial mode (`m̃ = l̃`, `ñ = 1`) with `l̃ ≈ 2πR n/λ`.
    pub fn equatorial(drop: &Drop<T>, wavelength: T, q_opt: T) -> Result<Self> {
        let l = estimate_l(drop, wavelength);
        Self::new(l, l as i32, 1, wavelength, q_opt)
    }

    /// `ω = 2πc/λ`
    pub fn frequency(&self) -> T {
        T::TAU() * T::lit(crate::constants::C_LIGHT) / self.wavelength
    }

    pub fn k0(&self) -> T {
        T::TAU() / self.wavelength
    }

    /// `κ = ω/Q`
    pub fn linewidth(&self) -> T {
        self.frequency() / self.q_opt
    }

    pub fn is_equatorial(&self) -> bool {
        self.m.unsigned_abs() == self.l
    }
}

/// Angular momentum index of the fundamental mode, `round(2πR n/λ)`.
pub fn estimate_l<T: Real>(drop: &Drop<T>, wavelength: T) -> u32 {
    let l = T::TAU() * drop.radius() * drop.iso.refractive_index() / wavelength;
    l.round().to_u32().unwrap_or(u32::MAX).max(1)
}

/// `½[3m̃²/(l̃(l̃+1)) − 1]`, the overlap of a WGM with the `l = 2, m = 0` deformation.
pub fn angular_factor<T: Real>(l: u32, m: i32) -> T {
    let l = T::int(l as i64);
    let m = T::int(m as i64);
    T::lit(0.5) * (T::lit(3.0) * m * m / (l * (l + T::one())) - T::one())
}

/// Bare coupling of an equatorial mode, `g₀ = ω δR_ZPF / R`.
pub fn coupling_g0<T: Real>(drop: &Drop<T>, wgm: &WgmMode<T>) -> Result<T> {
    if !wgm.is_equatorial() {
        return Err(Error::InvalidInput("g0 is defined for equatorial modes (m̃ = l̃)".into()));
    }
    Ok(wgm.frequency() * zpf_amplitude(drop).delta_r_zpf / drop.radius())
}

/// Linear coupling of an arbitrary `(l̃, m̃)` mode to an equatorial radius change `δR`.
pub fn coupling_general<T: Real>(drop: &Drop<T>, wgm: &WgmMode<T>, delta_r: T) -> T {
    wgm.frequency() * delta_r / drop.radius() * angular_factor(wgm.l, wgm.m)
}

/// Free spectral range `c/(2πR n)` in Hz.
pub fn free_spectral_range_hz<T: Real>(drop: &Drop<T>) -> T {
    T::lit(crate::constants::C_LIGHT) / (T::TAU() * drop.radius() * drop.iso.refractive_index())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Splitting<T> {
    /// `(|m̃|, shift in rad/s)` for `|m̃| = 0..=l̃`.
    pub shifts: Vec<(u32, T)>,
    /// Spread between the extreme shifts, rad/s.
    pub bandwidth: T,
    /// Free spectral range, rad/s.
    pub fsr: T,
    pub bandwidth_over_fsr: T,
}

/// Multiplet produced by a static `l = 2, m = 0` distortion with equatorial amplitude `δR`.
pub fn wgm_splitting<T: Real>(drop: &Drop<T>, l: u32, delta_r: T, wavelength: T) -> Result<Splitting<T>> {
    if l == 0 {
        return Err(Error::InvalidInput("l̃ must be positive".into()));
    }
    let omega = T::TAU() * T::lit(crate::constants::C_LIGHT) / wavelength;
    let scale = omega * delta_r / drop.radius();
    let shifts: Vec<(u32, T)> = (0..=l)
        .map(|m| (m, scale * angular_factor::<T>(l, m as i32)))
        .collect();
    let (lo, hi) = shifts
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(_, s)| (lo.min(s), hi.max(s)));
    let bandwidth = hi - lo;
    let fsr = T::TAU() * free_spectral_range_hz(drop);
    Ok(Splitting {
        shifts,
        bandwidth,
        fsr,
        bandwidth_over_fsr: bandwidth / fsr,
    })
}

/// Material inputs of the surface-scattering estimate, independent of helium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringInputs<T> {
    pub radius: T,
    pub temperature: T,
    pub surface_tension: T,
    pub dielectric: T,
    pub wavelength: T,
}

impl<T: Real> ScatteringInputs<T> {
    pub fn for_drop(drop: &Drop<T>, wavelength: T) -> Self {
        Self {
            radius: drop.radius(),
            temperature: drop.temperature(),
            surface_tension: drop.iso.surface_tension,
            dielectric: drop.iso.dielectric,
            wavelength,
        }
    }

    /// Parses `key = value` lines (`radius_m`, `temperature_K`,
    /// `surface_tension_N_per_m`, `dielectric`, `wavelength_m`); `#` starts a comment.
    pub fn from_conf(text: &str) -> Result<Self> {
        let mut vals: [Option<T>; 5] = [None; 5];
        const KEYS: [&str; 5] = [
            "radius_m",
            "temperature_K",
            "surface_tension_N_per_m",
            "dielectric",
            "wavelength_m",
        ];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { row: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key = value, got '{line}'")))?;
            let slot = KEYS
                .iter()
                .position(|k| *k == key.trim())
                .ok_or_else(|| parse_err(format!("unknown key '{}'", key.trim())))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|e| parse_err(format!("bad number '{}': {e}", value.trim())))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(parse_err(format!("{} must be positive", KEYS[slot])));
            }
            vals[slot] = Some(T::lit(v));
        }
        let get = |i: usize| {
            vals[i].ok_or_else(|| Error::InvalidInput(format!("missing key '{}'", KEYS[i])))
        };
        Ok(Self {
            radius: get(0)?,
            temperature: get(1)?,
            surface_tension: get(2)?,
            dielectric: get(3)?,
            wavelength: get(4)?,
        })
    }

    /// `Q ≈ 2R/(π k₀ √(ε−1)) · σ/(k_B T)`; infinite at `T = 0`.
    pub fn q_surface_scattering(&self) -> T {
        if self.temperature == T::zero() {
            return T::infinity();
        }
        let k0 = T::TAU() / self.wavelength;
        let kt = T::lit(crate::constants::K_B) * self.temperature;
        T::lit(2.0) * self.radius / (T::PI() * k0 * (self.dielectric - T::one()).sqrt())
            * self.surface_tension
            / kt
    }
}

/// Closed-form lower bound on the surface-scattering quality factor,
/// `Q ≈ 2R/(π k₀ √(ε−1)) · σ/(k_B T)`. Infinite at `T = 0`.
pub fn q_surface_scattering<T: Real>(drop: &Drop<T>, wavelength: T) -> T {
    ScatteringInputs::for_drop(drop, wavelength).q_surface_scattering()
}

/// Evaluates the angular outscattering integral numerically with the planar
/// ripplon spectrum `G̃(q) = 2π k_B T/(σ|q|)`, discarding `|q| < 2π/R`.
pub fn q_surface_scattering_quadrature<T: Real>(drop: &Drop<T>, wavelength: T) -> Result<T> {
    let t = drop.temperature();
    if t == T::zero() {
        return Ok(T::infinity());
    }
    let iso = &drop.iso;
    let eps = iso.dielectric;
    let r = drop.radius();
    let k0 = T::TAU() / wavelength;
    let k = iso.refractive_index() * k0;
    let k_min = T::TAU() / r;
    let g_num = T::TAU() * iso.constants().k_b * t / iso.surface_tension;
    let integrand = |theta: T| {
        let q = (k - k0 * theta.cos()).abs();
        if q < k_min {
            T::zero()
        } else {
            g_num / q
        }
    };
    let tol = T::lit(1e-10) * g_num / k;
    let integral = adaptive_simpson(integrand, T::zero(), T::PI(), tol)?;
    let phi0_sq = T::lit(2.0) * eps / (r * (eps - T::one()));
    let inv_q = phi0_sq * (eps - T::one()).powi(2) * k0 * k0 / (T::lit(8.0) * T::PI()) * integral;
    Ok(inv_q.recip())
}

/// Barrier exponent for a mode of index `n` at size parameter `x = k₀R`:
/// `x[n arccosh n − √(n²−1)]`.
pub fn wkb_exponent<T: Real>(size_parameter: T, index: T) -> T {
    size_parameter * (index * index.acosh() - (index * index - T::one()).sqrt())
}

/// Radiative (curvature) quality factor `Q = ω/(2 f_att) · e^{2T}` with
/// round-trip attempt rate `f_att = c/(2πnR)`. Order of magnitude only.
pub fn q_radiative<T: Real>(drop: &Drop<T>, wavelength: T) -> Result<T> {
    let r = drop.radius();
    if !(r > wavelength) {
        return Err(Error::UnsupportedRegime(format!(
            "radiative estimate needs R/λ > 1, got {}",
            (r / wavelength).as_f64()
        )));
    }
    let n = drop.iso.refractive_index();
    let x = T::TAU() / wavelength * r;
    let prefactor = T::PI() * T::PI() * T::lit(2.0) * n * r / wavelength;
    Ok(prefactor * (T::lit(2.0) * wkb_exponent(x, n)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LossChannel {
    Surface,
    Radiative,
    Bulk,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossBudget<T> {
    pub q_surface: T,
    pub q_radiative: T,
    pub q_bulk_floor: T,
    pub q_total: T,
    pub dominant: LossChannel,
}

/// Combines the surface, radiative and bulk channels in parallel.
pub fn q_total<T: Real>(drop: &Drop<T>, wavelength: T) -> Result<LossBudget<T>> {
    let q_surface = q_surface_scattering(drop, wavelength);
    let q_radiative = q_radiative(drop, wavelength)?;
    let q_bulk_floor = T::lit(Q_BULK_FLOOR);
    let q_total = (q_surface.recip() + q_radiative.recip() + q_bulk_floor.recip()).recip();
    let channels = [
        (LossChannel::Surface, q_surface),
        (LossChannel::Radiative, q_radiative),
        (LossChannel::Bulk, q_bulk_floor),
    ];
    let dominant = channels
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|c| c.0)
        .unwrap_or(LossChannel::Surface);
    Ok(LossBudget {
        q_surface,
        q_radiative,
        q_bulk_floor,
        q_total,
        dominant,
    })
}

/// Rotating-frame shift `−mΩ/2` of the `l = 2` surface mode with azimuthal index `m`.
pub fn bryan_shift<T: Real>(m: i32, omega: T) -> Result<T> {
    if m.abs() > 2 {
        return Err(Error::InvalidInput(format!("|m| = {} exceeds 2", m.abs())));
    }
    Ok(-omega * T::int(m as i64) / T::lit(2.0))
}
