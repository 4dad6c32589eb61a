//! Evaporative self-cooling of a drop in vacuum.
//!
//! `dT/dt = (−Γ ΔE + P_load)/C(N, T)` and `dN/dt = −Γ`, with the effusion
//! rate `Γ = 4πR² P_vap / √(2π m k_B T)` at unit accommodation.

use std::sync::Arc;

use serde::Serialize;

use crate::constants::C_LIGHT;
use crate::error::{Error, IntegrationFailure, Result};
use crate::heprops::IsotopeProperties;
use crate::modes::Drop;
use crate::numerics::ode::{integrate_until, Method, OdeOptions, OdeStats, Solution};
use crate::numerics::roots::bisect;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoolingState<T> {
    /// s
    pub t: T,
    /// K
    pub temperature: T,
    pub atoms: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoolingSample<T> {
    pub t: T,
    pub temperature: T,
    pub atoms: T,
    /// m
    pub radius: T,
    /// atoms/s
    pub evaporation_rate: T,
    /// W
    pub cooling_power: T,
    /// Optical resonance drift from radius loss, Hz/s.
    pub drift_hz_per_s: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoolingTrajectory<T> {
    pub samples: Vec<CoolingSample<T>>,
    pub stats: OdeStats,
}

impl<T: Real> CoolingTrajectory<T> {
    pub const CSV_HEADER: &'static str = "t_s,T_K,N,R_m,Gamma_per_s,Pcool_W,drift_Hz_per_s";

    /// Sample at exactly time `t`, if it was requested.
    pub fn at(&self, t: T) -> Option<&CoolingSample<T>> {
        self.samples.iter().find(|s| s.t == t)
    }

    /// One CSV row per sample; values use the shortest round-trip representation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            let row = [
                s.t,
                s.temperature,
                s.atoms,
                s.radius,
                s.evaporation_rate,
                s.cooling_power,
                s.drift_hz_per_s,
            ]
            .map(|v| format!("{:?}", v.as_f64()))
            .join(",");
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

/// Settings beyond the required physical inputs.
#[derive(Debug, Clone)]
pub struct CoolingOptions<T> {
    /// First logarithmic sample time, s.
    pub t_first: T,
    pub samples_per_decade: u32,
    /// Additional sample times merged into the logarithmic grid.
    pub extra_times: Vec<T>,
    /// Optical wavelength used for the drift column, m.
    pub wavelength: T,
    pub method: Method,
}

impl<T: Real> Default for CoolingOptions<T> {
    fn default() -> Self {
        Self {
            t_first: T::lit(1e-3),
            samples_per_decade: 10,
            extra_times: Vec::new(),
            wavelength: T::lit(1e-6),
            method: Method::DormandPrince54,
        }
    }
}

/// Effusion rate in atoms/s.
pub fn evaporation_rate<T: Real>(drop: &Drop<T>) -> Result<T> {
    let iso = &drop.iso;
    let t = drop.temperature();
    let p = iso.vapor_pressure(t)?;
    let r = drop.radius();
    let flux = p / (T::TAU() * iso.atomic_mass * iso.constants().k_b * t).sqrt();
    Ok(T::lit(4.0) * T::PI() * r * r * flux)
}

/// Evaporative cooling power `ΔE·Γ` in W.
pub fn cooling_power<T: Real>(drop: &Drop<T>) -> Result<T> {
    Ok(drop.iso.latent_heat(drop.temperature())? * evaporation_rate(drop)?)
}

/// Fractional radius loss rate `|dR/dt|/R = Γ/(3N)`.
fn radius_loss_rate<T: Real>(drop: &Drop<T>, gamma: T) -> T {
    gamma / (T::lit(3.0) * drop.atom_count())
}

fn optical_frequency_hz<T: Real>(wavelength: T) -> T {
    T::lit(C_LIGHT) / wavelength
}

/// Log-spaced sample grid from `t_first` to `t_end`, merged with `extra`.
pub fn sample_times<T: Real>(t_first: T, t_end: T, per_decade: u32, extra: &[T]) -> Vec<T> {
    let mut times = Vec::new();
    let per = per_decade.max(1) as i64;
    let e0 = t_first.log10();
    let e1 = t_end.log10();
    let k0 = (e0 * T::int(per)).floor().to_i64().unwrap_or(0);
    let mut k = k0;
    loop {
        let e = T::int(k) / T::int(per);
        if e > e1 {
            break;
        }
        let t = T::lit(10.0).powf(e);
        if t >= t_first && t < t_end {
            times.push(t);
        }
        k += 1;
    }
    times.push(t_end);
    times.extend(extra.iter().copied().filter(|&x| x > T::zero() && x <= t_end));
    times.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    times.dedup();
    times
}

/// Integrates with the default sampling (`1 ms` onward, 10 points per decade).
pub fn integrate_cooling<T: Real>(
    initial: CoolingState<T>,
    iso: Arc<IsotopeProperties<T>>,
    heat_load: T,
    t_end: T,
    tol: T,
) -> Result<CoolingTrajectory<T>, IntegrationFailure<CoolingTrajectory<T>>> {
    integrate_cooling_with(initial, iso, heat_load, t_end, tol, &CoolingOptions::default())
}

pub fn integrate_cooling_with<T: Real>(
    initial: CoolingState<T>,
    iso: Arc<IsotopeProperties<T>>,
    heat_load: T,
    t_end: T,
    tol: T,
    options: &CoolingOptions<T>,
) -> Result<CoolingTrajectory<T>, IntegrationFailure<CoolingTrajectory<T>>> {
    let empty = |error: Error| IntegrationFailure {
        partial: CoolingTrajectory {
            samples: Vec::new(),
            stats: OdeStats::default(),
        },
        error,
    };
    if !(t_end > initial.t) {
        return Err(empty(Error::InvalidInput("t_end must exceed the initial time".into())));
    }
    if !(tol > T::lit(1e-12) && tol < T::lit(1e-2)) {
        return Err(empty(Error::InvalidInput(format!(
            "tolerance {tol} outside (1e-12, 1e-2)"
        ))));
    }
    if !(initial.temperature > T::zero() && initial.atoms > T::zero()) {
        return Err(empty(Error::InvalidInput("initial T and N must be positive".into())));
    }
    if !(heat_load >= T::zero()) {
        return Err(empty(Error::InvalidInput("heat load must be non-negative".into())));
    }

    let n0 = initial.atoms;
    let rhs = |_t: T, y: &[T; 2]| -> Result<[T; 2]> {
        let (temp, atoms) = (y[0], y[1] * n0);
        let drop = Drop::from_atom_count(iso.clone(), atoms, temp)?;
        let gamma = evaporation_rate(&drop)?;
        let de = iso.latent_heat(temp)?;
        let c = iso.specific_heat(atoms, temp)?;
        Ok([(heat_load - gamma * de) / c, -gamma / n0])
    };

    let times: Vec<T> = sample_times(
        options.t_first,
        t_end - initial.t,
        options.samples_per_decade,
        &options.extra_times,
    )
    .into_iter()
    .map(|s| initial.t + s)
    .collect();
    // local error control one decade tighter than `tol`, so that `tol` bounds the
    // accumulated error across the many short segments between table knots
    let local = tol / T::lit(10.0);
    let opts = OdeOptions::with_tolerance(local, local * T::lit(1e-3));
    let sample = |t: T, y: &[T; 2]| -> Result<CoolingSample<T>> {
        let drop = Drop::from_atom_count(iso.clone(), y[1] * n0, y[0])?;
        let gamma = evaporation_rate(&drop)?;
        Ok(CoolingSample {
            t,
            temperature: y[0],
            atoms: y[1] * n0,
            radius: drop.radius(),
            evaporation_rate: gamma,
            cooling_power: gamma * iso.latent_heat(y[0])?,
            drift_hz_per_s: optical_frequency_hz(options.wavelength) * radius_loss_rate(&drop, gamma),
        })
    };
    let collect = |times: &[T], states: &[[T; 2]]| -> Result<Vec<CoolingSample<T>>> {
        times.iter().zip(states).map(|(&t, y)| sample(t, y)).collect()
    };

    let knots = table_knots(&iso);
    let mut rhs = rhs;
    let mut merged = Solution { times: Vec::new(), states: Vec::new(), stats: OdeStats::default() };
    let mut t = initial.t;
    let mut y = [initial.temperature, T::one()];
    let mut opts = opts;
    let outcome = loop {
        let remaining: Vec<T> = times.iter().copied().filter(|&s| s > t).collect();
        if remaining.is_empty() {
            break Ok(());
        }
        // stop at the next knot in the direction of travel so no step straddles a kink
        let boundary = match rhs(t, &y) {
            Ok(d) if d[0] < T::zero() => knots.iter().rev().find(|&&k| k < y[0]).map(|&k| (k, true)),
            Ok(d) if d[0] > T::zero() => knots.iter().find(|&&k| k > y[0]).map(|&k| (k, false)),
            Ok(_) => None,
            Err(e) => {
                break Err(IntegrationFailure {
                    partial: Solution { times: Vec::new(), states: Vec::new(), stats: OdeStats::default() },
                    error: Error::Integration { t: t.as_f64(), reason: e.to_string() },
                })
            }
        };
        let event = |v: &[T; 2]| match boundary {
            Some((k, true)) => v[0] - k,
            Some((k, false)) => k - v[0],
            None => T::one(),
        };
        match integrate_until(options.method, &mut rhs, t, y, &remaining, &opts, event) {
            Ok(seg) => {
                merged.times.extend(seg.solution.times);
                merged.states.extend(seg.solution.states);
                add_stats(&mut merged.stats, &seg.solution.stats);
                match (seg.stop, boundary) {
                    (Some(stop), Some((k, _))) => {
                        t = stop.t;
                        y = [k, stop.y[1]];
                        if let Some(last) = merged.states.last_mut() {
                            if merged.times.last() == Some(&t) {
                                *last = y;
                            }
                        }
                        opts.initial_step = Some(seg.next_step);
                    }
                    _ => break Ok(()),
                }
            }
            Err(fail) => break Err(fail),
        }
    };

    match outcome {
        Ok(()) => match collect(&merged.times, &merged.states) {
            Ok(samples) => Ok(CoolingTrajectory {
                samples,
                stats: merged.stats,
            }),
            Err(e) => Err(empty(e)),
        },
        Err(fail) => {
            merged.times.extend(fail.partial.times);
            merged.states.extend(fail.partial.states);
            add_stats(&mut merged.stats, &fail.partial.stats);
            let samples = collect(&merged.times, &merged.states).unwrap_or_default();
            Err(IntegrationFailure {
                partial: CoolingTrajectory {
                    samples,
                    stats: merged.stats,
                },
                error: fail.error,
            })
        }
    }
}

fn add_stats(total: &mut OdeStats, part: &OdeStats) {
    total.accepted += part.accepted;
    total.rejected += part.rejected;
    total.evaluations += part.evaluations;
}

/// Sorted union of all tabulated temperatures; the right-hand side has kinks there.
fn table_knots<T: Real>(iso: &IsotopeProperties<T>) -> Vec<T> {
    let mut k: Vec<T> = [&iso.vapor_pressure_table, &iso.latent_heat_table, &iso.specific_heat_table]
        .iter()
        .flat_map(|tab| tab.knots().map(|(t, _)| t))
        .collect();
    k.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    k.dedup();
    k
}

/// Temperature at which evaporation exactly removes `heat_load` from the drop.
pub fn steady_state_temperature<T: Real>(drop: &Drop<T>, heat_load: T) -> Result<T> {
    if !(heat_load > T::zero()) {
        return Err(Error::InvalidInput("steady state needs a positive heat load".into()));
    }
    let (_, t_max) = drop.iso.vapor_pressure_table.valid_range();
    let t_min = T::lit(0.02);
    let residual = |t: T| -> T {
        match drop.with_temperature(t).and_then(|d| cooling_power(&d)) {
            Ok(p) => (p / heat_load).ln(),
            Err(_) => T::nan(),
        }
    };
    let (lo, hi) = (residual(t_min), residual(t_max));
    if !(lo < T::zero() && hi > T::zero()) {
        return Err(Error::NoSteadyState(format!(
            "heat load {heat_load} W not balanced between {t_min} K and {t_max} K"
        )));
    }
    bisect(residual, t_min, t_max)
}

/// Quasi-static optical drift `ν_opt |dR/dt| / R` in Hz/s for a balanced heat load.
pub fn wgm_drift_rate<T: Real>(drop: &Drop<T>, heat_load: T, wavelength: T) -> Result<T> {
    let t_ss = steady_state_temperature(drop, heat_load)?;
    let balanced = drop.with_temperature(t_ss)?;
    let gamma = heat_load / balanced.iso.latent_heat(t_ss)?;
    Ok(optical_frequency_hz(wavelength) * radius_loss_rate(&balanced, gamma))
}

/// Reference load for the per-watt drift figure; small enough to stay linear.
pub const DRIFT_REFERENCE_LOAD_W: f64 = 1e-9;

/// Drift per watt of dissipated power, Hz/s/W.
pub fn wgm_drift_rate_per_watt<T: Real>(drop: &Drop<T>, wavelength: T) -> Result<T> {
    let load = T::lit(DRIFT_REFERENCE_LOAD_W);
    Ok(wgm_drift_rate(drop, load, wavelength)? / load)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heprops::Isotope;

    fn iso(i: Isotope) -> Arc<IsotopeProperties<f64>> {
        Arc::new(IsotopeProperties::bundled(i).unwrap())
    }

    #[test]
    fn rate_scales_with_area() {
        let a = evaporation_rate(&Drop::new(iso(Isotope::He4), 1e-3, 0.5).unwrap()).unwrap();
        let b = evaporation_rate(&Drop::new(iso(Isotope::He4), 2e-3, 0.5).unwrap()).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rate_vanishes_at_low_temperature() {
        let g = evaporation_rate(&Drop::new(iso(Isotope::He4), 1e-3, 0.02).unwrap()).unwrap();
        assert!(g < 1e-100);
    }

    #[test]
    fn helium_three_cools_harder() {
        for t in [0.1, 0.2, 0.3, 0.4, 0.5] {
            let p3 = cooling_power(&Drop::new(iso(Isotope::He3), 1e-3, t).unwrap()).unwrap();
            let p4 = cooling_power(&Drop::new(iso(Isotope::He4), 1e-3, t).unwrap()).unwrap();
            assert!(p3 > p4, "T = {t}");
        }
    }

    #[test]
    fn sample_grid_hits_decades_exactly() {
        let t = sample_times(1e-3_f64, 100.0, 10, &[60.0]);
        assert!(t.contains(&1.0) && t.contains(&10.0) && t.contains(&60.0) && t.contains(&100.0));
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(t[0], 1e-3);
    }

    #[test]
    fn input_validation() {
        let s = CoolingState { t: 0.0, temperature: 1.0, atoms: 1e20 };
        assert!(integrate_cooling(s, iso(Isotope::He4), 0.0, 1.0, 1e-13).is_err());
        assert!(integrate_cooling(s, iso(Isotope::He4), 0.0, -1.0, 1e-8).is_err());
        assert!(integrate_cooling(s, iso(Isotope::He4), -1.0, 1.0, 1e-8).is_err());
    }

    #[test]
    fn start_above_table_fails_with_partial() {
        let s = CoolingState { t: 0.0, temperature: 10.0, atoms: 1e20 };
        let err = integrate_cooling(s, iso(Isotope::He4), 0.0, 1.0, 1e-8).unwrap_err();
        assert!(err.partial.samples.is_empty());
        assert!(matches!(err.error, Error::Integration { .. }));
    }

    #[test]
    fn steady_state_balances_load() {
        let d = Drop::new(iso(Isotope::He4), 1e-3, 0.3).unwrap();
        let t = steady_state_temperature(&d, 1e-9).unwrap();
        let p = cooling_power(&d.with_temperature(t).unwrap()).unwrap();
        assert!((p / 1e-9 - 1.0).abs() < 1e-9);
        assert!(steady_state_temperature(&d, 1e6).is_err());
    }
}
