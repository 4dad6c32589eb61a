//! Rigid rotation coupled to `l = 2` surface vibrations.
//!
//! Lengths are measured in units of the drop radius. [`RovibParams::dimensionless`]
//! additionally sets `ρ = σ = 1`, so the vibration frequency is `√8` and
//! the moment of inertia `8π/15`; [`RovibScales`] converts back to SI.

mod audit;
mod basis;
mod dynamics;
mod integrate;
mod linearize;

pub use audit::{
    action_residual, coordinate_accelerations, coordinates, euler_lagrange_residual,
    state_from_coordinates,
};
pub use basis::{
    axis_rotation, basis_phi, cmat5_mul, cmat5_transpose, cmat5_vec, deformation_at, generator_set, normalisation, numerical_generator,
    quadrupole, rotation_from_vector, rotation_matrix_w, wigner_from_matrix, CMat5, GeneratorSet,
};
pub use dynamics::{
    body_lagrangian, equations_of_motion, lab_angular_momentum, lagrangian, total_energy,
    BodyState, Rovib, RotorVibRates,
};
pub use integrate::{
    integrate, integrate_with, RovibOptions, RovibSample, RovibTrajectory, ROVIB_CSV_HEADER,
};
pub use linearize::{
    equatorial_bulge, equilibrium_bulge, linearized_spectrum, BryanSpectrum, INSTABILITY_GUARD,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::modes::Drop;
use crate::numerics::linalg::Mat3;
use crate::scalar::Real;

/// Five complex amplitudes `X_m`, stored at index `m + 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationAmplitudes<T> {
    pub x: [Complex<T>; 5],
}

impl<T: Real> Default for DeformationAmplitudes<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> DeformationAmplitudes<T> {
    pub fn zero() -> Self {
        Self { x: [Complex::new(T::zero(), T::zero()); 5] }
    }

    /// Builds the amplitudes from `X₀` (real), `X₁` and `X₂`; negative `m` follow by conjugation.
    pub fn from_nonnegative(x0: T, x1: Complex<T>, x2: Complex<T>) -> Self {
        Self {
            x: [x2.conj(), x1.conj(), Complex::new(x0, T::zero()), x1, x2],
        }
    }

    pub fn get(&self, m: i32) -> Complex<T> {
        self.x[basis::idx(m)]
    }

    /// Largest violation of `X₋ₘ = conj(Xₘ)` over `m`.
    pub fn reality_residual(&self) -> (i32, T) {
        let mut worst = (0, T::zero());
        for m in 0..=2 {
            let r = (self.get(-m) - self.get(m).conj()).norm();
            if r > worst.1 {
                worst = (m, r);
            }
        }
        worst
    }

    /// Fails with [`Error::RealityConstraint`] when the constraint is broken beyond
    /// `1e-12` relative to the largest amplitude.
    pub fn check_reality(&self) -> Result<()> {
        let scale = self.x.iter().fold(T::one(), |a, c| a.max(c.norm()));
        let (m, r) = self.reality_residual();
        if r > T::lit(1e-12) * scale {
            return Err(Error::RealityConstraint { m, residual: r.as_f64() });
        }
        Ok(())
    }

    /// Real coordinates `(X₀, Re X₁, Im X₁, Re X₂, Im X₂)`.
    pub fn to_real(&self) -> [T; 5] {
        let (x1, x2) = (self.get(1), self.get(2));
        [self.get(0).re, x1.re, x1.im, x2.re, x2.im]
    }

    pub fn from_real(q: &[T; 5]) -> Self {
        Self::from_nonnegative(q[0], Complex::new(q[1], q[2]), Complex::new(q[3], q[4]))
    }

    /// `Σ|X_m|²`.
    pub fn norm_sqr(&self) -> T {
        self.x.iter().fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    pub fn max_abs(&self) -> T {
        self.x.iter().fold(T::zero(), |a, c| a.max(c.norm()))
    }
}

/// z-y-z Euler angles: `g = R_z(α) R_y(β) R_z(γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerAngles<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Real> EulerAngles<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn to_matrix(&self) -> Mat3<T> {
        use crate::numerics::linalg::mat3_mul;
        let a = axis_rotation(2, self.alpha);
        let b = axis_rotation(1, self.beta);
        let c = axis_rotation(2, self.gamma);
        mat3_mul(&mat3_mul(&a, &b), &c)
    }

    /// Extracts angles with `β ∈ [0, π]` and `α, γ ∈ [0, 2π)`. At the poles the
    /// split between `α` and `γ` is arbitrary and `γ = 0` is chosen.
    pub fn from_matrix(g: &Mat3<T>) -> Self {
        let two_pi = T::TAU();
        let wrap = |a: T| {
            let w = a % two_pi;
            if w < T::zero() {
                w + two_pi
            } else {
                w
            }
        };
        let cb = g[2][2].max(-T::one()).min(T::one());
        let beta = cb.acos();
        let sb = (g[0][2] * g[0][2] + g[1][2] * g[1][2]).sqrt();
        let (alpha, gamma) = if sb > T::lit(1e-12) {
            (g[1][2].atan2(g[0][2]), g[2][1].atan2(-g[2][0]))
        } else if cb > T::zero() {
            (g[1][0].atan2(g[0][0]), T::zero())
        } else {
            ((-g[1][0]).atan2(-g[0][0]), T::zero())
        };
        Self { alpha: wrap(alpha), beta, gamma: wrap(gamma) }
    }

    /// Columns map Euler rates to the lab angular velocity, `Ω = E θ̇`.
    pub fn kinematic_matrix(&self) -> Mat3<T> {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        let o = T::zero();
        [
            [o, -sa, ca * sb],
            [o, ca, sa * sb],
            [T::one(), o, cb],
        ]
    }

    pub fn lab_angular_velocity(&self, rates: &[T; 3]) -> [T; 3] {
        crate::numerics::linalg::mat3_vec(&self.kinematic_matrix(), rates)
    }
}

/// Rotor orientation, Euler rates and body-frame deformation with its rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorVibState<T> {
    pub euler: EulerAngles<T>,
    pub euler_rates: [T; 3],
    pub x_rot: DeformationAmplitudes<T>,
    pub x_rot_rates: DeformationAmplitudes<T>,
}

impl<T: Real> Default for RotorVibState<T> {
    fn default() -> Self {
        Self {
            euler: EulerAngles::default(),
            euler_rates: [T::zero(); 3],
            x_rot: DeformationAmplitudes::zero(),
            x_rot_rates: DeformationAmplitudes::zero(),
        }
    }
}

impl<T: Real> RotorVibState<T> {
    pub fn validate(&self) -> Result<()> {
        self.x_rot.check_reality()?;
        self.x_rot_rates.check_reality()
    }

    pub fn lab_angular_velocity(&self) -> [T; 3] {
        self.euler.lab_angular_velocity(&self.euler_rates)
    }
}

/// Density, surface tension and moment of inertia in radius units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RovibParams<T> {
    pub rho: T,
    pub sigma: T,
    pub inertia: T,
}

impl<T: Real> RovibParams<T> {
    /// `ρ = σ = 1`, `I = 8π/15`.
    pub fn dimensionless() -> Self {
        Self::uniform_sphere(T::one(), T::one())
    }

    /// Solid sphere of unit radius.
    pub fn uniform_sphere(rho: T, sigma: T) -> Self {
        Self { rho, sigma, inertia: T::lit(8.0) * T::PI() / T::lit(15.0) * rho }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        if ok(self.rho) && ok(self.sigma) && ok(self.inertia) {
            Ok(())
        } else {
            Err(Error::InvalidInput("rovib parameters must be positive and finite".into()))
        }
    }

    /// Small-oscillation frequency of the decoupled `l = 2` oscillators, `√(8σ/ρ)`.
    pub fn omega_vib(&self) -> T {
        (T::lit(8.0) * self.sigma / self.rho).sqrt()
    }
}

/// Conversion between radius units and SI for a given drop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RovibScales<T> {
    /// Metres per length unit.
    pub length: T,
    /// Seconds per time unit, `√(ρR³/σ)`.
    pub time: T,
    /// Joules per energy unit, `σR²`.
    pub energy: T,
}

impl<T: Real> RovibScales<T> {
    pub fn for_drop(drop: &Drop<T>) -> Self {
        let r = drop.radius();
        let (rho, sigma) = (drop.iso.density, drop.iso.surface_tension);
        Self {
            length: r,
            time: (rho * r * r * r / sigma).sqrt(),
            energy: sigma * r * r,
        }
    }

    pub fn angular_frequency_to_si(&self, w: T) -> T {
        w / self.time
    }

    pub fn angular_frequency_from_si(&self, w: T) -> T {
        w * self.time
    }

    /// Angular momentum unit, `energy · time`.
    pub fn angular_momentum(&self) -> T {
        self.energy * self.time
    }
}
