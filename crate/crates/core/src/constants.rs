use crate::scalar::Real;

/// CODATA 2018 exact-or-recommended values used throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    /// Reduced Planck constant, J s.
    pub hbar: T,
    /// Boltzmann constant, J/K.
    pub k_b: T,
    /// Speed of light in vacuum, m/s.
    pub c: T,
}

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;
pub const C_LIGHT: f64 = 299_792_458.0;

impl<T: Real> PhysicalConstants<T> {
    pub fn codata() -> Self {
        Self {
            hbar: T::lit(HBAR),
            k_b: T::lit(K_B),
            c: T::lit(C_LIGHT),
        }
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata()
    }
}
