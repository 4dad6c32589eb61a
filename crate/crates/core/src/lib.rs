//! Optomechanics of levitated superfluid-helium drops.
//!
//! The physics is generic over the scalar type through [`Real`]; the
//! aliases at the bottom fix it to `f64` for everyday use.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops follow the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod constants;
pub mod error;
pub mod evap;
pub mod heprops;
pub mod mechloss;
pub mod modes;
pub mod numerics;
pub mod optics;
pub mod rotation;
pub mod rovib;
pub mod scalar;

pub use error::{Error, IntegrationFailure, Result};
pub use scalar::Real;

pub type Drop = modes::Drop<f64>;
pub type IsotopeProperties = heprops::IsotopeProperties<f64>;
pub type PropertyTable = heprops::PropertyTable<f64>;
pub type RotorVibState = rovib::RotorVibState<f64>;
pub type RovibParams = rovib::RovibParams<f64>;
pub type DeformationAmplitudes = rovib::DeformationAmplitudes<f64>;
