use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::{load_property_table, Extrapolation, Interpolation, PropertyTable, TableSchema};
use crate::constants::{PhysicalConstants, K_B};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Environment variable consulted for the property-data directory.
pub const DATA_DIR_ENV: &str = "HEDROP_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Isotope {
    He3,
    He4,
}

impl Isotope {
    pub const ALL: [Isotope; 2] = [Isotope::He4, Isotope::He3];

    pub fn label(self) -> &'static str {
        match self {
            Isotope::He3 => "He3",
            Isotope::He4 => "He4",
        }
    }

    fn file_prefix(self) -> &'static str {
        match self {
            Isotope::He3 => "he3",
            Isotope::He4 => "he4",
        }
    }

    /// Temperature-independent material constants.
    pub fn material(self) -> Material {
        match self {
            Isotope::He4 => Material {
                density: 145.0,
                surface_tension: 3.75e-4,
                sound_speed: 238.0,
                dielectric: 1.057,
                atomic_mass: 6.646_473_1e-27,
                binding_energy_kelvin: 7.14,
            },
            Isotope::He3 => Material {
                density: 81.0,
                surface_tension: 1.52e-4,
                sound_speed: 183.0,
                dielectric: 1.042,
                atomic_mass: 5.008_234_1e-27,
                binding_energy_kelvin: 2.5,
            },
        }
    }
}

impl fmt::Display for Isotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Isotope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "he3" | "3he" | "helium-3" | "3" => Ok(Isotope::He3),
            "he4" | "4he" | "helium-4" | "4" => Ok(Isotope::He4),
            other => Err(Error::InvalidInput(format!("unknown isotope '{other}'"))),
        }
    }
}

/// Static constants in SI units, kept in `f64` and converted on use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub density: f64,
    pub surface_tension: f64,
    pub sound_speed: f64,
    pub dielectric: f64,
    pub atomic_mass: f64,
    /// Zero-temperature binding energy per atom divided by `k_B`.
    pub binding_energy_kelvin: f64,
}

/// Material and thermodynamic data for one isotope.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotopeProperties<T> {
    pub isotope: Isotope,
    /// kg/m³
    pub density: T,
    /// N/m
    pub surface_tension: T,
    /// m/s
    pub sound_speed: T,
    pub dielectric: T,
    /// kg
    pub atomic_mass: T,
    /// J per atom
    pub binding_energy: T,
    /// Pa against K
    pub vapor_pressure_table: PropertyTable<T>,
    /// J/atom against K
    pub latent_heat_table: PropertyTable<T>,
    /// J/(K atom) against K
    pub specific_heat_table: PropertyTable<T>,
    /// `(mu_ref [Pa s], T_ref [K])`, normal-fluid ³He only.
    pub viscosity_ref: Option<(T, T)>,
}

/// Directory holding the bundled CSV tables shipped with the repository.
pub fn bundled_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Resolves the data directory: explicit path, then the environment, then the bundled copy.
pub fn resolve_data_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match std::env::var_os(DATA_DIR_ENV) {
        Some(p) if !p.is_empty() => PathBuf::from(p),
        _ => bundled_data_dir(),
    }
}

fn read_table<T: Real>(path: &Path, schema: &TableSchema) -> Result<PropertyTable<T>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_property_table(file, schema).map_err(|e| match e {
        Error::Parse { row, message } => Error::Parse {
            row,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

impl<T: Real> IsotopeProperties<T> {
    /// Loads `<iso>_vapor_pressure.csv`, `<iso>_latent_heat.csv` and
    /// `<iso>_specific_heat.csv` from `data_dir`.
    pub fn load(isotope: Isotope, data_dir: &Path) -> Result<Self> {
        let prefix = isotope.file_prefix();
        let file = |name: &str| data_dir.join(format!("{prefix}_{name}.csv"));
        let vp = read_table(
            &file("vapor_pressure"),
            &TableSchema::new("vapor_pressure", Interpolation::LogReciprocal),
        )?;
        let lh = read_table(
            &file("latent_heat"),
            &TableSchema::new("latent_heat", Interpolation::Linear),
        )?;
        let cp = read_table(
            &file("specific_heat"),
            &TableSchema::new("specific_heat", Interpolation::Linear),
        )?;
        Ok(Self::from_tables(isotope, vp, lh, cp))
    }

    /// Loads from the bundled repository data.
    pub fn bundled(isotope: Isotope) -> Result<Self> {
        Self::load(isotope, &bundled_data_dir())
    }

    /// Assembles properties from already-validated tables and registers the
    /// low-temperature laws: Arrhenius vapor pressure `T^(5/2) e^(-E0/kT)`,
    /// latent heat approaching `E0`, phonon `T³` (⁴He) or Fermi-liquid `T` (³He)
    /// specific heat.
    pub fn from_tables(
        isotope: Isotope,
        vapor_pressure: PropertyTable<T>,
        latent_heat: PropertyTable<T>,
        specific_heat: PropertyTable<T>,
    ) -> Self {
        let m = isotope.material();
        let e0_kelvin = T::lit(m.binding_energy_kelvin);
        let binding_energy = T::lit(K_B) * e0_kelvin;
        let heat_exponent = match isotope {
            Isotope::He4 => T::lit(3.0),
            Isotope::He3 => T::one(),
        };
        Self {
            isotope,
            density: T::lit(m.density),
            surface_tension: T::lit(m.surface_tension),
            sound_speed: T::lit(m.sound_speed),
            dielectric: T::lit(m.dielectric),
            atomic_mass: T::lit(m.atomic_mass),
            binding_energy,
            vapor_pressure_table: vapor_pressure.with_lower_extrapolation(Extrapolation::Arrhenius {
                exponent: T::lit(2.5),
                activation: e0_kelvin,
            }),
            latent_heat_table: latent_heat.with_lower_extrapolation(Extrapolation::LinearToValue {
                value_at_zero: binding_energy,
            }),
            specific_heat_table: specific_heat
                .with_lower_extrapolation(Extrapolation::PowerLaw { exponent: heat_exponent }),
            viscosity_ref: match isotope {
                Isotope::He3 => Some((T::lit(3e-6), T::one())),
                Isotope::He4 => None,
            },
        }
    }

    /// Refractive index `√ε`.
    pub fn refractive_index(&self) -> T {
        self.dielectric.sqrt()
    }

    /// Saturated vapor pressure in Pa.
    pub fn vapor_pressure(&self, t: T) -> Result<T> {
        positive_temperature(t)?;
        self.vapor_pressure_table.eval(t)
    }

    /// Latent heat of evaporation in J per atom.
    pub fn latent_heat(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::InvalidInput(format!("temperature {t} K is negative")));
        }
        self.latent_heat_table.eval(t)
    }

    /// Heat capacity of `n` atoms in J/K.
    pub fn specific_heat(&self, n: T, t: T) -> Result<T> {
        if !(n > T::zero()) {
            return Err(Error::InvalidInput(format!("atom count {n} must be positive")));
        }
        positive_temperature(t)?;
        Ok(n * self.specific_heat_table.eval(t)?)
    }

    /// Shear viscosity of normal-fluid ³He in Pa s.
    pub fn viscosity(&self, t: T) -> Result<T> {
        match self.viscosity_ref {
            Some((mu, t_ref)) => viscosity_law(mu, t_ref, t),
            None => Err(Error::UnsupportedRegime(format!(
                "no viscosity model for {}",
                self.isotope
            ))),
        }
    }

    pub fn constants(&self) -> PhysicalConstants<T> {
        PhysicalConstants::codata()
    }
}

fn positive_temperature<T: Real>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("temperature {t} K must be positive")))
    }
}

fn viscosity_law<T: Real>(mu_ref: T, t_ref: T, t: T) -> Result<T> {
    if !(t > T::lit(1e-3)) || t > T::lit(1.5) {
        return Err(Error::UnsupportedRegime(format!(
            "normal-fluid ³He viscosity model covers 1 mK < T <= 1.5 K, got {t} K"
        )));
    }
    let r = t_ref / t;
    Ok(mu_ref * r * r)
}

/// Normal-fluid ³He viscosity `μ = 30 μP · (1 K / T)²`.
pub fn viscosity_he3<T: Real>(t: T) -> Result<T> {
    viscosity_law(T::lit(3e-6), T::one(), t)
}
