//! Physical constants and isotope-dependent material data.

mod isotope;
mod table;

pub use isotope::{
    bundled_data_dir, resolve_data_dir, viscosity_he3, Isotope, IsotopeProperties, Material,
    DATA_DIR_ENV,
};
pub use table::{load_property_table, Extrapolation, Interpolation, PropertyTable, TableSchema};
