//! Tabulated temperature-dependent properties with validated grids.

use std::io::Read;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How values between two knots are blended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// `y` linear in `T`.
    Linear,
    /// `ln y` linear in `T`.
    LogLinear,
    /// `ln y` linear in `1/T`, exact for a pure Arrhenius law.
    LogReciprocal,
}

/// Law used below the first knot. Every law joins the table continuously.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extrapolation<T> {
    None,
    /// `y ∝ T^exponent · exp(-activation/T)` with `activation` in kelvin.
    Arrhenius { exponent: T, activation: T },
    /// Straight line from the first knot to `value_at_zero` at `T = 0`.
    LinearToValue { value_at_zero: T },
    /// `y ∝ T^exponent`.
    PowerLaw { exponent: T },
}

/// Expected shape of a table file.
#[derive(Debug, Clone)]
pub struct TableSchema {
    /// Quantity name expected in the metadata line; `None` accepts anything.
    pub quantity: Option<String>,
    pub interpolation: Interpolation,
}

impl TableSchema {
    pub fn new(quantity: &str, interpolation: Interpolation) -> Self {
        Self {
            quantity: Some(quantity.to_string()),
            interpolation,
        }
    }
}

/// Knots `(T, value)` with a strictly increasing temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyTable<T> {
    quantity: String,
    units: String,
    source: String,
    temperatures: Vec<T>,
    values: Vec<T>,
    interpolation: Interpolation,
    below: Extrapolation<T>,
}

impl<T: Real> PropertyTable<T> {
    /// Builds a table. Rows are numbered from 1 in errors.
    pub fn new(
        quantity: &str,
        grid: Vec<(T, T)>,
        interpolation: Interpolation,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::EmptyTable);
        }
        for (i, pair) in grid.windows(2).enumerate() {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::NonMonotone { row: i + 2 });
            }
        }
        for (i, &(t, v)) in grid.iter().enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::Parse {
                    row: i + 1,
                    message: "non-finite value".into(),
                });
            }
            if interpolation != Interpolation::Linear && v <= T::zero() {
                return Err(Error::Parse {
                    row: i + 1,
                    message: "logarithmic interpolation needs positive values".into(),
                });
            }
            if interpolation == Interpolation::LogReciprocal && t <= T::zero() {
                return Err(Error::Parse {
                    row: i + 1,
                    message: "reciprocal interpolation needs positive temperatures".into(),
                });
            }
        }
        let (temperatures, values) = grid.into_iter().unzip();
        Ok(Self {
            quantity: quantity.to_string(),
            units: String::new(),
            source: String::new(),
            temperatures,
            values,
            interpolation,
            below: Extrapolation::None,
        })
    }

    pub fn with_metadata(mut self, units: &str, source: &str) -> Self {
        self.units = units.to_string();
        self.source = source.to_string();
        self
    }

    /// Registers the law used for queries below the first knot.
    pub fn with_lower_extrapolation(mut self, law: Extrapolation<T>) -> Self {
        self.below = law;
        self
    }

    pub fn quantity(&self) -> &str {
        &self.quantity
    }

    pub fn units(&self) -> &str {
        &self.units
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn lower_extrapolation(&self) -> Extrapolation<T> {
        self.below
    }

    pub fn len(&self) -> usize {
        self.temperatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.temperatures.is_empty()
    }

    pub fn knots(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.temperatures
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    /// Temperature span covered by knots.
    pub fn valid_range(&self) -> (T, T) {
        (self.temperatures[0], self.temperatures[self.len() - 1])
    }

    fn out_of_range(&self, t: T) -> Error {
        let (lo, hi) = self.valid_range();
        Error::OutOfRange {
            quantity: self.quantity.clone(),
            temperature: t.as_f64(),
            min: lo.as_f64(),
            max: hi.as_f64(),
        }
    }

    /// Evaluates the table at temperature `t`.
    pub fn eval(&self, t: T) -> Result<T> {
        let (lo, hi) = self.valid_range();
        if !t.is_finite() || t > hi {
            return Err(self.out_of_range(t));
        }
        if t < lo {
            return self.extrapolate_below(t);
        }
        let n = self.len();
        if n == 1 {
            return Ok(self.values[0]);
        }
        // index of the upper knot of the bracketing interval
        let j = self
            .temperatures
            .partition_point(|&x| x < t)
            .clamp(1, n - 1);
        let (t0, t1) = (self.temperatures[j - 1], self.temperatures[j]);
        let (y0, y1) = (self.values[j - 1], self.values[j]);
        if t == t0 {
            return Ok(y0);
        }
        if t == t1 {
            return Ok(y1);
        }
        let v = match self.interpolation {
            Interpolation::Linear => y0 + (y1 - y0) * (t - t0) / (t1 - t0),
            Interpolation::LogLinear => {
                let w = (t - t0) / (t1 - t0);
                (y0.ln() + (y1.ln() - y0.ln()) * w).exp()
            }
            Interpolation::LogReciprocal => {
                let w = (t.recip() - t0.recip()) / (t1.recip() - t0.recip());
                (y0.ln() + (y1.ln() - y0.ln()) * w).exp()
            }
        };
        Ok(v)
    }

    fn extrapolate_below(&self, t: T) -> Result<T> {
        let (t0, y0) = (self.temperatures[0], self.values[0]);
        match self.below {
            Extrapolation::None => Err(self.out_of_range(t)),
            _ if t < T::zero() => Err(self.out_of_range(t)),
            Extrapolation::Arrhenius {
                exponent,
                activation,
            } => {
                if t == T::zero() {
                    return Ok(T::zero());
                }
                let arg = -activation * (t.recip() - t0.recip());
                Ok(y0 * (t / t0).powf(exponent) * arg.exp())
            }
            Extrapolation::LinearToValue { value_at_zero } => {
                Ok(value_at_zero + (y0 - value_at_zero) * t / t0)
            }
            Extrapolation::PowerLaw { exponent } => Ok(y0 * (t / t0).powf(exponent)),
        }
    }
}

/// Reads a two-column CSV table.
///
/// Layout: an optional metadata line `# quantity, units, source`, a header
/// `T_K,<name>`, then one `T,value` row per knot.
pub fn load_property_table<T: Real, R: Read>(
    mut source: R,
    schema: &TableSchema,
) -> Result<PropertyTable<T>> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| Error::Parse {
        row: 0,
        message: format!("unreadable input: {e}"),
    })?;

    let mut quantity = schema.quantity.clone().unwrap_or_default();
    let mut units = String::new();
    let mut provenance = String::new();
    let mut body = text.as_str();
    let mut line_offset = 0;
    if let Some(rest) = text.strip_prefix('#') {
        let (meta, remainder) = rest.split_once('\n').unwrap_or((rest, ""));
        let mut parts = meta.splitn(3, ',').map(str::trim);
        let q = parts.next().unwrap_or_default();
        if let Some(expected) = &schema.quantity {
            if q != expected {
                return Err(Error::Parse {
                    row: 1,
                    message: format!("expected quantity '{expected}', found '{q}'"),
                });
            }
        }
        quantity = q.to_string();
        units = parts.next().unwrap_or_default().to_string();
        provenance = parts.next().unwrap_or_default().to_string();
        body = remainder;
        line_offset = 1;
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse {
        row: line_offset + 1,
        message: e.to_string(),
    })?;
    if header.len() != 2 || &header[0] != "T_K" {
        return Err(Error::Parse {
            row: line_offset + 1,
            message: format!("expected header 'T_K,<value>', found '{}'", header.iter().collect::<Vec<_>>().join(",")),
        });
    }

    let mut grid = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // header plus metadata precede the first data row
        let row = line_offset + 2 + i;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(Error::Parse {
                row,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let cell = |k: usize| -> Result<T> {
            record[k]
                .parse::<f64>()
                .map(T::lit)
                .map_err(|_| Error::Parse {
                    row,
                    message: format!("non-numeric cell '{}'", &record[k]),
                })
        };
        grid.push((cell(0)?, cell(1)?));
    }

    let table = PropertyTable::new(&quantity, grid, schema.interpolation).map_err(|e| match e {
        Error::NonMonotone { row } => Error::NonMonotone {
            row: row + line_offset + 1,
        },
        Error::Parse { row, message } => Error::Parse {
            row: row + line_offset + 1,
            message,
        },
        other => other,
    })?;
    Ok(table.with_metadata(&units, &provenance))
}
