//! Dimension-tagged scalars and the fixed unit conversions used everywhere else.
//!
//! Every energy in the crate is held internally in meV. Rates quoted in
//! angular-frequency units (the `2π × f GHz` spelling common for couplings
//! and loss rates) are converted to meV through ħ before they enter any
//! matrix, and converted back to GHz / ps only at output. Bias fields stay
//! in kV/cm and lengths in nm; the product e·d·F then has the closed form
//! `E[meV] = 0.1 · d[nm] · F[kV/cm]`.

use crate::error::{Error, Result};

/// Physical constants pinned to CODATA 2018.
pub mod constants {
    /// Reduced Planck constant, meV·s (CODATA 2018: 6.582119569e-16 eV·s).
    pub const HBAR_MEV_S: f64 = 6.582119569e-13;

    /// Elementary charge, C (CODATA 2018, exact). Not used numerically:
    /// expressing energies in meV cancels e out of e·d·F, see
    /// [`MEV_PER_KVCM_NM`].
    pub const ELEMENTARY_CHARGE_C: f64 = 1.602176634e-19;

    /// e·(1 nm)·(1 kV/cm) expressed in meV:
    /// 1e-9 m × 1e5 V/m = 1e-4 eV = 0.1 meV per unit charge.
    pub const MEV_PER_KVCM_NM: f64 = 0.1;

    /// Rates below this (in GHz of angular frequency) are treated as
    /// lossless and reported with an infinite lifetime.
    pub const DARK_RATE_FLOOR_GHZ: f64 = 1e-6;
}

/// The physical dimension a [`Quantity`] carries.
///
/// Canonical units: Energy meV, Field kV/cm, Length nm, Rate s⁻¹
/// (angular), Time ps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Energy,
    Field,
    Length,
    Rate,
    Time,
    Dimensionless,
}

/// A scalar tagged with its physical dimension.
///
/// Addition and subtraction are only defined between equal dimensions;
/// mismatches surface as [`Error::DimensionMismatch`] at call time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    value: f64,
    dimension: Dimension,
}

impl Quantity {
    pub fn new(value: f64, dimension: Dimension) -> Self {
        Quantity { value, dimension }
    }

    pub fn energy_mev(value: f64) -> Self {
        Self::new(value, Dimension::Energy)
    }

    pub fn field_kvcm(value: f64) -> Self {
        Self::new(value, Dimension::Field)
    }

    pub fn length_nm(value: f64) -> Self {
        Self::new(value, Dimension::Length)
    }

    /// Angular frequency in s⁻¹.
    pub fn rate_per_s(value: f64) -> Self {
        Self::new(value, Dimension::Rate)
    }

    pub fn time_ps(value: f64) -> Self {
        Self::new(value, Dimension::Time)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    fn expect(&self, dimension: Dimension, context: &'static str) -> Result<f64> {
        if self.dimension == dimension {
            Ok(self.value)
        } else {
            Err(Error::DimensionMismatch {
                expected: dimension,
                found: self.dimension,
                context,
            })
        }
    }

    /// Value in meV; errors unless the quantity is an energy.
    pub fn mev(&self) -> Result<f64> {
        self.expect(Dimension::Energy, "mev()")
    }

    /// Value in kV/cm; errors unless the quantity is a field.
    pub fn kvcm(&self) -> Result<f64> {
        self.expect(Dimension::Field, "kvcm()")
    }

    /// Value in nm; errors unless the quantity is a length.
    pub fn nm(&self) -> Result<f64> {
        self.expect(Dimension::Length, "nm()")
    }

    /// Angular frequency in s⁻¹; errors unless the quantity is a rate.
    pub fn per_s(&self) -> Result<f64> {
        self.expect(Dimension::Rate, "per_s()")
    }

    /// Value in ps; errors unless the quantity is a time.
    pub fn ps(&self) -> Result<f64> {
        self.expect(Dimension::Time, "ps()")
    }

    pub fn try_add(&self, other: &Quantity) -> Result<Quantity> {
        if self.dimension == other.dimension {
            Ok(Quantity::new(self.value + other.value, self.dimension))
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
                context: "try_add",
            })
        }
    }

    pub fn try_sub(&self, other: &Quantity) -> Result<Quantity> {
        if self.dimension == other.dimension {
            Ok(Quantity::new(self.value - other.value, self.dimension))
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
                context: "try_sub",
            })
        }
    }

    /// Multiply by a dimensionless factor.
    pub fn scale(&self, factor: f64) -> Quantity {
        Quantity::new(self.value * factor, self.dimension)
    }
}

/// A lifetime, which may be infinite for an exactly lossless state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lifetime {
    Finite(Quantity),
    Infinite,
}

impl Lifetime {
    /// Lifetime in ps, with `f64::INFINITY` for the lossless sentinel.
    pub fn ps(&self) -> f64 {
        match self {
            Lifetime::Finite(q) => q.value(),
            Lifetime::Infinite => f64::INFINITY,
        }
    }
}

/// Convert a rate quoted as `2π × f GHz` (the angular-frequency spelling)
/// into an energy ħω in meV.
pub fn angular_ghz_to_energy(f_2pi_ghz: f64) -> Result<Quantity> {
    if !(f_2pi_ghz >= 0.0) {
        return Err(Error::DimensionMismatch {
            expected: Dimension::Rate,
            found: Dimension::Rate,
            context: "angular_ghz_to_energy: negative frequency",
        });
    }
    let omega_per_s = 2.0 * std::f64::consts::PI * f_2pi_ghz * 1e9;
    Ok(Quantity::energy_mev(constants::HBAR_MEV_S * omega_per_s))
}

/// Energy shift e·d·F of the indirect exciton under a bias field.
///
/// With d in nm and F in kV/cm the result is `0.1 · d · F` meV; the
/// division form keeps the product exact to one rounding.
pub fn bias_to_energy(f: Quantity, d: Quantity) -> Result<Quantity> {
    let f_kvcm = f.kvcm()?;
    let d_nm = d.nm()?;
    if !(d_nm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "interdot distance must be positive, got {d_nm} nm"
        )));
    }
    Ok(Quantity::energy_mev(d_nm * f_kvcm / 10.0))
}

/// Convert an energy width in meV to an angular rate in s⁻¹ (divide by ħ).
pub fn energy_to_rate(e: Quantity) -> Result<Quantity> {
    Ok(Quantity::rate_per_s(e.mev()? / constants::HBAR_MEV_S))
}

/// Express an angular rate in GHz (s⁻¹ / 1e9), matching the `2π × f GHz`
/// convention the inputs are quoted in.
pub fn rate_to_ghz(rate: Quantity) -> Result<f64> {
    Ok(rate.per_s()? / 1e9)
}

/// Population lifetime τ = 1/Γ in ps. Non-positive rates are exactly
/// lossless states and map to the distinct infinite sentinel.
pub fn rate_to_lifetime(gamma: Quantity) -> Result<Lifetime> {
    let g = gamma.per_s()?;
    if g <= 0.0 {
        Ok(Lifetime::Infinite)
    } else {
        Ok(Lifetime::Finite(Quantity::time_ps(1e12 / g)))
    }
}
