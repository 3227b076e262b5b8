//! Atomic constants for the supported alkali/noble-gas mixtures.
//!
//! Everything here is in cgs-Gaussian units: lengths in cm, densities in
//! cm⁻³, energies in erg, magnetic fields in Gauss and angular rates in
//! rad/s. Only two mixtures are modelled, K with ³He and ⁸⁷Rb with ¹²⁹Xe.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant, erg/K.
pub const BOLTZMANN: f64 = 1.380_649e-16;
/// Planck constant, erg·s.
pub const PLANCK: f64 = 6.626_070_15e-27;
/// Speed of light, cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;
/// Classical electron radius, cm (CODATA 2018).
pub const ELECTRON_RADIUS: f64 = 2.817_940_326_2e-13;
/// The electron radius as it appears in some printed derivations, off by 10⁴.
pub const ELECTRON_RADIUS_MISPRINT: f64 = 2.8e-17;
/// One Torr in dyn/cm².
pub const TORR: f64 = 1_013_250.0 / 760.0;
/// One standard atmosphere in dyn/cm².
pub const ATMOSPHERE: f64 = 1_013_250.0;
/// Which value of the classical electron radius enters the optical couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElectronRadius {
    #[default]
    Physical,
    /// The 2.8e-17 cm figure, kept only to reproduce derivations that used it.
    Misprinted,
}

impl ElectronRadius {
    pub fn value(self) -> f64 {
        match self {
            ElectronRadius::Physical => ELECTRON_RADIUS,
            ElectronRadius::Misprinted => ELECTRON_RADIUS_MISPRINT,
        }
    }
}

/// Default fill temperature used to turn fill pressures into densities, K.
pub const DEFAULT_FILL_TEMPERATURE: f64 = 293.15;

/// Free-electron spin precession g_s·μ_B/h, Hz per Gauss.
const ELECTRON_LARMOR_HZ_PER_GAUSS: f64 = 2.802_495_14e6;

/// Temperature window in which the vapor-pressure correlations are trusted, K.
pub const VAPOR_MODEL_RANGE: (f64, f64) = (300.0, 700.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlkaliName {
    K,
    Rb87,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NobleName {
    He3,
    Xe129,
}

impl AlkaliName {
    pub const ALL: [AlkaliName; 2] = [AlkaliName::K, AlkaliName::Rb87];

    pub fn as_str(self) -> &'static str {
        match self {
            AlkaliName::K => "K",
            AlkaliName::Rb87 => "Rb87",
        }
    }
}

impl NobleName {
    pub const ALL: [NobleName; 2] = [NobleName::He3, NobleName::Xe129];

    pub fn as_str(self) -> &'static str {
        match self {
            NobleName::He3 => "He3",
            NobleName::Xe129 => "Xe129",
        }
    }
}

impl fmt::Display for AlkaliName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for NobleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlkaliName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" | "K39" | "39K" => Ok(AlkaliName::K),
            "Rb87" | "87Rb" => Ok(AlkaliName::Rb87),
            other => Err(Error::UnknownSpecies(other.to_owned())),
        }
    }
}

impl FromStr for NobleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "He3" | "3He" => Ok(NobleName::He3),
            "Xe129" | "129Xe" => Ok(NobleName::Xe129),
            other => Err(Error::UnknownSpecies(other.to_owned())),
        }
    }
}

/// Two-phase Clausius-Clapeyron fit, log10(p / atm) = a − b / T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaporPressureModel {
    pub solid: (f64, f64),
    pub liquid: (f64, f64),
    pub melting_point: f64,
}

impl VaporPressureModel {
    /// Saturated vapor pressure in dyn/cm².
    pub fn pressure(&self, temperature: f64) -> f64 {
        let (a, b) = if temperature < self.melting_point {
            self.solid
        } else {
            self.liquid
        };
        10f64.powf(a - b / temperature) * ATMOSPHERE
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlkaliSpecies {
    pub name: AlkaliName,
    pub nuclear_spin: f64,
    /// D1 oscillator strength.
    pub oscillator_strength: f64,
    /// Precession rate of the polarized ground state, rad/(s·G).
    pub gyromagnetic_ratio: f64,
    /// D1 vacuum wavelength, cm.
    pub d1_wavelength: f64,
    pub vapor_pressure: VaporPressureModel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NobleSpecies {
    pub name: NobleName,
    /// Nuclear gyromagnetic ratio magnitude, rad/(s·G).
    pub gyromagnetic_ratio: f64,
    pub spin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangePair {
    pub alkali: AlkaliSpecies,
    pub noble: NobleSpecies,
    /// Coherent spin-exchange rate coefficient, cm³/s.
    pub exchange_coefficient: f64,
}

/// Alkali gyromagnetic ratio with the electron spin diluted over the [I] = 2I+1
/// hyperfine multiplicity.
fn alkali_gyromagnetic_ratio(nuclear_spin: f64) -> f64 {
    2.0 * std::f64::consts::PI * ELECTRON_LARMOR_HZ_PER_GAUSS / (2.0 * nuclear_spin + 1.0)
}

impl AlkaliSpecies {
    pub fn get(name: AlkaliName) -> Self {
        match name {
            // Vapor pressure: Alcock, Itkin & Horrigan (1984). D1 data: Tiecke, Steck.
            AlkaliName::K => AlkaliSpecies {
                name,
                nuclear_spin: 1.5,
                oscillator_strength: 0.333,
                gyromagnetic_ratio: alkali_gyromagnetic_ratio(1.5),
                d1_wavelength: 770.108e-7,
                vapor_pressure: VaporPressureModel {
                    solid: (4.961, 4646.0),
                    liquid: (4.402, 4453.0),
                    melting_point: 336.53,
                },
            },
            AlkaliName::Rb87 => AlkaliSpecies {
                name,
                nuclear_spin: 1.5,
                oscillator_strength: 0.342,
                gyromagnetic_ratio: alkali_gyromagnetic_ratio(1.5),
                d1_wavelength: 794.979e-7,
                vapor_pressure: VaporPressureModel {
                    solid: (4.857, 4215.0),
                    liquid: (4.312, 4040.0),
                    melting_point: 312.45,
                },
            },
        }
    }

    /// Saturated number density, cm⁻³, from the vapor-pressure correlation.
    pub fn density(&self, temperature: f64) -> Result<f64> {
        let (lo, hi) = VAPOR_MODEL_RANGE;
        if !(lo..=hi).contains(&temperature) {
            return Err(Error::OutOfRangeTemperature(temperature));
        }
        Ok(self.vapor_pressure.pressure(temperature) / (BOLTZMANN * temperature))
    }

    /// Nuclear-spin multiplicity [I] = 2I + 1.
    pub fn multiplicity(&self) -> f64 {
        2.0 * self.nuclear_spin + 1.0
    }
}

impl NobleSpecies {
    pub fn get(name: NobleName) -> Self {
        let larmor_hz_per_gauss = match name {
            NobleName::He3 => 3243.41,
            NobleName::Xe129 => 1177.6,
        };
        NobleSpecies {
            name,
            gyromagnetic_ratio: 2.0 * std::f64::consts::PI * larmor_hz_per_gauss,
            spin: 0.5,
        }
    }
}

/// Look up one of the two supported mixtures.
pub fn lookup_pair(alkali: AlkaliName, noble: NobleName) -> Result<ExchangePair> {
    let exchange_coefficient = match (alkali, noble) {
        (AlkaliName::K, NobleName::He3) => 4.9e-15,
        (AlkaliName::Rb87, NobleName::Xe129) => 1.9e-13,
        _ => {
            return Err(Error::UnsupportedPair {
                alkali: alkali.to_string(),
                noble: noble.to_string(),
            })
        }
    };
    Ok(ExchangePair {
        alkali: AlkaliSpecies::get(alkali),
        noble: NobleSpecies::get(noble),
        exchange_coefficient,
    })
}

/// Same as [`lookup_pair`] but from the textual species names used in configs.
pub fn lookup_pair_by_name(alkali: &str, noble: &str) -> Result<ExchangePair> {
    lookup_pair(alkali.parse()?, noble.parse()?)
}

/// Number of photons in a square pulse: P·T·λ/(h·c). Power in W, duration in
/// s, wavelength in cm.
pub fn photon_number(power: f64, duration: f64, wavelength: f64) -> f64 {
    let energy_erg = power * 1.0e7 * duration;
    energy_erg * wavelength / (PLANCK * SPEED_OF_LIGHT)
}

/// Ideal-gas number density (cm⁻³) of a gas at `pressure` Torr and `temperature` K.
pub fn torr_to_density(pressure: f64, temperature: f64) -> f64 {
    pressure * TORR / (BOLTZMANN * temperature)
}

pub fn density_to_torr(density: f64, temperature: f64) -> f64 {
    density * BOLTZMANN * temperature / TORR
}

/// Precession rate (rad/s) of a species with gyromagnetic ratio `gamma` in a field `gauss`.
pub fn larmor_rate(gamma: f64, gauss: f64) -> f64 {
    gamma * gauss
}

/// Inverse of [`larmor_rate`].
pub fn field_for_rate(gamma: f64, rate: f64) -> f64 {
    rate / gamma
}
