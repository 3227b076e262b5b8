//! TOML configuration files.
//!
//! Quantities may be given in one of several units (for example
//! `temperature_c` or `temperature_k`); exactly one spelling per quantity is
//! accepted. Normalized output always uses the canonical spelling, which
//! maps onto [`PhysicalConfig`] without arithmetic, so a normalized file
//! parses back to an identical value.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::params::{
    BufferGas, CellSpec, FieldSpec, PhysicalConfig, ProbeSpec, PumpDrive, PumpSpec, RateSpec,
};
use crate::species::DEFAULT_FILL_TEMPERATURE;

const CELSIUS_OFFSET: f64 = 273.15;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub cell: CellSection,
    pub probe: ProbeSection,
    pub pump: PumpSection,
    pub rates: RatesSection,
    pub field: FieldSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSection {
    pub alkali: String,
    pub noble: String,
    pub length_cm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_cm2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_mm2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fill_temperature_k: Option<f64>,
    pub noble_pressure_torr: f64,
    pub noble_polarization: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alkali_density_cm3: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub buffer_gas: Vec<BufferGasEntry>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BufferGasEntry {
    pub name: String,
    pub pressure_torr: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_mw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detuning_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detuning_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linewidth_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linewidth_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse_ms: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_per_s: Option<f64>,
    /// Pump rate as a multiple of the spin-destruction rate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_over_spin_destruction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alkali_polarization: Option<f64>,
    /// Ω_1/2π.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub light_shift_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub light_shift_rad_per_s: Option<f64>,
    pub q_factor: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesSection {
    pub spin_destruction_per_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noble_relaxation_per_s: Option<f64>,
    /// 1/γ_b in hours.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noble_lifetime_h: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias_mg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detuning_override_rad_per_s: Option<f64>,
}

/// A value under one unit spelling with its conversion to canonical units.
type Spelling<'a> = (Option<f64>, &'a dyn Fn(f64) -> f64);

/// Pick the single given spelling of a quantity and convert it.
fn one_of(field: &str, options: &[Spelling<'_>]) -> Result<f64> {
    let given: Vec<f64> = options
        .iter()
        .filter_map(|(v, conv)| v.map(conv))
        .collect();
    match given.as_slice() {
        [v] => Ok(*v),
        [] => Err(Error::validation(field, "missing")),
        _ => Err(Error::validation(field, "given in more than one unit")),
    }
}

fn id(x: f64) -> f64 {
    x
}

impl ConfigFile {
    /// Convert to canonical units and validate.
    pub fn to_physical(&self) -> Result<PhysicalConfig> {
        let c = &self.cell;
        let cell = CellSpec {
            alkali: c.alkali.parse()?,
            noble: c.noble.parse()?,
            length: c.length_cm,
            area: one_of("cell.area", &[(c.area_cm2, &id), (c.area_mm2, &|a| a * 1e-2)])?,
            temperature: one_of(
                "cell.temperature",
                &[(c.temperature_k, &id), (c.temperature_c, &|t| t + CELSIUS_OFFSET)],
            )?,
            fill_temperature: c.fill_temperature_k.unwrap_or(DEFAULT_FILL_TEMPERATURE),
            noble_pressure: c.noble_pressure_torr,
            buffer_gases: c
                .buffer_gas
                .iter()
                .map(|b| BufferGas {
                    name: b.name.clone(),
                    pressure: b.pressure_torr,
                })
                .collect(),
            noble_polarization: c.noble_polarization,
            alkali_density: c.alkali_density_cm3,
        };

        let p = &self.probe;
        let probe = ProbeSpec {
            power: one_of("probe.power", &[(p.power_w, &id), (p.power_mw, &|w| w * 1e-3)])?,
            detuning: one_of(
                "probe.detuning",
                &[(p.detuning_hz, &id), (p.detuning_ghz, &|d| d * 1e9)],
            )?,
            linewidth: one_of(
                "probe.linewidth",
                &[(p.linewidth_hz, &id), (p.linewidth_ghz, &|d| d * 1e9)],
            )?,
            pulse_duration: one_of("probe.pulse", &[(p.pulse_s, &id), (p.pulse_ms, &|t| t * 1e-3)])?,
        };

        let r = &self.rates;
        let rates = RateSpec {
            spin_destruction: r.spin_destruction_per_s,
            noble_relaxation: one_of(
                "rates.noble_relaxation",
                &[
                    (r.noble_relaxation_per_s, &id),
                    (r.noble_lifetime_h, &|h| 1.0 / (h * 3600.0)),
                ],
            )?,
        };

        let pm = &self.pump;
        let drive = match (pm.rate_per_s, pm.rate_over_spin_destruction, pm.alkali_polarization) {
            (Some(r), None, None) => PumpDrive::Rate(r),
            (None, Some(x), None) => PumpDrive::Rate(x * rates.spin_destruction),
            (None, None, Some(pa)) => PumpDrive::Polarization(pa),
            (None, None, None) => return Err(Error::validation("pump.rate", "missing")),
            _ => {
                return Err(Error::validation(
                    "pump.rate",
                    "give exactly one of rate_per_s, rate_over_spin_destruction, alkali_polarization",
                ))
            }
        };
        let light_shift = match (pm.light_shift_hz, pm.light_shift_rad_per_s) {
            (None, None) => 0.0,
            _ => one_of(
                "pump.light_shift",
                &[(pm.light_shift_rad_per_s, &id), (pm.light_shift_hz, &|f| f * TWO_PI)],
            )?,
        };
        let pump = PumpSpec {
            drive,
            light_shift,
            q_factor: pm.q_factor,
        };

        let f = &self.field;
        let field = FieldSpec {
            bias: one_of("field.bias", &[(f.bias_g, &id), (f.bias_mg, &|b| b * 1e-3)])?,
            detuning_override: f.detuning_override_rad_per_s,
        };

        let config = PhysicalConfig {
            cell,
            probe,
            pump,
            rates,
            field,
        };
        config.validate()?;
        Ok(config)
    }

    /// Canonical-unit file for a configuration.
    pub fn from_physical(c: &PhysicalConfig) -> Self {
        let (rate, pol) = match c.pump.drive {
            PumpDrive::Rate(r) => (Some(r), None),
            PumpDrive::Polarization(p) => (None, Some(p)),
        };
        ConfigFile {
            cell: CellSection {
                alkali: c.cell.alkali.to_string(),
                noble: c.cell.noble.to_string(),
                length_cm: c.cell.length,
                area_cm2: Some(c.cell.area),
                temperature_k: Some(c.cell.temperature),
                fill_temperature_k: Some(c.cell.fill_temperature),
                noble_pressure_torr: c.cell.noble_pressure,
                noble_polarization: c.cell.noble_polarization,
                alkali_density_cm3: c.cell.alkali_density,
                buffer_gas: c
                    .cell
                    .buffer_gases
                    .iter()
                    .map(|b| BufferGasEntry {
                        name: b.name.clone(),
                        pressure_torr: b.pressure,
                    })
                    .collect(),
                ..Default::default()
            },
            probe: ProbeSection {
                power_w: Some(c.probe.power),
                detuning_hz: Some(c.probe.detuning),
                linewidth_hz: Some(c.probe.linewidth),
                pulse_s: Some(c.probe.pulse_duration),
                ..Default::default()
            },
            pump: PumpSection {
                rate_per_s: rate,
                alkali_polarization: pol,
                light_shift_rad_per_s: Some(c.pump.light_shift),
                q_factor: c.pump.q_factor,
                ..Default::default()
            },
            rates: RatesSection {
                spin_destruction_per_s: c.rates.spin_destruction,
                noble_relaxation_per_s: Some(c.rates.noble_relaxation),
                noble_lifetime_h: None,
            },
            field: FieldSection {
                bias_g: Some(c.field.bias),
                bias_mg: None,
                detuning_override_rad_per_s: c.field.detuning_override,
            },
        }
    }
}

pub fn parse_config_str(text: &str) -> Result<PhysicalConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_physical()
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<PhysicalConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

/// Canonical TOML text of a configuration.
pub fn to_normalized_toml(config: &PhysicalConfig) -> String {
    toml::to_string(&ConfigFile::from_physical(config)).expect("config sections always serialize")
}

/// SHA-256 of the normalized TOML, hex encoded.
pub fn config_digest(config: &PhysicalConfig) -> String {
    hex::encode(Sha256::digest(to_normalized_toml(config).as_bytes()))
}
