//! From a physical cell description to the dimensionless couplings of the
//! Gaussian model.
//!
//! Optical frequencies (probe detuning, excited-state linewidth) are ordinary
//! frequencies in Hz; spin rates and precession frequencies are angular, in
//! rad/s. Everything else is cgs.

use crate::error::{Error, Result};
use crate::gaussian::ChannelSpec;
use crate::species::{
    lookup_pair, photon_number, torr_to_density, AlkaliName, ElectronRadius, ExchangePair,
    NobleName, DEFAULT_FILL_TEMPERATURE, SPEED_OF_LIGHT,
};

/// Minimum ratio |δ_e|/Γ_e for the dispersive approximation.
pub const DISPERSIVE_RATIO: f64 = 10.0;
/// Minimum ratio Δ/max(γ_a, J, |Q|) for adiabatic following of the alkali.
pub const OFF_RESONANCE_RATIO: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BufferGas {
    pub name: String,
    /// Torr.
    pub pressure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub alkali: AlkaliName,
    pub noble: NobleName,
    /// cm.
    pub length: f64,
    /// cm².
    pub area: f64,
    /// Operating temperature, K.
    pub temperature: f64,
    /// Temperature at which the fill pressures were quoted, K.
    pub fill_temperature: f64,
    /// Torr.
    pub noble_pressure: f64,
    pub buffer_gases: Vec<BufferGas>,
    pub noble_polarization: f64,
    /// Replaces the vapor-pressure density when set, cm⁻³.
    pub alkali_density: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    /// W.
    pub power: f64,
    /// Hz. The sign sets the sign of the optical coupling.
    pub detuning: f64,
    /// Pressure-broadened optical linewidth, Hz.
    pub linewidth: f64,
    /// s.
    pub pulse_duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpDrive {
    /// Optical pumping rate R_op, s⁻¹.
    Rate(f64),
    /// Steady-state alkali polarization; the rate follows from γ_sd.
    Polarization(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PumpSpec {
    pub drive: PumpDrive,
    /// Pump light shift Ω_1 on the first cell, rad/s.
    pub light_shift: f64,
    /// Projection-noise slowing-down factor q.
    pub q_factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSpec {
    /// Alkali spin destruction γ_sd, s⁻¹.
    pub spin_destruction: f64,
    /// Noble-gas wall and gradient relaxation γ_b, s⁻¹.
    pub noble_relaxation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    /// Bias field on the first cell, G.
    pub bias: f64,
    /// Replaces the computed alkali/noble detuning Δ, rad/s.
    pub detuning_override: Option<f64>,
}

/// Complete experimental description in canonical units.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalConfig {
    pub cell: CellSpec,
    pub probe: ProbeSpec,
    pub pump: PumpSpec,
    pub rates: RateSpec,
    pub field: FieldSpec,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite and > 0, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite, got {v}")))
    }
}

impl PhysicalConfig {
    pub fn pair(&self) -> Result<ExchangePair> {
        lookup_pair(self.cell.alkali, self.cell.noble)
    }

    /// Check every input invariant. Errors carry the config path of the offending key.
    pub fn validate(&self) -> Result<()> {
        self.pair()?;
        let c = &self.cell;
        positive("cell.length", c.length)?;
        positive("cell.area", c.area)?;
        positive("cell.temperature", c.temperature)?;
        positive("cell.fill_temperature", c.fill_temperature)?;
        positive("cell.noble_pressure", c.noble_pressure)?;
        for (i, b) in c.buffer_gases.iter().enumerate() {
            if b.name.trim().is_empty() {
                return Err(Error::validation(format!("cell.buffer_gas[{i}].name"), "empty gas name"));
            }
            positive(&format!("cell.buffer_gas[{i}].pressure"), b.pressure)?;
        }
        if !(c.noble_polarization > 0.0 && c.noble_polarization <= 1.0) {
            return Err(Error::validation(
                "cell.noble_polarization",
                format!("must lie in (0, 1], got {}", c.noble_polarization),
            ));
        }
        if let Some(n) = c.alkali_density {
            positive("cell.alkali_density", n)?;
        }

        let p = &self.probe;
        positive("probe.power", p.power)?;
        finite("probe.detuning", p.detuning)?;
        if p.detuning == 0.0 {
            return Err(Error::validation("probe.detuning", "must be nonzero"));
        }
        positive("probe.linewidth", p.linewidth)?;
        positive("probe.pulse_duration", p.pulse_duration)?;

        match self.pump.drive {
            PumpDrive::Rate(r) => positive("pump.rate", r)?,
            PumpDrive::Polarization(pa) => {
                if !(pa > 0.0 && pa < 1.0) {
                    return Err(Error::validation(
                        "pump.alkali_polarization",
                        format!("must lie in (0, 1), got {pa}"),
                    ));
                }
            }
        }
        finite("pump.light_shift", self.pump.light_shift)?;
        if !(self.pump.q_factor.is_finite() && self.pump.q_factor >= 1.0) {
            return Err(Error::validation(
                "pump.q_factor",
                format!("must be >= 1, got {}", self.pump.q_factor),
            ));
        }

        positive("rates.spin_destruction", self.rates.spin_destruction)?;
        positive("rates.noble_relaxation", self.rates.noble_relaxation)?;

        positive("field.bias", self.field.bias)?;
        if let Some(d) = self.field.detuning_override {
            finite("field.detuning_override", d)?;
        }
        Ok(())
    }

    /// Alkali number density, cm⁻³.
    pub fn alkali_density(&self) -> Result<f64> {
        match self.cell.alkali_density {
            Some(n) => Ok(n),
            None => self.pair()?.alkali.density(self.cell.temperature),
        }
    }

    /// Noble-gas number density from the fill pressure, cm⁻³.
    pub fn noble_density(&self) -> f64 {
        torr_to_density(self.cell.noble_pressure, self.cell.fill_temperature)
    }

    /// (R_op, γ_a, P_a) from whichever pump input was given.
    pub fn pump_rates(&self) -> (f64, f64, f64) {
        let gsd = self.rates.spin_destruction;
        match self.pump.drive {
            PumpDrive::Rate(r) => (r, gsd + r, r / (r + gsd)),
            PumpDrive::Polarization(pa) => {
                let r = pa * gsd / (1.0 - pa);
                (r, gsd + r, pa)
            }
        }
    }
}

impl Default for CellSpec {
    fn default() -> Self {
        CellSpec {
            alkali: AlkaliName::K,
            noble: NobleName::He3,
            length: 5.0,
            area: 0.02,
            temperature: 523.15,
            fill_temperature: DEFAULT_FILL_TEMPERATURE,
            noble_pressure: 880.0,
            buffer_gases: Vec::new(),
            noble_polarization: 0.56,
            alkali_density: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Magnetizations {
    pub m_a: f64,
    pub m_b: f64,
    pub m_l: f64,
    pub p_a: f64,
    pub n_a: f64,
    pub n_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    /// Spin-exchange rate, s⁻¹.
    pub j: f64,
    /// Dimensionless optical coupling coefficient.
    pub a: f64,
    /// Optical coupling rate, s⁻¹. Carries the sign of the probe detuning.
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellIndex {
    First,
    Second,
}

impl CellIndex {
    /// Sign of the exchange shift: + for the first cell, − for the second.
    pub fn sign(self) -> f64 {
        match self {
            CellIndex::First => 1.0,
            CellIndex::Second => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precession {
    pub omega_a: f64,
    pub omega_b: f64,
    pub detuning: f64,
}

/// Bare precession inputs for one cell: gyromagnetic ratios, field and pump light shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    pub g_a: f64,
    pub g_b: f64,
    pub field: f64,
    pub light_shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMatch {
    /// Bias on the second cell, G.
    pub b2: f64,
    /// Ω_2 − Ω_1, rad/s.
    pub light_shift_difference: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DeriveOptions {
    pub allow_regime_violation: bool,
    pub electron_radius: ElectronRadius,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    pub m_a: f64,
    pub m_b: f64,
    pub m_l: f64,
    pub p_a: f64,
    /// Optical pumping rate, s⁻¹.
    pub r_op: f64,
    /// Total alkali transverse relaxation γ_sd + R_op, s⁻¹.
    pub gamma_a: f64,
    /// Probe field attenuation per length, cm⁻¹.
    pub gamma_l: f64,
    /// Noble-gas wall relaxation, s⁻¹.
    pub gamma_b: f64,
    /// Total noble-gas decoherence, s⁻¹.
    pub big_gamma_b: f64,
    pub j: f64,
    pub a: f64,
    pub q: f64,
    /// ω_a − ω_b, rad/s.
    pub detuning: f64,
    pub omega_a: f64,
    pub omega_b: f64,
    /// Exchange-induced noble-gas frequency shift, rad/s.
    pub delta_omega_b: f64,
    pub psi: f64,
    pub kappa: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub rho: f64,
    /// Resonant cross-section, cm².
    pub sigma: f64,
    pub optical_depth: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub pulse_duration: f64,
    pub q_factor: f64,
    pub field_match: FieldMatch,
    pub warnings: Vec<Warning>,
}

/// Ensemble sizes, magnetizations and photon number.
pub fn magnetizations(config: &PhysicalConfig) -> Result<Magnetizations> {
    let pair = config.pair()?;
    let n_a = config.alkali_density()?;
    let n_b = config.noble_density();
    let volume = config.cell.area * config.cell.length;
    let (_, _, p_a) = config.pump_rates();
    let big_n_a = n_a * volume;
    let big_n_b = n_b * volume;
    Ok(Magnetizations {
        m_a: p_a * big_n_a * (pair.alkali.nuclear_spin + 0.5),
        m_b: config.cell.noble_polarization * big_n_b / 2.0,
        m_l: photon_number(
            config.probe.power,
            config.probe.pulse_duration,
            pair.alkali.d1_wavelength,
        ),
        p_a,
        n_a,
        n_b,
    })
}

/// Exchange rate J and optical coupling Q.
pub fn coupling_rates(
    config: &PhysicalConfig,
    m: &Magnetizations,
    electron_radius: ElectronRadius,
) -> Result<Couplings> {
    let pair = config.pair()?;
    let area = config.cell.area;
    let j = pair.exchange_coefficient * (m.m_a * m.m_b).sqrt() / (area * config.cell.length);
    let a = 2.0 * electron_radius.value() * SPEED_OF_LIGHT * pair.alkali.oscillator_strength
        / (area * config.probe.detuning * pair.alkali.multiplicity());
    let q = a / config.probe.pulse_duration * (m.m_a * m.m_l).sqrt();
    Ok(Couplings { j, a, q })
}

/// Dressed precession frequencies of one cell. The exchange shift enters with
/// + in the first cell and − in the second.
pub fn precession_frequencies(drive: &Drive, j: f64, m_a: f64, m_b: f64, cell: CellIndex) -> Precession {
    let s = cell.sign();
    let omega_a = drive.g_a * drive.field + drive.light_shift + s * j * (m_b / m_a).sqrt();
    let omega_b = drive.g_b * drive.field + s * j * (m_a / m_b).sqrt();
    Precession {
        omega_a,
        omega_b,
        detuning: omega_a - omega_b,
    }
}

/// Second-cell field and light-shift offset that make both cells precess at the
/// same alkali and noble-gas frequencies.
pub fn field_matching(g_a: f64, g_b: f64, b1: f64, j: f64, m_a: f64, m_b: f64) -> FieldMatch {
    let b2 = b1 + 2.0 * (j / g_b) * (m_a / m_b).sqrt();
    FieldMatch {
        b2,
        light_shift_difference: g_a * (b1 - b2) + 2.0 * j * (m_b / m_a).sqrt(),
    }
}

/// Resonant absorption cross-section 2 r_e c f / Γ_e, cm².
pub fn resonant_cross_section(config: &PhysicalConfig, electron_radius: ElectronRadius) -> Result<f64> {
    let f = config.pair()?.alkali.oscillator_strength;
    Ok(2.0 * electron_radius.value() * SPEED_OF_LIGHT * f / config.probe.linewidth)
}

/// Rates and dimensionless parameters given J and Q. The regime checks are
/// applied by [`derive`], not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensionless {
    pub gamma_a: f64,
    pub gamma_l: f64,
    pub big_gamma_b: f64,
    pub kappa: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub rho: f64,
    pub psi: f64,
    pub delta_omega_b: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn relaxation_and_dimensionless(
    gamma_a: f64,
    gamma_b: f64,
    j: f64,
    q: f64,
    detuning: f64,
    pulse_duration: f64,
    q_factor: f64,
    gamma_l: f64,
    length: f64,
) -> Dimensionless {
    let denom = detuning * detuning + gamma_a * gamma_a;
    let big_gamma_b = gamma_b + gamma_a * j * j / denom;
    Dimensionless {
        gamma_a,
        gamma_l,
        big_gamma_b,
        kappa: j * q.abs() * pulse_duration / denom.sqrt(),
        epsilon: 4.0 * gamma_l * length,
        eta: 2.0 * big_gamma_b * pulse_duration,
        rho: 4.0 * q_factor * gamma_a / (j * j * pulse_duration),
        psi: gamma_a.atan2(detuning),
        delta_omega_b: detuning * j * j / denom,
    }
}

fn drive(config: &PhysicalConfig, pair: &ExchangePair) -> Drive {
    Drive {
        g_a: pair.alkali.gyromagnetic_ratio,
        g_b: pair.noble.gyromagnetic_ratio,
        field: config.field.bias,
        light_shift: config.pump.light_shift,
    }
}

/// Full pipeline from configuration to model parameters.
pub fn derive(config: &PhysicalConfig, options: DeriveOptions) -> Result<DerivedParams> {
    config.validate()?;
    let pair = config.pair()?;
    let mut warnings = Vec::new();

    let probe = &config.probe;
    let dispersive_limit = DISPERSIVE_RATIO * probe.linewidth;
    if probe.detuning.abs() < dispersive_limit {
        let err = Error::DispersiveRegime {
            detuning: probe.detuning.abs(),
            limit: dispersive_limit,
        };
        if !options.allow_regime_violation {
            return Err(err);
        }
        warnings.push(Warning {
            code: err.code(),
            message: err.to_string(),
        });
    }

    let m = magnetizations(config)?;
    let c = coupling_rates(config, &m, options.electron_radius)?;
    let (r_op, gamma_a, _) = config.pump_rates();
    let drv = drive(config, &pair);
    let prec = precession_frequencies(&drv, c.j, m.m_a, m.m_b, CellIndex::First);
    let detuning = config.field.detuning_override.unwrap_or(prec.detuning);

    let sigma = resonant_cross_section(config, options.electron_radius)?;
    let wing = probe.linewidth * probe.linewidth / (4.0 * probe.detuning * probe.detuning);
    let gamma_l = m.n_a * sigma * wing;
    let dl = relaxation_and_dimensionless(
        gamma_a,
        config.rates.noble_relaxation,
        c.j,
        c.q,
        detuning,
        probe.pulse_duration,
        config.pump.q_factor,
        gamma_l,
        config.cell.length,
    );

    let off_limit = OFF_RESONANCE_RATIO * gamma_a.max(c.j).max(c.q.abs());
    if !(detuning >= off_limit) {
        let err = Error::OffResonance {
            detuning,
            limit: off_limit,
        };
        if !options.allow_regime_violation {
            return Err(err);
        }
        warnings.push(Warning {
            code: err.code(),
            message: err.to_string(),
        });
    }

    if !(dl.epsilon >= 0.0 && dl.epsilon < 1.0) {
        return Err(Error::Unphysical {
            quantity: "epsilon",
            value: dl.epsilon,
        });
    }
    if !(dl.eta >= 0.0 && dl.eta <= 1.0) {
        return Err(Error::Unphysical {
            quantity: "eta",
            value: dl.eta,
        });
    }
    if !(dl.kappa.is_finite() && dl.rho.is_finite()) {
        return Err(Error::Unphysical {
            quantity: "kappa",
            value: dl.kappa,
        });
    }

    Ok(DerivedParams {
        m_a: m.m_a,
        m_b: m.m_b,
        m_l: m.m_l,
        p_a: m.p_a,
        r_op,
        gamma_a,
        gamma_l,
        gamma_b: config.rates.noble_relaxation,
        big_gamma_b: dl.big_gamma_b,
        j: c.j,
        a: c.a,
        q: c.q,
        detuning,
        omega_a: prec.omega_a,
        omega_b: prec.omega_b,
        delta_omega_b: dl.delta_omega_b,
        psi: dl.psi,
        kappa: dl.kappa,
        epsilon: dl.epsilon,
        eta: dl.eta,
        rho: dl.rho,
        sigma,
        optical_depth: m.n_a * sigma * config.cell.length,
        n_a: m.n_a,
        n_b: m.n_b,
        pulse_duration: probe.pulse_duration,
        q_factor: config.pump.q_factor,
        field_match: field_matching(drv.g_a, drv.g_b, drv.field, c.j, m.m_a, m.m_b),
        warnings,
    })
}

/// Alkali relaxation from probe absorption alone, P_a·R_a·Γ_e²/(4δ_e²), s⁻¹.
pub fn absorption_rate(config: &PhysicalConfig, params: &DerivedParams) -> Result<f64> {
    let pair = config.pair()?;
    let probe = &config.probe;
    let resonant_pumping = params.m_l * params.sigma
        / (probe.pulse_duration * pair.alkali.multiplicity() * config.cell.area);
    Ok(params.p_a * resonant_pumping * probe.linewidth * probe.linewidth
        / (4.0 * probe.detuning * probe.detuning))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalDepthIdentity {
    /// κ².
    pub lhs: f64,
    /// 2Γ_b·T·d.
    pub rhs: f64,
    pub ratio: f64,
    /// (γ_absp/γ_a)·(J²γ_a/(Δ²+γ_a²))/Γ_b, which the ratio must equal.
    pub predicted_ratio: f64,
}

/// Compare κ² with 2Γ_b·T·d.
pub fn optical_depth_identity(config: &PhysicalConfig, params: &DerivedParams) -> Result<OpticalDepthIdentity> {
    let lhs = params.kappa * params.kappa;
    let rhs = 2.0 * params.big_gamma_b * params.pulse_duration * params.optical_depth;
    let g = params.gamma_a;
    let exchange_part = params.j * params.j * g / (params.detuning * params.detuning + g * g);
    let predicted_ratio = absorption_rate(config, params)? / g * exchange_part / params.big_gamma_b;
    Ok(OpticalDepthIdentity {
        lhs,
        rhs,
        ratio: lhs / rhs,
        predicted_ratio,
    })
}

/// Parameters recomputed as if probe absorption were the only alkali
/// relaxation and the noble gas had no intrinsic decay. J, Q and the
/// magnetizations are kept; rates and dimensionless numbers follow.
pub fn absorption_dominated(config: &PhysicalConfig, params: &DerivedParams) -> Result<DerivedParams> {
    let gamma_a = absorption_rate(config, params)?;
    let dl = relaxation_and_dimensionless(
        gamma_a,
        0.0,
        params.j,
        params.q,
        params.detuning,
        params.pulse_duration,
        params.q_factor,
        params.gamma_l,
        config.cell.length,
    );
    Ok(DerivedParams {
        gamma_a,
        gamma_b: 0.0,
        big_gamma_b: dl.big_gamma_b,
        kappa: dl.kappa,
        eta: dl.eta,
        rho: dl.rho,
        psi: dl.psi,
        delta_omega_b: dl.delta_omega_b,
        ..params.clone()
    })
}

impl DerivedParams {
    pub fn channel_spec(&self) -> ChannelSpec {
        ChannelSpec {
            kappa: self.kappa,
            epsilon: self.epsilon,
            eta: self.eta,
            rho: self.rho,
        }
    }

    /// Flat key/value listing in the units documented on each field.
    pub fn report(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("kappa", self.kappa),
            ("epsilon", self.epsilon),
            ("eta", self.eta),
            ("rho", self.rho),
            ("Gamma_b_per_s", self.big_gamma_b),
            ("d", self.optical_depth),
            ("J_per_s", self.j),
            ("Q_per_s", self.q),
            ("a", self.a),
            ("Delta_rad_per_s", self.detuning),
            ("omega_a_rad_per_s", self.omega_a),
            ("omega_b_rad_per_s", self.omega_b),
            ("delta_omega_b_rad_per_s", self.delta_omega_b),
            ("psi_rad", self.psi),
            ("gamma_a_per_s", self.gamma_a),
            ("gamma_b_per_s", self.gamma_b),
            ("gamma_L_per_cm", self.gamma_l),
            ("R_op_per_s", self.r_op),
            ("P_a", self.p_a),
            ("M_a", self.m_a),
            ("M_b", self.m_b),
            ("M_L", self.m_l),
            ("n_a_per_cm3", self.n_a),
            ("n_b_per_cm3", self.n_b),
            ("sigma_cm2", self.sigma),
            ("B2_gauss", self.field_match.b2),
            ("Omega2_minus_Omega1_rad_per_s", self.field_match.light_shift_difference),
            ("T_s", self.pulse_duration),
            ("q", self.q_factor),
        ]
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Potassium/helium-3 cell tuned to the headline working point.
    pub(crate) fn headline() -> PhysicalConfig {
        let gsd = 1720.0 / 2.6;
        PhysicalConfig {
            cell: CellSpec {
                buffer_gases: vec![BufferGas {
                    name: "N2".into(),
                    pressure: 70.0,
                }],
                ..CellSpec::default()
            },
            probe: ProbeSpec {
                power: 0.4,
                detuning: 3.0e12,
                linewidth: 80.0e9,
                pulse_duration: 0.2,
            },
            pump: PumpSpec {
                drive: PumpDrive::Rate(1.6 * gsd),
                light_shift: -2.0 * std::f64::consts::PI * 6330.0,
                q_factor: 1.22,
            },
            rates: RateSpec {
                spin_destruction: gsd,
                noble_relaxation: 1.0 / (50.0 * 3600.0),
            },
            field: FieldSpec {
                bias: 0.010,
                detuning_override: None,
            },
        }
    }

    #[test]
    fn magnetization_definitions() {
        let mut cfg = headline();
        cfg.cell.noble_polarization = 1.0;
        cfg.cell.alkali_density = Some(1.0e14);
        cfg.pump.drive = PumpDrive::Polarization(0.5);
        let m = magnetizations(&cfg).unwrap();
        let volume = cfg.cell.area * cfg.cell.length;
        assert_relative_eq!(m.m_b, m.n_b * volume / 2.0, max_relative = 1e-15);
        assert_relative_eq!(m.m_a, 0.5 * 1.0e14 * volume * 2.0, max_relative = 1e-15);
    }

    #[test]
    fn pump_closure_reproduces_target() {
        let mut cfg = headline();
        let gsd = cfg.rates.spin_destruction;
        cfg.pump.drive = PumpDrive::Rate(1.6 * gsd);
        let (_, _, pa) = cfg.pump_rates();
        assert!((pa - 0.62).abs() < 0.01, "P_a {pa}");
        cfg.pump.drive = PumpDrive::Polarization(0.62);
        let (r, g, pa) = cfg.pump_rates();
        assert_relative_eq!(r / g, pa, max_relative = 1e-14);
        cfg.pump.drive = PumpDrive::Rate(1.1 * gsd);
        assert!((cfg.pump_rates().2 - 0.52).abs() < 0.01);
    }

    #[test]
    fn coupling_scalings() {
        let cfg = headline();
        let m = magnetizations(&cfg).unwrap();
        let c = coupling_rates(&cfg, &m, ElectronRadius::Physical).unwrap();
        let m2 = Magnetizations {
            m_a: 2.0 * m.m_a,
            m_b: 2.0 * m.m_b,
            ..m
        };
        let c2 = coupling_rates(&cfg, &m2, ElectronRadius::Physical).unwrap();
        assert_relative_eq!(c2.j, 2.0 * c.j, max_relative = 1e-12);
        let m4 = Magnetizations {
            m_a: 4.0 * m.m_a,
            ..m
        };
        let c4 = coupling_rates(&cfg, &m4, ElectronRadius::Physical).unwrap();
        assert_relative_eq!(c4.j, 2.0 * c.j, max_relative = 1e-12);

        let mut long = cfg.clone();
        long.probe.pulse_duration *= 2.0;
        let ml = magnetizations(&long).unwrap();
        let cl = coupling_rates(&long, &ml, ElectronRadius::Physical).unwrap();
        assert_relative_eq!(cl.q, c.q / 2f64.sqrt(), max_relative = 1e-12);

        let mut neg = cfg.clone();
        neg.probe.detuning = -neg.probe.detuning;
        let cn = coupling_rates(&neg, &m, ElectronRadius::Physical).unwrap();
        assert!(cn.a < 0.0 && cn.q < 0.0);
    }

    #[test]
    fn decoherence_substitution() {
        let d = relaxation_and_dimensionless(1.0, 0.0, 1.0, 1.0, 3.0, 1.0, 1.0, 0.0, 1.0);
        assert_relative_eq!(d.big_gamma_b, 0.1, max_relative = 1e-15);
        let far = relaxation_and_dimensionless(1.0, 0.2, 1.0, 1.0, 1e9, 1.0, 1.0, 0.0, 1.0);
        assert_relative_eq!(far.big_gamma_b, 0.2, max_relative = 1e-12);
        assert!(far.psi < 1e-8 && far.delta_omega_b < 1e-8);
    }

    #[test]
    fn kappa_scales_with_root_pulse_duration() {
        let mut cfg = headline();
        cfg.field.detuning_override = Some(1.0e7);
        let opts = DeriveOptions::default();
        let k1 = derive(&cfg, opts).unwrap().kappa;
        cfg.probe.pulse_duration *= 2.0;
        let k2 = derive(&cfg, opts).unwrap().kappa;
        assert_relative_eq!(k2 / k1, 2f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn precession_without_exchange() {
        let drv = Drive {
            g_a: 10.0,
            g_b: 0.1,
            field: 0.5,
            light_shift: 0.0,
        };
        let p = precession_frequencies(&drv, 0.0, 1.0, 2.0, CellIndex::First);
        assert_eq!(p.omega_a, 5.0);
        assert_eq!(p.omega_b, 0.05);
        let p1 = precession_frequencies(&drv, 3.0, 1.0, 4.0, CellIndex::First);
        let p2 = precession_frequencies(&drv, 3.0, 1.0, 4.0, CellIndex::Second);
        assert_relative_eq!(p1.omega_a - 5.0, -(p2.omega_a - 5.0), max_relative = 1e-14);
        assert_relative_eq!(p1.omega_b - 0.05, -(p2.omega_b - 0.05), max_relative = 1e-14);
    }

    #[test]
    fn field_matching_round_trip() {
        let fm = field_matching(10.0, 0.1, 0.5, 0.0, 1.0, 2.0);
        assert_eq!(fm.b2, 0.5);
        assert_eq!(fm.light_shift_difference, 0.0);

        let cfg = headline();
        let p = derive(&cfg, DeriveOptions::default()).unwrap();
        let pair = cfg.pair().unwrap();
        let d1 = drive(&cfg, &pair);
        let d2 = Drive {
            field: p.field_match.b2,
            light_shift: d1.light_shift + p.field_match.light_shift_difference,
            ..d1
        };
        let w1 = precession_frequencies(&d1, p.j, p.m_a, p.m_b, CellIndex::First);
        let w2 = precession_frequencies(&d2, p.j, p.m_a, p.m_b, CellIndex::Second);
        assert!((w1.omega_a - w2.omega_a).abs() <= 1e-12 * w1.omega_a.abs());
        assert!((w1.omega_b - w2.omega_b).abs() <= 1e-12 * w1.omega_b.abs());
        let shift = p.field_match.b2 - cfg.field.bias;
        assert!(shift > 0.0 && shift < 0.1 * cfg.field.bias, "B2-B1 = {shift}");
    }

    #[test]
    fn headline_regression() {
        let cfg = headline();
        let p = derive(&cfg, DeriveOptions::default()).unwrap();
        assert!(p.warnings.is_empty());
        assert!((1.4..=2.8).contains(&p.kappa), "kappa {}", p.kappa);
        assert!((0.2..=0.45).contains(&p.epsilon), "epsilon {}", p.epsilon);
        assert!((0.08..=0.18).contains(&p.eta), "eta {}", p.eta);
        assert!(p.detuning > 0.0 && p.detuning > 20.0 * p.j);
        let id = optical_depth_identity(&cfg, &p).unwrap();
        assert!(id.ratio > 0.0 && id.ratio <= 1.0);
        assert_relative_eq!(id.ratio, id.predicted_ratio, max_relative = 1e-12);
    }

    #[test]
    fn optical_depth_identity_is_exact_when_absorption_dominates() {
        let cfg = headline();
        let p = derive(&cfg, DeriveOptions::default()).unwrap();
        let forced = absorption_dominated(&cfg, &p).unwrap();
        let id = optical_depth_identity(&cfg, &forced).unwrap();
        assert_relative_eq!(id.ratio, 1.0, max_relative = 1e-12);

        let mut slow = forced.clone();
        slow.gamma_b = 1e-3;
        slow.big_gamma_b += 1e-3;
        assert!(optical_depth_identity(&cfg, &slow).unwrap().ratio < 1.0);
    }

    #[test]
    fn regime_guards() {
        let mut cfg = headline();
        cfg.probe.linewidth = 0.35e12;
        cfg.cell.alkali_density = Some(1.0e14);
        assert!(matches!(
            derive(&cfg, DeriveOptions::default()),
            Err(Error::DispersiveRegime { .. })
        ));
        let relaxed = DeriveOptions {
            allow_regime_violation: true,
            ..Default::default()
        };
        let p = derive(&cfg, relaxed).unwrap();
        assert_eq!(p.warnings[0].code, "DispersiveRegimeViolation");

        let mut cfg = headline();
        cfg.field.detuning_override = Some(100.0);
        assert!(matches!(
            derive(&cfg, DeriveOptions::default()),
            Err(Error::OffResonance { .. })
        ));
        cfg.field.detuning_override = Some(-1.0e6);
        assert!(matches!(
            derive(&cfg, DeriveOptions::default()),
            Err(Error::OffResonance { .. })
        ));
    }

    #[test]
    fn validation_names_field() {
        let mut cfg = headline();
        cfg.cell.noble_polarization = 1.2;
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.field(), Some("cell.noble_polarization"));
        let mut cfg = headline();
        cfg.pump.q_factor = 0.9;
        assert_eq!(cfg.validate().unwrap_err().field(), Some("pump.q_factor"));
    }

    #[test]
    fn unphysical_scattering_is_rejected() {
        let mut cfg = headline();
        cfg.probe.linewidth = 290e9;
        cfg.cell.alkali_density = Some(1e16);
        let err = derive(
            &cfg,
            DeriveOptions {
                allow_regime_violation: true,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unphysical { quantity: "epsilon", .. }), "{err}");
    }
}
