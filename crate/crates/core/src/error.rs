use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported alkali/noble-gas pair: {alkali} with {noble}")]
    UnsupportedPair { alkali: String, noble: String },

    #[error("unknown species `{0}`")]
    UnknownSpecies(String),

    #[error("temperature {0} K is outside the vapor-pressure model range [300, 700] K")]
    OutOfRangeTemperature(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    /// |Δ| is not large compared with γ_a, J and Q.
    #[error("off-resonance regime violated: |detuning| = {detuning:.6e} s^-1 < {limit:.6e} s^-1")]
    OffResonance { detuning: f64, limit: f64 },

    /// |δ_e| is not large compared with the optical linewidth.
    #[error("dispersive regime violated: |probe detuning| = {detuning:.6e} Hz < {limit:.6e} Hz")]
    DispersiveRegime { detuning: f64, limit: f64 },

    #[error("derived quantity `{quantity}` = {value} is outside its physical range")]
    Unphysical { quantity: &'static str, value: f64 },

    #[error("time step {dt:.3e} s exceeds the resolution limit {limit:.3e} s")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("measured quadrature variance {variance:e} is too small to condition on")]
    DegenerateMeasurement { variance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Stable machine-readable identifier used in diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedPair { .. } => "UnsupportedPair",
            Error::UnknownSpecies(_) => "UnknownSpecies",
            Error::OutOfRangeTemperature(_) => "OutOfRangeTemperature",
            Error::Parse(_) => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::OffResonance { .. } => "OffResonanceViolation",
            Error::DispersiveRegime { .. } => "DispersiveRegimeViolation",
            Error::Unphysical { .. } => "Unphysical",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::DegenerateMeasurement { .. } => "DegenerateMeasurement",
            Error::Io(_) => "IoError",
        }
    }

    /// Numerical guards (regime checks, step-size checks) as opposed to bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::OffResonance { .. }
                | Error::DispersiveRegime { .. }
                | Error::Unphysical { .. }
                | Error::StepTooLarge { .. }
                | Error::DegenerateMeasurement { .. }
        )
    }

    /// Field path for validation errors, when there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            Error::Validation { field, .. } => Some(field),
            _ => None,
        }
    }
}
