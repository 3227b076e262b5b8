//! Measurement-induced entanglement of two noble-gas spin ensembles: physical
//! parameter derivation, the closed-form Gaussian model, stochastic
//! cross-checks and parameter sweeps.

pub mod error;
pub mod gaussian;
pub mod io;
pub mod params;
pub mod species;
pub mod stochastic;
pub mod sweep;

pub use error::{Error, Result};
pub use gaussian::{ChannelSpec, GaussianChannel, GaussianSector, SqueezeResult};
pub use params::{derive, DeriveOptions, DerivedParams, PhysicalConfig};
pub use species::{AlkaliName, ElectronRadius, NobleName};
pub use stochastic::McSettings;
pub use sweep::{AxisKind, SweepAxis, SweepGrid, SweepResult};
