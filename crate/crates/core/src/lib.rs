//! Cavity quantum electrodynamics of the Su-Schrieffer-Heeger chain.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: bands, interband dipole, Zak phase, band-edge expansion
//! - [`numerics`]: quadrature, Newton, fits, singular values
//! - [`cavity`]: photon self-energy, dressed propagator, spectral maps
//! - [`keldysh`]: thermal Keldysh self-energy, `G^K`, photon occupation
//! - [`kerr`]: photon-number-dependent resonance and Kerr coefficients
//! - [`vertex`]: the four-photon vertex, direct and stationary-phase
//! - [`biphoton`]: two-photon states and Schmidt decomposition
//! - [`dressing`]: one-loop electron self-energy and dressed bands
//! - [`cli`]: the batch front-end behind the `sshcav` binary

pub mod biphoton;
pub mod cavity;
pub mod cli;
pub mod dressing;
pub mod error;
pub mod keldysh;
pub mod kerr;
pub mod model;
pub mod numerics;
pub mod output;
pub mod vertex;

pub use cavity::CavityParams;
pub use error::{Error, Result};
pub use keldysh::ThermalState;
pub use model::SshParams;
pub use numerics::FrequencyGrid;
pub use vertex::InteractionKernel;
