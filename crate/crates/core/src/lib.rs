//! Adiabatic magnetic-field sweeps in cyclic spin chains.
//!
//! The crate covers two models:
//!
//! - the transverse-field Ising chain, solved exactly through its free-fermion
//!   representation ([`ising::exact`]), swept numerically one momentum pair at a
//!   time ([`ising::dynamics`]) and estimated in closed form with the adiabatic
//!   approximation ([`ising::adiabatic`]);
//! - the anisotropic Heisenberg chain, treated by dense exact diagonalization in
//!   translation/parity sectors together with its large-field series
//!   ([`heisenberg`]).
//!
//! [`stability`] measures how symmetry-breaking perturbations change both
//! pictures, and [`cli`] turns all of it into CSV/JSON figure data.
//!
//! Energies are in units of the coupling `J` unless a function says otherwise;
//! times are in units of `ħ/J` when [`Units::default`] is used.

pub mod cli;
pub mod error;
pub mod heisenberg;
pub mod ising;
pub mod linalg;
pub mod ode;
pub mod report;
pub mod schedule;
pub mod spin;
pub mod stability;
pub mod units;

pub use error::{Error, Result};
pub use report::{ChannelProbability, ExcitationReport};
pub use schedule::FieldSchedule;
pub use units::Units;

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
