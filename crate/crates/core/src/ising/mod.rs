//! Transverse-field Ising chain.

pub mod adiabatic;
pub mod dynamics;
pub mod exact;
pub mod oracle;

pub use exact::{
    bogoliubov_angle, enumerate_levels, first_gap, lambda_even, lambda_odd,
    min_two_fermion_gap, sector_spectrum, FermionMode, IsingParams, Level, Sector,
    SectorSpectrum,
};
