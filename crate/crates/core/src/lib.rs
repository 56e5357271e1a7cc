//! Thermodynamic quantities of prefix-free machines.
//!
//! A machine's domain enters the partition function `Z(T) = Σ 2^{-|p|/T}`,
//! the free energy `F = -T log₂ Z`, the energy `E = Σ |p| 2^{-|p|/T} / Z` and
//! the entropy `S = (E - F)/T` only through its length spectrum
//! `n ↦ #{p : |p| = n}`. This crate evaluates those quantities as validated
//! dyadic-interval enclosures, composes machines by concatenating programs,
//! and probes program-size complexity on small machines.
//!
//! The vocabulary follows statistical mechanics: a program is a microstate,
//! its length is the energy of that state, and `T` is the temperature.

pub mod error;
pub mod domain;
pub mod rigor;
pub mod spectrum;
pub mod thermo;
pub mod machines;
pub mod compose;
pub mod randomness;

pub use domain::{is_prefix_free, BitString, PrefixSet};
pub use error::{Error, Result};
pub use rigor::{Dyadic, DyadicInterval, Precision};
pub use compose::{compose, power, vn_family, CompositeMachine};
pub use machines::{builtin, builtin_by_name, Machine, Outcome};
pub use randomness::{rest_bits, RealSource};
pub use spectrum::{convolve_spectra, kraft_sum, spectrum_of, LengthSpectrum};
pub use thermo::{evaluate, Quantity, Temperature, ThermoReport, Zone};
