//! Exact and numerical verification of the reduced SU(2) Yang–Mills
//! integrable system: the 4D and 5D Hamiltonian formulations, their Poisson
//! structure, Puiseux balances and parameter curves, curve genera, and the
//! separation-of-variables linearization on a genus-2 hyperelliptic curve.

pub mod error;
pub mod exact;
pub mod geometry;
pub mod numerics;
pub mod painleve;
pub mod report;
pub mod suites;
pub mod systems;

pub use error::{Error, Result};
