//! Numerical kinetic-theory library: weak-form quantum collision operators
//! (binary Boltzmann-type with quantum statistics corrections, and the
//! Landau-type grazing-collision limit), the intermediate decompositions
//! connecting them, and a convergence-rate verification harness.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod operators;
pub mod potentials;
pub mod quadrature;
pub mod states;

pub use error::{Error, Result};
