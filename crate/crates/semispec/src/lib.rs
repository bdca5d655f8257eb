//! Desk-scale verification toolkit for spectral localization of
//! non-self-adjoint semiclassical Schrödinger operators P = -h²Δ + V + iW.
//!
//! The crate covers the full pipeline: symbol assumption checks, Hamiltonian
//! flow averaging, exponential weight construction, eigenvalue lattices of
//! quadratic models with a Hermite-Galerkin oracle, grid discretizations,
//! resolvent/pseudospectrum sweeps, and an FBI-transform verification at
//! n = 1. See the `examples/` directory for one runnable example per
//! capability, and the `semispec` binary for the batch interface.

pub mod bargmann;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod operator;
pub mod quadmodel;
pub mod resolvent;
pub mod symbols;
pub mod util;
pub mod weight;

pub use error::{Result, SemiError};
pub use symbols::{PhasePoint, SymbolSpec};
