//! Superadiabatic transitionless driving (SATD) for geometric single- and
//! two-qubit gates: pulse design, dressed-state corrections, propagation,
//! fidelity metrics and the parameter sweeps built on them.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod hamiltonians;
pub mod numkit;
pub mod pulses;
pub mod satd;

pub use error::{Error, Result};
