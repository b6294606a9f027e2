//! Phase-space interference picture of photon-number distributions.
//!
//! Exact statistics for displaced number states and two-photon coherent
//! states, the Husimi-amplitude overlap approximation built from ring-band
//! areas and interference phases, and the quadrature and Monte-Carlo oracles
//! that check both.

pub mod approx;
pub mod cli;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod husimi;
pub mod mc;
pub mod numerics;
pub mod states;

pub use error::DomainError;
pub use exec::Execution;
