//! Achievable-rate-region engine and coverage simulator for greedy
//! omnidirectional decode-and-forward relaying in the all-source all-cast
//! setting.
//!
//! The crate has three layers:
//!
//! * [`model`] and [`infotheory`] hold the channel models (discrete
//!   memoryless, full-duplex AWGN, half-duplex AWGN) and the exact
//!   conditional mutual information engine.
//! * [`rates`] and [`region`] evaluate cut rates and decide achievability
//!   of rate vectors by exhaustive cut enumeration, with symmetric-rate /
//!   boundary bisection and half-duplex schedule search on top.
//! * [`simulator`] runs the relay scheme's coverage and message-frontier
//!   dynamics under admissible decode oracles, checking the `2^(n-2)`
//!   coverage bound and decode-delay boundedness.
//!
//! All rates and information quantities are in bits per channel use
//! (log base 2). Nodes are numbered `1..n` externally and `0..n-1` in code.

pub mod config;
pub mod error;
pub mod infotheory;
pub mod model;
pub mod numeric;
pub mod rates;
pub mod region;
pub mod report;
pub mod simulator;

pub use error::{Error, Result, ValidationReport};
