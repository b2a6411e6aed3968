//! Simulation and verification lab for one-way communication when the
//! two parties only approximately agree on the task or on their shared
//! randomness.
//!
//! The library is organized bottom-up:
//!
//! - [`primitives`]: bit, sign, subset and tuple types plus closed forms.
//! - [`functions`]: the function families and their distances.
//! - [`samplers`]: input laws, exact enumeration and noisy randomness.
//! - [`protocols`]: certain-context protocols, hashing, the inner-product
//!   estimator and the uncertain-context protocol.
//! - [`reductions`]: stretching, the shift game and shift-graph colorings.
//! - [`simulation`]: the simulation protocol, closeness and information
//!   cost.
//! - [`verifiers`]: Monte Carlo checks and calibration tables.
//! - [`experiments`], [`checks`], [`cli`]: configs, batteries and the
//!   `ctxlab` binary.
//!
//! Every capability has a runnable program under `examples/`, e.g.
//! `cargo run --release --example shift_game`.
//!
//! All randomness descends from one master seed through [`rng`]
//! substreams, and Monte Carlo work is reduced in a fixed order, so results
//! do not depend on the number of worker threads.

pub mod checks;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod functions;
pub mod primitives;
pub mod protocols;
pub mod reductions;
pub mod rng;
pub mod samplers;
pub mod simulation;
pub mod stats;
pub mod verifiers;

pub use error::{Error, Result};
