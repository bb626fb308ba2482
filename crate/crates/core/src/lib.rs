//! Maker-breaker marking games on powers of forests.
//!
//! The library is organised around a pipeline: build a [`forest::Forest`],
//! take its m-th power ([`power::PowerView`]), play the marking game on it
//! ([`game`]) with activation-based Alice strategies and adversarial Bobs
//! ([`strategy`]), solve small instances exactly ([`solver`]), and check
//! everything against the closed-form score bounds ([`bounds`]) in bulk
//! campaigns ([`verify`]).

pub mod bounds;
pub mod error;
pub mod forest;
pub mod game;
pub mod monitor;
pub mod power;
pub mod rng;
pub mod solver;
pub mod strategy;
pub mod verify;

pub use error::{Error, Result};
