//! Discrete-time quantum walks on a line with a time-varying coin.
//!
//! - [`schedule`]: coin phase schedules and the velocity integral.
//! - [`walk`]: exact amplitude evolution.
//! - [`special`]: Airy and Bessel functions, adaptive quadrature.
//! - [`analytic`]: Airy-kernel continuum solution.
//! - [`trajectory`]: closed-form trajectories and chain classification.
//! - [`io`] and [`commands`]: configuration, file formats, CLI commands.

pub mod analytic;
pub mod commands;
pub mod error;
pub mod io;
pub mod schedule;
pub mod special;
pub mod trajectory;
pub mod walk;

pub use error::{Error, Result};
