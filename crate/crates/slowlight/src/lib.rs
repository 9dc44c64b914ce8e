//! Slow-light soliton arrest in a three-level medium.
//!
//! A slow-light soliton rides on a constant control field; when the control
//! laser is switched off at t = 0 its exponentially decaying front overtakes
//! the soliton, stops it, and leaves the optical information imprinted in
//! the medium as a localized population transfer. This crate implements the
//! closed-form solution of that process and the machinery around it:
//!
//! - [`specfun`]: complex gamma and Bessel-J with complex order/argument,
//!   the special functions the closed form is built from;
//! - [`exact`]: the control profile, the auxiliary background functions
//!   w and z, soliton fields, atomic state, group velocity, stopping
//!   distance and memory width;
//! - [`mb`]: an independent Maxwell-Bloch integrator on a (zeta, tau) grid
//!   plus a finite-difference residual oracle;
//! - [`scenario`]: JSON scenario parsing, grid sampling, CSV/JSON emission
//!   with a hashed manifest.
//!
//! Retarded coordinates are used throughout: zeta = (z - z0)/c,
//! tau = t - (z - z0)/c.

// Lanczos coefficients and frozen oracle values are written with all the
// digits they were derived with.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod exact;
pub mod mb;
pub mod params;
pub mod scenario;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{AtomState, ControlField, FieldSample, MediumParams, SolitonParams, WZPair};
