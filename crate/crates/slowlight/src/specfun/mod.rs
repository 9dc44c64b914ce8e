//! Complex gamma function and Bessel functions of the first kind with
//! complex order and complex argument.
//!
//! Only the machinery actually needed by the closed-form solution is
//! provided: `gamma` over |z| <= 50 and the power-series `bessel_j` over
//! |x| <= 30. All operations are pure and thread-safe.
//!
//! Branch convention: powers (x/2)^nu use the principal logarithm with
//! arg in (-pi, pi]; a negative real argument is assigned arg = +pi. Any
//! fixed convention yields the same physical solution because the
//! auxiliary functions are pinned by their initial conditions; this one is
//! fixed so results are reproducible bit for bit.

mod bessel;
mod gamma;

pub use bessel::bessel_j;
pub use gamma::gamma;

pub(crate) use bessel::{bessel_series, log_half, log_half_lower, BESSEL_ARG_MAX};
pub(crate) use gamma::recip_gamma;
