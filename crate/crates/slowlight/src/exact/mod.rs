//! The complete closed-form solution: control profile, auxiliary background
//! functions, soliton fields, atomic state and the derived physical
//! quantities (group velocity, stopping distance, memory width).
//!
//! Everything here is a pure function of its arguments and safe to call
//! concurrently over grid points.

mod riccati;
mod solution;
mod wz;

pub use solution::{constant_bg_reference, SolitonRow, SolitonSolution};
pub use wz::WzEvaluator;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{ControlField, MediumParams, SolitonParams, WZPair};
use crate::specfun::bessel_j;

/// Control Rabi frequency: Omega0 for tau < 0, exponential decay with rate
/// alpha afterwards; continuous at the switch-off instant.
pub fn control_field(tau: f64, cf: &ControlField) -> f64 {
    if tau < 0.0 {
        cf.omega0
    } else {
        cf.omega0 * (-cf.alpha * tau).exp()
    }
}

/// Initial (constant-background) value w0 = Omega0 / (lambda + s) with
/// s = sqrt(lambda^2 + Omega0^2) taken on the side of lambda:
/// Re(s conj(lambda)) >= 0. Under this rule w0 -> 0 as Omega0 -> 0 and the
/// constant-background soliton amplitude is reproduced; the principal
/// branch alone would pick the unphysical root for purely imaginary lambda.
pub fn w_initial(lambda: Complex64, omega0: f64) -> Result<Complex64> {
    if !lambda.is_finite() || lambda.im >= 0.0 {
        return Err(Error::Domain(format!(
            "Im(lambda) must be negative, got {lambda}"
        )));
    }
    if omega0 == 0.0 {
        return Ok(Complex64::ZERO);
    }
    let mut s = (lambda * lambda + omega0 * omega0).sqrt();
    if (s * lambda.conj()).re < 0.0 {
        s = -s;
    }
    let den = lambda + s;
    if den.norm() < 1e-14 {
        return Err(Error::Degenerate(
            "lambda + sqrt(lambda^2 + Omega0^2) vanished".into(),
        ));
    }
    Ok(omega0 / den)
}

/// The matching constant C, fixed uniquely by w(0, lambda) = w0. All Bessel
/// orders derive from gamma = (alpha + i lambda)/(2 alpha), the argument is
/// -Omega0/(2 alpha) on the principal branch.
pub fn coefficient_c(lambda: Complex64, cf: &ControlField) -> Result<Complex64> {
    if cf.alpha <= 0.0 {
        return Err(Error::Domain(
            "the matching constant requires alpha > 0".into(),
        ));
    }
    if !lambda.is_finite() || lambda.im >= 0.0 {
        return Err(Error::Domain(format!(
            "Im(lambda) must be negative, got {lambda}"
        )));
    }
    let w0 = w_initial(lambda, cf.omega0)?;
    let gamma = (cf.alpha + Complex64::i() * lambda) / (2.0 * cf.alpha);
    let x0 = Complex64::new(-cf.omega0 / (2.0 * cf.alpha), 0.0);
    let i = Complex64::i();
    let den = bessel_j(1.0 - gamma, x0)? + i * w0 * bessel_j(-gamma, x0)?;
    if den.norm() < 1e-300 {
        return Err(Error::Degenerate(
            "vanishing denominator in the matching constant".into(),
        ));
    }
    Ok((-i * w0 * bessel_j(gamma, x0)? + bessel_j(gamma - 1.0, x0)?) / den)
}

/// (w, z) at one instant. Prefer [`WzEvaluator`] when evaluating many times
/// with the same parameters.
pub fn wz(tau: f64, lambda: Complex64, cf: &ControlField) -> Result<WZPair> {
    WzEvaluator::new(lambda, cf)?.eval(tau)
}

/// z(infinity, lambda) for a decaying control field; its real part is
/// non-positive and enters the stopping distance.
pub fn wz_limit(lambda: Complex64, cf: &ControlField) -> Result<Complex64> {
    WzEvaluator::new(lambda, cf)?.limit()
}

/// Envelope and carrier phases (phi_s, theta_s) at one point.
pub fn soliton_phase(
    zeta: f64,
    tau: f64,
    mp: &MediumParams,
    sp: &SolitonParams,
    cf: &ControlField,
) -> Result<(f64, f64)> {
    let sol = SolitonSolution::new(*mp, *sp, *cf)?;
    Ok(sol.row(tau)?.phase(zeta))
}

/// Both Rabi-frequency envelopes at one point of the (zeta, tau) plane.
pub fn fields(
    zeta: f64,
    tau: f64,
    mp: &MediumParams,
    sp: &SolitonParams,
    cf: &ControlField,
) -> Result<crate::params::FieldSample> {
    let sol = SolitonSolution::new(*mp, *sp, *cf)?;
    Ok(sol.row(tau)?.fields(zeta))
}

/// The atomic state at one point of the (zeta, tau) plane.
pub fn atom_state(
    zeta: f64,
    tau: f64,
    mp: &MediumParams,
    sp: &SolitonParams,
    cf: &ControlField,
) -> Result<crate::params::AtomState> {
    let sol = SolitonSolution::new(*mp, *sp, *cf)?;
    Ok(sol.row(tau)?.atom_state(zeta))
}

/// Instantaneous group velocity as a fraction of c:
/// v_g/c = |w|^2 / (nu0 (1+|w|^2) / (2 |Delta-lambda|^2) + |w|^2).
pub fn group_velocity(
    tau: f64,
    mp: &MediumParams,
    sp: &SolitonParams,
    cf: &ControlField,
) -> Result<f64> {
    let pair = wz(tau, sp.lambda, cf)?;
    Ok(group_velocity_of(pair.w, mp, sp))
}

pub(crate) fn group_velocity_of(w: Complex64, mp: &MediumParams, sp: &SolitonParams) -> f64 {
    let w2 = w.norm_sqr();
    let gap = mp.detuning_gap_sq(sp.lambda);
    w2 / (mp.nu0 * (1.0 + w2) / (2.0 * gap) + w2)
}

/// Distance travelled between the switch-off instant and full arrest:
/// L_s(alpha) = (2 c |Delta-lambda|^2 / (nu0 |Im lambda|))
///              [ ln(1+|w0|^2)/2 - Re z(infinity, lambda) ] > 0.
pub fn stopping_distance(
    mp: &MediumParams,
    sp: &SolitonParams,
    cf: &ControlField,
) -> Result<f64> {
    if cf.alpha <= 0.0 {
        return Err(Error::Domain(
            "the stopping distance requires a decaying control field (alpha > 0)".into(),
        ));
    }
    let ev = WzEvaluator::new(sp.lambda, cf)?;
    let z_inf = ev.limit()?;
    let prefactor = 2.0 * mp.c * mp.detuning_gap_sq(sp.lambda) / (mp.nu0 * sp.lambda.im.abs());
    Ok(prefactor * (0.5 * ev.w0().norm_sqr().ln_1p() - z_inf.re))
}

/// Stopping distance in the instant-switch limit alpha -> infinity, where
/// Re z(infinity) -> 0.
pub fn stopping_distance_instant(mp: &MediumParams, sp: &SolitonParams, cf: &ControlField) -> Result<f64> {
    let w0 = w_initial(sp.lambda, cf.omega0)?;
    let prefactor = 2.0 * mp.c * mp.detuning_gap_sq(sp.lambda) / (mp.nu0 * sp.lambda.im.abs());
    Ok(prefactor * 0.5 * w0.norm_sqr().ln_1p())
}

/// Spatial width of the imprinted population structure,
/// W_s = 4 c ln(2+sqrt(3)) |Delta-lambda|^2 / (nu0 |Im lambda|);
/// independent of the switch-off rate.
pub fn memory_width(mp: &MediumParams, sp: &SolitonParams) -> f64 {
    let gap = mp.detuning_gap_sq(sp.lambda);
    4.0 * mp.c * (2.0 + 3.0_f64.sqrt()).ln() * gap / (mp.nu0 * sp.lambda.im.abs())
}
