//! Evaluation of the auxiliary background functions w(tau, lambda) and
//! z(tau, lambda).
//!
//! For tau < 0 (and for a constant background) these are
//!
//!   w = w0,   z = (i/2) Omega0 w0 tau.
//!
//! For tau >= 0 with decay rate alpha > 0 they are combinations of Bessel
//! functions of orders +-gamma, +-(gamma-1) with gamma = (alpha + i
//! lambda)/(2 alpha) and argument x = -Omega(tau)/(2 alpha). Internally the
//! common power factor (x/2)^gamma is pulled out of the numerators and
//! denominators, which removes the secular phase winding from z, keeps every
//! ingredient finite for tau -> infinity, and leaves
//!
//!   hfun(tau) = C S_{-gamma}(q) + (x/2)^{2 gamma} S_{gamma}(q),
//!   w = i [C (x/2) S_{1-gamma}(q) - (x/2)^{2 gamma - 1} S_{gamma-1}(q)] / hfun,
//!   z = ln(hfun(tau) / hfun(0)),       q = -(x/2)^2,
//!
//! where S_nu is the entire part of the Bessel series. The imaginary part
//! of z is made continuous by unwrapping arg(hfun) along [0, tau]; it is
//! fixed by z(0) = 0.
//!
//! Two regimes fall back to direct integration of the defining equations
//! (see `riccati`): Omega0/(2 alpha) beyond the power-series domain, and
//! gamma within 1e-4 of an integer, where J_gamma and J_{-gamma} become
//! linearly dependent and the displayed form degenerates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{ControlField, WZPair};
use crate::specfun::{bessel_series, log_half, log_half_lower, BESSEL_ARG_MAX};

use super::riccati::RiccatiOde;
use super::w_initial;

/// Sign given to arg(x/2) on the negative real axis. `Lower` exists for
/// the convention-independence checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Branch {
    Upper,
    #[cfg_attr(not(test), allow(dead_code))]
    Lower,
}

/// Distance of gamma to the nearest integer below which the Bessel form is
/// abandoned for the ODE fallback.
const GAMMA_DEGENERACY_TOL: f64 = 1e-4;

/// Largest admitted phase increment per unwrap sample.
const UNWRAP_MAX_STEP: f64 = 1.0;
const UNWRAP_MAX_SAMPLES: usize = 65_536;

struct BesselPath {
    gamma: Complex64,
    coeff_c: Complex64,
    /// Log(x0/2) on the chosen branch; Log(x(tau)/2) = lh0 - alpha tau.
    lh0: Complex64,
    h0: Complex64,
    alpha: f64,
}

enum Path {
    /// alpha = 0 or Omega0 = 0: w and z keep their tau < 0 form.
    Constant,
    Bessel(BesselPath),
    Ode(RiccatiOde),
}

/// Reusable evaluator for (w, z) at fixed (lambda, control field).
pub struct WzEvaluator {
    cf: ControlField,
    w0: Complex64,
    path: Path,
}

impl WzEvaluator {
    pub fn new(lambda: Complex64, cf: &ControlField) -> Result<Self> {
        Self::with_branch(lambda, cf, Branch::Upper)
    }

    pub(crate) fn with_branch(lambda: Complex64, cf: &ControlField, branch: Branch) -> Result<Self> {
        if !lambda.is_finite() || lambda.im >= 0.0 {
            return Err(Error::Domain(format!(
                "Im(lambda) must be negative, got {lambda}"
            )));
        }
        let w0 = w_initial(lambda, cf.omega0)?;
        let path = if cf.alpha == 0.0 || cf.omega0 == 0.0 {
            Path::Constant
        } else {
            let gamma = (cf.alpha + Complex64::i() * lambda) / (2.0 * cf.alpha);
            let degenerate = gamma.im.abs() < GAMMA_DEGENERACY_TOL
                && (gamma.re - gamma.re.round()).abs() < GAMMA_DEGENERACY_TOL;
            let x0_abs = cf.omega0 / (2.0 * cf.alpha);
            if degenerate || x0_abs > BESSEL_ARG_MAX {
                Path::Ode(RiccatiOde { lambda, cf: *cf })
            } else {
                let x0 = Complex64::new(-x0_abs, 0.0);
                let lh0 = match branch {
                    Branch::Upper => log_half(x0),
                    Branch::Lower => log_half_lower(x0),
                };
                let coeff_c = coefficient_c_on_branch(w0, gamma, lh0)?;
                let mut bp = BesselPath {
                    gamma,
                    coeff_c,
                    lh0,
                    h0: Complex64::ZERO,
                    alpha: cf.alpha,
                };
                bp.h0 = bp.hfun(0.0);
                Path::Bessel(bp)
            }
        };
        Ok(Self { cf: *cf, w0, path })
    }

    pub fn w0(&self) -> Complex64 {
        self.w0
    }

    fn constant_pair(&self, tau: f64) -> WZPair {
        WZPair {
            w: self.w0,
            z: Complex64::i() * 0.5 * self.cf.omega0 * self.w0 * tau,
        }
    }

    pub fn eval(&self, tau: f64) -> Result<WZPair> {
        if tau < 0.0 || matches!(self.path, Path::Constant) {
            return Ok(self.constant_pair(tau));
        }
        match &self.path {
            Path::Constant => unreachable!(),
            Path::Bessel(bp) => Ok(WZPair {
                w: bp.w_at(tau),
                z: bp.z_at(tau),
            }),
            Path::Ode(ode) => ode.integrate(
                0.0,
                WZPair {
                    w: self.w0,
                    z: Complex64::ZERO,
                },
                tau,
            ),
        }
    }

    /// z(infinity, lambda); requires alpha > 0.
    pub fn limit(&self) -> Result<Complex64> {
        if self.cf.alpha == 0.0 {
            return Err(Error::Domain(
                "z(infinity) requires a decaying control field (alpha > 0)".into(),
            ));
        }
        if self.cf.omega0 == 0.0 {
            return Ok(Complex64::ZERO);
        }
        match &self.path {
            Path::Constant => unreachable!(),
            Path::Bessel(bp) => {
                // Settle time after which the (x/2)^{2 gamma} term is dead.
                let t_settle = ((bp.lh0.re + 40.0) / bp.alpha).max(0.0);
                let h_inf = bp.coeff_c * crate::specfun::recip_gamma(1.0 - bp.gamma);
                let z_settle = bp.z_at(t_settle);
                Ok(z_settle + (h_inf / bp.hfun(t_settle)).ln())
            }
            Path::Ode(ode) => {
                let bound = self.cf.omega0 * (1.0 + self.w0.norm());
                let t_end = ((bound / (2.0 * self.cf.alpha * 1e-13)).ln() / self.cf.alpha).max(1.0);
                let pair = ode.integrate(
                    0.0,
                    WZPair {
                        w: self.w0,
                        z: Complex64::ZERO,
                    },
                    t_end,
                )?;
                Ok(pair.z)
            }
        }
    }
}

/// C on an explicit branch, from the defining condition w(0) = w0.
fn coefficient_c_on_branch(w0: Complex64, gamma: Complex64, lh0: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    let jg = j_on_branch(gamma, lh0);
    let jgm1 = j_on_branch(gamma - 1.0, lh0);
    let j1mg = j_on_branch(1.0 - gamma, lh0);
    let jmg = j_on_branch(-gamma, lh0);
    let den = j1mg + i * w0 * jmg;
    if den.norm() < 1e-300 {
        return Err(Error::Degenerate(
            "vanishing denominator in the matching constant".into(),
        ));
    }
    Ok((-i * w0 * jg + jgm1) / den)
}

/// J_nu(x) for negative real x via an explicit Log(x/2).
fn j_on_branch(nu: Complex64, lh: Complex64) -> Complex64 {
    let q = Complex64::new(-(2.0 * lh.re).exp(), 0.0);
    (nu * lh).exp() * bessel_series(nu, q)
}

impl BesselPath {
    /// Log(x(tau)/2) on the fixed branch; continuous in tau.
    fn lh(&self, tau: f64) -> Complex64 {
        Complex64::new(self.lh0.re - self.alpha * tau, self.lh0.im)
    }

    /// The de-powered denominator combination; tends to C/Gamma(1-gamma).
    fn hfun(&self, tau: f64) -> Complex64 {
        let lh = self.lh(tau);
        // x is real negative, so q = -(x/2)^2 is real negative exactly.
        let q = Complex64::new(-(2.0 * lh.re).exp(), 0.0);
        self.coeff_c * bessel_series(-self.gamma, q) + (2.0 * self.gamma * lh).exp() * bessel_series(self.gamma, q)
    }

    fn w_at(&self, tau: f64) -> Complex64 {
        let lh = self.lh(tau);
        let q = Complex64::new(-(2.0 * lh.re).exp(), 0.0);
        let num = self.coeff_c * lh.exp() * bessel_series(1.0 - self.gamma, q)
            - ((2.0 * self.gamma - 1.0) * lh).exp() * bessel_series(self.gamma - 1.0, q);
        Complex64::i() * num / self.hfun(tau)
    }

    /// z = ln(hfun(tau)/hfun(0)) with the argument unwrapped along the path
    /// from 0, where z vanishes.
    fn z_at(&self, tau: f64) -> Complex64 {
        if tau == 0.0 {
            return Complex64::ZERO;
        }
        // Refined by doubling until every phase increment is unambiguous.
        let mut n = (tau.abs().ceil() as usize).clamp(4, 1024);
        loop {
            let mut prev = self.h0;
            let mut total = 0.0;
            let mut max_step = 0.0_f64;
            let mut last = prev;
            for k in 1..=n {
                let t = tau * k as f64 / n as f64;
                let cur = self.hfun(t);
                let d = (cur / prev).arg();
                max_step = max_step.max(d.abs());
                total += d;
                prev = cur;
                last = cur;
            }
            if max_step < UNWRAP_MAX_STEP || n >= UNWRAP_MAX_SAMPLES {
                return Complex64::new((last.norm() / self.h0.norm()).ln(), total);
            }
            n *= 2;
        }
    }
}
