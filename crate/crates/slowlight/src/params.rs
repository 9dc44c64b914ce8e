//! Domain types: medium constants, control field, soliton parameters and the
//! per-point state/field samples.
//!
//! All quantities are dimensionless with c = 1 by default: frequencies in
//! units of a reference Rabi frequency, times in its inverse, lengths in
//! c over the reference. Lab coordinates are recovered as z = z0 + c*zeta,
//! t = tau + zeta.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical constants of the three-level medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Coupling constant nu_0 (both optical transitions are assumed equal).
    pub nu0: f64,
    /// One-photon detuning Delta.
    pub delta: f64,
    /// Speed of light in the chosen units.
    pub c: f64,
}

impl MediumParams {
    pub fn new(nu0: f64, delta: f64, c: f64) -> Result<Self> {
        if !nu0.is_finite() || nu0 <= 0.0 {
            return Err(Error::Validation(format!("nu0 must be > 0, got {nu0}")));
        }
        if !delta.is_finite() {
            return Err(Error::Validation(format!("delta must be finite, got {delta}")));
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Validation(format!("c must be > 0, got {c}")));
        }
        Ok(Self { nu0, delta, c })
    }

    /// Squared distance |Delta - lambda|^2 between the detuning and the
    /// spectral parameter.
    pub fn detuning_gap_sq(&self, lambda: Complex64) -> f64 {
        (Complex64::new(self.delta, 0.0) - lambda).norm_sqr()
    }
}

impl Default for MediumParams {
    /// The parameter set used for every plot in the source problem:
    /// nu0 = 10, Delta = 0, c = 1.
    fn default() -> Self {
        Self { nu0: 10.0, delta: 0.0, c: 1.0 }
    }
}

/// Background (control) laser: constant at `omega0` until the switch-off
/// instant tau = 0, exponential decay with rate `alpha` afterwards.
/// `alpha` = 0 encodes the constant-background case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlField {
    pub omega0: f64,
    pub alpha: f64,
}

impl ControlField {
    pub fn new(omega0: f64, alpha: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 < 0.0 {
            return Err(Error::Validation(format!("omega0 must be >= 0, got {omega0}")));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Validation(format!("alpha must be >= 0, got {alpha}")));
        }
        Ok(Self { omega0, alpha })
    }
}

impl Default for ControlField {
    fn default() -> Self {
        Self { omega0: 2.0, alpha: 1.0 }
    }
}

/// Spectral parameter and phase offsets of the single soliton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    /// Complex spectral parameter; Im(lambda) < 0 is required so that the
    /// background functions decay (w -> 0 for tau -> infinity).
    pub lambda: Complex64,
    /// Envelope phase offset.
    pub phi0: f64,
    /// Carrier phase offset.
    pub theta0: f64,
}

impl SolitonParams {
    pub fn new(lambda: Complex64, phi0: f64, theta0: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda.im >= 0.0 {
            return Err(Error::Validation(format!(
                "Im(lambda) must be negative, got lambda = {lambda}"
            )));
        }
        if !phi0.is_finite() || !theta0.is_finite() {
            return Err(Error::Validation("phase offsets must be finite".into()));
        }
        Ok(Self { lambda, phi0, theta0 })
    }

    /// Purely imaginary parameter lambda = -i*eps0, the default case.
    pub fn imaginary(eps0: f64, phi0: f64, theta0: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, -eps0), phi0, theta0)
    }

    /// For purely imaginary lambda returns eps0 = |Im lambda|.
    pub fn eps0(&self) -> Option<f64> {
        (self.lambda.re == 0.0).then_some(-self.lambda.im)
    }
}

impl Default for SolitonParams {
    /// eps0 = 2.1 with the pulse placed one phase unit inside the window.
    fn default() -> Self {
        Self {
            lambda: Complex64::new(0.0, -2.1),
            phi0: -1.0,
            theta0: 0.0,
        }
    }
}

/// Pure atomic state: amplitudes of levels |1>, |2>, |3>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
}

impl AtomState {
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        Self { c1, c2, c3 }
    }

    /// Atom in the dark ground state |1>.
    pub fn ground() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::ZERO, Complex64::ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr() + self.c3.norm_sqr()
    }

    /// Level populations (P1, P2, P3).
    pub fn populations(&self) -> [f64; 3] {
        [self.c1.norm_sqr(), self.c2.norm_sqr(), self.c3.norm_sqr()]
    }
}

/// Complex Rabi-frequency pair at one point of the (zeta, tau) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub omega_a: Complex64,
    pub omega_b: Complex64,
}

impl FieldSample {
    pub fn new(omega_a: Complex64, omega_b: Complex64) -> Self {
        Self { omega_a, omega_b }
    }

    /// Intensities (|Omega_a|^2, |Omega_b|^2).
    pub fn intensities(&self) -> (f64, f64) {
        (self.omega_a.norm_sqr(), self.omega_b.norm_sqr())
    }
}

/// The pair of auxiliary background functions (w, z) at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WZPair {
    pub w: Complex64,
    pub z: Complex64,
}
