//! Bessel function of the first kind, complex order and complex argument,
//! by the defining power series.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::recip_gamma;
use crate::error::{Error, Result};

/// Largest |x| accepted by the power series. Beyond this the alternating
/// series loses too many digits to cancellation and the module refuses
/// rather than degrade silently.
pub(crate) const BESSEL_ARG_MAX: f64 = 30.0;

/// Relative term size at which the series is truncated.
const SERIES_EPS: f64 = 1e-18;
const SERIES_MAX_TERMS: usize = 500;

/// Principal Log(x/2) with arg in (-pi, pi]; negative real x (including a
/// negative zero imaginary part) is assigned arg = +pi.
pub(crate) fn log_half(x: Complex64) -> Complex64 {
    let h = x / 2.0;
    if h.im == 0.0 {
        // Normalizes -0.0 so atan2 lands on the +pi side of the cut.
        if h.re < 0.0 {
            return Complex64::new(h.re.abs().ln(), PI);
        }
        return Complex64::new(h.re.ln(), 0.0);
    }
    h.ln()
}

/// Same as [`log_half`] but with arg(-u) = -pi: the alternate branch used
/// by the convention-independence checks.
pub(crate) fn log_half_lower(x: Complex64) -> Complex64 {
    let h = x / 2.0;
    if h.im == 0.0 && h.re < 0.0 {
        return Complex64::new(h.re.abs().ln(), -PI);
    }
    log_half(x)
}

/// The entire part of the Bessel series:
/// S_nu(q) = sum_{k>=0} q^k / (k! Gamma(nu+k+1)) with q = -(x/2)^2,
/// so that J_nu(x) = (x/2)^nu S_nu(-(x/2)^2).
///
/// Kahan-compensated; terms swallowed by a gamma pole (1/Gamma = 0 for
/// non-positive integer order offsets) are re-seeded directly.
pub(crate) fn bessel_series(nu: Complex64, q: Complex64) -> Complex64 {
    let mut term = recip_gamma(nu + 1.0);
    let mut sum = term;
    let mut comp = Complex64::ZERO;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let denom = (kf + 1.0) * (nu + (kf + 1.0));
        if term == Complex64::ZERO || denom == Complex64::ZERO {
            // A pole of Gamma zeroed the running term; restart it from
            // scratch (only reachable for small k, where q^{k+1} is safe).
            let mut fact = 1.0;
            for j in 2..=(k + 1) {
                fact *= j as f64;
            }
            term = q.powu(k as u32 + 1) * recip_gamma(nu + (kf + 2.0)) / fact;
        } else {
            term = term * q / denom;
        }
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if sum != Complex64::ZERO && term.norm() <= SERIES_EPS * sum.norm() {
            break;
        }
    }
    sum
}

/// J_nu(x) for complex order nu and complex argument x, |x| <= 30.
///
/// J_nu(x) = exp(nu Log(x/2)) * S_nu(-(x/2)^2) under the principal-branch
/// convention of [`log_half`]. The negative real axis is built literally as
/// J_nu(-u) = exp(i nu pi) J_nu(u), which that convention reduces to, so
/// the identity is bit-exact.
pub fn bessel_j(nu: Complex64, x: Complex64) -> Result<Complex64> {
    if x.norm() > BESSEL_ARG_MAX {
        return Err(Error::Domain(format!(
            "bessel_j argument |x| = {:.3} exceeds the series limit {BESSEL_ARG_MAX}",
            x.norm()
        )));
    }
    if x == Complex64::ZERO {
        if nu == Complex64::ZERO {
            return Ok(Complex64::new(1.0, 0.0));
        }
        if nu.re > 0.0 {
            return Ok(Complex64::ZERO);
        }
        return Err(Error::Domain(format!(
            "bessel_j(nu={nu}, 0) diverges for Re(nu) <= 0"
        )));
    }
    if x.im == 0.0 && x.re < 0.0 {
        let phase = (Complex64::i() * nu * PI).exp();
        return Ok(phase * eval_principal(nu, -x));
    }
    Ok(eval_principal(nu, x))
}

fn eval_principal(nu: Complex64, x: Complex64) -> Complex64 {
    let lh = log_half(x);
    let q = -(2.0 * lh).exp();
    (nu * lh).exp() * bessel_series(nu, q)
}
