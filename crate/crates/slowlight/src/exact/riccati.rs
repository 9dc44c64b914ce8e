//! Adaptive Dormand-Prince 5(4) integration of the background system
//!
//!   dw/dtau = (i/2) Omega(tau) (1 - w^2) - i lambda w,
//!   dz/dtau = (i/2) Omega(tau) w,
//!
//! used where the closed form is outside the power-series domain (very
//! small alpha) or degenerate (integer order difference).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::control_field;
use crate::params::{ControlField, WZPair};

const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;
const MAX_STEPS: usize = 5_000_000;

pub(crate) struct RiccatiOde {
    pub lambda: Complex64,
    pub cf: ControlField,
}

type State = [Complex64; 2];

impl RiccatiOde {
    fn rhs(&self, tau: f64, y: &State) -> State {
        let om = control_field(tau, &self.cf);
        let w = y[0];
        let i = Complex64::i();
        [
            0.5 * i * om * (1.0 - w * w) - i * self.lambda * w,
            0.5 * i * om * w,
        ]
    }

    /// Integrates from (tau0, y0) to tau1 (tau1 >= tau0).
    pub(crate) fn integrate(&self, tau0: f64, y0: WZPair, tau1: f64) -> Result<WZPair> {
        let mut t = tau0;
        let mut y: State = [y0.w, y0.z];
        if tau1 <= tau0 {
            return Ok(y0);
        }
        let scale = self.cf.omega0 + self.lambda.norm() + 1.0;
        let mut h = (0.1 / scale).min(tau1 - tau0);
        for _ in 0..MAX_STEPS {
            if t >= tau1 {
                return Ok(WZPair { w: y[0], z: y[1] });
            }
            h = h.min(tau1 - t).min(1.0);
            let (y5, err) = self.dopri_step(t, &y, h);
            if err <= 1.0 {
                t += h;
                y = y5;
            }
            let factor = if err > 0.0 {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h *= factor;
            if h < 1e-14 {
                return Err(Error::Degenerate(
                    "step size underflow in the background integrator".into(),
                ));
            }
        }
        Err(Error::Degenerate(
            "step budget exhausted in the background integrator".into(),
        ))
    }

    /// One embedded step; returns the 5th-order solution and the scaled
    /// error estimate (accept when <= 1).
    fn dopri_step(&self, t: f64, y: &State, h: f64) -> (State, f64) {
        let add = |y: &State, ks: &[(&State, f64)]| -> State {
            let mut out = *y;
            for (k, c) in ks {
                out[0] += h * c * k[0];
                out[1] += h * c * k[1];
            }
            out
        };

        let k1 = self.rhs(t, y);
        let k2 = self.rhs(t + h / 5.0, &add(y, &[(&k1, 1.0 / 5.0)]));
        let k3 = self.rhs(
            t + 3.0 * h / 10.0,
            &add(y, &[(&k1, 3.0 / 40.0), (&k2, 9.0 / 40.0)]),
        );
        let k4 = self.rhs(
            t + 4.0 * h / 5.0,
            &add(y, &[(&k1, 44.0 / 45.0), (&k2, -56.0 / 15.0), (&k3, 32.0 / 9.0)]),
        );
        let k5 = self.rhs(
            t + 8.0 * h / 9.0,
            &add(
                y,
                &[
                    (&k1, 19372.0 / 6561.0),
                    (&k2, -25360.0 / 2187.0),
                    (&k3, 64448.0 / 6561.0),
                    (&k4, -212.0 / 729.0),
                ],
            ),
        );
        let k6 = self.rhs(
            t + h,
            &add(
                y,
                &[
                    (&k1, 9017.0 / 3168.0),
                    (&k2, -355.0 / 33.0),
                    (&k3, 46732.0 / 5247.0),
                    (&k4, 49.0 / 176.0),
                    (&k5, -5103.0 / 18656.0),
                ],
            ),
        );
        let y5 = add(
            y,
            &[
                (&k1, 35.0 / 384.0),
                (&k3, 500.0 / 1113.0),
                (&k4, 125.0 / 192.0),
                (&k5, -2187.0 / 6784.0),
                (&k6, 11.0 / 84.0),
            ],
        );
        let k7 = self.rhs(t + h, &y5);
        // Difference of the 5th- and 4th-order weights.
        let e = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
        let mut err_sq = 0.0;
        for i in 0..2 {
            let mut diff = Complex64::ZERO;
            for (k, &c) in ks.iter().zip(e.iter()) {
                diff += c * k[i];
            }
            diff *= h;
            let tol = ATOL + RTOL * y[i].norm().max(y5[i].norm());
            let r = diff.norm() / tol;
            err_sq += r * r;
        }
        (y5, (err_sq / 2.0).sqrt())
    }
}
