//! Soliton fields and atomic state assembled from the background functions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{AtomState, ControlField, FieldSample, MediumParams, SolitonParams};

use super::wz::WzEvaluator;
use super::{control_field, group_velocity_of};

/// Exact single-soliton solution for one parameter set; builds cheap
/// per-instant rows that can be evaluated across zeta.
pub struct SolitonSolution {
    medium: MediumParams,
    soliton: SolitonParams,
    control: ControlField,
    wz: WzEvaluator,
    /// -nu0 Im(lambda) / (2 |Delta-lambda|^2): slope of phi_s in zeta.
    phi_slope: f64,
    /// -(nu0/2) Re(1/(lambda-Delta)): slope of theta_s in zeta.
    theta_slope: f64,
}

impl SolitonSolution {
    pub fn new(medium: MediumParams, soliton: SolitonParams, control: ControlField) -> Result<Self> {
        if let Some(eps0) = soliton.eps0() {
            if eps0 <= control.omega0 {
                return Err(Error::Validation(format!(
                    "eps0 = {eps0} must exceed the background omega0 = {}",
                    control.omega0
                )));
            }
        }
        let wz = WzEvaluator::new(soliton.lambda, &control)?;
        let gap = medium.detuning_gap_sq(soliton.lambda);
        let phi_slope = -medium.nu0 * soliton.lambda.im / (2.0 * gap);
        let theta_slope =
            -(medium.nu0 / 2.0) * (1.0 / (soliton.lambda - medium.delta)).re;
        Ok(Self {
            medium,
            soliton,
            control,
            wz,
            phi_slope,
            theta_slope,
        })
    }

    pub fn medium(&self) -> &MediumParams {
        &self.medium
    }

    pub fn soliton(&self) -> &SolitonParams {
        &self.soliton
    }

    pub fn control(&self) -> &ControlField {
        &self.control
    }

    pub fn w0(&self) -> Complex64 {
        self.wz.w0()
    }

    /// All tau-dependent pieces shared by every zeta of one grid row.
    pub fn row(&self, tau: f64) -> Result<SolitonRow> {
        let pair = self.wz.eval(tau)?;
        let w = pair.w;
        let lam = self.soliton.lambda;
        let delta = self.medium.delta;
        let gap = self.medium.detuning_gap_sq(lam).sqrt();
        let w2 = w.norm_sqr();
        let log_boost = 0.5 * w2.ln_1p();
        let two_im = lam.conj() - lam; // = -2i Im(lambda), purely imaginary
        let pre = (Complex64::i() * delta * tau / 2.0).exp();
        Ok(SolitonRow {
            tau,
            omega: control_field(tau, &self.control),
            w,
            z: pair.z,
            phi_base: self.soliton.phi0 + pair.z.re + log_boost,
            phi_slope: self.phi_slope,
            theta_base: self.soliton.theta0 + pair.z.im,
            theta_slope: self.theta_slope,
            amp_a: two_im * w / (1.0 + w2).sqrt(),
            amp_b: -two_im * w / (1.0 + w2),
            c2_amp: two_im / (2.0 * gap * (1.0 + w2).sqrt()),
            c1_const: (lam.conj() - delta) / gap,
            c1_coeff: two_im / (2.0 * gap),
            pre,
            medium: self.medium,
            soliton: self.soliton,
        })
    }
}

/// Per-instant slice of the solution; evaluation across zeta is a handful
/// of exponentials.
pub struct SolitonRow {
    pub tau: f64,
    /// Control Rabi frequency at this instant.
    pub omega: f64,
    pub w: Complex64,
    pub z: Complex64,
    phi_base: f64,
    phi_slope: f64,
    theta_base: f64,
    theta_slope: f64,
    amp_a: Complex64,
    amp_b: Complex64,
    c2_amp: Complex64,
    c1_const: Complex64,
    c1_coeff: Complex64,
    pre: Complex64,
    medium: MediumParams,
    soliton: SolitonParams,
}

/// sech(phi), stable for any phi.
fn sech(phi: f64) -> f64 {
    let e = (-phi.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// exp(phi) sech(phi) = 2 / (1 + exp(-2 phi)), saturating at 2.
fn exp_sech(phi: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * phi).exp())
}

/// exp(-phi) sech(phi) = 2 / (exp(2 phi) + 1).
fn exp_neg_sech(phi: f64) -> f64 {
    2.0 / ((2.0 * phi).exp() + 1.0)
}

impl SolitonRow {
    /// Envelope and carrier phases (phi_s, theta_s).
    pub fn phase(&self, zeta: f64) -> (f64, f64) {
        (
            self.phi_base + self.phi_slope * zeta,
            self.theta_base + self.theta_slope * zeta,
        )
    }

    pub fn fields(&self, zeta: f64) -> FieldSample {
        let (phi, theta) = self.phase(zeta);
        let carrier = (Complex64::i() * theta).exp();
        FieldSample {
            omega_a: self.amp_a * carrier * sech(phi),
            omega_b: self.amp_b * exp_sech(phi) - self.omega,
        }
    }

    /// The atomic state. The level-2 amplitude is Omega_a / (2|lambda-Delta| w)
    /// with the factor w cancelled symbolically, so the w -> 0 limit after
    /// the stop is regular; the level-1 amplitude uses the equivalent
    /// phi_s/theta_s form of the composite exponential, which keeps the
    /// state exactly normalized for every phase offset.
    pub fn atom_state(&self, zeta: f64) -> AtomState {
        let (phi, theta) = self.phase(zeta);
        let carrier = (Complex64::i() * theta).exp();
        let c2 = self.c2_amp * carrier * sech(phi);
        let c1 = self.c1_const - self.c1_coeff * exp_neg_sech(phi);
        let c3 = -c2 * self.w;
        AtomState::new(self.pre * c1, self.pre * c2, self.pre * c3)
    }

    /// Group velocity of the soliton at this instant, as a fraction of c.
    pub fn group_velocity(&self) -> f64 {
        group_velocity_of(self.w, &self.medium, &self.soliton)
    }
}

/// The constant-background soliton in its textbook form, used as an
/// independent reference for the alpha = 0 case:
///
///   Omega_a = -i sqrt(2 eps0) Omega0 / sqrt(eps0 + sqrt(eps0^2-Omega0^2)) sech(phi_s)
///   Omega_b = Omega0 tanh(phi_s),
///   phi_s   = nu0 zeta/(2 eps0) - (tau/2)(eps0 - sqrt(eps0^2-Omega0^2)) + phi0.
///
/// Requires Delta = 0, purely imaginary lambda = -i eps0 and eps0 > Omega0.
pub fn constant_bg_reference(
    zeta: f64,
    tau: f64,
    mp: &MediumParams,
    sp: &SolitonParams,
    omega0: f64,
) -> Result<FieldSample> {
    if mp.delta != 0.0 {
        return Err(Error::Domain(
            "the constant-background reference assumes Delta = 0".into(),
        ));
    }
    let eps0 = sp.eps0().ok_or_else(|| {
        Error::Domain("the constant-background reference assumes lambda = -i eps0".into())
    })?;
    if eps0 <= omega0 {
        return Err(Error::Domain(format!(
            "eps0 = {eps0} must exceed omega0 = {omega0}"
        )));
    }
    let root = (eps0 * eps0 - omega0 * omega0).sqrt();
    let phi = mp.nu0 * zeta / (2.0 * eps0) - tau / 2.0 * (eps0 - root) + sp.phi0;
    let amp = (2.0 * eps0).sqrt() * omega0 / (eps0 + root).sqrt();
    Ok(FieldSample {
        omega_a: Complex64::new(0.0, -amp) * sech(phi),
        omega_b: Complex64::new(omega0 * phi.tanh(), 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{atom_state, fields, soliton_phase};
    use std::f64::consts::FRAC_PI_2;

    fn setup() -> (MediumParams, SolitonParams, ControlField) {
        (
            MediumParams::default(),
            SolitonParams::default(),
            ControlField::default(),
        )
    }

    #[test]
    fn rejects_subcritical_background() {
        let mp = MediumParams::default();
        let sp = SolitonParams::imaginary(1.5, 0.0, 0.0).unwrap();
        let cf = ControlField::new(2.0, 1.0).unwrap();
        assert!(SolitonSolution::new(mp, sp, cf).is_err());
    }

    #[test]
    fn phase_at_origin_and_zeta_slope() {
        let (mp, _, cf) = setup();
        let sp = SolitonParams::imaginary(2.1, 0.3, 0.7).unwrap();
        let (phi, theta) = soliton_phase(0.0, 0.0, &mp, &sp, &cf).unwrap();
        let w0 = crate::exact::w_initial(sp.lambda, cf.omega0).unwrap();
        assert!((phi - (0.3 + 0.5 * w0.norm_sqr().ln_1p())).abs() < 1e-13);
        assert!((theta - 0.7).abs() < 1e-13);
        // d phi_s / d zeta = -nu0 Im(lambda) / (2 |Delta-lambda|^2) > 0.
        let (phi1, _) = soliton_phase(1.0, 0.0, &mp, &sp, &cf).unwrap();
        let slope_want = -mp.nu0 * sp.lambda.im / (2.0 * mp.detuning_gap_sq(sp.lambda));
        assert!(((phi1 - phi) - slope_want).abs() < 1e-12);
        assert!(slope_want > 0.0);
    }

    #[test]
    fn field_asymptotes() {
        let (mp, sp, cf) = setup();
        // phi_s -> -infinity: Omega_a -> 0, Omega_b -> -Omega(tau).
        let far = fields(-40.0, -1.0, &mp, &sp, &cf).unwrap();
        assert!(far.omega_a.norm() < 1e-14);
        assert!((far.omega_b - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        // phi_s -> +infinity, tau < 0: Omega_b -> +Omega0.
        let far = fields(40.0, -1.0, &mp, &sp, &cf).unwrap();
        assert!((far.omega_b - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        // Peak amplitude at phi_s = 0.
        let sol = SolitonSolution::new(mp, sp, cf).unwrap();
        let row = sol.row(-1.0).unwrap();
        let (phi0_at_0, _) = row.phase(0.0);
        let zeta_peak = -phi0_at_0 / (row.phase(1.0).0 - phi0_at_0);
        let peak = row.fields(zeta_peak).omega_a.norm();
        assert!((peak - 2.4760225807286578).abs() < 1e-10, "peak = {peak}");
    }

    #[test]
    fn matches_constant_background_reference_exactly() {
        // alpha = 0 with theta0 = pi/2 and phi0 aligned by the logarithmic
        // boost term reproduces the textbook display to round-off.
        let mp = MediumParams::default();
        let cf = ControlField::new(2.0, 0.0).unwrap();
        let w0 = crate::exact::w_initial(Complex64::new(0.0, -2.1), 2.0).unwrap();
        let boost = 0.5 * w0.norm_sqr().ln_1p();
        let sp_tilde = SolitonParams::imaginary(2.1, -1.0, FRAC_PI_2).unwrap();
        let sp_ref = SolitonParams::imaginary(2.1, -1.0 + boost, 0.0).unwrap();
        for (zeta, tau) in [(0.3, -4.0), (0.8, 2.0), (1.5, 7.0), (0.05, 0.0)] {
            let tilde = fields(zeta, tau, &mp, &sp_tilde, &cf).unwrap();
            let reference = constant_bg_reference(zeta, tau, &mp, &sp_ref, 2.0).unwrap();
            assert!((tilde.omega_a - reference.omega_a).norm() < 1e-12);
            assert!((tilde.omega_b - reference.omega_b).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_bg_reference_limits_and_errors() {
        let mp = MediumParams::default();
        let sp = SolitonParams::imaginary(2.1, 0.0, 0.0).unwrap();
        // tanh limits.
        let s = constant_bg_reference(60.0, 0.0, &mp, &sp, 2.0).unwrap();
        assert!((s.omega_b.re - 2.0).abs() < 1e-12);
        let s = constant_bg_reference(-60.0, 0.0, &mp, &sp, 2.0).unwrap();
        assert!((s.omega_b.re + 2.0).abs() < 1e-12);
        // Peak value.
        let s = constant_bg_reference(0.0, 0.0, &mp, &sp, 2.0).unwrap();
        assert!((s.omega_a.norm() - 2.4760225807286578).abs() < 1e-12);
        // Domain errors.
        assert!(constant_bg_reference(0.0, 0.0, &mp, &sp, 2.2).is_err());
        let mp_det = MediumParams::new(10.0, 1.0, 1.0).unwrap();
        assert!(constant_bg_reference(0.0, 0.0, &mp_det, &sp, 2.0).is_err());
    }

    #[test]
    fn atom_state_is_normalized_and_dark_far_away() {
        let (mp, sp, cf) = setup();
        for (zeta, tau) in [(0.0, -3.0), (0.7, 0.0), (1.4, 2.0), (2.8, 20.0)] {
            let st = atom_state(zeta, tau, &mp, &sp, &cf).unwrap();
            assert!((st.norm_sqr() - 1.0).abs() < 1e-12, "({zeta},{tau})");
        }
        // Far from the soliton only level |1> is occupied.
        let st = atom_state(50.0, -2.0, &mp, &sp, &cf).unwrap();
        assert!(st.populations()[0] > 1.0 - 1e-12);
        // Norm also holds at non-zero detuning.
        let mp_det = MediumParams::new(10.0, 1.0, 1.0).unwrap();
        let st = atom_state(0.4, 3.0, &mp_det, &sp, &cf).unwrap();
        assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn imprint_population_at_detuning() {
        // After stopping, P2 at the imprint centre is eps0^2/(eps0^2+Delta^2).
        let mp = MediumParams::new(10.0, 1.0, 1.0).unwrap();
        let sp = SolitonParams::imaginary(2.1, -3.0, 0.0).unwrap();
        let cf = ControlField::default();
        let sol = SolitonSolution::new(mp, sp, cf).unwrap();
        let row = sol.row(25.0).unwrap();
        let mut best = 0.0_f64;
        for k in 0..3000 {
            let zeta = 3.0 * k as f64 / 2999.0;
            best = best.max(row.atom_state(zeta).populations()[1]);
        }
        let want = 2.1 * 2.1 / (2.1 * 2.1 + 1.0);
        assert!((best - want).abs() < 1e-2, "P2 = {best}, want {want}");
        assert!((want - 0.81515711645101664).abs() < 1e-14);
    }

    #[test]
    fn schrodinger_residual_vanishes_at_nonzero_detuning() {
        // Finite-difference check of d_tau psi = -i H psi, fixing the sign
        // of the global detuning phase.
        let mp = MediumParams::new(10.0, 1.0, 1.0).unwrap();
        let sp = SolitonParams::imaginary(2.1, -1.0, 0.4).unwrap();
        let cf = ControlField::default();
        let h = 1e-5;
        for (zeta, tau) in [(0.3, -1.5), (0.6, 0.8), (1.0, 2.5)] {
            let plus = atom_state(zeta, tau + h, &mp, &sp, &cf).unwrap();
            let minus = atom_state(zeta, tau - h, &mp, &sp, &cf).unwrap();
            let mid = atom_state(zeta, tau, &mp, &sp, &cf).unwrap();
            let fs = fields(zeta, tau, &mp, &sp, &cf).unwrap();
            let i = Complex64::i();
            let hpsi = [
                -mp.delta / 2.0 * mid.c1 - fs.omega_a.conj() / 2.0 * mid.c3,
                -mp.delta / 2.0 * mid.c2 - fs.omega_b.conj() / 2.0 * mid.c3,
                mp.delta / 2.0 * mid.c3 - fs.omega_a / 2.0 * mid.c1 - fs.omega_b / 2.0 * mid.c2,
            ];
            let resid = [
                (plus.c1 - minus.c1) / (2.0 * h) + i * hpsi[0],
                (plus.c2 - minus.c2) / (2.0 * h) + i * hpsi[1],
                (plus.c3 - minus.c3) / (2.0 * h) + i * hpsi[2],
            ];
            for r in resid {
                assert!(r.norm() < 1e-7, "residual {r} at ({zeta},{tau})");
            }
        }
    }

    #[test]
    fn phase_composition_from_frozen_background_values() {
        // phi_s(1, 5) assembled from the independently verified w(5), z(5).
        let (mp, _, cf) = setup();
        let sp = SolitonParams::imaginary(2.1, -1.0, 0.0).unwrap();
        let (phi, theta) = soliton_phase(1.0, 5.0, &mp, &sp, &cf).unwrap();
        let z5 = -0.45681685782373872;
        let w5 = 0.0061481037818977068_f64;
        let slope = 10.0 * 2.1 / (2.0 * 4.41);
        let want_phi = -1.0 + slope + z5 + 0.5 * (w5 * w5).ln_1p();
        assert!((phi - want_phi).abs() < 1e-12, "phi = {phi}, want {want_phi}");
        // Purely imaginary lambda at zero detuning: no carrier drift.
        assert!(theta.abs() < 1e-12);
    }
}
