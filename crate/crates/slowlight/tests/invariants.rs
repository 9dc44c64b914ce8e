//! Structural invariants of the closed-form solution and the integrator:
//! the defining differential equations, continuity at the switch-off
//! instant, decay of the background functions, norm preservation, and the
//! frozen-imprint behaviour of the numeric march.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slowlight::exact::{self, control_field, SolitonSolution, WzEvaluator};
use slowlight::mb::{self, Grid2D};
use slowlight::params::{ControlField, FieldSample, MediumParams, SolitonParams};

fn reference() -> (MediumParams, SolitonParams, ControlField) {
    (
        MediumParams::default(),
        SolitonParams::default(),
        ControlField::default(),
    )
}

/// Central-difference residuals of dw/dtau and dz/dtau at one instant.
fn background_residuals(
    ev: &WzEvaluator,
    lambda: Complex64,
    cf: &ControlField,
    tau: f64,
    h: f64,
) -> (f64, f64) {
    let plus = ev.eval(tau + h).unwrap();
    let minus = ev.eval(tau - h).unwrap();
    let mid = ev.eval(tau).unwrap();
    let om = control_field(tau, cf);
    let i = Complex64::i();
    let rw = (plus.w - minus.w) / (2.0 * h)
        - (0.5 * i * om * (1.0 - mid.w * mid.w) - i * lambda * mid.w);
    let rz = (plus.z - minus.z) / (2.0 * h) - 0.5 * i * om * mid.w;
    (rw.norm(), rz.norm())
}

#[test]
fn riccati_and_quadrature_equations_hold_everywhere() {
    let h = 1e-4;
    let mut cases: Vec<(Complex64, ControlField)> = vec![(
        Complex64::new(0.0, -2.1),
        ControlField::new(2.0, 1.0).unwrap(),
    )];
    // Spectral parameters off the imaginary axis exercise the phase
    // unwrapping of z.
    cases.push((Complex64::new(1.0, -2.1), ControlField::new(2.0, 1.0).unwrap()));
    cases.push((Complex64::new(-0.6, -1.4), ControlField::new(1.1, 0.4).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x1144);
    for _ in 0..10 {
        let om0 = rng.gen_range(0.5..3.0);
        let eps0 = om0 * rng.gen_range(1.05..2.5);
        let alpha = rng.gen_range(0.2..5.0);
        cases.push((
            Complex64::new(0.0, -eps0),
            ControlField::new(om0, alpha).unwrap(),
        ));
    }
    for (lambda, cf) in cases {
        let ev = WzEvaluator::new(lambda, &cf).unwrap();
        for k in 0..71 {
            let tau = -10.0 + 35.0 * k as f64 / 70.0;
            if tau.abs() < 2.0 * h {
                continue;
            }
            let (rw, rz) = background_residuals(&ev, lambda, &cf, tau, h);
            assert!(rw <= 1e-6, "riccati {rw:.2e} at tau={tau}, lambda={lambda}, cf={cf:?}");
            assert!(rz <= 1e-6, "quadrature {rz:.2e} at tau={tau}, lambda={lambda}, cf={cf:?}");
        }
    }
}

#[test]
fn stationarity_of_the_constant_background_root() {
    // For alpha = 0, w0 solves Omega0 w^2 + 2 lambda w - Omega0 = 0.
    let mut rng = ChaCha8Rng::seed_from_u64(0xabc);
    for _ in 0..50 {
        let lambda = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-4.0..-0.3));
        let om0 = rng.gen_range(0.0..3.0);
        let w0 = exact::w_initial(lambda, om0).unwrap();
        let resid = om0 * w0 * w0 + 2.0 * lambda * w0 - om0;
        assert!(resid.norm() < 1e-12, "lambda={lambda} om0={om0}");
    }
}

#[test]
fn everything_is_continuous_across_the_switchoff() {
    let (mp, sp, cf) = reference();
    let sol = SolitonSolution::new(mp, sp, cf).unwrap();
    let eps = 1e-9;
    let before = sol.row(-eps).unwrap();
    let after = sol.row(eps).unwrap();
    assert!((before.w - after.w).norm() < 1e-7);
    assert!((before.z - after.z).norm() < 1e-7);
    for zeta in [0.0, 0.4, 1.3] {
        let (phi_m, theta_m) = before.phase(zeta);
        let (phi_p, theta_p) = after.phase(zeta);
        assert!((phi_m - phi_p).abs() < 1e-7);
        assert!((theta_m - theta_p).abs() < 1e-7);
        let fm = before.fields(zeta);
        let fp = after.fields(zeta);
        assert!((fm.omega_a - fp.omega_a).norm() < 1e-7);
        assert!((fm.omega_b - fp.omega_b).norm() < 1e-7);
        let sm = before.atom_state(zeta);
        let sp_ = after.atom_state(zeta);
        assert!((sm.c1 - sp_.c1).norm() < 1e-7);
        assert!((sm.c2 - sp_.c2).norm() < 1e-7);
        assert!((sm.c3 - sp_.c3).norm() < 1e-7);
    }
}

#[test]
fn background_function_decays_with_the_control() {
    // |w(tau)| is bounded by a fixed multiple of Omega(tau) once the decay
    // is established (tau >= 5/alpha); the adiabatic ratio is 1/(2|lambda|).
    for (eps0, om0, alpha) in [(2.1, 2.0, 1.0), (2.1, 2.0, 0.5), (3.0, 1.0, 2.0)] {
        let lambda = Complex64::new(0.0, -eps0);
        let cf = ControlField::new(om0, alpha).unwrap();
        let ev = WzEvaluator::new(lambda, &cf).unwrap();
        let k_bound = 2.0 / eps0;
        for m in 0..20 {
            let tau = 5.0 / alpha + m as f64 * (25.0 - 5.0 / alpha).max(1.0) / 19.0;
            let w = ev.eval(tau).unwrap().w;
            let om = control_field(tau, &cf);
            assert!(
                w.norm() <= k_bound * om,
                "|w|={} vs K*Omega={} at tau={tau}, alpha={alpha}",
                w.norm(),
                k_bound * om
            );
        }
        // And it really vanishes.
        assert!(ev.eval(40.0 / alpha).unwrap().w.norm() < 1e-10);
    }
}

#[test]
fn atom_norm_is_unit_across_parameters_and_offsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x77);
    for _ in 0..40 {
        let delta = rng.gen_range(-1.5..1.5);
        let mp = MediumParams::new(rng.gen_range(2.0..15.0), delta, 1.0).unwrap();
        let om0 = rng.gen_range(0.5..2.5);
        let sp = SolitonParams::new(
            Complex64::new(rng.gen_range(-1.0..1.0), -om0 * rng.gen_range(1.1..2.0) - 0.2),
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-3.0..3.0),
        )
        .unwrap();
        let cf = ControlField::new(om0, rng.gen_range(0.3..3.0)).unwrap();
        let sol = match SolitonSolution::new(mp, sp, cf) {
            Ok(s) => s,
            Err(_) => continue, // subcritical purely imaginary draw
        };
        let row = sol.row(rng.gen_range(-5.0..15.0)).unwrap();
        let st = row.atom_state(rng.gen_range(-1.0..3.0));
        assert!((st.norm_sqr() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn constant_background_path_matches_the_reference_display() {
    // alpha = 0: the general solution and the textbook form agree pointwise
    // to 1e-12 once the envelope offset absorbs the logarithmic boost and
    // the carrier phase is aligned at the peak.
    let mp = MediumParams::default();
    let cf = ControlField::new(2.0, 0.0).unwrap();
    let sp = SolitonParams::imaginary(2.1, -1.0, 0.0).unwrap();
    let sol = SolitonSolution::new(mp, sp, cf).unwrap();
    let boost = 0.5 * sol.w0().norm_sqr().ln_1p();
    let sp_ref = SolitonParams::imaginary(2.1, -1.0 + boost, 0.0).unwrap();

    // Carrier alignment factor from the peak of the tau = 0 row.
    let row0 = sol.row(0.0).unwrap();
    let (phi_at_0, _) = row0.phase(0.0);
    let slope = row0.phase(1.0).0 - phi_at_0;
    let zeta_peak = -phi_at_0 / slope;
    let got_peak = row0.fields(zeta_peak).omega_a;
    let want_peak = exact::constant_bg_reference(zeta_peak, 0.0, &mp, &sp_ref, cf.omega0)
        .unwrap()
        .omega_a;
    let align = (Complex64::i() * (want_peak.arg() - got_peak.arg())).exp();

    for (zeta, tau) in [(0.1, -6.0), (0.6, -1.0), (1.2, 3.0), (2.0, 9.0)] {
        let row = sol.row(tau).unwrap();
        let got = row.fields(zeta);
        let want = exact::constant_bg_reference(zeta, tau, &mp, &sp_ref, cf.omega0).unwrap();
        assert!(
            (got.omega_a * align - want.omega_a).norm() < 1e-12,
            "omega_a at ({zeta},{tau})"
        );
        assert!((got.omega_b - want.omega_b).norm() < 1e-12, "omega_b at ({zeta},{tau})");
    }
}

#[test]
fn numeric_march_freezes_the_imprint_and_overshoots_the_front() {
    // Run the integrator over the stop event and check the two signatures
    // of the collision: frozen populations at a fixed position past the
    // stop point, and a control-channel intensity spike above Omega0^2.
    let (mp, sp, cf) = reference();
    let sol = SolitonSolution::new(mp, sp, cf).unwrap();
    let grid = Grid2D::new(0.0, 1.5, -15.0, 30.0, 151, 1501).unwrap();
    let rows: Vec<_> = (0..grid.n_tau)
        .map(|j| sol.row(grid.tau(j)).unwrap())
        .collect();
    let boundary: Vec<FieldSample> = rows.iter().map(|r| r.fields(0.0)).collect();
    let initial = rows[0].atom_state(0.0);
    let numeric = mb::integrate(&mp, &boundary, &initial, &grid).unwrap();

    // Fixed z = zeta (c = 1) past the stop point (~0.61).
    let i_fixed = (0..grid.n_zeta)
        .min_by(|&a, &b| {
            (grid.zeta(a) - 1.1)
                .abs()
                .partial_cmp(&(grid.zeta(b) - 1.1).abs())
                .unwrap()
        })
        .unwrap();
    let quarter_start = grid.tau_min + 0.75 * (grid.tau_max - grid.tau_min);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..grid.n_tau {
        if grid.tau(j) >= quarter_start {
            let p2 = numeric.state(i_fixed, j).populations()[1];
            lo = lo.min(p2);
            hi = hi.max(p2);
        }
    }
    assert!(hi - lo <= 1e-3, "P2 varied by {:.2e} after the stop", hi - lo);

    let mut max_ib = 0.0_f64;
    for j in 0..grid.n_tau {
        if grid.tau(j) <= 0.0 {
            continue;
        }
        for i in 0..grid.n_zeta {
            max_ib = max_ib.max(numeric.field(i, j).omega_b.norm_sqr());
        }
    }
    assert!(
        max_ib > cf.omega0 * cf.omega0,
        "no overshoot: max I_b = {max_ib}"
    );
}
