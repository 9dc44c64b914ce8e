//! The verification suite behind `slowlight verify`: closed-form invariants,
//! PDE residual convergence, and the numeric-vs-exact cross check, each with
//! its tolerance pinned in code.

use num_complex::Complex64;
use serde::Serialize;

use slowlight::exact::{control_field, SolitonSolution, WzEvaluator};
use slowlight::mb::{self, Grid2D, SolutionGrid};
use slowlight::params::FieldSample;
use slowlight::scenario::Scenario;
use slowlight::Result;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    /// Interpretation depends on the check: an upper bound, or the edges of
    /// an acceptance band (see `detail`).
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Finite-difference step for the background-equation residuals.
const FD_STEP: f64 = 1e-4;
/// Residual bound for the background equations.
const RICCATI_TOL: f64 = 1e-6;
/// Boundary matching |w(0) - w0|.
const BOUNDARY_TOL: f64 = 1e-10;
/// Norm bound for the closed-form state.
const NORM_TOL: f64 = 1e-10;
/// Norm drift bound for integrated states.
const DRIFT_TOL: f64 = 1e-6;
/// Second-order convergence band for the residual oracle.
const CONV_BAND: (f64, f64) = (3.5, 4.5);
/// Numeric-vs-exact bounds: field error relative to the peak, absolute P2.
const FIELD_TOL: f64 = 1e-3;
const P2_TOL: f64 = 1e-3;

pub fn run(scn: &Scenario) -> Result<VerifyReport> {
    let mut checks = Vec::new();

    background_equation_checks(scn, &mut checks)?;
    analytic_norm_check(scn, &mut checks)?;
    residual_convergence_checks(scn, &mut checks)?;
    numeric_vs_exact_checks(scn, &mut checks)?;

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { passed, checks })
}

fn push(checks: &mut Vec<Check>, name: &str, measured: f64, tolerance: f64, detail: String) {
    checks.push(Check {
        name: name.into(),
        passed: measured <= tolerance,
        measured,
        tolerance,
        detail,
    });
}

/// dw/dtau = (i/2) Omega (1 - w^2) - i lambda w and dz/dtau = (i/2) Omega w
/// by central differences over tau in [-10, 25].
fn background_equation_checks(scn: &Scenario, checks: &mut Vec<Check>) -> Result<()> {
    let ev = WzEvaluator::new(scn.soliton.lambda, &scn.control)?;
    let i = Complex64::i();
    let lambda = scn.soliton.lambda;
    let mut worst_w = 0.0_f64;
    let mut worst_z = 0.0_f64;
    let n = 71;
    for k in 0..n {
        let tau = -10.0 + 35.0 * k as f64 / (n - 1) as f64;
        if tau.abs() < 2.0 * FD_STEP {
            continue;
        }
        let plus = ev.eval(tau + FD_STEP)?;
        let minus = ev.eval(tau - FD_STEP)?;
        let mid = ev.eval(tau)?;
        let om = control_field(tau, &scn.control);
        let rw = (plus.w - minus.w) / (2.0 * FD_STEP)
            - (0.5 * i * om * (1.0 - mid.w * mid.w) - i * lambda * mid.w);
        let rz = (plus.z - minus.z) / (2.0 * FD_STEP) - 0.5 * i * om * mid.w;
        worst_w = worst_w.max(rw.norm());
        worst_z = worst_z.max(rz.norm());
    }
    push(
        checks,
        "riccati_invariant",
        worst_w,
        RICCATI_TOL,
        format!("max |dw/dtau residual| over tau in [-10,25], h={FD_STEP}"),
    );
    push(
        checks,
        "quadrature_invariant",
        worst_z,
        RICCATI_TOL,
        format!("max |dz/dtau residual| over tau in [-10,25], h={FD_STEP}"),
    );

    let at0 = ev.eval(0.0)?;
    push(
        checks,
        "boundary_w0",
        (at0.w - ev.w0()).norm(),
        BOUNDARY_TOL,
        "|w(0) - w0| continuity at the switch-off instant".into(),
    );
    Ok(())
}

/// Unit norm of the closed-form state over a subsampled scenario grid.
fn analytic_norm_check(scn: &Scenario, checks: &mut Vec<Check>) -> Result<()> {
    let sol = SolitonSolution::new(scn.medium, scn.soliton, scn.control)?;
    let grid = &scn.grid;
    let mut worst = 0.0_f64;
    let nj = grid.n_tau.min(41);
    let ni = grid.n_zeta.min(41);
    for jj in 0..nj {
        let j = jj * (grid.n_tau - 1) / (nj - 1).max(1);
        let row = sol.row(grid.tau(j))?;
        for ii in 0..ni {
            let i = ii * (grid.n_zeta - 1) / (ni - 1).max(1);
            let st = row.atom_state(grid.zeta(i));
            worst = worst.max((st.norm_sqr() - 1.0).abs());
        }
    }
    push(
        checks,
        "analytic_norm",
        worst,
        NORM_TOL,
        "max ||psi|^2 - 1| of the closed-form state over the sampled grid".into(),
    );
    Ok(())
}

fn sample_analytic(sol: &SolitonSolution, grid: &Grid2D) -> Result<SolutionGrid> {
    let mut fields = Vec::with_capacity(grid.len());
    let mut states = Vec::with_capacity(grid.len());
    for j in 0..grid.n_tau {
        let row = sol.row(grid.tau(j))?;
        for i in 0..grid.n_zeta {
            let zeta = grid.zeta(i);
            fields.push(row.fields(zeta));
            states.push(row.atom_state(zeta));
        }
    }
    Ok(SolutionGrid {
        grid: *grid,
        fields,
        states,
    })
}

/// The residual oracle applied to the closed form on two pinned grids over
/// the scenario extents; halving the spacing must shrink the max norms by
/// a second-order factor.
fn residual_convergence_checks(scn: &Scenario, checks: &mut Vec<Check>) -> Result<()> {
    let sol = SolitonSolution::new(scn.medium, scn.soliton, scn.control)?;
    let g = &scn.grid;
    let coarse = Grid2D::new(g.zeta_min, g.zeta_max, g.tau_min, g.tau_max, 151, 451)?;
    let fine = Grid2D::new(g.zeta_min, g.zeta_max, g.tau_min, g.tau_max, 301, 901)?;
    let rc = mb::residual(&sample_analytic(&sol, &coarse)?, &scn.medium);
    let rf = mb::residual(&sample_analytic(&sol, &fine)?, &scn.medium);
    for (name, num, den) in [
        ("residual_convergence_liouville", rc.liouville_max, rf.liouville_max),
        ("residual_convergence_maxwell_a", rc.maxwell_a_max, rf.maxwell_a_max),
        ("residual_convergence_maxwell_b", rc.maxwell_b_max, rf.maxwell_b_max),
    ] {
        let ratio = if den > 0.0 { num / den } else { 4.0 };
        checks.push(Check {
            name: name.into(),
            passed: (CONV_BAND.0..=CONV_BAND.1).contains(&ratio),
            measured: ratio,
            tolerance: CONV_BAND.1,
            detail: format!(
                "max-norm ratio between h and h/2 grids, want [{}, {}]; coarse {num:.3e}, fine {den:.3e}",
                CONV_BAND.0, CONV_BAND.1
            ),
        });
    }
    Ok(())
}

/// Streamed comparison of the integrator march against the closed form on
/// the scenario grid.
fn numeric_vs_exact_checks(scn: &Scenario, checks: &mut Vec<Check>) -> Result<()> {
    let sol = SolitonSolution::new(scn.medium, scn.soliton, scn.control)?;
    let grid = scn.grid;
    let rows: Vec<_> = (0..grid.n_tau)
        .map(|j| sol.row(grid.tau(j)))
        .collect::<Result<_>>()?;
    let boundary: Vec<FieldSample> = rows.iter().map(|r| r.fields(grid.zeta_min)).collect();
    let initial = rows[0].atom_state(grid.zeta_min);

    let mut peak = 0.0_f64;
    for row in &rows {
        for i in 0..grid.n_zeta {
            peak = peak.max(row.fields(grid.zeta(i)).omega_a.norm());
        }
    }

    let mut err_field = 0.0_f64;
    let mut err_p2 = 0.0_f64;
    let mut drift = 0.0_f64;
    let march = mb::integrate_scan(&scn.medium, &boundary, &initial, &grid, |i, fs, ss| {
        let zeta = grid.zeta(i);
        for (j, row) in rows.iter().enumerate() {
            let want_f = row.fields(zeta);
            let want_s = row.atom_state(zeta);
            err_field = err_field.max((fs[j].omega_a - want_f.omega_a).norm());
            err_p2 = err_p2.max((ss[j].c2.norm_sqr() - want_s.c2.norm_sqr()).abs());
            drift = drift.max((ss[j].norm_sqr().sqrt() - 1.0).abs());
        }
    });
    if let Err(slowlight::Error::NormDrift { drift, zeta, tau }) = march {
        // The march blew up before the comparison could finish; report the
        // drift as the failed check instead of aborting the whole run.
        checks.push(Check {
            name: "numeric_norm_drift".into(),
            passed: false,
            measured: drift,
            tolerance: DRIFT_TOL,
            detail: format!("march aborted at (zeta={zeta}, tau={tau}); the grid is too coarse"),
        });
        return Ok(());
    }
    march?;

    push(
        checks,
        "numeric_vs_exact_field",
        err_field / peak.max(f64::MIN_POSITIVE),
        FIELD_TOL,
        format!("max |Omega_a(numeric) - Omega_a(exact)| / peak, peak = {peak:.6}"),
    );
    push(
        checks,
        "numeric_vs_exact_p2",
        err_p2,
        P2_TOL,
        "max |P2(numeric) - P2(exact)| over the grid".into(),
    );
    push(
        checks,
        "numeric_norm_drift",
        drift,
        DRIFT_TOL,
        "max integrated-state norm deviation".into(),
    );
    Ok(())
}
