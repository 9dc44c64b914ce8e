//! Independent numerical solver of the Maxwell-Bloch system on a
//! (zeta, tau) grid, plus a finite-difference residual oracle for any
//! candidate solution.
//!
//! Marching order follows the causal structure: outer loop over zeta
//! (fields at the next slice need the atomic response over all tau), inner
//! classical RK4 sweep over tau for the pure-state Schroedinger equation,
//! with field values interpolated linearly between tau nodes for the
//! substeps. Fields advance in zeta by a second-order predictor-corrector.
//! The run is deterministic for a fixed grid.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{AtomState, FieldSample, MediumParams};

/// Uniform rectangular grid over retarded coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub n_zeta: usize,
    pub n_tau: usize,
}

impl Grid2D {
    pub fn new(
        zeta_min: f64,
        zeta_max: f64,
        tau_min: f64,
        tau_max: f64,
        n_zeta: usize,
        n_tau: usize,
    ) -> Result<Self> {
        if !zeta_min.is_finite() || zeta_min < 0.0 {
            return Err(Error::Validation(format!(
                "zeta_min must be >= 0 (semi-infinite medium), got {zeta_min}"
            )));
        }
        let extents_ok = zeta_max.is_finite()
            && tau_min.is_finite()
            && tau_max.is_finite()
            && zeta_max > zeta_min
            && tau_max > tau_min;
        if !extents_ok {
            return Err(Error::Validation(
                "grid extents must satisfy zeta_max > zeta_min and tau_max > tau_min".into(),
            ));
        }
        if n_zeta < 2 || n_tau < 2 {
            return Err(Error::Validation(
                "grid needs at least 2 nodes per axis".into(),
            ));
        }
        Ok(Self {
            zeta_min,
            zeta_max,
            tau_min,
            tau_max,
            n_zeta,
            n_tau,
        })
    }

    pub fn d_zeta(&self) -> f64 {
        (self.zeta_max - self.zeta_min) / (self.n_zeta - 1) as f64
    }

    pub fn d_tau(&self) -> f64 {
        (self.tau_max - self.tau_min) / (self.n_tau - 1) as f64
    }

    pub fn zeta(&self, i: usize) -> f64 {
        self.zeta_min + self.d_zeta() * i as f64
    }

    pub fn tau(&self, j: usize) -> f64 {
        self.tau_min + self.d_tau() * j as f64
    }

    /// Flat index, tau-outer / zeta-inner.
    pub fn idx(&self, i_zeta: usize, j_tau: usize) -> usize {
        j_tau * self.n_zeta + i_zeta
    }

    /// Node count; never zero (both axes have at least 2 nodes).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.n_zeta * self.n_tau
    }
}

/// Field samples and atomic states over the nodes of a [`Grid2D`].
#[derive(Debug, Clone)]
pub struct SolutionGrid {
    pub grid: Grid2D,
    pub fields: Vec<FieldSample>,
    pub states: Vec<AtomState>,
}

impl SolutionGrid {
    pub fn field(&self, i_zeta: usize, j_tau: usize) -> &FieldSample {
        &self.fields[self.grid.idx(i_zeta, j_tau)]
    }

    pub fn state(&self, i_zeta: usize, j_tau: usize) -> &AtomState {
        &self.states[self.grid.idx(i_zeta, j_tau)]
    }
}

/// Max and L2 norms of the Liouville residual and of each Maxwell component
/// residual, with the spacings they were measured at.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualReport {
    pub liouville_max: f64,
    pub liouville_l2: f64,
    pub maxwell_a_max: f64,
    pub maxwell_a_l2: f64,
    pub maxwell_b_max: f64,
    pub maxwell_b_l2: f64,
    pub d_zeta: f64,
    pub d_tau: f64,
}

type Matrix3 = [[Complex64; 3]; 3];

/// Interaction-picture Hamiltonian
/// H = -(Delta/2) diag(1,1,-1) - (Omega_a |3><1| + Omega_b |3><2|)/2 + h.c.;
/// hermitian by construction.
pub fn hamiltonian(fs: &FieldSample, delta: f64) -> Matrix3 {
    let z = Complex64::ZERO;
    let d = Complex64::new(-delta / 2.0, 0.0);
    [
        [d, z, -fs.omega_a.conj() / 2.0],
        [z, d, -fs.omega_b.conj() / 2.0],
        [-fs.omega_a / 2.0, -fs.omega_b / 2.0, -d],
    ]
}

/// Right-hand side of the pure-state equation d psi / d tau = -i H psi.
pub fn schrodinger_rhs(psi: &AtomState, h: &Matrix3) -> AtomState {
    let v = [psi.c1, psi.c2, psi.c3];
    let mut out = [Complex64::ZERO; 3];
    for (row, o) in h.iter().zip(out.iter_mut()) {
        *o = -Complex64::i() * (row[0] * v[0] + row[1] * v[1] + row[2] * v[2]);
    }
    AtomState::new(out[0], out[1], out[2])
}

/// Field propagation source: the Maxwell equations componentized through
/// [D, rho]_{3x} = -2 rho_{3x} give
/// d Omega_a / d zeta = i nu0 psi3 psi1*,  d Omega_b / d zeta = i nu0 psi3 psi2*.
pub fn maxwell_rhs(psi: &AtomState, nu0: f64) -> (Complex64, Complex64) {
    let factor = Complex64::i() * nu0 * psi.c3;
    (factor * psi.c1.conj(), factor * psi.c2.conj())
}

/// Hard error threshold on per-node norm deviation.
const NORM_DRIFT_LIMIT: f64 = 1e-6;

fn axpy(psi: &AtomState, k: &AtomState, f: f64) -> AtomState {
    AtomState::new(psi.c1 + f * k.c1, psi.c2 + f * k.c2, psi.c3 + f * k.c3)
}

fn midpoint(a: &FieldSample, b: &FieldSample) -> FieldSample {
    FieldSample::new(
        (a.omega_a + b.omega_a) / 2.0,
        (a.omega_b + b.omega_b) / 2.0,
    )
}

/// RK4 sweep of the atomic state across one tau column of fields.
fn sweep_states(
    fields: &[FieldSample],
    initial: &AtomState,
    d_tau: f64,
    delta: f64,
    out: &mut [AtomState],
) {
    let mut psi = *initial;
    out[0] = psi;
    for j in 0..fields.len() - 1 {
        let h0 = hamiltonian(&fields[j], delta);
        let hm = hamiltonian(&midpoint(&fields[j], &fields[j + 1]), delta);
        let h1 = hamiltonian(&fields[j + 1], delta);
        let k1 = schrodinger_rhs(&psi, &h0);
        let k2 = schrodinger_rhs(&axpy(&psi, &k1, d_tau / 2.0), &hm);
        let k3 = schrodinger_rhs(&axpy(&psi, &k2, d_tau / 2.0), &hm);
        let k4 = schrodinger_rhs(&axpy(&psi, &k3, d_tau), &h1);
        psi = AtomState::new(
            psi.c1 + d_tau / 6.0 * (k1.c1 + 2.0 * k2.c1 + 2.0 * k3.c1 + k4.c1),
            psi.c2 + d_tau / 6.0 * (k1.c2 + 2.0 * k2.c2 + 2.0 * k3.c2 + k4.c2),
            psi.c3 + d_tau / 6.0 * (k1.c3 + 2.0 * k2.c3 + 2.0 * k3.c3 + k4.c3),
        );
        out[j + 1] = psi;
    }
}

/// Marches the system across the grid, handing each finished zeta slice
/// (fields and states over the tau axis) to `observe`. This is the
/// streaming core of [`integrate`]; use it directly when the full grid
/// would not fit comfortably in memory.
pub fn integrate_scan(
    mp: &MediumParams,
    boundary_fields: &[FieldSample],
    initial_state: &AtomState,
    grid: &Grid2D,
    mut observe: impl FnMut(usize, &[FieldSample], &[AtomState]),
) -> Result<()> {
    if boundary_fields.len() != grid.n_tau {
        return Err(Error::Config(format!(
            "boundary profile has {} samples but the grid has {} tau nodes",
            boundary_fields.len(),
            grid.n_tau
        )));
    }
    let norm_dev = (initial_state.norm_sqr().sqrt() - 1.0).abs();
    if norm_dev > NORM_DRIFT_LIMIT {
        return Err(Error::Config(format!(
            "initial state norm deviates by {norm_dev:.3e}"
        )));
    }
    let d_tau = grid.d_tau();
    let d_zeta = grid.d_zeta();
    let n_tau = grid.n_tau;

    let mut fields = boundary_fields.to_vec();
    let mut states = vec![AtomState::ground(); n_tau];
    let mut states_pred = vec![AtomState::ground(); n_tau];
    let mut fields_pred = vec![FieldSample::new(Complex64::ZERO, Complex64::ZERO); n_tau];

    sweep_states(&fields, initial_state, d_tau, mp.delta, &mut states);
    check_norms(&states, grid, 0)?;
    observe(0, &fields, &states);

    for i in 1..grid.n_zeta {
        // Predictor (explicit Euler), then one corrector pass (trapezoid).
        for j in 0..n_tau {
            let (da, db) = maxwell_rhs(&states[j], mp.nu0);
            fields_pred[j] = FieldSample::new(
                fields[j].omega_a + d_zeta * da,
                fields[j].omega_b + d_zeta * db,
            );
        }
        sweep_states(&fields_pred, initial_state, d_tau, mp.delta, &mut states_pred);
        for j in 0..n_tau {
            let (da0, db0) = maxwell_rhs(&states[j], mp.nu0);
            let (da1, db1) = maxwell_rhs(&states_pred[j], mp.nu0);
            fields[j] = FieldSample::new(
                fields[j].omega_a + d_zeta / 2.0 * (da0 + da1),
                fields[j].omega_b + d_zeta / 2.0 * (db0 + db1),
            );
        }
        sweep_states(&fields, initial_state, d_tau, mp.delta, &mut states);
        check_norms(&states, grid, i)?;
        observe(i, &fields, &states);
    }
    Ok(())
}

fn check_norms(states: &[AtomState], grid: &Grid2D, i_zeta: usize) -> Result<()> {
    for (j, st) in states.iter().enumerate() {
        let dev = (st.norm_sqr().sqrt() - 1.0).abs();
        if dev > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift {
                drift: dev,
                zeta: grid.zeta(i_zeta),
                tau: grid.tau(j),
            });
        }
    }
    Ok(())
}

/// Integrates the Maxwell-Bloch system from a tau boundary profile at the
/// entry face and a single initial state at tau_min, returning the full
/// solution grid.
pub fn integrate(
    mp: &MediumParams,
    boundary_fields: &[FieldSample],
    initial_state: &AtomState,
    grid: &Grid2D,
) -> Result<SolutionGrid> {
    let mut fields = vec![FieldSample::new(Complex64::ZERO, Complex64::ZERO); grid.len()];
    let mut states = vec![AtomState::ground(); grid.len()];
    integrate_scan(mp, boundary_fields, initial_state, grid, |i, fs, ss| {
        for j in 0..grid.n_tau {
            let idx = grid.idx(i, j);
            fields[idx] = fs[j];
            states[idx] = ss[j];
        }
    })?;
    Ok(SolutionGrid {
        grid: *grid,
        fields,
        states,
    })
}

/// Central-difference residuals of the candidate solution against the
/// Maxwell-Bloch system, max and L2 over interior nodes.
///
/// Rows whose tau stencil straddles the switch-off instant tau = 0 are
/// skipped: the control profile has a slope discontinuity there, second
/// derivatives of the solution jump, and a central difference across the
/// kink carries an O(h) error that says nothing about whether the
/// candidate solves the system.
pub fn residual(candidate: &SolutionGrid, mp: &MediumParams) -> ResidualReport {
    let grid = &candidate.grid;
    assert!(
        grid.n_zeta >= 3 && grid.n_tau >= 3,
        "residual needs at least 3 nodes per axis"
    );
    let dz = grid.d_zeta();
    let dt = grid.d_tau();
    let mut report = ResidualReport {
        liouville_max: 0.0,
        liouville_l2: 0.0,
        maxwell_a_max: 0.0,
        maxwell_a_l2: 0.0,
        maxwell_b_max: 0.0,
        maxwell_b_l2: 0.0,
        d_zeta: dz,
        d_tau: dt,
    };
    let mut count = 0usize;
    for j in 1..grid.n_tau - 1 {
        if grid.tau(j - 1) < 0.0 && grid.tau(j + 1) > 0.0 {
            continue;
        }
        for i in 1..grid.n_zeta - 1 {
            let psi = candidate.state(i, j);
            let fs = candidate.field(i, j);
            let h = hamiltonian(fs, mp.delta);
            let rhs = schrodinger_rhs(psi, &h);
            let up = candidate.state(i, j + 1);
            let dn = candidate.state(i, j - 1);
            let r_liou = [
                (up.c1 - dn.c1) / (2.0 * dt) - rhs.c1,
                (up.c2 - dn.c2) / (2.0 * dt) - rhs.c2,
                (up.c3 - dn.c3) / (2.0 * dt) - rhs.c3,
            ];
            let r_l = r_liou.iter().map(|c| c.norm()).fold(0.0, f64::max);

            let (sa, sb) = maxwell_rhs(psi, mp.nu0);
            let right = candidate.field(i + 1, j);
            let left = candidate.field(i - 1, j);
            let r_a = ((right.omega_a - left.omega_a) / (2.0 * dz) - sa).norm();
            let r_b = ((right.omega_b - left.omega_b) / (2.0 * dz) - sb).norm();

            report.liouville_max = report.liouville_max.max(r_l);
            report.maxwell_a_max = report.maxwell_a_max.max(r_a);
            report.maxwell_b_max = report.maxwell_b_max.max(r_b);
            report.liouville_l2 += r_l * r_l;
            report.maxwell_a_l2 += r_a * r_a;
            report.maxwell_b_l2 += r_b * r_b;
            count += 1;
        }
    }
    if count > 0 {
        let n = count as f64;
        report.liouville_l2 = (report.liouville_l2 / n).sqrt();
        report.maxwell_a_l2 = (report.maxwell_a_l2 / n).sqrt();
        report.maxwell_b_l2 = (report.maxwell_b_l2 / n).sqrt();
    }
    report
}
