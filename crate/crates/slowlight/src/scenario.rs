//! Scenario configuration (JSON), grid sampling of the analytic or numeric
//! solution, and emission of CSV/JSON outputs with a hashed manifest.
//!
//! The document schema, all defaults and the byte format of every output
//! are documented in the repository README. Emission is deterministic:
//! the same scenario yields byte-identical files.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{self, SolitonSolution};
use crate::mb::{self, Grid2D, ResidualReport, SolutionGrid};
use crate::params::{ControlField, MediumParams, SolitonParams};

/// Coordinate frame used for the emitted (t, z) columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// t = tau, z = zeta.
    Retarded,
    /// z = z0 + c zeta, t = tau + zeta.
    Lab,
}

impl Frame {
    fn as_str(&self) -> &'static str {
        match self {
            Frame::Retarded => "retarded",
            Frame::Lab => "lab",
        }
    }
}

/// Output families a scenario can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputKind {
    Fields,
    Populations,
    Summary,
    Residuals,
}

impl OutputKind {
    fn as_str(&self) -> &'static str {
        match self {
            OutputKind::Fields => "fields",
            OutputKind::Populations => "populations",
            OutputKind::Summary => "summary",
            OutputKind::Residuals => "residuals",
        }
    }

    fn from_str(s: &str, path: &str) -> Result<Self> {
        match s {
            "fields" => Ok(OutputKind::Fields),
            "populations" => Ok(OutputKind::Populations),
            "summary" => Ok(OutputKind::Summary),
            "residuals" => Ok(OutputKind::Residuals),
            other => Err(Error::Schema {
                path: path.into(),
                message: format!(
                    "unknown output `{other}` (expected fields|populations|summary|residuals)"
                ),
            }),
        }
    }
}

/// Fully validated run description.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub medium: MediumParams,
    pub soliton: SolitonParams,
    pub control: ControlField,
    pub grid: Grid2D,
    pub frame: Frame,
    pub z0: f64,
    pub outputs: BTreeSet<OutputKind>,
}

impl Default for Scenario {
    fn default() -> Self {
        parse_scenario("{}").expect("defaults are valid")
    }
}

// ---------------------------------------------------------------- parsing

fn want_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Schema {
        path: path.into(),
        message: format!("expected an object, got {}", kind_of(v)),
    })
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn check_keys(map: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Schema {
                path: if path.is_empty() {
                    key.clone()
                } else {
                    format!("{path}.{key}")
                },
                message: format!("unknown key (allowed: {})", allowed.join(", ")),
            });
        }
    }
    Ok(())
}

fn num_at(map: &Map<String, Value>, key: &str, path: &str, default: f64) -> Result<f64> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v.as_f64().ok_or_else(|| Error::Schema {
            path: format!("{path}.{key}"),
            message: format!("expected a number, got {}", kind_of(v)),
        }),
    }
}

fn count_at(map: &Map<String, Value>, key: &str, path: &str, default: usize) -> Result<usize> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| Error::Schema {
                path: format!("{path}.{key}"),
                message: format!("expected a non-negative integer, got {v}"),
            }),
    }
}

/// Parses and validates a scenario document, filling every omitted key with
/// the defaults of the reference parameter set (Delta = 0, Omega0 = 2,
/// eps0 = 2.1, nu0 = 10, alpha = 1).
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
        path: "(document)".into(),
        message: e.to_string(),
    })?;
    scenario_from_value(&doc)
}

/// Same as [`parse_scenario`] but starting from an already-parsed document.
pub fn scenario_from_value(doc: &Value) -> Result<Scenario> {
    let root = want_object(doc, "")?;
    check_keys(
        root,
        &["medium", "soliton", "control", "grid", "frame", "z0", "outputs"],
        "",
    )?;

    let medium = {
        let empty = Map::new();
        let m = match root.get("medium") {
            Some(v) => want_object(v, "medium")?,
            None => &empty,
        };
        check_keys(m, &["nu0", "delta", "c"], "medium")?;
        MediumParams::new(
            num_at(m, "nu0", "medium", 10.0)?,
            num_at(m, "delta", "medium", 0.0)?,
            num_at(m, "c", "medium", 1.0)?,
        )?
    };

    let control = {
        let empty = Map::new();
        let m = match root.get("control") {
            Some(v) => want_object(v, "control")?,
            None => &empty,
        };
        check_keys(m, &["omega0", "alpha"], "control")?;
        ControlField::new(
            num_at(m, "omega0", "control", 2.0)?,
            num_at(m, "alpha", "control", 1.0)?,
        )?
    };

    let soliton = {
        let empty = Map::new();
        let m = match root.get("soliton") {
            Some(v) => want_object(v, "soliton")?,
            None => &empty,
        };
        check_keys(m, &["epsilon0", "lambda", "phi0", "theta0"], "soliton")?;
        let phi0 = num_at(m, "phi0", "soliton", -1.0)?;
        let theta0 = num_at(m, "theta0", "soliton", 0.0)?;
        let lambda = match (m.get("epsilon0"), m.get("lambda")) {
            (Some(_), Some(_)) => {
                return Err(Error::Validation(
                    "soliton: give either epsilon0 or lambda, not both".into(),
                ))
            }
            (Some(v), None) => {
                let eps0 = v.as_f64().ok_or_else(|| Error::Schema {
                    path: "soliton.epsilon0".into(),
                    message: format!("expected a number, got {}", kind_of(v)),
                })?;
                Complex64::new(0.0, -eps0)
            }
            (None, Some(v)) => {
                let l = want_object(v, "soliton.lambda")?;
                check_keys(l, &["re", "im"], "soliton.lambda")?;
                Complex64::new(
                    num_at(l, "re", "soliton.lambda", 0.0)?,
                    num_at(l, "im", "soliton.lambda", -2.1)?,
                )
            }
            (None, None) => Complex64::new(0.0, -2.1),
        };
        SolitonParams::new(lambda, phi0, theta0)?
    };

    if let Some(eps0) = soliton.eps0() {
        if eps0 <= control.omega0 {
            return Err(Error::Validation(format!(
                "epsilon0 = {eps0} must exceed the background omega0 = {} (slow-light soliton regime)",
                control.omega0
            )));
        }
    }

    let grid = {
        let empty = Map::new();
        let m = match root.get("grid") {
            Some(v) => want_object(v, "grid")?,
            None => &empty,
        };
        check_keys(
            m,
            &["zeta_min", "zeta_max", "tau_min", "tau_max", "n_zeta", "n_tau"],
            "grid",
        )?;
        Grid2D::new(
            num_at(m, "zeta_min", "grid", 0.0)?,
            num_at(m, "zeta_max", "grid", 3.0)?,
            num_at(m, "tau_min", "grid", -15.0)?,
            num_at(m, "tau_max", "grid", 30.0)?,
            count_at(m, "n_zeta", "grid", 201)?,
            count_at(m, "n_tau", "grid", 2001)?,
        )?
    };

    let frame = match root.get("frame") {
        None => Frame::Lab,
        Some(Value::String(s)) if s == "retarded" => Frame::Retarded,
        Some(Value::String(s)) if s == "lab" => Frame::Lab,
        Some(v) => {
            return Err(Error::Schema {
                path: "frame".into(),
                message: format!("expected \"retarded\" or \"lab\", got {v}"),
            })
        }
    };

    let z0 = match root.get("z0") {
        None => 0.0,
        Some(v) => v.as_f64().ok_or_else(|| Error::Schema {
            path: "z0".into(),
            message: format!("expected a number, got {}", kind_of(v)),
        })?,
    };

    let outputs = match root.get("outputs") {
        None => BTreeSet::from([OutputKind::Fields, OutputKind::Populations]),
        Some(Value::Array(items)) => {
            let mut set = BTreeSet::new();
            for (k, item) in items.iter().enumerate() {
                let path = format!("outputs[{k}]");
                let s = item.as_str().ok_or_else(|| Error::Schema {
                    path: path.clone(),
                    message: format!("expected a string, got {}", kind_of(item)),
                })?;
                set.insert(OutputKind::from_str(s, &path)?);
            }
            set
        }
        // A comma-separated string is accepted so `--set outputs=...`
        // overrides stay terse.
        Some(Value::String(s)) => {
            let mut set = BTreeSet::new();
            for part in s.split(',').filter(|p| !p.is_empty()) {
                set.insert(OutputKind::from_str(part.trim(), "outputs")?);
            }
            set
        }
        Some(v) => {
            return Err(Error::Schema {
                path: "outputs".into(),
                message: format!("expected an array of strings, got {}", kind_of(v)),
            })
        }
    };
    if outputs.is_empty() {
        return Err(Error::Validation("outputs must not be empty".into()));
    }

    Ok(Scenario {
        medium,
        soliton,
        control,
        grid,
        frame,
        z0,
        outputs,
    })
}

impl Scenario {
    /// Canonical resolved document; re-parsing it reproduces this scenario.
    pub fn to_document(&self) -> Value {
        let soliton = if let Some(eps0) = self.soliton.eps0() {
            serde_json::json!({
                "epsilon0": eps0,
                "phi0": self.soliton.phi0,
                "theta0": self.soliton.theta0,
            })
        } else {
            serde_json::json!({
                "lambda": { "re": self.soliton.lambda.re, "im": self.soliton.lambda.im },
                "phi0": self.soliton.phi0,
                "theta0": self.soliton.theta0,
            })
        };
        serde_json::json!({
            "medium": { "nu0": self.medium.nu0, "delta": self.medium.delta, "c": self.medium.c },
            "soliton": soliton,
            "control": { "omega0": self.control.omega0, "alpha": self.control.alpha },
            "grid": {
                "zeta_min": self.grid.zeta_min, "zeta_max": self.grid.zeta_max,
                "tau_min": self.grid.tau_min, "tau_max": self.grid.tau_max,
                "n_zeta": self.grid.n_zeta, "n_tau": self.grid.n_tau,
            },
            "frame": self.frame.as_str(),
            "z0": self.z0,
            "outputs": self.outputs.iter().map(|o| o.as_str()).collect::<Vec<_>>(),
        })
    }
}

/// Applies one dotted-path override (`control.alpha=2`) to a parsed
/// document; intermediate objects are created as needed, last writer wins.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment.split_once('=').ok_or_else(|| {
        Error::Config(format!("override `{assignment}` is not of the form key.path=value"))
    })?;
    if path.is_empty() {
        return Err(Error::Config("override has an empty key path".into()));
    }
    let value: Value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
    let mut cursor = doc;
    let segments: Vec<&str> = path.split('.').collect();
    for (k, seg) in segments.iter().enumerate() {
        let map = match cursor {
            Value::Object(m) => m,
            other => {
                *other = Value::Object(Map::new());
                other.as_object_mut().unwrap()
            }
        };
        if k == segments.len() - 1 {
            map.insert((*seg).to_string(), value);
            return Ok(());
        }
        cursor = map
            .entry((*seg).to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    unreachable!("non-empty segment list")
}

// ---------------------------------------------------------------- sampling

/// Which route produces the solution grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    /// Closed-form evaluation at every node.
    Exact,
    /// March of the Maxwell-Bloch integrator from analytic boundary data.
    Numeric,
}

/// A sampled solution with its derived intensity and population grids
/// (flat tau-outer/zeta-inner layout, matching [`Grid2D::idx`]).
pub struct SampledSolution {
    pub solution: SolutionGrid,
    pub intensity_a: Vec<f64>,
    pub intensity_b: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub p3: Vec<f64>,
}

/// Samples the scenario over its grid from the requested source.
pub fn sample(scn: &Scenario, source: SampleSource) -> Result<SampledSolution> {
    let sol = SolitonSolution::new(scn.medium, scn.soliton, scn.control)?;
    let grid = scn.grid;
    let solution = match source {
        SampleSource::Exact => {
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
            SolutionGrid { grid, fields, states }
        }
        SampleSource::Numeric => {
            let mut boundary = Vec::with_capacity(grid.n_tau);
            for j in 0..grid.n_tau {
                boundary.push(sol.row(grid.tau(j))?.fields(grid.zeta_min));
            }
            let initial = sol.row(grid.tau_min)?.atom_state(grid.zeta_min);
            mb::integrate(&scn.medium, &boundary, &initial, &grid)?
        }
    };

    let n = grid.len();
    let mut out = SampledSolution {
        intensity_a: Vec::with_capacity(n),
        intensity_b: Vec::with_capacity(n),
        p1: Vec::with_capacity(n),
        p2: Vec::with_capacity(n),
        p3: Vec::with_capacity(n),
        solution,
    };
    for idx in 0..n {
        let (ia, ib) = out.solution.fields[idx].intensities();
        let [p1, p2, p3] = out.solution.states[idx].populations();
        out.intensity_a.push(ia);
        out.intensity_b.push(ib);
        out.p1.push(p1);
        out.p2.push(p2);
        out.p3.push(p3);
    }
    Ok(out)
}

// ---------------------------------------------------------------- summary

#[derive(Debug, Clone, Serialize)]
pub struct VelocityEntry {
    pub tau: f64,
    pub v_over_c: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexParts {
    pub re: f64,
    pub im: f64,
}

/// Closed-form figures of merit for one scenario.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    /// Echo of the resolved scenario; re-parses to the same run.
    pub scenario: Value,
    pub w0: ComplexParts,
    /// Stopping distance for the scenario's alpha; absent when alpha = 0.
    pub stopping_distance: Option<f64>,
    /// Instant-switch (alpha -> infinity) limit.
    pub stopping_distance_instant: f64,
    pub memory_width: f64,
    pub group_velocity: Vec<VelocityEntry>,
    /// Present when the scenario requested residual output.
    pub residuals: Option<ResidualReport>,
}

/// Number of rows in the group-velocity table.
const VELOCITY_TABLE_ROWS: usize = 16;

pub fn summarize(scn: &Scenario, residuals: Option<ResidualReport>) -> Result<SummaryReport> {
    let sol = SolitonSolution::new(scn.medium, scn.soliton, scn.control)?;
    let w0 = sol.w0();
    let stopping = if scn.control.alpha > 0.0 {
        Some(exact::stopping_distance(&scn.medium, &scn.soliton, &scn.control)?)
    } else {
        None
    };
    let mut table = Vec::with_capacity(VELOCITY_TABLE_ROWS);
    for k in 0..VELOCITY_TABLE_ROWS {
        let tau = scn.grid.tau_min
            + (scn.grid.tau_max - scn.grid.tau_min) * k as f64 / (VELOCITY_TABLE_ROWS - 1) as f64;
        table.push(VelocityEntry {
            tau,
            v_over_c: sol.row(tau)?.group_velocity(),
        });
    }
    Ok(SummaryReport {
        scenario: scn.to_document(),
        w0: ComplexParts { re: w0.re, im: w0.im },
        stopping_distance: stopping,
        stopping_distance_instant: exact::stopping_distance_instant(
            &scn.medium,
            &scn.soliton,
            &scn.control,
        )?,
        memory_width: exact::memory_width(&scn.medium, &scn.soliton),
        group_velocity: table,
        residuals,
    })
}

// ---------------------------------------------------------------- emission

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Listing of every file written by one emission, with content hashes.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

fn fmt_float(v: f64) -> String {
    format!("{v:.9e}")
}

fn grid_csv(scn: &Scenario, values: &[f64]) -> String {
    let grid = &scn.grid;
    let mut out = String::with_capacity(values.len() * 40 + 16);
    out.push_str("t,z,value\n");
    for j in 0..grid.n_tau {
        let tau = grid.tau(j);
        for i in 0..grid.n_zeta {
            let zeta = grid.zeta(i);
            let (t, z) = match scn.frame {
                Frame::Retarded => (tau, zeta),
                Frame::Lab => (tau + zeta, scn.z0 + scn.medium.c * zeta),
            };
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_float(t),
                fmt_float(z),
                fmt_float(values[grid.idx(i, j)])
            );
        }
    }
    out
}

fn write_file(dest: &Path, name: &str, bytes: &[u8], manifest: &mut Vec<ManifestEntry>) -> Result<()> {
    let path = dest.join(name);
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    manifest.push(ManifestEntry {
        name: name.to_string(),
        bytes: bytes.len() as u64,
        sha256: format!("{:x}", hasher.finalize()),
    });
    Ok(())
}

/// Writes the requested output files into `destination` (created if
/// missing) and finally a `manifest.json` naming each file with its size
/// and SHA-256. Returns the manifest.
pub fn emit_outputs(scn: &Scenario, data: &SampledSolution, destination: &Path) -> Result<Manifest> {
    fs::create_dir_all(destination).map_err(|e| Error::io(destination, e))?;
    let mut entries = Vec::new();

    let residuals = if scn.outputs.contains(&OutputKind::Residuals) {
        Some(mb::residual(&data.solution, &scn.medium))
    } else {
        None
    };

    for kind in &scn.outputs {
        match kind {
            OutputKind::Fields => {
                write_file(destination, "intensity_a.csv", grid_csv(scn, &data.intensity_a).as_bytes(), &mut entries)?;
                write_file(destination, "intensity_b.csv", grid_csv(scn, &data.intensity_b).as_bytes(), &mut entries)?;
            }
            OutputKind::Populations => {
                write_file(destination, "population_1.csv", grid_csv(scn, &data.p1).as_bytes(), &mut entries)?;
                write_file(destination, "population_2.csv", grid_csv(scn, &data.p2).as_bytes(), &mut entries)?;
                write_file(destination, "population_3.csv", grid_csv(scn, &data.p3).as_bytes(), &mut entries)?;
            }
            OutputKind::Summary => {
                let report = summarize(scn, residuals)?;
                let body = serde_json::to_string_pretty(&report).expect("serializable report");
                write_file(destination, "summary.json", body.as_bytes(), &mut entries)?;
            }
            OutputKind::Residuals => {
                let report = residuals.expect("computed above");
                let body = serde_json::to_string_pretty(&report).expect("serializable report");
                write_file(destination, "residuals.json", body.as_bytes(), &mut entries)?;
            }
        }
    }

    entries.sort_by(|a, b| a.name.cmp(&b.name));
    let manifest = Manifest { files: entries };
    let body = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
    let path = destination.join("manifest.json");
    fs::write(&path, body.as_bytes()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

/// Convenience wrapper for emitting a summary-only report (the `summary`
/// command): ignores the scenario's output set.
pub fn emit_summary(scn: &Scenario, destination: &Path) -> Result<Manifest> {
    fs::create_dir_all(destination).map_err(|e| Error::io(destination, e))?;
    let mut entries = Vec::new();
    let report = summarize(scn, None)?;
    let body = serde_json::to_string_pretty(&report).expect("serializable report");
    write_file(destination, "summary.json", body.as_bytes(), &mut entries)?;
    let manifest = Manifest { files: entries };
    let body = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
    let path = destination.join("manifest.json");
    fs::write(&path, body.as_bytes()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
