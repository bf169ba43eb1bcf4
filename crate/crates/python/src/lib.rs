//! Python bindings. Snapshots and reports cross the boundary as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use psi_audit::archetype::{canonical_calibration, ArchetypeKind, ArchetypeParams};
use psi_audit::cli::parse_profiles;
use psi_audit::detector::Detector;
use psi_audit::report::{run_audit, AuditConfig, PolicySelection};
use psi_audit::scoring::{compute_psi as psi_of, PsiComponents};
use psi_audit::state::Policy;
use psi_audit::stats::Confusion2x2;
use psi_audit::traversal::{least_effort_traverse, render_event_strip, Budget};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Validates a snapshot document and returns its canonical JSON form.
#[pyfunction]
fn parse_snapshot(document: &str) -> PyResult<String> {
    Ok(psi_audit::parse_snapshot(document).map_err(value_err)?.to_canonical_json())
}

/// Audits a snapshot and returns the report as canonical JSON.
#[pyfunction]
#[pyo3(signature = (document, id = "snapshot", policy = "both", profiles = "default", breakpoint = None))]
fn audit(document: &str, id: &str, policy: &str, profiles: &str, breakpoint: Option<String>) -> PyResult<String> {
    let snapshot = psi_audit::parse_snapshot(document).map_err(value_err)?;
    let config = AuditConfig {
        policy: policy.parse::<PolicySelection>().map_err(value_err)?,
        profiles: parse_profiles(profiles).map_err(value_err)?,
        breakpoint,
        ..AuditConfig::default()
    };
    let report = run_audit(&snapshot, id, None, &config, &Detector::default()).map_err(value_err)?;
    Ok(report.to_canonical_json())
}

/// Event strip of the least-effort route under one policy.
#[pyfunction]
#[pyo3(name = "render_event_strip", signature = (document, policy = "pointer"))]
fn render_event_strip_for(document: &str, policy: &str) -> PyResult<String> {
    let snapshot = psi_audit::parse_snapshot(document).map_err(value_err)?;
    let policy: Policy = policy.parse().map_err(value_err)?;
    let trace = least_effort_traverse(&snapshot, policy, &Detector::default(), Budget::default()).map_err(value_err)?;
    Ok(render_event_strip(&trace))
}

/// PSI of `(distance_vh, time_s, focus_loops, hidden_reveals)` under a profile.
#[pyfunction]
#[pyo3(signature = (components, profile = "default"))]
fn compute_psi(components: (f64, f64, u32, u32), profile: &str) -> PyResult<f64> {
    let (d, t, f, h) = components;
    let p = parse_profiles(profile).map_err(value_err)?.remove(0);
    Ok(psi_of(&PsiComponents::new(d, t, f, h), &p))
}

/// `(alpha, beta, gamma, delta)` of a named or `custom:` profile.
#[pyfunction]
fn named_profile(name: &str) -> PyResult<(f64, f64, f64, f64)> {
    let p = parse_profiles(name).map_err(value_err)?.remove(0);
    Ok((p.alpha, p.beta, p.gamma, p.delta))
}

#[pyfunction]
#[pyo3(signature = (r, alpha = 0.05, power = 0.80))]
fn power_sample_size(r: f64, alpha: f64, power: f64) -> PyResult<u64> {
    psi_audit::stats::power_sample_size(r, alpha, power).map_err(value_err)
}

#[pyfunction]
fn cohen_kappa(true_pos: u64, false_pos: u64, false_neg: u64, true_neg: u64) -> PyResult<f64> {
    psi_audit::stats::cohen_kappa(&Confusion2x2::new(true_pos, false_pos, false_neg, true_neg)).map_err(value_err)
}

/// Snapshot JSON for an archetype. `params` is JSON; omitted means the bundled calibration.
#[pyfunction]
#[pyo3(signature = (kind, params = None, seed = 42))]
fn generate_archetype(kind: &str, params: Option<&str>, seed: u64) -> PyResult<String> {
    let kind: ArchetypeKind = kind.parse().map_err(value_err)?;
    let params: ArchetypeParams = match params {
        Some(text) => serde_json::from_str(text).map_err(value_err)?,
        None => canonical_calibration().remove(&kind).expect("every kind is calibrated"),
    };
    let snap = psi_audit::generate_archetype(kind, &params, seed).map_err(value_err)?;
    Ok(snap.to_canonical_json())
}

#[pymodule]
fn psi_audit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse_snapshot, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(render_event_strip_for, m)?)?;
    m.add_function(wrap_pyfunction!(compute_psi, m)?)?;
    m.add_function(wrap_pyfunction!(named_profile, m)?)?;
    m.add_function(wrap_pyfunction!(power_sample_size, m)?)?;
    m.add_function(wrap_pyfunction!(cohen_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(generate_archetype, m)?)?;
    Ok(())
}
