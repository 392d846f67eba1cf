//! Trajectory export as CSV with header `tau,ct,x,y,z[,theta_norm,omega_norm,accel_norm]`.

use serde::Serialize;

use crate::error::{Result, RigidError};
use crate::metric::Vec4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub theta_norm: f64,
    pub omega_norm: f64,
    pub accel_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub tau: f64,
    pub event: Vec4,
    pub diagnostics: Option<Diagnostics>,
}

#[derive(Serialize)]
struct Row {
    tau: f64,
    ct: f64,
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Serialize)]
struct DiagRow {
    tau: f64,
    ct: f64,
    x: f64,
    y: f64,
    z: f64,
    theta_norm: f64,
    omega_norm: f64,
    accel_norm: f64,
}

/// Diagnostic columns are written iff every sample carries them.
pub fn trajectory_csv(samples: &[TrajectorySample]) -> Result<String> {
    let with_diag = !samples.is_empty() && samples.iter().all(|s| s.diagnostics.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| RigidError::Csv(e.to_string());
    if samples.is_empty() {
        w.write_record(["tau", "ct", "x", "y", "z"]).map_err(err)?;
    }
    for s in samples {
        let e = s.event;
        match (with_diag, s.diagnostics) {
            (true, Some(d)) => w
                .serialize(DiagRow {
                    tau: s.tau,
                    ct: e[0],
                    x: e[1],
                    y: e[2],
                    z: e[3],
                    theta_norm: d.theta_norm,
                    omega_norm: d.omega_norm,
                    accel_norm: d.accel_norm,
                })
                .map_err(err)?,
            _ => w.serialize(Row { tau: s.tau, ct: e[0], x: e[1], y: e[2], z: e[3] }).map_err(err)?,
        }
    }
    let bytes = w.into_inner().map_err(|e| RigidError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| RigidError::Csv(e.to_string()))
}
