//! Concurrent evaluation of a sweep.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use harvest_core::{harvest, DetectorParams, ScenarioConfig};
use rayon::prelude::*;

use crate::error::SweepError;
use crate::spec::{GridPoint, SweepSpec};
use crate::table::{ResultRow, RowFailure, SweepTable};

/// Computes one grid point. Errors are returned, not raised, so that a
/// failed point never affects its neighbours.
pub fn evaluate_point(spec: &SweepSpec, point: &GridPoint) -> (ResultRow, Option<String>) {
    let start = Instant::now();
    let outcome = (|| -> Result<_, harvest_core::Error> {
        let cfg = ScenarioConfig::new(point.scenario, point.a, point.separation)?;
        let det = DetectorParams::new(spec.lambda, point.omega)?;
        let state = spec.field_state().map_err(|e| match e {
            SweepError::Core(c) => c,
            other => harvest_core::Error::Unsupported(other.to_string()),
        })?;
        harvest(&cfg, &det, &state, &spec.numerics, spec.route)
    })();
    let wall = if spec.record_timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    match outcome {
        Ok(result) => (ResultRow::from_result(point, &result, wall), None),
        Err(e) => (ResultRow::failed(point, spec.lambda, wall), Some(e.to_string())),
    }
}

/// Evaluates every grid point of a validated specification on a pool of
/// `spec.resolve_workers()` threads. Rows come back in canonical order
/// whatever the execution order.
pub fn evaluate(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    spec.validate()?;
    let points = spec.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.resolve_workers()?)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let outcomes: Vec<(ResultRow, Option<String>)> =
        pool.install(|| points.par_iter().map(|p| evaluate_point(spec, p)).collect());

    let mut table = SweepTable::default();
    for (row, failure) in outcomes {
        if let Some(message) = failure {
            table.failures.push(RowFailure {
                row: table.rows.len(),
                message,
            });
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Evaluates the sweep and, if `spec.out` is set, writes the CSV.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    let table = evaluate(spec)?;
    if let Some(path) = &spec.out {
        let timestamp = spec.record_timing.then(unix_timestamp);
        table.write_csv(path, spec, timestamp.as_deref())?;
    }
    Ok(table)
}

fn unix_timestamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{secs} (seconds since the Unix epoch)")
}
