//! End-to-end behaviour of the sweep engine: determinism, row isolation,
//! agreement with direct computation and CSV round-trips.

use harvest_core::{harvest, DetectorParams, FieldState, Numerics64, Scenario, ScenarioConfig};
use harvest_sweep::{evaluate, read_csv, run_sweep, Grid, SweepSpec};

fn small_spec() -> SweepSpec {
    SweepSpec::new(
        vec![Scenario::Perpendicular, Scenario::Inertial, Scenario::Parallel],
        "0.5,1".parse().unwrap(),
        Grid::single(0.5),
        "1,3".parse().unwrap(),
    )
}

#[test]
fn rerun_produces_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for (k, workers) in [1, 3].into_iter().enumerate() {
        let path = dir.path().join(format!("run{k}.csv"));
        let spec = SweepSpec {
            out: Some(path.clone()),
            workers: Some(workers),
            ..small_spec()
        };
        run_sweep(&spec).unwrap();
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn rows_are_in_canonical_order() {
    let table = evaluate(&small_spec()).unwrap();
    assert_eq!(table.rows.len(), 2 + 4 + 4);
    let keys: Vec<_> = table
        .rows
        .iter()
        .map(|r| (r.scenario, r.a_sigma, r.omega_sigma, r.l_sigma))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    assert_eq!(keys[0].0, Scenario::Inertial);
    assert!(table.failures.is_empty());
}

#[test]
fn singleton_grid_matches_direct_computation() {
    let spec = SweepSpec::new(
        vec![Scenario::AntiParallel],
        Grid::single(1.0),
        Grid::single(0.5),
        Grid::single(1.0),
    );
    let row = evaluate(&spec).unwrap().rows.remove(0);
    let cfg = ScenarioConfig::new(Scenario::AntiParallel, 1.0, 1.0).unwrap();
    let det = DetectorParams::new(spec.lambda, 0.5).unwrap();
    let direct = harvest(
        &cfg,
        &det,
        &FieldState::MinkowskiVacuum,
        &Numerics64::default(),
        spec.route,
    )
    .unwrap();
    let lam2 = spec.lambda * spec.lambda;
    assert_eq!(row.l_aa, direct.elements.l_aa.value / lam2);
    assert_eq!(row.re_m, direct.elements.m.value.re / lam2);
    assert_eq!(row.mutual_info, direct.mutual_information / lam2);
    assert_eq!(row.concurrence, direct.concurrence / lam2);
    assert_eq!(row.lambda, spec.lambda);
    assert_eq!(row.wall_time_ms, 0.0);
}

#[test]
fn failed_point_does_not_disturb_neighbours() {
    // a = 0 is not an accelerated configuration; the other points proceed.
    let spec = SweepSpec::new(
        vec![Scenario::Parallel],
        "0,1".parse().unwrap(),
        Grid::single(0.5),
        Grid::single(1.0),
    );
    let table = evaluate(&spec).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert_eq!(table.failures.len(), 1);
    assert_eq!(table.failures[0].row, 0);
    assert!(table.failures[0].message.contains("a > 0"));
    assert!(!table.rows[0].converged() && table.rows[0].mutual_info.is_nan());
    assert!(table.rows[1].converged() && table.rows[1].mutual_info > 0.0);

    let alone = SweepSpec {
        a: Grid::single(1.0),
        ..spec
    };
    let single = evaluate(&alone).unwrap().rows.remove(0);
    assert!(single.same_bits(&table.rows[1]));
}

#[test]
fn written_file_reads_back_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let spec = SweepSpec {
        out: Some(path.clone()),
        record_timing: true,
        a: "0,1".parse().unwrap(),
        scenario: vec![Scenario::Parallel],
        ..small_spec()
    };
    let table = run_sweep(&spec).unwrap();
    let (meta, rows) = read_csv(&path).unwrap();
    assert_eq!(rows.len(), table.rows.len());
    for (a, b) in rows.iter().zip(&table.rows) {
        assert!(a.same_bits(b), "{a:?} vs {b:?}");
    }
    assert_eq!(meta.spec, Some(spec.echo()));
    assert!(meta.timestamp.is_some());
    assert_eq!(meta.failures.len(), 2);
    assert!(table
        .rows
        .iter()
        .filter(|r| r.converged())
        .all(|r| r.wall_time_ms > 0.0));
}

#[test]
fn config_file_drives_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("thermal.toml");
    let out = dir.path().join("thermal.csv");
    std::fs::write(
        &cfg,
        format!(
            "scenario = \"inertial\"\nomega = 1\nL = 1\ntemperature = 0.5\nout = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let spec = SweepSpec::from_file(&cfg).unwrap();
    let table = run_sweep(&spec).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert!(table.rows[0].converged());
    assert!(out.exists());
}
