//! Result rows and their CSV representation.
//!
//! A results file starts with `#`-prefixed metadata lines (tool version,
//! the specification as one JSON line, optionally a timestamp and one line
//! per failed grid point), followed by a header and one row per grid point.

use std::io::Write;
use std::path::Path;

use harvest_core::{HarvestResult64, Scenario};
use serde::{Deserialize, Serialize};

use crate::error::SweepError;
use crate::spec::{GridPoint, SweepSpec};

/// Exact column order of a results file.
pub const HEADER: [&str; 17] = [
    "scenario",
    "a_sigma",
    "omega_sigma",
    "L_sigma",
    "lambda",
    "L_AA",
    "L_BB",
    "re_LAB",
    "im_LAB",
    "re_M",
    "im_M",
    "L_plus",
    "L_minus",
    "mutual_info",
    "concurrence",
    "err_est",
    "wall_time_ms",
];

const VERSION_PREFIX: &str = "# harvest-sweep ";
const SPEC_PREFIX: &str = "# spec: ";
const TIMESTAMP_PREFIX: &str = "# timestamp: ";
const FAILURE_PREFIX: &str = "# failed: ";

/// One grid point. Matrix elements and correlations are in units of λ²;
/// `lambda` records the coupling they were computed at.
///
/// A grid point whose computation failed carries NaN in every computed
/// column and an infinite `err_est`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario: Scenario,
    pub a_sigma: f64,
    pub omega_sigma: f64,
    #[serde(rename = "L_sigma")]
    pub l_sigma: f64,
    pub lambda: f64,
    #[serde(rename = "L_AA")]
    pub l_aa: f64,
    #[serde(rename = "L_BB")]
    pub l_bb: f64,
    #[serde(rename = "re_LAB")]
    pub re_lab: f64,
    #[serde(rename = "im_LAB")]
    pub im_lab: f64,
    #[serde(rename = "re_M")]
    pub re_m: f64,
    #[serde(rename = "im_M")]
    pub im_m: f64,
    #[serde(rename = "L_plus")]
    pub l_plus: f64,
    #[serde(rename = "L_minus")]
    pub l_minus: f64,
    pub mutual_info: f64,
    pub concurrence: f64,
    /// Largest absolute error over the elements, `I_AB` and the concurrence.
    pub err_est: f64,
    pub wall_time_ms: f64,
}

impl ResultRow {
    /// Row from a computed result, rescaled to units of λ².
    pub fn from_result(point: &GridPoint, result: &HarvestResult64, wall_time_ms: f64) -> Self {
        let lambda = result.detectors.coupling();
        let lam2 = lambda * lambda;
        let e = &result.elements;
        let err = result
            .max_element_error()
            .max(result.mutual_information_error)
            .max(result.concurrence_error);
        Self {
            scenario: point.scenario,
            a_sigma: point.a,
            omega_sigma: point.omega,
            l_sigma: point.separation,
            lambda,
            l_aa: e.l_aa.value / lam2,
            l_bb: e.l_bb.value / lam2,
            re_lab: e.l_ab.value.re / lam2,
            im_lab: e.l_ab.value.im / lam2,
            re_m: e.m.value.re / lam2,
            im_m: e.m.value.im / lam2,
            l_plus: result.l_plus / lam2,
            l_minus: result.l_minus / lam2,
            mutual_info: result.mutual_information / lam2,
            concurrence: result.concurrence / lam2,
            err_est: err / lam2,
            wall_time_ms,
        }
    }

    pub fn failed(point: &GridPoint, lambda: f64, wall_time_ms: f64) -> Self {
        let nan = f64::NAN;
        Self {
            scenario: point.scenario,
            a_sigma: point.a,
            omega_sigma: point.omega,
            l_sigma: point.separation,
            lambda,
            l_aa: nan,
            l_bb: nan,
            re_lab: nan,
            im_lab: nan,
            re_m: nan,
            im_m: nan,
            l_plus: nan,
            l_minus: nan,
            mutual_info: nan,
            concurrence: nan,
            err_est: f64::INFINITY,
            wall_time_ms,
        }
    }

    pub fn converged(&self) -> bool {
        self.err_est.is_finite()
    }

    /// Same contents bit for bit; unlike `==`, failed rows compare equal.
    pub fn same_bits(&self, other: &Self) -> bool {
        self.scenario == other.scenario
            && self
                .numbers()
                .iter()
                .zip(other.numbers())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    fn numbers(&self) -> [f64; 16] {
        [
            self.a_sigma,
            self.omega_sigma,
            self.l_sigma,
            self.lambda,
            self.l_aa,
            self.l_bb,
            self.re_lab,
            self.im_lab,
            self.re_m,
            self.im_m,
            self.l_plus,
            self.l_minus,
            self.mutual_info,
            self.concurrence,
            self.err_est,
            self.wall_time_ms,
        ]
    }
}

/// A grid point that could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFailure {
    /// Index into [`SweepTable::rows`].
    pub row: usize,
    pub message: String,
}

/// Rows of a sweep in canonical order, with the failures among them.
#[derive(Debug, Clone, Default)]
pub struct SweepTable {
    pub rows: Vec<ResultRow>,
    pub failures: Vec<RowFailure>,
}

/// Metadata read back from a results file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub version: Option<String>,
    pub spec: Option<String>,
    pub timestamp: Option<String>,
    pub failures: Vec<String>,
}

impl SweepTable {
    /// Serializes the table with its metadata lines.
    pub fn to_csv_bytes(&self, spec: &SweepSpec, timestamp: Option<&str>) -> Result<Vec<u8>, SweepError> {
        let mut buf = Vec::new();
        let io = |source| SweepError::Io {
            path: "<buffer>".into(),
            source,
        };
        writeln!(buf, "{VERSION_PREFIX}{}", env!("CARGO_PKG_VERSION")).map_err(io)?;
        writeln!(buf, "{SPEC_PREFIX}{}", spec.echo()).map_err(io)?;
        if let Some(ts) = timestamp {
            writeln!(buf, "{TIMESTAMP_PREFIX}{ts}").map_err(io)?;
        }
        for f in &self.failures {
            let r = &self.rows[f.row];
            let msg = f.message.replace(['\n', '\r'], " ");
            writeln!(
                buf,
                "{FAILURE_PREFIX}{} a_sigma={} omega_sigma={} L_sigma={}: {msg}",
                r.scenario, r.a_sigma, r.omega_sigma, r.l_sigma
            )
            .map_err(io)?;
        }
        {
            let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(&mut buf);
            if self.rows.is_empty() {
                w.write_record(HEADER)?;
            }
            for row in &self.rows {
                w.serialize(row)?;
            }
            w.flush().map_err(io)?;
        }
        Ok(buf)
    }

    pub fn write_csv(&self, path: &Path, spec: &SweepSpec, timestamp: Option<&str>) -> Result<(), SweepError> {
        let bytes = self.to_csv_bytes(spec, timestamp)?;
        std::fs::write(path, bytes).map_err(|source| SweepError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Parses a results file into its metadata and rows.
pub fn read_csv_str(text: &str) -> Result<(Metadata, Vec<ResultRow>), SweepError> {
    let mut meta = Metadata::default();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some(v) = line.strip_prefix(VERSION_PREFIX) {
            meta.version = Some(v.to_string());
        } else if let Some(v) = line.strip_prefix(SPEC_PREFIX) {
            meta.spec = Some(v.to_string());
        } else if let Some(v) = line.strip_prefix(TIMESTAMP_PREFIX) {
            meta.timestamp = Some(v.to_string());
        } else if let Some(v) = line.strip_prefix(FAILURE_PREFIX) {
            meta.failures.push(v.to_string());
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(SweepError::Format(format!(
            "unexpected header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let rows = reader.deserialize().collect::<Result<Vec<ResultRow>, _>>()?;
    Ok((meta, rows))
}

pub fn read_csv(path: &Path) -> Result<(Metadata, Vec<ResultRow>), SweepError> {
    let text = std::fs::read_to_string(path).map_err(|source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn sample_rows() -> Vec<ResultRow> {
        let p = GridPoint {
            scenario: Scenario::AntiParallel,
            a: 0.1,
            omega: 2.0,
            separation: 7.0,
        };
        let mut ok = ResultRow::failed(&p, 0.1, 0.0);
        let vals = [
            1.0 / 3.0,
            1.0 / 3.0,
            1e-17,
            -2.5e-300,
            0.1 + 0.2,
            -0.0,
            7.0,
            1e300,
            5e-324,
            1.0,
            2e-7,
        ];
        for (slot, v) in [
            &mut ok.l_aa,
            &mut ok.l_bb,
            &mut ok.re_lab,
            &mut ok.im_lab,
            &mut ok.re_m,
            &mut ok.im_m,
            &mut ok.l_plus,
            &mut ok.l_minus,
            &mut ok.mutual_info,
            &mut ok.concurrence,
            &mut ok.err_est,
        ]
        .into_iter()
        .zip(vals)
        {
            *slot = v;
        }
        let failed = ResultRow::failed(&GridPoint { a: 4.0, ..p }, 0.1, 12.5);
        vec![ok, failed]
    }

    fn spec() -> SweepSpec {
        SweepSpec::new(
            vec![Scenario::AntiParallel],
            "0.1,4".parse().unwrap(),
            Grid::single(2.0),
            Grid::single(7.0),
        )
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let table = SweepTable {
            rows: sample_rows(),
            failures: vec![RowFailure {
                row: 1,
                message: "did not converge\nsecond line".into(),
            }],
        };
        let bytes = table.to_csv_bytes(&spec(), Some("1700000000")).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let (meta, rows) = read_csv_str(&text).unwrap();
        assert_eq!(rows.len(), 2);
        for (a, b) in rows.iter().zip(&table.rows) {
            assert!(a.same_bits(b), "{a:?} != {b:?}");
        }
        assert!(!rows[1].converged());
        assert_eq!(meta.version.as_deref(), Some(env!("CARGO_PKG_VERSION")));
        assert_eq!(meta.spec, Some(spec().echo()));
        assert_eq!(meta.timestamp.as_deref(), Some("1700000000"));
        assert_eq!(meta.failures.len(), 1);
        assert!(meta.failures[0].ends_with("did not converge second line"));
    }

    #[test]
    fn header_is_exact() {
        let table = SweepTable::default();
        let text = String::from_utf8(table.to_csv_bytes(&spec(), None).unwrap()).unwrap();
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(header, HEADER.join(","));
        assert!(!text.contains("timestamp"));

        let text = String::from_utf8(
            SweepTable {
                rows: sample_rows(),
                failures: vec![],
            }
            .to_csv_bytes(&spec(), None)
            .unwrap(),
        )
        .unwrap();
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(header, HEADER.join(","));
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_csv_str("a,b\n1,2\n").is_err());
    }
}
