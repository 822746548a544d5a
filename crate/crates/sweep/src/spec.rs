//! Sweep specification: the grid over scenario, acceleration, gap and
//! separation, the field state, the coupling and the numerical policy.
//! Serialized as TOML with the same keys as the command-line flags.

use std::path::{Path, PathBuf};

use harvest_core::{FieldState, LocalRoute, Numerics64, Scenario};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::SweepError;
use crate::grid::Grid;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "HARVEST_WORKERS";

/// Coupling used when none is given.
pub const DEFAULT_COUPLING: f64 = 0.1;

/// One sweep definition.
///
/// ```toml
/// scenario = ["parallel", "anti-parallel", "perpendicular"]
/// a = "0.1:4:0.1"
/// omega = 0.5
/// L = 1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Trajectory families; a single name or a list.
    #[serde(deserialize_with = "one_or_many")]
    pub scenario: Vec<Scenario>,
    /// Acceleration a·σ. Ignored (taken as 0) for the inertial scenario.
    #[serde(default = "zero_grid")]
    pub a: Grid,
    /// Energy gap Ω·σ.
    pub omega: Grid,
    /// Separation L/σ.
    #[serde(rename = "L")]
    pub separation: Grid,
    /// Coupling λ. Results are reported in units of λ².
    #[serde(default = "default_coupling")]
    pub lambda: f64,
    /// Temperature T·σ of a KMS field state; absent for the vacuum.
    /// Only inertial detectors are supported in a thermal field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    /// Route for the diagonal elements.
    #[serde(default)]
    pub route: LocalRoute,
    #[serde(default)]
    pub numerics: Numerics64,
    /// CSV destination; the table is only returned when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to `HARVEST_WORKERS`, then to the available
    /// parallelism.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Record per-row wall time and a timestamp. Off by default so that
    /// identical specifications produce identical files.
    #[serde(default)]
    pub record_timing: bool,
}

fn zero_grid() -> Grid {
    Grid::single(0.0)
}

fn default_coupling() -> f64 {
    DEFAULT_COUPLING
}

fn one_or_many<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Scenario>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        One(Scenario),
        Many(Vec<Scenario>),
    }
    Ok(match Raw::deserialize(deserializer)? {
        Raw::One(s) => vec![s],
        Raw::Many(v) => v,
    })
}

/// One point of the expanded grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub scenario: Scenario,
    pub a: f64,
    pub omega: f64,
    pub separation: f64,
}

impl SweepSpec {
    /// A vacuum sweep with default coupling and numerics.
    pub fn new(scenario: Vec<Scenario>, a: Grid, omega: Grid, separation: Grid) -> Self {
        Self {
            scenario,
            a,
            omega,
            separation,
            lambda: DEFAULT_COUPLING,
            temperature: None,
            route: LocalRoute::default(),
            numerics: Numerics64::default(),
            out: None,
            workers: None,
            record_timing: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SweepError> {
        let spec: SweepSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path).map_err(|source| SweepError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("sweep specifications always serialize")
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.scenario.is_empty() {
            return Err(SweepError::Spec("at least one scenario is required".into()));
        }
        self.a.validate("a")?;
        self.omega.validate("omega")?;
        self.separation.validate("L")?;
        if let Some(x) = self
            .a
            .values()
            .iter()
            .chain(&self.separation.values())
            .find(|x| **x < 0.0)
        {
            return Err(SweepError::Spec(format!("a and L must be >= 0, got {x}")));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(SweepError::Spec(format!(
                "lambda must be finite and > 0, got {}",
                self.lambda
            )));
        }
        if let Some(t) = self.temperature {
            FieldState::thermal_at_temperature(t)?;
            if self.scenario.iter().any(|s| s.is_accelerated()) {
                return Err(SweepError::Spec(
                    "a thermal field state is only supported for the inertial scenario".into(),
                ));
            }
        }
        if self.workers == Some(0) {
            return Err(SweepError::Spec("workers must be >= 1".into()));
        }
        self.numerics.validate()?;
        Ok(())
    }

    pub fn field_state(&self) -> Result<FieldState<f64>, SweepError> {
        Ok(match self.temperature {
            Some(t) => FieldState::thermal_at_temperature(t)?,
            None => FieldState::MinkowskiVacuum,
        })
    }

    /// All grid points in canonical order: scenario, then a, Ω and L.
    /// Inertial detectors contribute one point per (Ω, L) at a = 0.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut scenarios = self.scenario.clone();
        scenarios.sort();
        scenarios.dedup();
        let (a, omega, sep) = (self.a.values(), self.omega.values(), self.separation.values());
        let mut out = Vec::new();
        for scenario in scenarios {
            let accelerations = if scenario.is_accelerated() {
                a.clone()
            } else {
                vec![0.0]
            };
            for &a in &accelerations {
                for &omega in &omega {
                    for &separation in &sep {
                        out.push(GridPoint {
                            scenario,
                            a,
                            omega,
                            separation,
                        });
                    }
                }
            }
        }
        out
    }

    /// Worker count: the explicit setting, then `HARVEST_WORKERS`, then the
    /// available parallelism.
    pub fn resolve_workers(&self) -> Result<usize, SweepError> {
        if let Some(w) = self.workers {
            return Ok(w);
        }
        match std::env::var(WORKERS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(SweepError::Spec(format!(
                    "{WORKERS_ENV} must be a positive integer, got `{v}`"
                ))),
            },
            Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        }
    }

    /// The part of the specification that determines the results, as a
    /// single JSON line. Output path and worker count are left out.
    pub fn echo(&self) -> String {
        serde_json::json!({
            "scenario": self.scenario,
            "a": self.a,
            "omega": self.omega,
            "L": self.separation,
            "lambda": self.lambda,
            "temperature": self.temperature,
            "route": self.route,
            "numerics": self.numerics,
            "record_timing": self.record_timing,
        })
        .to_string()
    }
}
