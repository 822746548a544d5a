//! One-dimensional parameter grids: an inclusive `start:stop:step` range or
//! an explicit list of values.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::SweepError;

/// Grid values are rounded to multiples of `1/SCALE` so that `0.1 + 2·0.1` and
/// `0.3` land on the same point.
const SCALE: f64 = 1e12;

/// Largest number of points a single range may expand to.
const MAX_POINTS: usize = 100_000;

fn snap(x: f64) -> f64 {
    // Dividing by an exact power of ten returns the double nearest the
    // decimal value.
    let v = (x * SCALE).round() / SCALE;
    // Avoid emitting -0 for values that round to zero.
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Values of one swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `start, start + step, …` up to and including `stop` (within rounding).
    Range {
        start: f64,
        stop: f64,
        step: f64,
    },
    List(Vec<f64>),
}

impl Grid {
    pub fn single(value: f64) -> Self {
        Grid::List(vec![value])
    }

    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self, SweepError> {
        let g = Grid::Range { start, stop, step };
        g.validate("range")?;
        Ok(g)
    }

    /// Checks the invariants: finite values, a non-empty result and, for
    /// ranges, `step > 0` and `stop >= start`.
    pub fn validate(&self, name: &str) -> Result<(), SweepError> {
        let bad = |reason: String| Err(SweepError::Spec(format!("grid `{name}`: {reason}")));
        match self {
            Grid::Range { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                    return bad("range bounds and step must be finite".into());
                }
                if *step <= 0.0 {
                    return bad(format!("step must be > 0, got {step}"));
                }
                if stop < start {
                    return bad(format!("stop {stop} is below start {start}"));
                }
                if (stop - start) / step > MAX_POINTS as f64 {
                    return bad(format!("range expands to more than {MAX_POINTS} points"));
                }
            }
            Grid::List(v) => {
                if v.is_empty() {
                    return bad("list is empty".into());
                }
                if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                    return bad(format!("non-finite value {x}"));
                }
            }
        }
        Ok(())
    }

    /// Sorted, de-duplicated grid values.
    pub fn values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = match self {
            Grid::Range { start, stop, step } => {
                // Tolerate a stop that misses the lattice by rounding only.
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|k| snap(start + k as f64 * step)).collect()
            }
            Grid::List(v) => v.iter().map(|x| snap(*x)).collect(),
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

impl FromStr for Grid {
    type Err = SweepError;

    /// Accepts `start:stop:step`, a comma-separated list or a single value.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| -> Result<f64, SweepError> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| SweepError::Spec(format!("cannot parse `{}` as a number in grid `{s}`", t.trim())))
        };
        let grid = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(SweepError::Spec(format!(
                    "range `{s}` must have the form start:stop:step"
                )));
            }
            Grid::Range {
                start: parse(parts[0])?,
                stop: parse(parts[1])?,
                step: parse(parts[2])?,
            }
        } else {
            Grid::List(s.split(',').map(parse).collect::<Result<_, _>>()?)
        };
        grid.validate(s)?;
        Ok(grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Range { start, stop, step } => write!(f, "{start}:{stop}:{step}"),
            Grid::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Grid::Range { .. } => serializer.serialize_str(&self.to_string()),
            Grid::List(v) if v.len() == 1 => serializer.serialize_f64(v[0]),
            Grid::List(v) => v.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
            List(Vec<f64>),
        }
        let grid = match Raw::deserialize(deserializer)? {
            Raw::Number(x) => Grid::single(x),
            Raw::Text(s) => return s.parse().map_err(de::Error::custom),
            Raw::List(v) => Grid::List(v),
        };
        grid.validate("grid").map_err(de::Error::custom)?;
        Ok(grid)
    }
}
