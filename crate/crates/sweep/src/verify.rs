//! Verification suites: the two routes to the transition probability, the
//! Unruh identity between an accelerated detector in the vacuum and one at
//! rest in a thermal bath, and the low-temperature series coefficients.

use std::fmt;

use harvest_core::density::l_element;
use harvest_core::thermality::single_detector_equivalence;
use harvest_core::{
    series_in_temperature, transition_probability_closed, Detector, DetectorParams, Family, FieldState, LocalRoute,
    Numerics64, Scenario, ScenarioConfig, SeriesPolicy,
};
use rayon::prelude::*;

/// Accelerations a·σ of the oracle grid.
pub const ORACLE_ACCELERATIONS: [f64; 3] = [0.5, 1.0, 2.0];
/// Gaps Ω·σ of the oracle grid.
pub const ORACLE_GAPS: [f64; 3] = [0.5, 1.0, 2.0];

/// Largest relative difference between the closed form and the regulated
/// double integral for `L_jj`.
pub const DUAL_ROUTE_TOLERANCE: f64 = 1e-4;
/// Largest relative difference between accelerated-vacuum and
/// thermal-at-rest transition probabilities.
pub const THERMAL_IDENTITY_TOLERANCE: f64 = 1e-4;
/// Relative tolerance of the at-rest transition probability against the
/// reference value.
pub const REST_TOLERANCE: f64 = 1e-8;
/// `L_jj` at rest for Ω·σ = 1, λ = 1, from a 30-digit evaluation of
/// `[e^{-1} - √π erfc(1)]/4π`.
pub const REST_REFERENCE: f64 = 7.088_272_232_636_416e-3;
pub const C1_ZERO_TOLERANCE: f64 = 1e-6;
pub const C2_TOLERANCE: f64 = 1e-4;
/// The de Sitter pair must carry a first-order term above this size.
pub const DE_SITTER_C1_FLOOR: f64 = 1e-4;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn error(name: impl Into<String>, e: impl fmt::Display) -> Self {
        Self::new(name, false, format!("error: {e}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

fn grid(accelerations: &[f64], gaps: &[f64]) -> Vec<(f64, f64)> {
    accelerations
        .iter()
        .flat_map(|a| gaps.iter().map(move |g| (*a, *g)))
        .collect()
}

/// `L_jj` from the closed form against the regulated double integral of
/// the pulled-back Wightman function.
pub fn dual_route(accelerations: &[f64], gaps: &[f64], numerics: &Numerics64) -> Check {
    const NAME: &str = "dual-route transition probability";
    let deviations: Result<Vec<(f64, f64, f64)>, harvest_core::Error> = grid(accelerations, gaps)
        .par_iter()
        .map(|&(a, gap)| {
            let closed = transition_probability_closed(a, gap, 1.0)?;
            let cfg = ScenarioConfig::new(Scenario::Parallel, a, 1.0)?;
            let det = DetectorParams::new(1.0, gap)?;
            let quad = l_element(
                Detector::A,
                Detector::A,
                &cfg,
                &det,
                &FieldState::MinkowskiVacuum,
                numerics,
                LocalRoute::Quadrature,
            )?;
            Ok((a, gap, ((quad.value.re - closed) / closed).abs()))
        })
        .collect();
    match deviations {
        Ok(d) => {
            let (a, g, worst) = d
                .iter()
                .copied()
                .fold((0.0, 0.0, 0.0), |m, x| if x.2 > m.2 { x } else { m });
            Check::new(
                NAME,
                worst <= DUAL_ROUTE_TOLERANCE,
                format!(
                    "max relative deviation {worst:.2e} at (a, omega) = ({a}, {g}) over {} points (tolerance {DUAL_ROUTE_TOLERANCE:.0e})",
                    d.len()
                ),
            )
        }
        Err(e) => Check::error(NAME, e),
    }
}

/// Closed-form `L_jj` at rest against the reference value.
pub fn rest_limit() -> Check {
    const NAME: &str = "transition probability at rest";
    match transition_probability_closed(0.0, 1.0, 1.0) {
        Ok(p) => {
            let rel = ((p - REST_REFERENCE) / REST_REFERENCE).abs();
            Check::new(
                NAME,
                rel <= REST_TOLERANCE,
                format!(
                    "{p:.12e} vs reference {REST_REFERENCE:.12e} (relative {rel:.1e}, tolerance {REST_TOLERANCE:.0e})"
                ),
            )
        }
        Err(e) => Check::error(NAME, e),
    }
}

/// Accelerated detector in the vacuum against a detector at rest in the
/// KMS state at β = 2π/a.
pub fn thermal_identity(accelerations: &[f64], gaps: &[f64], numerics: &Numerics64) -> Check {
    const NAME: &str = "accelerated vacuum vs thermal bath";
    let rows: Result<Vec<_>, _> = grid(accelerations, gaps)
        .par_iter()
        .map(|&(a, g)| single_detector_equivalence(a, g, numerics))
        .collect();
    match rows {
        Ok(rows) => {
            let worst = rows.iter().map(|r| r.relative_deviation).fold(0.0, f64::max);
            Check::new(
                NAME,
                worst <= THERMAL_IDENTITY_TOLERANCE,
                format!(
                    "max relative deviation {worst:.2e} over {} points (tolerance {THERMAL_IDENTITY_TOLERANCE:.0e})",
                    rows.len()
                ),
            )
        }
        Err(e) => Check::error(NAME, e),
    }
}

/// Low-temperature coefficients of the thermal, single accelerated and de
/// Sitter families.
pub fn series_coefficients(policy: &SeriesPolicy<f64>) -> Vec<Check> {
    let twelfth = 1.0 / 12.0;
    let mut checks = Vec::new();
    let zero_first_twelfth_second = |name: &str, family: Family<f64>| match series_in_temperature(&family, 2, policy) {
        Ok(c) => {
            let (c1, c2) = (c.get(1).norm(), c.get(2));
            let dev = (c2.re - twelfth).abs().max(c2.im.abs());
            Check::new(
                name,
                c1 < C1_ZERO_TOLERANCE && dev <= C2_TOLERANCE,
                format!("|c1| = {c1:.1e}, c2 = {:.8} (1/12 = {twelfth:.8})", c2.re),
            )
        }
        Err(e) => Check::error(name, e),
    };
    checks.push(zero_first_twelfth_second(
        "thermal series coefficients",
        Family::Thermal { dt: 0.3, r: 0.7 },
    ));
    checks.push(zero_first_twelfth_second(
        "accelerated single-trajectory series coefficients",
        Family::AcceleratedSingle { dtau: 0.8 },
    ));
    let ds = Family::DeSitter {
        dt: 0.5,
        dplus_t: 0.3,
        separation: 1.0,
    };
    checks.push(match series_in_temperature(&ds, 1, policy) {
        Ok(c) => {
            let c1 = c.get(1).norm();
            Check::new(
                "de Sitter first-order coefficient",
                c1 > DE_SITTER_C1_FLOOR,
                format!("|c1| = {c1:.4e} (must exceed {DE_SITTER_C1_FLOOR:.0e})"),
            )
        }
        Err(e) => Check::error("de Sitter first-order coefficient", e),
    });
    checks
}

/// Every suite on the standard grid.
pub fn run_all(numerics: &Numerics64) -> Vec<Check> {
    let mut checks = vec![
        rest_limit(),
        dual_route(&ORACLE_ACCELERATIONS, &ORACLE_GAPS, numerics),
        thermal_identity(&ORACLE_ACCELERATIONS, &ORACLE_GAPS, numerics),
    ];
    checks.extend(series_coefficients(&SeriesPolicy::default()));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        assert!(rest_limit().passed);
        for c in series_coefficients(&SeriesPolicy::default()) {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn single_point_routes_agree() {
        let c = dual_route(&[1.0], &[1.0], &Numerics64::default());
        assert!(c.passed, "{c}");
        let c = thermal_identity(&[1.0], &[0.5], &Numerics64::default());
        assert!(c.passed, "{c}");
        assert!(c.to_string().starts_with("PASS "));
    }

    #[test]
    fn failures_are_reported_not_raised() {
        let c = dual_route(&[-1.0], &[1.0], &Numerics64::default());
        assert!(!c.passed);
        assert!(c.detail.starts_with("error:"));
    }
}
