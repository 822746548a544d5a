//! Low-temperature structure of the Wightman families and the
//! single-detector equivalence between uniform acceleration in the vacuum
//! and rest in a thermal bath at the Unruh temperature.

use std::fmt;

use num_complex::Complex;

use crate::density::{l_element, transition_probability_estimate, LocalRoute, Numerics};
use crate::error::{invalid, Error, Result};
use crate::kinematics::{Detector, DetectorParams, Scenario, ScenarioConfig, Worldlines};
use crate::scalar::Real;
use crate::wightman::{minkowski_kernel, wightman_accel_single, wightman_desitter, FieldState, ThermalImageSum};

/// A family of Wightman functions parametrized by a temperature `T`, at a
/// fixed pair of events (or proper times). The expansion is of
/// `W(T) - W(0)`, the departure from the Minkowski vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T = f64> {
    /// KMS state at `β = 1/T`, events at time lag `dt` and distance `r`.
    Thermal { dt: T, r: T },
    /// One uniformly accelerated worldline with `a = 2πT`, proper-time lag
    /// `dtau`.
    AcceleratedSingle { dtau: T },
    /// Detector A at `tau_a` and B at `tau_b` on the two trajectories of
    /// `scenario` with `a = 2πT`; the events move with `T`.
    AcceleratedPair {
        scenario: Scenario,
        separation: T,
        tau_a: T,
        tau_b: T,
    },
    /// Conformal de Sitter vacuum with Gibbons–Hawking temperature `T`.
    DeSitter { dt: T, dplus_t: T, separation: T },
}

impl<T: Real> Family<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Thermal { .. } => "thermal",
            Family::AcceleratedSingle { .. } => "accelerated-single",
            Family::AcceleratedPair { .. } => "accelerated-pair",
            Family::DeSitter { .. } => "de-sitter",
        }
    }

    fn validate(&self) -> Result<()> {
        let coincident = match *self {
            Family::Thermal { dt, r } => dt == T::zero() && r == T::zero(),
            Family::AcceleratedSingle { dtau } => dtau == T::zero(),
            Family::AcceleratedPair {
                scenario, separation, ..
            } => scenario == Scenario::Inertial || separation <= T::zero(),
            Family::DeSitter { dt, separation, .. } => dt == T::zero() && separation == T::zero(),
        };
        if coincident {
            return Err(invalid(
                "family",
                "the point pair must be non-coincident (accelerated pairs need an accelerated scenario and L > 0)",
            ));
        }
        Ok(())
    }

    /// `W(T) - W(0)`, analytically continued to negative `T` where the
    /// family is defined through `a = 2πT` or `πT`.
    pub fn departure(&self, temperature: T) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        match *self {
            Family::Thermal { dt, r } => {
                if temperature == T::zero() {
                    return zero;
                }
                // The image set {nβ} is the same for ±β.
                let beta = temperature.abs().recip();
                ThermalImageSum::new(beta, ThermalImageSum::<T>::DEFAULT_IMAGES, T::one())
                    .map(|s| s.thermal_part(dt, r, T::zero()).value)
                    .unwrap_or(zero)
            }
            Family::AcceleratedSingle { dtau } => {
                if temperature == T::zero() {
                    return zero;
                }
                let a = T::TAU() * temperature;
                wightman_accel_single(a, dtau, T::zero()) - minkowski_kernel(dtau, T::zero(), T::zero())
            }
            Family::AcceleratedPair {
                scenario,
                separation,
                tau_a,
                tau_b,
            } => {
                let kernel = |a: T| {
                    let w = Worldlines {
                        scenario,
                        acceleration: a,
                        separation,
                    };
                    let (dt, r) = w.offset(Detector::A, tau_a, Detector::B, tau_b);
                    minkowski_kernel(dt, r, T::zero())
                };
                kernel(T::TAU() * temperature) - kernel(T::zero())
            }
            Family::DeSitter {
                dt,
                dplus_t,
                separation,
            } => {
                wightman_desitter(dt, dplus_t, separation, temperature, T::zero())
                    - minkowski_kernel(dt, separation, T::zero())
            }
        }
    }
}

/// Step policy of the finite-difference expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy<T = f64> {
    /// Largest step in `T`.
    pub step: T,
    /// Number of step halvings feeding the Richardson table (>= 2).
    pub halvings: usize,
    /// Largest tolerated spread between the two most refined Richardson
    /// estimates, absolute below unit magnitude and relative above.
    pub tolerance: T,
}

impl<T: Real> Default for SeriesPolicy<T> {
    fn default() -> Self {
        Self {
            step: T::lit(0.01),
            halvings: 4,
            tolerance: T::lit(1e-8),
        }
    }
}

/// Coefficients `c_k` of `W(T) - W(0) = Σ c_k T^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients<T = f64> {
    pub coefficients: Vec<Complex<T>>,
    /// Spread between the two most refined Richardson estimates.
    pub spreads: Vec<T>,
}

impl<T: Real> SeriesCoefficients<T> {
    pub fn get(&self, order: usize) -> Complex<T> {
        self.coefficients[order]
    }
}

// One-sided fourth-order stencils on the points 0, h, 2h, …
const FORWARD_FIRST: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25];
const FORWARD_SECOND: [f64; 6] = [15.0 / 4.0, -77.0 / 6.0, 107.0 / 6.0, -13.0, 61.0 / 12.0, -5.0 / 6.0];
const FORWARD_THIRD: [f64; 7] = [-49.0 / 8.0, 29.0, -461.0 / 8.0, 62.0, -307.0 / 8.0, 13.0, -15.0 / 8.0];

/// Finite-difference Taylor coefficients `c_0 .. c_order` (`order <= 3`)
/// of a family around `T = 0`, from stencils at steps `h, h/2, h/4, …`
/// combined by Richardson extrapolation.
///
/// Families with an analytic continuation to `T < 0` use central 5-point
/// stencils. The thermal family is only sampled at `T >= 0`, through
/// one-sided fourth-order stencils, so that no symmetry is imposed on it.
pub fn series_in_temperature<T: Real>(
    family: &Family<T>,
    order: usize,
    policy: &SeriesPolicy<T>,
) -> Result<SeriesCoefficients<T>> {
    family.validate()?;
    if order > 3 {
        return Err(invalid("order", "coefficients up to third order are supported"));
    }
    if policy.halvings < 2 || !(policy.step > T::zero()) || !(policy.tolerance > T::zero()) {
        return Err(invalid(
            "policy",
            "need >= 2 halvings, a positive step and a positive tolerance",
        ));
    }
    let f = |t: T| family.departure(t);
    let f0 = f(T::zero());
    let twelve = T::lit(12.0);
    // (derivative estimate at step h, leading error power of h)
    let one_sided = matches!(family, Family::Thermal { .. });
    let forward = |k: usize, h: T| -> Complex<T> {
        let w: &[f64] = match k {
            1 => &FORWARD_FIRST,
            2 => &FORWARD_SECOND,
            _ => &FORWARD_THIRD,
        };
        let sum = w
            .iter()
            .enumerate()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (j, wj)| {
                acc + f(h * T::from_usize(j).unwrap()) * T::lit(*wj)
            });
        sum / h.powi(k as i32)
    };
    let stencil = |k: usize, h: T| -> Complex<T> {
        if one_sided {
            return forward(k, h);
        }
        let (m2, m1, p1, p2) = (f(-h - h), f(-h), f(h), f(h + h));
        match k {
            1 => (m2 - m1 * T::lit(8.0) + p1 * T::lit(8.0) - p2) / (twelve * h),
            2 => (-m2 + m1 * T::lit(16.0) - f0 * T::lit(30.0) + p1 * T::lit(16.0) - p2) / (twelve * h * h),
            _ => (-m2 + m1 * T::lit(2.0) - p1 * T::lit(2.0) + p2) / (T::lit(2.0) * h * h * h),
        }
    };
    let mut coefficients = vec![f0];
    let mut spreads = vec![T::zero()];
    let mut factorial = T::one();
    for k in 1..=order {
        factorial = factorial * T::from_usize(k).unwrap();
        // Leading error power of h and the spacing of the following ones:
        // central stencils have even error expansions, one-sided ones not.
        let (leading, increment) = match (one_sided, k) {
            (true, _) => (4, 1),
            (false, 3) => (2, 2),
            (false, _) => (4, 2),
        };
        let mut h = policy.step;
        let mut row: Vec<Complex<T>> = Vec::new();
        let mut table: Vec<Vec<Complex<T>>> = Vec::new();
        for _ in 0..policy.halvings {
            row.push(stencil(k, h));
            h = h * T::lit(0.5);
        }
        table.push(row);
        let mut power = leading;
        while table.last().unwrap().len() > 1 {
            let prev = table.last().unwrap();
            let factor = T::lit(2f64.powi(power));
            let next: Vec<Complex<T>> = prev
                .windows(2)
                .map(|w| (w[1] * factor - w[0]) / (factor - T::one()))
                .collect();
            table.push(next);
            power += increment;
        }
        let best = table.last().unwrap()[0];
        let previous = &table[table.len() - 2];
        let spread = (previous[previous.len() - 1] - best).norm() / factorial;
        if spread > policy.tolerance * (best.norm() / factorial).max(T::one()) {
            return Err(Error::StepInstability {
                spread: spread.to_f64_lossy(),
                tolerance: policy.tolerance.to_f64_lossy(),
            });
        }
        coefficients.push(best / factorial);
        spreads.push(spread);
    }
    Ok(SeriesCoefficients { coefficients, spreads })
}

/// One line of the single-detector comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceRow<T = f64> {
    pub acceleration: T,
    pub gap: T,
    /// Accelerated detector in the vacuum, closed form (unit coupling).
    pub accelerated: T,
    /// Detector at rest in the KMS state at `β = 2π/a`, 2D quadrature.
    pub thermal: T,
    /// Error estimate of the thermal value.
    pub thermal_error: T,
    pub relative_deviation: T,
}

/// Comparison of the two single-detector routes over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport<T = f64> {
    pub rows: Vec<EquivalenceRow<T>>,
}

impl<T: Real> EquivalenceReport<T> {
    pub fn max_relative_deviation(&self) -> T {
        self.rows.iter().map(|r| r.relative_deviation).fold(T::zero(), T::max)
    }

    /// CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("a_sigma,omega_sigma,accelerated_vacuum,thermal_at_rest,thermal_error,relative_deviation\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e},{:e}\n",
                r.acceleration, r.gap, r.accelerated, r.thermal, r.thermal_error, r.relative_deviation
            ));
        }
        out
    }
}

impl<T: Real> fmt::Display for EquivalenceReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>8} {:>8} {:>22} {:>22} {:>12}",
            "a_sigma", "omega", "accelerated (vacuum)", "at rest (KMS, 2pi/a)", "rel. dev."
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>8} {:>8} {:>22.12e} {:>22.12e} {:>12.2e}",
                r.acceleration, r.gap, r.accelerated, r.thermal, r.relative_deviation
            )?;
        }
        write!(f, "max relative deviation: {:.2e}", self.max_relative_deviation())
    }
}

/// Transition probability of a uniformly accelerated detector in the vacuum
/// against that of a detector at rest in a thermal bath at the Unruh
/// temperature `a/2π`.
pub fn single_detector_equivalence<T: Real>(
    acceleration: T,
    gap: T,
    numerics: &Numerics<T>,
) -> Result<EquivalenceRow<T>> {
    if !(acceleration > T::zero()) || !acceleration.is_finite() {
        return Err(invalid(
            "acceleration",
            format!("must be finite and > 0, got {acceleration}"),
        ));
    }
    let accelerated = transition_probability_estimate(acceleration, gap, T::one())?.value;
    let state = FieldState::thermal(T::TAU() / acceleration)?;
    let at_rest = ScenarioConfig::inertial(T::zero())?;
    let det = DetectorParams::new(T::one(), gap)?;
    let thermal = l_element(
        Detector::A,
        Detector::A,
        &at_rest,
        &det,
        &state,
        numerics,
        LocalRoute::Quadrature,
    )?;
    Ok(EquivalenceRow {
        acceleration,
        gap,
        accelerated,
        thermal: thermal.value.re,
        thermal_error: thermal.error,
        relative_deviation: ((thermal.value.re - accelerated) / accelerated).abs(),
    })
}

/// [`single_detector_equivalence`] over every `(a, Ω)` pair of the grid.
pub fn single_detector_equivalence_report<T: Real>(
    accelerations: &[T],
    gaps: &[T],
    numerics: &Numerics<T>,
) -> Result<EquivalenceReport<T>> {
    let mut rows = Vec::with_capacity(accelerations.len() * gaps.len());
    for a in accelerations {
        for g in gaps {
            rows.push(single_detector_equivalence(*a, *g, numerics)?);
        }
    }
    Ok(EquivalenceReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWELFTH: f64 = 1.0 / 12.0;

    fn coeffs(family: Family) -> SeriesCoefficients {
        series_in_temperature(&family, 3, &SeriesPolicy::default()).unwrap()
    }

    #[test]
    fn thermal_family_has_no_linear_term_and_a_twelfth() {
        for (dt, r) in [(0.5, 0.0), (0.3, 0.7), (1.2, 0.4), (0.0, 1.0)] {
            let c = coeffs(Family::Thermal { dt, r });
            assert!(c.get(0).norm() == 0.0);
            assert!(c.get(1).norm() < 1e-6, "{:?}", c.get(1));
            assert!((c.get(2) - Complex::new(TWELFTH, 0.0)).norm() < 1e-4, "{:?}", c.get(2));
            assert!(c.get(3).norm() < 1e-6);
        }
    }

    #[test]
    fn accelerated_single_trajectory_matches_thermal_coefficients() {
        let c = coeffs(Family::AcceleratedSingle { dtau: 0.8 });
        assert!(c.get(1).norm() < 1e-6);
        assert!((c.get(2).re - TWELFTH).abs() < 1e-4);
    }

    #[test]
    fn de_sitter_pair_has_first_order_term() {
        let c = coeffs(Family::DeSitter {
            dt: 0.5,
            dplus_t: 0.3,
            separation: 1.0,
        });
        // d/dT of -e^{2πTΔ₊t}L² in the denominator at T = 0:
        // -(1/4π²) · 2πΔ₊t L² / (Δt² - L²)².
        let want = -2.0 * std::f64::consts::PI * 0.3 / (4.0 * std::f64::consts::PI.powi(2) * 0.75f64.powi(2));
        assert!(c.get(1).norm() > 1e-4);
        assert!((c.get(1).re - want).abs() < 1e-7, "{:?} vs {want}", c.get(1));
    }

    #[test]
    fn accelerated_pairs_are_reported_without_targets() {
        for s in Scenario::ACCELERATED {
            let c = coeffs(Family::AcceleratedPair {
                scenario: s,
                separation: 1.0,
                tau_a: 0.4,
                tau_b: -0.3,
            });
            assert!(c.coefficients.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
        }
    }

    #[test]
    fn rejects_coincident_points_and_high_orders() {
        let p = SeriesPolicy::default();
        assert!(series_in_temperature(&Family::Thermal { dt: 0.0, r: 0.0 }, 2, &p).is_err());
        assert!(series_in_temperature(&Family::AcceleratedSingle { dtau: 0.5 }, 4, &p).is_err());
    }

    #[test]
    fn instability_is_flagged() {
        let p = SeriesPolicy {
            step: 0.4,
            halvings: 2,
            tolerance: 1e-14,
        };
        let r = series_in_temperature(&Family::AcceleratedSingle { dtau: 2.0 }, 2, &p);
        assert!(matches!(r, Err(Error::StepInstability { .. })), "{r:?}");
    }

    #[test]
    fn equivalence_at_two_points() {
        let n = Numerics::default();
        for (a, g) in [(1.0, 0.5), (2.0, 2.0)] {
            let row = single_detector_equivalence(a, g, &n).unwrap();
            assert!(row.relative_deviation < 1e-4, "{row:?}");
        }
    }

    #[test]
    fn small_acceleration_approaches_detector_at_rest() {
        let rest: f64 = transition_probability_estimate(0.0, 1.0, 1.0).unwrap().value;
        let row = single_detector_equivalence(0.005_f64, 1.0, &Numerics::default()).unwrap();
        assert!(((row.accelerated - rest) / rest).abs() < 1e-4);
        assert!(((row.thermal - rest) / rest).abs() < 1e-4);
    }

    #[test]
    fn report_formats() {
        let rep = EquivalenceReport {
            rows: vec![EquivalenceRow {
                acceleration: 1.0,
                gap: 0.5,
                accelerated: 0.038,
                thermal: 0.038,
                thermal_error: 1e-9,
                relative_deviation: 0.0,
            }],
        };
        assert!(rep.to_csv().starts_with("a_sigma,omega_sigma,"));
        assert_eq!(rep.to_csv().lines().count(), 2);
        assert!(rep.to_string().contains("max relative deviation"));
    }
}
