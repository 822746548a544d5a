//! Detector kinematics in units of the switching width: trajectories for the
//! inertial and the three uniformly accelerated configurations, the Gaussian
//! switching function and the coordinate time along each worldline.
//!
//! The switching width is the unit of time and length and is never a runtime
//! parameter. Both detectors share one acceleration and one gap.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Trajectory family of the detector pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Both detectors at rest, at x = +L/2 (A) and x = -L/2 (B).
    Inertial,
    /// Both accelerate along +x, keeping proper separation L.
    Parallel,
    /// A accelerates along +x, B along -x; closest approach L at t = 0.
    AntiParallel,
    /// A accelerates along +y from the origin, B along +x from (L, 0, 0).
    Perpendicular,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Inertial,
        Scenario::Parallel,
        Scenario::AntiParallel,
        Scenario::Perpendicular,
    ];

    pub const ACCELERATED: [Scenario; 3] = [Scenario::Parallel, Scenario::AntiParallel, Scenario::Perpendicular];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Inertial => "inertial",
            Scenario::Parallel => "parallel",
            Scenario::AntiParallel => "anti-parallel",
            Scenario::Perpendicular => "perpendicular",
        }
    }

    pub fn is_accelerated(self) -> bool {
        self != Scenario::Inertial
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "inertial" => Ok(Scenario::Inertial),
            "parallel" => Ok(Scenario::Parallel),
            "anti-parallel" | "antiparallel" => Ok(Scenario::AntiParallel),
            "perpendicular" => Ok(Scenario::Perpendicular),
            other => Err(invalid(
                "scenario",
                format!("unknown scenario `{other}` (expected inertial, parallel, anti-parallel or perpendicular)"),
            )),
        }
    }
}

/// Which of the two detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    A,
    B,
}

impl Detector {
    pub fn other(self) -> Detector {
        match self {
            Detector::A => Detector::B,
            Detector::B => Detector::A,
        }
    }
}

/// Coupling and energy gap of a detector; the gap is in units of 1/σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams<T = f64> {
    coupling: T,
    gap: T,
}

impl<T: Real> DetectorParams<T> {
    pub fn new(coupling: T, gap: T) -> Result<Self> {
        if !coupling.is_finite() || coupling < T::zero() {
            return Err(invalid("coupling", format!("must be finite and >= 0, got {coupling}")));
        }
        if !gap.is_finite() {
            return Err(invalid("gap", format!("must be finite, got {gap}")));
        }
        Ok(Self { coupling, gap })
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    pub fn gap(&self) -> T {
        self.gap
    }

    pub fn with_coupling(self, coupling: T) -> Result<Self> {
        Self::new(coupling, self.gap)
    }
}

/// Trajectory family plus acceleration a·σ and separation L/σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig<T = f64> {
    scenario: Scenario,
    acceleration: T,
    separation: T,
}

impl<T: Real> ScenarioConfig<T> {
    /// Validates the configuration. Accelerated families need a > 0 (their
    /// closed forms are singular at a = 0); the inertial family needs a = 0.
    pub fn new(scenario: Scenario, acceleration: T, separation: T) -> Result<Self> {
        if !acceleration.is_finite() || acceleration < T::zero() {
            return Err(invalid(
                "acceleration",
                format!("must be finite and >= 0, got {acceleration}"),
            ));
        }
        if !separation.is_finite() || separation < T::zero() {
            return Err(invalid(
                "separation",
                format!("must be finite and >= 0, got {separation}"),
            ));
        }
        match scenario {
            Scenario::Inertial if acceleration != T::zero() => {
                Err(invalid("acceleration", "the inertial scenario requires a = 0"))
            }
            s if s.is_accelerated() && acceleration == T::zero() => Err(Error::ZeroAcceleration { scenario: s.name() }),
            _ => Ok(Self {
                scenario,
                acceleration,
                separation,
            }),
        }
    }

    pub fn inertial(separation: T) -> Result<Self> {
        Self::new(Scenario::Inertial, T::zero(), separation)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn acceleration(&self) -> T {
        self.acceleration
    }

    pub fn separation(&self) -> T {
        self.separation
    }

    pub fn worldline(&self) -> Worldlines<T> {
        Worldlines {
            scenario: self.scenario,
            acceleration: self.acceleration,
            separation: self.separation,
        }
    }
}

/// Minkowski event in units of σ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpacetimePoint<T = f64> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> SpacetimePoint<T> {
    pub fn new(t: T, x: T, y: T, z: T) -> Self {
        Self { t, x, y, z }
    }

    pub fn at_rest(t: T, x: T) -> Self {
        Self::new(t, x, T::zero(), T::zero())
    }

    /// Euclidean distance between the spatial parts.
    pub fn spatial_distance(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Squared interval `Δt² - |Δx|²`; zero on the light cone.
    pub fn interval(&self, other: &Self) -> T {
        let dt = self.t - other.t;
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dt * dt - dx * dx - dy * dy - dz * dz
    }
}

/// Gaussian switching `exp(-τ²/2)`.
#[inline]
pub fn switching<T: Real>(tau: T) -> T {
    (-(tau * tau) * T::lit(0.5)).exp()
}

/// Position of `detector` at proper time `tau`.
pub fn trajectory_point<T: Real>(cfg: &ScenarioConfig<T>, detector: Detector, tau: T) -> SpacetimePoint<T> {
    cfg.worldline().point(detector, tau)
}

/// Coordinate (Minkowski) time along the worldline; strictly increasing in τ.
pub fn coordinate_time<T: Real>(cfg: &ScenarioConfig<T>, detector: Detector, tau: T) -> T {
    cfg.worldline().time(detector, tau)
}

/// Unvalidated trajectory family that accepts any real acceleration,
/// including zero and negative values.
///
/// The trajectories are analytic in `a`; the series module differentiates
/// through `a = 0`, where the accelerated families reduce to detectors at
/// rest at their `t = 0` positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Worldlines<T = f64> {
    pub scenario: Scenario,
    pub acceleration: T,
    pub separation: T,
}

impl<T: Real> Worldlines<T> {
    pub fn time(&self, detector: Detector, tau: T) -> T {
        let _ = detector;
        match self.scenario {
            Scenario::Inertial => tau,
            _ => hyperbolic_time(self.acceleration, tau),
        }
    }

    pub fn point(&self, detector: Detector, tau: T) -> SpacetimePoint<T> {
        let a = self.acceleration;
        let half = self.separation * T::lit(0.5);
        let zero = T::zero();
        match self.scenario {
            Scenario::Inertial => match detector {
                Detector::A => SpacetimePoint::new(tau, half, zero, zero),
                Detector::B => SpacetimePoint::new(tau, -half, zero, zero),
            },
            Scenario::Parallel => {
                let t = hyperbolic_time(a, tau);
                let d = hyperbolic_displacement(a, tau);
                match detector {
                    Detector::A => SpacetimePoint::new(t, d + half, zero, zero),
                    Detector::B => SpacetimePoint::new(t, d - half, zero, zero),
                }
            }
            Scenario::AntiParallel => {
                let t = hyperbolic_time(a, tau);
                let d = hyperbolic_displacement(a, tau);
                match detector {
                    Detector::A => SpacetimePoint::new(t, d + half, zero, zero),
                    Detector::B => SpacetimePoint::new(t, -d - half, zero, zero),
                }
            }
            Scenario::Perpendicular => {
                let t = hyperbolic_time(a, tau);
                let d = hyperbolic_displacement(a, tau);
                match detector {
                    Detector::A => SpacetimePoint::new(t, zero, d, zero),
                    Detector::B => SpacetimePoint::new(t, d + self.separation, zero, zero),
                }
            }
        }
    }
}

impl<T: Real> Worldlines<T> {
    /// Coordinate-time difference `t_i(tau) - t_j(tau_p)` and spatial
    /// distance between the two events.
    ///
    /// Both are formed from products of hyperbolic functions of the half
    /// sum and half difference of the proper times, so nearby events far
    /// from `τ = 0` do not lose precision to cancellation.
    pub fn offset(&self, i: Detector, tau: T, j: Detector, tau_p: T) -> (T, T) {
        let a = self.acceleration;
        let l = self.separation;
        if self.scenario == Scenario::Inertial {
            let r = if i == j { T::zero() } else { l };
            return (tau - tau_p, r);
        }
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        // t_i - t_j and d(tau) - d(tau_p) for the common hyperbolic parts.
        let (dt, dd) = if a == T::zero() {
            (tau - tau_p, T::zero())
        } else {
            let s = (a * (tau - tau_p) * half).sinh();
            let sum = a * (tau + tau_p) * half;
            (two * sum.cosh() * s / a, two * sum.sinh() * s / a)
        };
        if i == j {
            return (dt, dd.abs());
        }
        // Order the pair as (A, B) for the geometry, then restore the sign.
        let (tau_a, tau_b, sign) = if i == Detector::A {
            (tau, tau_p, T::one())
        } else {
            (tau_p, tau, -T::one())
        };
        let da = hyperbolic_displacement(a, tau_a);
        let db = hyperbolic_displacement(a, tau_b);
        let r = match self.scenario {
            Scenario::Parallel => (sign * dd + l).abs(),
            Scenario::AntiParallel => da + db + l,
            Scenario::Perpendicular => da.hypot(db + l),
            Scenario::Inertial => unreachable!(),
        };
        (dt, r)
    }
}

/// `sinh(aτ)/a`, equal to τ at a = 0.
#[inline]
pub(crate) fn hyperbolic_time<T: Real>(a: T, tau: T) -> T {
    if a == T::zero() {
        tau
    } else {
        (a * tau).sinh() / a
    }
}

/// `(cosh(aτ) - 1)/a = 2 sinh²(aτ/2)/a`, equal to 0 at a = 0.
#[inline]
pub(crate) fn hyperbolic_displacement<T: Real>(a: T, tau: T) -> T {
    if a == T::zero() {
        T::zero()
    } else {
        let s = (a * tau * T::lit(0.5)).sinh();
        T::lit(2.0) * s * s / a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: Scenario, a: f64, l: f64) -> ScenarioConfig {
        ScenarioConfig::new(s, a, l).unwrap()
    }

    #[test]
    fn parallel_a_at_origin_time() {
        let p = trajectory_point(&cfg(Scenario::Parallel, 1.3, 2.0), Detector::A, 0.0);
        assert_eq!(p, SpacetimePoint::new(0.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn antiparallel_b_at_origin_time() {
        let p = trajectory_point(&cfg(Scenario::AntiParallel, 1.0, 3.0), Detector::B, 0.0);
        assert_eq!(p, SpacetimePoint::new(0.0, -1.5, 0.0, 0.0));
    }

    #[test]
    fn perpendicular_a_moves_along_y() {
        let p = trajectory_point(&cfg(Scenario::Perpendicular, 2.0, 1.0), Detector::A, 0.5);
        // sinh(1)/2 and (cosh(1) - 1)/2 from a 30-digit evaluation
        assert!((p.t - 0.587600596821900728441190925298).abs() < 1e-15);
        assert!((p.y - 0.271540317407621889238952810379).abs() < 1e-15);
        assert_eq!((p.x, p.z), (0.0, 0.0));
        let b = trajectory_point(&cfg(Scenario::Perpendicular, 2.0, 1.0), Detector::B, 0.0);
        assert_eq!(b, SpacetimePoint::new(0.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn switching_values() {
        assert_eq!(switching(0.0_f64), 1.0);
        assert!((switching(1.0_f64) - (-0.5_f64).exp()).abs() < 1e-16);
        for tau in [0.1, 0.7, 2.5, 6.0] {
            assert_eq!(switching(tau), switching(-tau));
            assert!(switching(tau) > 0.0 && switching(tau) <= 1.0);
        }
    }

    #[test]
    fn coordinate_time_examples() {
        assert_eq!(
            coordinate_time(&ScenarioConfig::inertial(1.0).unwrap(), Detector::A, 3.0),
            3.0
        );
        let p = cfg(Scenario::Parallel, 1.0, 1.0);
        assert_eq!(coordinate_time(&p, Detector::B, 0.0), 0.0);
        assert!((coordinate_time(&p, Detector::A, 1.0) - 1.1752011936438014568823818506).abs() < 1e-15);
    }

    #[test]
    fn rejects_zero_acceleration_for_accelerated_families() {
        for s in Scenario::ACCELERATED {
            assert!(matches!(
                ScenarioConfig::new(s, 0.0, 1.0),
                Err(Error::ZeroAcceleration { .. })
            ));
        }
        assert!(ScenarioConfig::new(Scenario::Inertial, 0.5, 1.0).is_err());
        assert!(ScenarioConfig::new(Scenario::Parallel, 1.0, -1.0).is_err());
        assert!(ScenarioConfig::new(Scenario::Parallel, f64::NAN, 1.0).is_err());
        assert!(DetectorParams::new(-0.1, 1.0).is_err());
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!("Anti_Parallel".parse::<Scenario>().unwrap(), Scenario::AntiParallel);
        assert!("diagonal".parse::<Scenario>().is_err());
    }

    #[test]
    fn displacement_is_stable_for_small_rapidity() {
        let d = hyperbolic_displacement(1e-9_f64, 1e-3);
        assert!((d - 0.5e-15).abs() < 1e-28);
    }

    #[test]
    fn stable_offset_matches_direct_points() {
        for s in Scenario::ACCELERATED {
            let w = cfg(s, 1.3, 0.8).worldline();
            for (ta, tb) in [(0.4, -0.2), (-1.1, 2.0), (0.0, 0.0), (2.5, 2.4)] {
                for (i, j) in [
                    (Detector::A, Detector::B),
                    (Detector::B, Detector::A),
                    (Detector::A, Detector::A),
                ] {
                    let (dt, r) = w.offset(i, ta, j, tb);
                    let (p, q) = (w.point(i, ta), w.point(j, tb));
                    assert!((dt - (p.t - q.t)).abs() < 1e-12);
                    assert!((r - p.spatial_distance(&q)).abs() < 1e-12);
                }
            }
        }
        let w = ScenarioConfig::inertial(2.0).unwrap().worldline();
        assert_eq!(w.offset(Detector::B, 1.0, Detector::A, 0.5), (0.5, 2.0));
    }

    #[test]
    fn generic_over_f32() {
        let c = ScenarioConfig::<f32>::new(Scenario::AntiParallel, 1.0, 2.0).unwrap();
        let p = trajectory_point(&c, Detector::B, 0.0);
        assert_eq!(p.x, -1.0_f32);
    }
}
