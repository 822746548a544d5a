//! Correlation harvesting by pairs of Unruh–DeWitt detectors.
//!
//! Two two-level detectors with Gaussian switching couple to a massless
//! scalar field along inertial or uniformly accelerated worldlines. To
//! second order in the coupling the reduced state of the pair is fixed by
//! four double integrals of the field's Wightman function; from them follow
//! the quantum mutual information and the concurrence the detectors
//! harvest. All quantities are in units of the switching width σ.
//!
//! The kernels are generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix it to `f64`, the
//! precision the regulator extrapolation is tuned for.
//!
//! ```
//! use harvest_core::{harvest, DetectorParams, FieldState, LocalRoute, Numerics, Scenario, ScenarioConfig};
//!
//! let cfg = ScenarioConfig::new(Scenario::Parallel, 1.0, 1.0).unwrap();
//! let det = DetectorParams::new(0.1, 0.5).unwrap();
//! let result = harvest(&cfg, &det, &FieldState::MinkowskiVacuum, &Numerics::default(), LocalRoute::ClosedForm).unwrap();
//! assert!(result.mutual_information > 0.0);
//! ```

// Validation rejects NaN through negated comparisons (`!(x > 0)`), and the
// quadrature tables keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod correlations;
pub mod density;
pub mod error;
pub mod kinematics;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod thermality;
pub mod wightman;

pub use correlations::{concurrence, harvest, l_plus_minus, mutual_information, HarvestResult};
pub use density::{
    assemble_rho, l_element, m_element, matrix_elements, transition_probability_closed, DensityMatrix4, Estimate,
    LocalRoute, MatrixElements, Numerics,
};
pub use error::{Error, Result};
pub use kinematics::{
    coordinate_time, switching, trajectory_point, Detector, DetectorParams, Scenario, ScenarioConfig, SpacetimePoint,
};
pub use quadrature::{extrapolate_epsilon, integrate_1d_semiinfinite, integrate_2d, IntegralResult, QuadratureSpec};
pub use scalar::Real;
pub use thermality::{series_in_temperature, single_detector_equivalence_report, Family, SeriesPolicy};
pub use wightman::{FieldState, RegulatorPolicy};

/// Double-precision aliases.
pub type HarvestResult64 = HarvestResult<f64>;
pub type MatrixElements64 = MatrixElements<f64>;
pub type Numerics64 = Numerics<f64>;
pub type ScenarioConfig64 = ScenarioConfig<f64>;
pub type DetectorParams64 = DetectorParams<f64>;
pub type FieldState64 = FieldState<f64>;
pub type QuadratureSpec64 = QuadratureSpec<f64>;

/// Single-precision aliases for the closed forms and kinematics.
pub type ScenarioConfig32 = ScenarioConfig<f32>;
pub type DetectorParams32 = DetectorParams<f32>;
