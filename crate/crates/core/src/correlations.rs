//! Quantum mutual information and concurrence of the detector pair, and the
//! [`harvest`] driver that computes them for one configuration.

use num_complex::Complex;

use crate::density::{assemble_rho, matrix_elements, DensityMatrix4, LocalRoute, MatrixElements, Numerics};
use crate::error::{invalid, Error, Result};
use crate::kinematics::{DetectorParams, ScenarioConfig};
use crate::scalar::Real;
use crate::wightman::FieldState;

/// Eigenvalues `(L₊, L₋)` of the `{ge, eg}` block of ρ_AB:
/// `½(L_AA + L_BB ± √((L_AA - L_BB)² + 4|L_AB|²))`.
pub fn l_plus_minus<T: Real>(l_aa: T, l_bb: T, l_ab: Complex<T>) -> (T, T) {
    let (hi, lo) = if l_aa >= l_bb { (l_aa, l_bb) } else { (l_bb, l_aa) };
    let delta = level_shift(hi - lo, l_ab.norm());
    (hi + delta, lo - delta)
}

/// `L₊ - max(L_AA, L_BB)`, formed without cancellation:
/// `2|L_AB|² / (√(D² + 4|L_AB|²) + D)` with `D = |L_AA - L_BB|`.
fn level_shift<T: Real>(d: T, modulus: T) -> T {
    let four_m2 = T::lit(4.0) * modulus * modulus;
    if four_m2 == T::zero() {
        return T::zero();
    }
    let root = (d * d + four_m2).sqrt();
    T::lit(0.5) * four_m2 / (root + d)
}

/// `(1 + u) ln(1 + u) - u` for `u >= -1`, non-negative, with its Taylor
/// series near zero.
fn phi<T: Real>(u: T) -> T {
    if u <= -T::one() {
        return T::one();
    }
    if u.abs() < T::lit(0.05) {
        // u²/2 - u³/6 + u⁴/12 - u⁵/20 + ... = Σ_{k>=2} (-1)^k u^k / (k(k-1))
        let mut sum = T::zero();
        let mut pow = u * u;
        for k in 2..24usize {
            let kf = T::from_usize(k * (k - 1)).unwrap();
            let term = pow / kf;
            sum = if k % 2 == 0 { sum + term } else { sum - term };
            pow = pow * u;
        }
        sum
    } else {
        (T::one() + u) * u.ln_1p() - u
    }
}

/// Mutual information with `L_AA ≥ L_BB ≥ 0` and level shift `0 ≤ δ ≤ L_BB`:
/// `L_AA φ(δ/L_AA) + L_BB φ(-δ/L_BB) + δ ln(L_AA/L_BB)`, a sum of
/// non-negative terms equal to `L₊lnL₊ + L₋lnL₋ - L_AA lnL_AA - L_BB lnL_BB`.
fn mutual_information_ordered<T: Real>(hi: T, lo: T, delta: T) -> T {
    if delta <= T::zero() {
        return T::zero();
    }
    let up = hi * phi(delta / hi);
    let down = lo * phi(-delta / lo);
    let cross = if hi == lo { T::zero() } else { delta * (hi / lo).ln() };
    up + down + cross
}

/// Quantum mutual information `I_AB` of the X-shaped ρ_AB to second order.
///
/// `tolerance` is the absolute error bar of the inputs: negative
/// transition probabilities or a negative `L₋` within it are clamped to
/// zero; beyond it they are reported as an inconsistency.
pub fn mutual_information<T: Real>(l_aa: T, l_bb: T, l_ab: Complex<T>, tolerance: T) -> Result<T> {
    if !l_aa.is_finite() || !l_bb.is_finite() || !l_ab.norm().is_finite() {
        return Err(invalid("elements", "inputs must be finite"));
    }
    if l_aa < -tolerance || l_bb < -tolerance {
        return Err(invalid(
            "transition probability",
            format!("negative beyond tolerance: L_AA = {l_aa:e}, L_BB = {l_bb:e}"),
        ));
    }
    let (l_aa, l_bb) = (l_aa.max(T::zero()), l_bb.max(T::zero()));
    let (hi, lo) = if l_aa >= l_bb { (l_aa, l_bb) } else { (l_bb, l_aa) };
    let delta = level_shift(hi - lo, l_ab.norm());
    let l_minus = lo - delta;
    if l_minus < -tolerance {
        return Err(Error::CauchySchwarz {
            l_minus: l_minus.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    Ok(mutual_information_ordered(hi, lo, delta.min(lo)))
}

/// Mutual information with every inconsistency clamped away; used to
/// probe the error box.
fn mutual_information_clamped<T: Real>(l_aa: T, l_bb: T, modulus: T) -> T {
    let (l_aa, l_bb) = (l_aa.max(T::zero()), l_bb.max(T::zero()));
    let (hi, lo) = if l_aa >= l_bb { (l_aa, l_bb) } else { (l_bb, l_aa) };
    let delta = level_shift(hi - lo, modulus.max(T::zero()));
    mutual_information_ordered(hi, lo, delta.min(lo))
}

/// Concurrence `2 max(0, |M| - √(L_AA L_BB))`.
pub fn concurrence<T: Real>(l_aa: T, l_bb: T, m: Complex<T>) -> T {
    let geometric = (l_aa.max(T::zero()) * l_bb.max(T::zero())).sqrt();
    T::lit(2.0) * (m.norm() - geometric).max(T::zero())
}

/// Correlations harvested at one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct HarvestResult<T = f64> {
    pub scenario: ScenarioConfig<T>,
    pub detectors: DetectorParams<T>,
    pub state: FieldState<T>,
    /// Elements including the `λ²` factor.
    pub elements: MatrixElements<T>,
    pub rho: DensityMatrix4<T>,
    pub l_plus: T,
    pub l_minus: T,
    pub mutual_information: T,
    pub concurrence: T,
    /// Largest change of `I_AB` over the corners of the element error box.
    pub mutual_information_error: T,
    /// Largest change of the concurrence over the same box.
    pub concurrence_error: T,
}

impl<T: Real> HarvestResult<T> {
    /// Absolute error bar on `L₋` implied by the element errors.
    pub fn l_minus_error(&self) -> T {
        l_minus_tolerance(&self.elements)
    }

    /// `L_AA L_BB - |L_AB|²`, non-negative by Cauchy–Schwarz.
    pub fn cauchy_schwarz_margin(&self) -> T {
        self.elements.l_aa.value * self.elements.l_bb.value - self.elements.l_ab.value.norm_sqr()
    }

    /// Error bar of [`Self::cauchy_schwarz_margin`] from the element errors.
    pub fn cauchy_schwarz_error(&self) -> T {
        let e = &self.elements;
        e.l_aa.error * e.l_bb.value.abs()
            + e.l_bb.error * e.l_aa.value.abs()
            + e.l_aa.error * e.l_bb.error
            + T::lit(2.0) * e.l_ab.error * e.l_ab.value.norm()
            + e.l_ab.error * e.l_ab.error
    }

    /// Largest absolute error over the four elements.
    pub fn max_element_error(&self) -> T {
        let e = &self.elements;
        e.l_aa.error.max(e.l_bb.error).max(e.l_ab.error).max(e.m.error)
    }
}

fn l_minus_tolerance<T: Real>(e: &MatrixElements<T>) -> T {
    let scale = e.l_aa.value.abs() + e.l_bb.value.abs();
    e.l_aa.error + e.l_bb.error + e.l_ab.error + T::lit(64.0) * T::epsilon() * scale
}

fn corners<T: Real>(centre: [T; 3], errors: [T; 3]) -> impl Iterator<Item = [T; 3]> {
    (0..8usize).map(move |mask| {
        let mut p = centre;
        for k in 0..3 {
            let s = if mask & (1 << k) == 0 { -T::one() } else { T::one() };
            p[k] = p[k] + s * errors[k];
        }
        p
    })
}

/// Derives `L_±`, `I_AB` and the concurrence from computed elements.
pub fn correlations_from_elements<T: Real>(
    scenario: ScenarioConfig<T>,
    detectors: DetectorParams<T>,
    state: FieldState<T>,
    elements: MatrixElements<T>,
) -> Result<HarvestResult<T>> {
    let rho = assemble_rho(&elements)?;
    let (laa, lbb, lab, m) = (
        elements.l_aa.value,
        elements.l_bb.value,
        elements.l_ab.value,
        elements.m.value,
    );
    let (l_plus, l_minus) = l_plus_minus(laa, lbb, lab);
    let tolerance = l_minus_tolerance(&elements);
    let mi = mutual_information(laa, lbb, lab, tolerance)?;
    let c = concurrence(laa, lbb, m);

    let mi_error = corners(
        [laa, lbb, lab.norm()],
        [elements.l_aa.error, elements.l_bb.error, elements.l_ab.error],
    )
    .map(|p| (mutual_information_clamped(p[0], p[1], p[2]) - mi).abs())
    .fold(T::zero(), T::max);
    let c_error = corners(
        [laa, lbb, m.norm()],
        [elements.l_aa.error, elements.l_bb.error, elements.m.error],
    )
    .map(|p| (concurrence(p[0], p[1], Complex::new(p[2].max(T::zero()), T::zero())) - c).abs())
    .fold(T::zero(), T::max);

    Ok(HarvestResult {
        scenario,
        detectors,
        state,
        elements,
        rho,
        l_plus,
        l_minus,
        mutual_information: mi,
        concurrence: c,
        mutual_information_error: mi_error,
        concurrence_error: c_error,
    })
}

/// Computes the density-matrix elements and the harvested correlations.
pub fn harvest<T: Real>(
    scenario: &ScenarioConfig<T>,
    detectors: &DetectorParams<T>,
    state: &FieldState<T>,
    numerics: &Numerics<T>,
    route: LocalRoute,
) -> Result<HarvestResult<T>> {
    let elements = matrix_elements(scenario, detectors, state, numerics, route)?;
    correlations_from_elements(*scenario, *detectors, *state, elements)
}
