//! Second-order reduced density matrix of the detector pair.
//!
//! The elements `L_ij` and `M` are regulated double integrals over the two
//! proper times. Each is integrated at every regulator level of a
//! [`RegulatorPolicy`] and the integrated values are extrapolated to zero
//! regulator. All elements are computed at unit coupling and scaled by `λ²`
//! afterwards, so the coupling dependence is exact.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kinematics::{switching, Detector, DetectorParams, Scenario, ScenarioConfig, Worldlines};
use crate::quadrature::{extrapolate_epsilon, integrate_1d_semiinfinite, integrate_2d, Integrand2d, QuadratureSpec};
use crate::scalar::Real;
use crate::special::erfc;
use crate::wightman::{minkowski_kernel, wightman_accel_single, FieldState, RegulatorPolicy, ThermalImageSum};

/// Numerical policy shared by every element computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct Numerics<T = f64> {
    /// Tolerances of the 2D integrals at each regulator level.
    pub quadrature: QuadratureSpec<T>,
    pub regulator: RegulatorPolicy<T>,
    /// Explicit image pairs of the thermal image sum.
    pub images: usize,
    /// Largest tolerated truncation bound of the thermal image sum.
    pub image_tolerance: T,
    /// Largest tolerated spread between the two highest extrapolation
    /// orders, relative to the extrapolated value.
    pub extrapolation_tolerance: T,
}

impl<T: Real> Default for Numerics<T> {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::default_2d(),
            regulator: RegulatorPolicy::default(),
            images: ThermalImageSum::<T>::DEFAULT_IMAGES,
            image_tolerance: T::lit(1e-12),
            extrapolation_tolerance: T::lit(1e-2),
        }
    }
}

impl<T: Real> Numerics<T> {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        self.regulator.validate()?;
        if self.images < 1 {
            return Err(invalid("images", "at least one image pair is required"));
        }
        if !(self.image_tolerance > T::zero()) || !(self.extrapolation_tolerance > T::zero()) {
            return Err(invalid("tolerance", "tolerances must be > 0"));
        }
        Ok(())
    }
}

/// How the diagonal elements `L_jj` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalRoute {
    /// Closed form where one exists (vacuum, any trajectory), the 2D
    /// integral otherwise.
    #[default]
    ClosedForm,
    /// Always the regulated 2D integral.
    Quadrature,
}

/// A computed value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V, T = f64> {
    pub value: V,
    pub error: T,
}

impl<V, T: Real> Estimate<V, T> {
    fn scale(self, factor: T) -> Self
    where
        V: std::ops::Mul<T, Output = V>,
    {
        Estimate {
            value: self.value * factor,
            error: self.error * factor.abs(),
        }
    }
}

/// The four independent second-order elements of ρ_AB, including the `λ²`
/// factor, with absolute error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElements<T = f64> {
    pub l_aa: Estimate<T, T>,
    pub l_bb: Estimate<T, T>,
    pub l_ab: Estimate<Complex<T>, T>,
    pub m: Estimate<Complex<T>, T>,
}

impl<T: Real> MatrixElements<T> {
    pub fn zero() -> Self {
        let z = Estimate {
            value: T::zero(),
            error: T::zero(),
        };
        let c = Estimate {
            value: Complex::new(T::zero(), T::zero()),
            error: T::zero(),
        };
        Self {
            l_aa: z,
            l_bb: z,
            l_ab: c,
            m: c,
        }
    }

    /// Multiplies every element (and error) by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            l_aa: self.l_aa.scale(factor),
            l_bb: self.l_bb.scale(factor),
            l_ab: self.l_ab.scale(factor),
            m: self.m.scale(factor),
        }
    }
}

/// 4×4 density matrix in the basis `{gg, ge, eg, ee}` (detector A first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4<T = f64> {
    entries: [[Complex<T>; 4]; 4],
}

impl<T: Real> DensityMatrix4<T> {
    pub fn entries(&self) -> &[[Complex<T>; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row][col]
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + self.entries[k][k])
    }

    /// Exact (bitwise) Hermiticity.
    pub fn is_hermitian(&self) -> bool {
        (0..4).all(|r| (0..4).all(|c| self.entries[r][c] == self.entries[c][r].conj()))
    }

    /// All entries off the diagonal and anti-diagonal are exactly zero.
    pub fn is_x_shaped(&self) -> bool {
        let zero = Complex::new(T::zero(), T::zero());
        (0..4).all(|r| (0..4).all(|c| r == c || r + c == 3 || self.entries[r][c] == zero))
    }

    /// Eigenvalues `(larger, smaller)` of the `{ge, eg}` block.
    pub fn inner_block_eigenvalues(&self) -> (T, T) {
        hermitian_2x2_eigenvalues(self.entries[1][1].re, self.entries[2][2].re, self.entries[2][1])
    }

    /// Eigenvalues `(larger, smaller)` of the `{gg, ee}` block.
    pub fn outer_block_eigenvalues(&self) -> (T, T) {
        hermitian_2x2_eigenvalues(self.entries[0][0].re, self.entries[3][3].re, self.entries[3][0])
    }

    /// All four eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [T; 4] {
        let (a, b) = self.inner_block_eigenvalues();
        let (c, d) = self.outer_block_eigenvalues();
        let mut ev = [a, b, c, d];
        ev.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }
}

fn hermitian_2x2_eigenvalues<T: Real>(p: T, q: T, off: Complex<T>) -> (T, T) {
    let mean = (p + q) * T::lit(0.5);
    let half_gap = ((p - q) * (p - q) * T::lit(0.25) + off.norm_sqr()).sqrt();
    (mean + half_gap, mean - half_gap)
}

/// Assembles the X-shaped ρ_AB from its second-order elements.
pub fn assemble_rho<T: Real>(e: &MatrixElements<T>) -> Result<DensityMatrix4<T>> {
    let (laa, lbb, lab, m) = (e.l_aa.value, e.l_bb.value, e.l_ab.value, e.m.value);
    let finite = laa.is_finite() && lbb.is_finite() && lab.re.is_finite() && lab.im.is_finite();
    if !finite || !m.re.is_finite() || !m.im.is_finite() {
        return Err(invalid("elements", "density-matrix elements must be finite"));
    }
    let total = laa + lbb;
    if total >= T::one() {
        return Err(Error::NonPerturbative {
            total: total.to_f64_lossy(),
        });
    }
    let z = Complex::new(T::zero(), T::zero());
    let re = |v: T| Complex::new(v, T::zero());
    Ok(DensityMatrix4 {
        entries: [
            [re(T::one() - laa - lbb), z, z, m.conj()],
            [z, re(lbb), lab.conj(), z],
            [z, lab, re(laa), z],
            [m, z, z, z],
        ],
    })
}

/// Transition probability of a detector with Gaussian switching on a
/// uniformly accelerated worldline in the vacuum (`a = 0`: at rest).
///
/// `λ²/4π [e^{-Ω²} - √π Ω erfc Ω]` plus, for `a > 0`,
/// `λ² a/(4π^{3/2}) ∫₀^∞ cos(2Ωs/a) e^{-s²/a²} (1/s² - 1/sinh²s) ds`.
pub fn transition_probability_closed<T: Real>(acceleration: T, gap: T, coupling: T) -> Result<T> {
    Ok(transition_probability_estimate(acceleration, gap, coupling)?.value)
}

/// [`transition_probability_closed`] with the error estimate of its
/// acceleration integral.
pub fn transition_probability_estimate<T: Real>(acceleration: T, gap: T, coupling: T) -> Result<Estimate<T, T>> {
    if !(acceleration >= T::zero()) || !acceleration.is_finite() {
        return Err(invalid(
            "acceleration",
            format!("must be finite and >= 0, got {acceleration}"),
        ));
    }
    if !gap.is_finite() || !coupling.is_finite() {
        return Err(invalid("gap", "gap and coupling must be finite"));
    }
    let pi = T::PI();
    let lam2 = coupling * coupling;
    let rest = (-gap * gap).exp() - pi.sqrt() * gap * erfc(gap);
    let rest = rest / (T::lit(4.0) * pi);
    if acceleration == T::zero() {
        return Ok(Estimate {
            value: lam2 * rest,
            error: T::zero(),
        });
    }
    let beta = T::lit(2.0) * gap / acceleration;
    let alpha = (acceleration * acceleration).recip();
    let g = |s: T| -> T { (beta * s).cos() * (-alpha * s * s).exp() * inverse_square_difference(s) };
    let spec = QuadratureSpec::default_1d().with_tolerances(T::lit(1e-13), T::lit(1e-11));
    let res = integrate_1d_semiinfinite(g, &spec);
    if !res.converged {
        return Err(Error::Integration(format!(
            "transition-probability integral at a = {acceleration}, gap = {gap}: error estimate {:e}",
            res.error.to_f64_lossy()
        )));
    }
    let pref = acceleration / (T::lit(4.0) * pi * pi.sqrt());
    Ok(Estimate {
        value: lam2 * (rest + pref * res.value),
        error: lam2 * pref * res.error,
    })
}

/// `1/s² - 1/sinh²s`, from its Taylor series near the origin.
fn inverse_square_difference<T: Real>(s: T) -> T {
    if s.abs() < T::lit(0.1) {
        let s2 = s * s;
        let c = [1.0 / 3.0, -1.0 / 15.0, 2.0 / 189.0, -1.0 / 675.0, 2.0 / 10395.0];
        c.iter().rev().fold(T::zero(), |acc, ck| acc * s2 + T::lit(*ck))
    } else {
        let sh = s.sinh();
        (s * s).recip() - (sh * sh).recip()
    }
}

/// Region of the (inner, outer) plane an integrand lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Domain {
    Square,
    /// `inner >= outer`.
    Upper,
    /// `inner <= outer`.
    Lower,
}

/// Regulated double-integral integrand with its near-singular structure:
/// the diagonal and the light-cone crossings of the two arguments.
struct PairIntegrand<F, G> {
    f: F,
    interval: Option<G>,
    diagonal: bool,
    domain: Domain,
}

const RIDGE_SCAN: usize = 256;

impl<T, F, G> Integrand2d<T> for PairIntegrand<F, G>
where
    T: Real,
    F: Fn(T, T) -> Complex<T>,
    G: Fn(T, T) -> T,
{
    fn eval(&self, inner: T, outer: T) -> Complex<T> {
        (self.f)(inner, outer)
    }

    fn inner_limits(&self, outer: T, half_width: T) -> (T, T) {
        match self.domain {
            Domain::Square => (-half_width, half_width),
            Domain::Upper => (outer, half_width),
            Domain::Lower => (-half_width, outer),
        }
    }

    fn ridges(&self, outer: T, lo: T, hi: T, out: &mut Vec<T>) {
        if self.diagonal && outer > lo && outer < hi {
            out.push(outer);
        }
        let Some(interval) = &self.interval else { return };
        let step = (hi - lo) / T::from_usize(RIDGE_SCAN).unwrap();
        let mut x0 = lo;
        let mut s0 = interval(x0, outer);
        for k in 1..=RIDGE_SCAN {
            let x1 = if k == RIDGE_SCAN {
                hi
            } else {
                lo + step * T::from_usize(k).unwrap()
            };
            let s1 = interval(x1, outer);
            if s0 == T::zero() {
                out.push(x0);
            } else if s0 * s1 < T::zero() {
                out.push(bisect_root(interval, outer, x0, x1, s0));
            }
            x0 = x1;
            s0 = s1;
        }
    }
}

fn bisect_root<T: Real, G: Fn(T, T) -> T>(g: &G, outer: T, mut a: T, mut b: T, sign_a: T) -> T {
    for _ in 0..80 {
        let mid = (a + b) * T::lit(0.5);
        if !(mid > a && mid < b) {
            break;
        }
        if g(mid, outer) * sign_a > T::zero() {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a + b) * T::lit(0.5)
}

/// Integrates a regulated family at every regulator level and extrapolates
/// the integrals to zero regulator.
fn integrate_regulated<T, B, I>(what: &'static str, numerics: &Numerics<T>, build: B) -> Result<Estimate<Complex<T>, T>>
where
    T: Real,
    B: Fn(T) -> I,
    I: Integrand2d<T>,
{
    let eps = numerics.regulator.epsilons();
    let mut values = Vec::with_capacity(eps.len());
    let mut errors = Vec::with_capacity(eps.len());
    for (level, e) in eps.iter().enumerate() {
        let res = integrate_2d(&build(*e), &numerics.quadrature);
        if !res.converged {
            return Err(Error::NonConvergence {
                what,
                level,
                eps: e.to_f64_lossy(),
                error: res.error.to_f64_lossy(),
            });
        }
        values.push((*e, res.value));
        errors.push(res.error);
    }
    let ex = extrapolate_epsilon(&values, numerics.regulator.order)?;
    let floor = T::lit(100.0) * numerics.quadrature.abs_tol;
    ex.clone()
        .check((numerics.extrapolation_tolerance * ex.value.norm()).max(floor))?;
    Ok(Estimate {
        value: ex.value,
        error: ex.propagated_error(&errors),
    })
}

fn unsupported<T: Real>(state: &FieldState<T>, cfg: &ScenarioConfig<T>) -> Error {
    Error::Unsupported(format!(
        "{} field state with the {} scenario (the thermal state is available for inertial detectors only, \
         de Sitter has no detector-pair model)",
        state.name(),
        cfg.scenario()
    ))
}

fn thermal_sum<T: Real>(beta: T, cfg: &ScenarioConfig<T>, numerics: &Numerics<T>) -> Result<ThermalImageSum<T>> {
    let sum = ThermalImageSum::new(beta, numerics.images, numerics.image_tolerance)?;
    // The tail bound is largest at vanishing time separation.
    for r in [T::zero(), cfg.separation()] {
        sum.kernel(T::zero(), r, numerics.regulator.eps0)?;
    }
    Ok(sum)
}

/// `L_ij` at unit coupling from the regulated double integral
/// `∬ χ(τ)χ(τ') e^{-iΩ(τ-τ')} W(x_i(τ), x_j(τ'))`.
fn l_quadrature<T: Real>(
    i: Detector,
    j: Detector,
    cfg: &ScenarioConfig<T>,
    gap: T,
    state: &FieldState<T>,
    numerics: &Numerics<T>,
) -> Result<Estimate<Complex<T>, T>> {
    let world = cfg.worldline();
    let a = cfg.acceleration();
    let phase = move |tau: T, tau_p: T| -> Complex<T> {
        Complex::from_polar(switching(tau) * switching(tau_p), -gap * (tau - tau_p))
    };
    let what = if i == j { "L_jj" } else { "L_AB" };
    let interval = move |tau: T, tau_p: T| {
        let (dt, r) = world.offset(i, tau, j, tau_p);
        dt * dt - r * r
    };
    let same = i == j;
    match (state, cfg.scenario()) {
        (FieldState::MinkowskiVacuum, scenario) => {
            if same && scenario != Scenario::Inertial {
                // Proper-time regulator on the worldline: sinh(aΔτ/2 - i a ε/2).
                integrate_regulated(what, numerics, |eps| PairIntegrand {
                    f: move |tau: T, tau_p: T| {
                        phase(tau, tau_p) * wightman_accel_single(a, tau - tau_p, a * eps * T::lit(0.5))
                    },
                    interval: None::<fn(T, T) -> T>,
                    diagonal: true,
                    domain: Domain::Square,
                })
            } else {
                integrate_regulated(what, numerics, |eps| PairIntegrand {
                    f: move |tau: T, tau_p: T| {
                        let (dt, r) = world.offset(i, tau, j, tau_p);
                        phase(tau, tau_p) * minkowski_kernel(dt, r, eps)
                    },
                    interval: if same { None } else { Some(interval) },
                    diagonal: same,
                    domain: Domain::Square,
                })
            }
        }
        (FieldState::ThermalKms { beta }, Scenario::Inertial) => {
            let sum = thermal_sum(*beta, cfg, numerics)?;
            integrate_regulated(what, numerics, |eps| PairIntegrand {
                f: move |tau: T, tau_p: T| {
                    let (dt, r) = world.offset(i, tau, j, tau_p);
                    phase(tau, tau_p) * sum.evaluate(dt, r, eps).value
                },
                interval: if same { None } else { Some(interval) },
                diagonal: same,
                domain: Domain::Square,
            })
        }
        _ => Err(unsupported(state, cfg)),
    }
}

/// `M` at unit coupling: `-∬ χχ e^{iΩ(τ_A+τ_B)} W_ordered`, split along
/// `τ_A = τ_B` into the two time-ordered triangles.
fn m_quadrature<T: Real>(
    cfg: &ScenarioConfig<T>,
    gap: T,
    state: &FieldState<T>,
    numerics: &Numerics<T>,
) -> Result<Estimate<Complex<T>, T>> {
    let world: Worldlines<T> = cfg.worldline();
    let phase = move |tau_a: T, tau_b: T| -> Complex<T> {
        Complex::from_polar(switching(tau_a) * switching(tau_b), gap * (tau_a + tau_b))
    };
    let interval = move |tau_a: T, tau_b: T| {
        let (dt, r) = world.offset(Detector::A, tau_a, Detector::B, tau_b);
        dt * dt - r * r
    };
    // Later event first: W(x_A, x_B) when t_A > t_B, W(x_B, x_A) otherwise.
    // Both are the vacuum or thermal kernel at the non-negative time lag.
    let kernel: Box<dyn Fn(T, T, T) -> Complex<T>> = match (state, cfg.scenario()) {
        (FieldState::MinkowskiVacuum, _) => Box::new(minkowski_kernel),
        (FieldState::ThermalKms { beta }, Scenario::Inertial) => {
            let sum = thermal_sum(*beta, cfg, numerics)?;
            Box::new(move |dt: T, r: T, eps: T| sum.evaluate(dt, r, eps).value)
        }
        _ => return Err(unsupported(state, cfg)),
    };
    let kernel = &*kernel;
    let mut total = Estimate {
        value: Complex::new(T::zero(), T::zero()),
        error: T::zero(),
    };
    for (what, domain) in [("M (t_A > t_B)", Domain::Upper), ("M (t_B > t_A)", Domain::Lower)] {
        let part = integrate_regulated(what, numerics, |eps| PairIntegrand {
            f: move |tau_a: T, tau_b: T| {
                let (dt, r) = world.offset(Detector::A, tau_a, Detector::B, tau_b);
                let lag = if domain == Domain::Upper { dt } else { -dt };
                phase(tau_a, tau_b) * kernel(lag, r, eps)
            },
            interval: Some(interval),
            diagonal: false,
            domain,
        })?;
        total.value = total.value + part.value;
        total.error = total.error + part.error;
    }
    total.value = -total.value;
    Ok(total)
}

fn check_inputs<T: Real>(cfg: &ScenarioConfig<T>, det: &DetectorParams<T>, numerics: &Numerics<T>) -> Result<()> {
    numerics.validate()?;
    if !cfg.separation().is_finite() || !cfg.acceleration().is_finite() || !det.gap().is_finite() {
        return Err(invalid("config", "parameters must be finite"));
    }
    Ok(())
}

/// Element `L_ij` (including `λ²`).
///
/// With [`LocalRoute::ClosedForm`], `L_jj` in the vacuum comes from
/// [`transition_probability_closed`]; every other element is the
/// regulated double integral.
pub fn l_element<T: Real>(
    i: Detector,
    j: Detector,
    cfg: &ScenarioConfig<T>,
    det: &DetectorParams<T>,
    state: &FieldState<T>,
    numerics: &Numerics<T>,
    route: LocalRoute,
) -> Result<Estimate<Complex<T>, T>> {
    check_inputs(cfg, det, numerics)?;
    let lam2 = det.coupling() * det.coupling();
    if lam2 == T::zero() {
        return Ok(Estimate {
            value: Complex::new(T::zero(), T::zero()),
            error: T::zero(),
        });
    }
    let unit = if i == j && route == LocalRoute::ClosedForm && *state == FieldState::MinkowskiVacuum {
        let p = transition_probability_estimate(cfg.acceleration(), det.gap(), T::one())?;
        Estimate {
            value: Complex::new(p.value, T::zero()),
            error: p.error,
        }
    } else {
        l_quadrature(i, j, cfg, det.gap(), state, numerics)?
    };
    Ok(unit.scale(lam2))
}

/// Element `M` (including `λ²`).
pub fn m_element<T: Real>(
    cfg: &ScenarioConfig<T>,
    det: &DetectorParams<T>,
    state: &FieldState<T>,
    numerics: &Numerics<T>,
) -> Result<Estimate<Complex<T>, T>> {
    check_inputs(cfg, det, numerics)?;
    let lam2 = det.coupling() * det.coupling();
    if lam2 == T::zero() {
        return Ok(Estimate {
            value: Complex::new(T::zero(), T::zero()),
            error: T::zero(),
        });
    }
    Ok(m_quadrature(cfg, det.gap(), state, numerics)?.scale(lam2))
}

/// All four elements of ρ_AB for one configuration.
///
/// The two detectors share one gap and one acceleration, and every
/// supported configuration maps A onto B by an isometry, so `L_BB` is
/// taken equal to `L_AA` unless the 2D route is requested.
pub fn matrix_elements<T: Real>(
    cfg: &ScenarioConfig<T>,
    det: &DetectorParams<T>,
    state: &FieldState<T>,
    numerics: &Numerics<T>,
    route: LocalRoute,
) -> Result<MatrixElements<T>> {
    let real = |e: Estimate<Complex<T>, T>| Estimate {
        value: e.value.re,
        error: e.error + e.value.im.abs(),
    };
    let l_aa = real(l_element(Detector::A, Detector::A, cfg, det, state, numerics, route)?);
    let l_bb = match route {
        LocalRoute::ClosedForm => l_aa,
        LocalRoute::Quadrature => real(l_element(Detector::B, Detector::B, cfg, det, state, numerics, route)?),
    };
    let l_ab = l_element(Detector::A, Detector::B, cfg, det, state, numerics, route)?;
    let m = m_element(cfg, det, state, numerics)?;
    Ok(MatrixElements { l_aa, l_bb, l_ab, m })
}

#[cfg(test)]
mod tests {
    use super::*;

    const INERTIAL_ONE: f64 = 0.007_088_272_232_636_416;

    // Closed form at unit coupling, rows a = 0.5, 1, 2 and columns
    // gap = 0.5, 1, 2, from a 30-digit evaluation of the same integral.
    const CLOSED: [[f64; 3]; 3] = [
        [
            0.030_709_278_325_157_96,
            0.008_335_756_452_482_379_5,
            0.000_209_823_202_961_382_45,
        ],
        [
            0.038_002_615_463_389_018,
            0.012_309_374_911_707_275,
            0.000_574_906_756_493_003_29,
        ],
        [
            0.063_183_912_483_749_996,
            0.029_076_370_210_321_277,
            0.004_202_780_735_494_177_1,
        ],
    ];

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn series_matches_direct_difference() {
        for s in [0.099_f64, 0.1, 0.2] {
            let sh = s.sinh();
            let direct = 1.0 / (s * s) - 1.0 / (sh * sh);
            assert!((inverse_square_difference(s) - direct).abs() < 1e-12);
        }
        assert!((inverse_square_difference(1e-3_f64) - 1.0 / 3.0).abs() < 1e-6);
        assert!((inverse_square_difference(1e-4_f64) - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn closed_form_at_rest() {
        let p = transition_probability_closed(0.0, 1.0, 1.0).unwrap();
        assert!(rel(p, INERTIAL_ONE) < 1e-13);
        assert_eq!(transition_probability_closed(0.0, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_matches_reference_grid() {
        for (row, a) in [0.5, 1.0, 2.0].iter().enumerate() {
            for (col, gap) in [0.5, 1.0, 2.0].iter().enumerate() {
                let p = transition_probability_closed(*a, *gap, 1.0).unwrap();
                assert!(rel(p, CLOSED[row][col]) < 1e-10, "a = {a}, gap = {gap}: {p}");
            }
        }
    }

    #[test]
    fn closed_form_large_gap_and_monotonic_in_acceleration() {
        let p = transition_probability_closed(1.0, 6.0, 1.0).unwrap();
        assert!(p > 0.0 && p < 1e-8, "{p}");
        let q = |a: f64| transition_probability_closed(a, 0.5, 1.0).unwrap();
        assert!(q(2.0) > q(1.0) && q(1.0) > q(0.5));
        assert!(transition_probability_closed(-1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn rho_from_zero_elements_is_ground_state() {
        let rho = assemble_rho(&MatrixElements::<f64>::zero()).unwrap();
        assert_eq!(rho.get(0, 0), Complex::new(1.0, 0.0));
        assert_eq!(rho.trace(), Complex::new(1.0, 0.0));
        assert!(rho.is_hermitian() && rho.is_x_shaped());
    }

    fn synthetic(laa: f64, lbb: f64, lab: Complex<f64>, m: Complex<f64>) -> MatrixElements {
        let e = |v| Estimate { value: v, error: 0.0 };
        MatrixElements {
            l_aa: e(laa),
            l_bb: e(lbb),
            l_ab: Estimate { value: lab, error: 0.0 },
            m: Estimate { value: m, error: 0.0 },
        }
    }

    #[test]
    fn rho_structure_and_block_eigenvalues() {
        let e = synthetic(0.03, 0.01, Complex::new(0.004, -0.011), Complex::new(-0.02, 0.005));
        let rho = assemble_rho(&e).unwrap();
        assert!(rho.is_hermitian() && rho.is_x_shaped());
        assert!((rho.trace() - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(rho.get(2, 1), e.l_ab.value);
        assert_eq!(rho.get(3, 0), e.m.value);

        let (lp, lm) = rho.inner_block_eigenvalues();
        let root = ((0.03_f64 - 0.01).powi(2) + 4.0 * e.l_ab.value.norm_sqr()).sqrt();
        assert!((lp - 0.5 * (0.04 + root)).abs() < 1e-15);
        assert!((lm - 0.5 * (0.04 - root)).abs() < 1e-15);

        let mat = nalgebra::Matrix4::from_fn(|r, c| {
            let v = rho.get(r, c);
            nalgebra::Complex::new(v.re, v.im)
        });
        let mut reference: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
        reference.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, want) in rho.eigenvalues().iter().zip(&reference) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
        // The outer block's negative eigenvalue is of fourth order.
        let (_, low) = rho.outer_block_eigenvalues();
        assert!(low < 0.0 && low.abs() <= 2.0 * e.m.value.norm_sqr());
    }

    #[test]
    fn rho_rejects_nonperturbative_elements() {
        let e = synthetic(0.6, 0.5, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
        assert!(matches!(assemble_rho(&e), Err(Error::NonPerturbative { .. })));
    }

    fn quick() -> Numerics {
        Numerics::default()
    }

    #[test]
    fn zero_coupling_gives_zero_elements() {
        let cfg = ScenarioConfig::new(Scenario::Parallel, 1.0, 1.0).unwrap();
        let det = DetectorParams::new(0.0, 0.5).unwrap();
        let st = FieldState::MinkowskiVacuum;
        let e = l_element(
            Detector::A,
            Detector::B,
            &cfg,
            &det,
            &st,
            &quick(),
            LocalRoute::ClosedForm,
        )
        .unwrap();
        assert_eq!(e.value, Complex::new(0.0, 0.0));
        assert_eq!(
            m_element(&cfg, &det, &st, &quick()).unwrap().value,
            Complex::new(0.0, 0.0)
        );
    }

    #[test]
    fn local_element_two_routes_agree() {
        let cfg = ScenarioConfig::new(Scenario::Parallel, 1.0, 1.0).unwrap();
        let det = DetectorParams::new(1.0, 0.5).unwrap();
        let st = FieldState::MinkowskiVacuum;
        let closed = l_element(
            Detector::A,
            Detector::A,
            &cfg,
            &det,
            &st,
            &quick(),
            LocalRoute::ClosedForm,
        )
        .unwrap();
        let quad = l_element(
            Detector::A,
            Detector::A,
            &cfg,
            &det,
            &st,
            &quick(),
            LocalRoute::Quadrature,
        )
        .unwrap();
        assert!(
            rel(quad.value.re, closed.value.re) < 1e-5,
            "{} vs {}",
            quad.value,
            closed.value
        );
        assert!(quad.value.im.abs() < 1e-7);
    }

    #[test]
    fn both_detectors_see_the_same_local_element() {
        let det = DetectorParams::new(1.0, 0.5).unwrap();
        for s in Scenario::ALL {
            let a = if s.is_accelerated() { 1.0 } else { 0.0 };
            let cfg = ScenarioConfig::new(s, a, 1.0).unwrap();
            let e = matrix_elements(
                &cfg,
                &det,
                &FieldState::MinkowskiVacuum,
                &quick(),
                LocalRoute::Quadrature,
            )
            .unwrap();
            let bound = e.l_aa.error + e.l_bb.error + 1e-12;
            assert!(
                (e.l_aa.value - e.l_bb.value).abs() <= bound,
                "{s}: {:?} vs {:?}",
                e.l_aa,
                e.l_bb
            );
        }
    }

    #[test]
    fn inertial_local_element_from_quadrature() {
        let cfg = ScenarioConfig::inertial(1.0).unwrap();
        let det = DetectorParams::new(1.0, 1.0).unwrap();
        let st = FieldState::MinkowskiVacuum;
        let quad = l_element(
            Detector::B,
            Detector::B,
            &cfg,
            &det,
            &st,
            &quick(),
            LocalRoute::Quadrature,
        )
        .unwrap();
        assert!(rel(quad.value.re, INERTIAL_ONE) < 1e-6, "{}", quad.value);
    }

    #[test]
    fn coupling_enters_as_its_square() {
        let cfg = ScenarioConfig::new(Scenario::AntiParallel, 1.0, 1.0).unwrap();
        let st = FieldState::MinkowskiVacuum;
        let small = DetectorParams::new(0.1, 0.5).unwrap();
        let big = small.with_coupling(0.2).unwrap();
        let n = quick();
        let e1 = matrix_elements(&cfg, &small, &st, &n, LocalRoute::ClosedForm).unwrap();
        let e2 = matrix_elements(&cfg, &big, &st, &n, LocalRoute::ClosedForm).unwrap();
        let close = |x: Complex<f64>, y: Complex<f64>| (x - 4.0 * y).norm() <= 4.0 * f64::EPSILON * y.norm();
        assert!(close(
            Complex::new(e2.l_aa.value, 0.0),
            Complex::new(e1.l_aa.value, 0.0)
        ));
        assert!(close(e2.l_ab.value, e1.l_ab.value));
        assert!(close(e2.m.value, e1.m.value));
    }

    #[test]
    fn swapping_detectors_conjugates_the_cross_element() {
        let det = DetectorParams::new(1.0, 0.5).unwrap();
        let st = FieldState::MinkowskiVacuum;
        for s in [Scenario::Parallel, Scenario::Perpendicular] {
            let cfg = ScenarioConfig::new(s, 1.0, 1.0).unwrap();
            let ab = l_element(
                Detector::A,
                Detector::B,
                &cfg,
                &det,
                &st,
                &quick(),
                LocalRoute::ClosedForm,
            )
            .unwrap();
            let ba = l_element(
                Detector::B,
                Detector::A,
                &cfg,
                &det,
                &st,
                &quick(),
                LocalRoute::ClosedForm,
            )
            .unwrap();
            assert!(
                (ab.value - ba.value.conj()).norm() < 1e-8,
                "{s}: {} vs {}",
                ab.value,
                ba.value
            );
        }
    }

    #[test]
    fn time_ordering_split_matches_smooth_step_limit() {
        // At fixed regulator, the triangle split against a full-square
        // integral with Θ replaced by (1 + tanh(kx))/2 as k grows.
        let cfg = ScenarioConfig::new(Scenario::AntiParallel, 1.0, 1.0).unwrap();
        let world = cfg.worldline();
        let gap = 0.5;
        let eps = 0.1;
        let spec = QuadratureSpec::default_2d().with_tolerances(1e-11, 1e-9);
        let phase = |ta: f64, tb: f64| Complex::from_polar(switching(ta) * switching(tb), gap * (ta + tb));
        let split: Complex<f64> = [Domain::Upper, Domain::Lower]
            .iter()
            .map(|d| {
                let dom = *d;
                integrate_2d(
                    &PairIntegrand {
                        f: |ta: f64, tb: f64| {
                            let (dt, r) = world.offset(Detector::A, ta, Detector::B, tb);
                            let lag = if dom == Domain::Upper { dt } else { -dt };
                            phase(ta, tb) * minkowski_kernel(lag, r, eps)
                        },
                        interval: None::<fn(f64, f64) -> f64>,
                        diagonal: false,
                        domain: dom,
                    },
                    &spec,
                )
                .value
            })
            .sum();
        let smooth = |k: f64| {
            integrate_2d(
                &PairIntegrand {
                    f: |ta: f64, tb: f64| {
                        let (dt, r) = world.offset(Detector::A, ta, Detector::B, tb);
                        let theta =
                            0.5 * (1.0 + (k * (world.time(Detector::A, ta) - world.time(Detector::B, tb))).tanh());
                        phase(ta, tb)
                            * (minkowski_kernel(dt, r, eps) * theta + minkowski_kernel(-dt, r, eps) * (1.0 - theta))
                    },
                    interval: None::<fn(f64, f64) -> f64>,
                    diagonal: true,
                    domain: Domain::Square,
                },
                &spec,
            )
            .value
        };
        let d1 = (smooth(25.0) - split).norm();
        let d2 = (smooth(50.0) - split).norm();
        let d3 = (smooth(400.0) - split).norm();
        assert!(d2 < d1 && d3 < d2, "{d1} {d2} {d3}");
        assert!(d3 < 1e-5 * split.norm(), "{d3} vs {}", split.norm());
    }

    #[test]
    fn thermal_state_is_inertial_only() {
        let cfg = ScenarioConfig::new(Scenario::Parallel, 1.0, 1.0).unwrap();
        let det = DetectorParams::new(1.0, 0.5).unwrap();
        let st = FieldState::thermal(2.0).unwrap();
        let r = l_element(
            Detector::A,
            Detector::B,
            &cfg,
            &det,
            &st,
            &quick(),
            LocalRoute::ClosedForm,
        );
        assert!(matches!(r, Err(Error::Unsupported(_))));
        let ds = FieldState::de_sitter(0.1).unwrap();
        assert!(matches!(
            m_element(&cfg, &det, &ds, &quick()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn exhausted_budget_names_element_and_level() {
        let cfg = ScenarioConfig::inertial(1.0).unwrap();
        let det = DetectorParams::new(1.0, 0.5).unwrap();
        let mut n = quick();
        n.quadrature.max_subdivisions = 2;
        let r = l_element(
            Detector::A,
            Detector::B,
            &cfg,
            &det,
            &FieldState::MinkowskiVacuum,
            &n,
            LocalRoute::ClosedForm,
        );
        assert!(
            matches!(
                r,
                Err(Error::NonConvergence {
                    what: "L_AB",
                    level: 0,
                    ..
                })
            ),
            "{r:?}"
        );
    }
}
