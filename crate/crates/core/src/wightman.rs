//! Two-point (Wightman) functions of the massless scalar field: Minkowski
//! vacuum, its pullbacks onto accelerated worldlines, the thermal (KMS)
//! state as an imaginary-time image sum, and the conformal de Sitter vacuum.
//!
//! Every function takes an explicit UV regulator `eps >= 0` measured in
//! units of σ of coordinate time, unless documented otherwise. `eps = 0`
//! returns the unregulated value, which is finite away from the light cone.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kinematics::{Detector, Scenario, ScenarioConfig, SpacetimePoint};
use crate::quadrature::{integrate_1d_semiinfinite, QuadratureSpec};
use crate::scalar::Real;
use crate::special::{digamma_asymptotic, trigamma_asymptotic};

/// State of the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldState<T = f64> {
    MinkowskiVacuum,
    /// KMS state at inverse temperature `beta` (units of σ).
    ThermalKms {
        beta: T,
    },
    /// Conformal vacuum of planar de Sitter with Gibbons–Hawking
    /// temperature `temperature` (units of 1/σ).
    DeSitterConformal {
        temperature: T,
    },
}

impl<T: Real> FieldState<T> {
    pub fn thermal(beta: T) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(invalid(
                "beta",
                format!("inverse temperature must be finite and > 0, got {beta}"),
            ));
        }
        Ok(FieldState::ThermalKms { beta })
    }

    pub fn thermal_at_temperature(temperature: T) -> Result<Self> {
        if !(temperature > T::zero()) {
            return Err(invalid("temperature", format!("must be > 0, got {temperature}")));
        }
        Self::thermal(temperature.recip())
    }

    pub fn de_sitter(temperature: T) -> Result<Self> {
        if !(temperature >= T::zero()) || !temperature.is_finite() {
            return Err(invalid(
                "temperature",
                format!("must be finite and >= 0, got {temperature}"),
            ));
        }
        Ok(FieldState::DeSitterConformal { temperature })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldState::MinkowskiVacuum => "vacuum",
            FieldState::ThermalKms { .. } => "thermal",
            FieldState::DeSitterConformal { .. } => "de-sitter",
        }
    }
}

// Written out: a derive would demand `T: Default`.
#[allow(clippy::derivable_impls)]
impl<T: Real> Default for FieldState<T> {
    fn default() -> Self {
        FieldState::MinkowskiVacuum
    }
}

/// Unruh temperature `a/2π` of a detector with proper acceleration `a`.
pub fn unruh_temperature<T: Real>(acceleration: T) -> T {
    acceleration / T::TAU()
}

/// Sequence of regulators `ε_k = ε₀/2^k`, `k = 0..levels`, and the
/// polynomial order used to extrapolate integrated values to ε = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegulatorPolicy<T = f64> {
    pub eps0: T,
    pub levels: usize,
    pub order: usize,
}

impl<T: Real> RegulatorPolicy<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > T::zero()) || !self.eps0.is_finite() {
            return Err(invalid(
                "eps0",
                format!("initial regulator must be > 0, got {}", self.eps0),
            ));
        }
        if self.levels < 2 {
            return Err(invalid("levels", "at least two regulator levels are needed"));
        }
        if self.order == 0 {
            return Err(invalid("order", "extrapolation order must be >= 1"));
        }
        Ok(())
    }

    pub fn epsilons(&self) -> Vec<T> {
        let mut e = self.eps0;
        (0..self.levels)
            .map(|_| {
                let cur = e;
                e = e * T::lit(0.5);
                cur
            })
            .collect()
    }
}

impl<T: Real> Default for RegulatorPolicy<T> {
    fn default() -> Self {
        Self {
            eps0: T::lit(0.1),
            levels: 5,
            order: 4,
        }
    }
}

#[inline]
fn inv_four_pi_sq<T: Real>() -> T {
    (T::lit(4.0) * T::PI() * T::PI()).recip()
}

/// `-(1/4π²) / ((Δt - iε)² - r²)`.
#[inline]
pub fn minkowski_kernel<T: Real>(dt: T, r: T, eps: T) -> Complex<T> {
    let z = Complex::new(dt, -eps);
    let d = z * z - Complex::new(r * r, T::zero());
    -d.inv() * inv_four_pi_sq::<T>()
}

/// Vacuum Wightman function between two events.
pub fn wightman_minkowski<T: Real>(x: &SpacetimePoint<T>, xp: &SpacetimePoint<T>, eps: T) -> Complex<T> {
    minkowski_kernel(x.t - xp.t, x.spatial_distance(xp), eps)
}

/// Vacuum Wightman function along one uniformly accelerated worldline,
/// `-(a²/16π²) / sinh²(aΔτ/2 - iε)`. Here `eps` is dimensionless, as it
/// sits inside the sinh.
pub fn wightman_accel_single<T: Real>(a: T, dtau: T, eps: T) -> Complex<T> {
    let s = Complex::new(a * dtau * T::lit(0.5), -eps).sinh();
    -(s * s).inv() * (a * a * inv_four_pi_sq::<T>() * T::lit(0.25))
}

/// Closed form of the vacuum Wightman function between detector A at `tau_a`
/// and detector B at `tau_b` in the parallel configuration,
/// `-(a²/4π²) / ([sinh aτ_A - sinh aτ_B - iε]² - [cosh aτ_A - cosh aτ_B + aL]²)`.
///
/// `eps` here multiplies `a` relative to the Minkowski regulator: this equals
/// the Minkowski pullback at regulator `eps / a`.
pub fn wightman_parallel_closed<T: Real>(a: T, separation: T, tau_a: T, tau_b: T, eps: T) -> Complex<T> {
    let half = T::lit(0.5);
    let sum = a * (tau_a + tau_b) * half;
    let diff = (a * (tau_a - tau_b) * half).sinh();
    let two = T::lit(2.0);
    let dsinh = two * sum.cosh() * diff;
    let dcosh = two * sum.sinh() * diff + a * separation;
    let z = Complex::new(dsinh, -eps);
    let d = z * z - Complex::new(dcosh * dcosh, T::zero());
    -d.inv() * (a * a * inv_four_pi_sq::<T>())
}

/// Vacuum Wightman function pulled back onto `x_i(tau)` and `x_j(tau_p)`.
pub fn wightman_pullback<T: Real>(
    cfg: &ScenarioConfig<T>,
    i: Detector,
    tau: T,
    j: Detector,
    tau_p: T,
    eps: T,
) -> Complex<T> {
    let (dt, r) = cfg.worldline().offset(i, tau, j, tau_p);
    minkowski_kernel(dt, r, eps)
}

/// Vacuum Wightman function `W(x_A(tau_a), x_B(tau_b))` at Minkowski
/// regulator `eps`. The parallel family uses its closed form, the others
/// the pullback of the Minkowski function.
pub fn wightman_cross<T: Real>(cfg: &ScenarioConfig<T>, tau_a: T, tau_b: T, eps: T) -> Complex<T> {
    match cfg.scenario() {
        Scenario::Parallel => {
            let a = cfg.acceleration();
            wightman_parallel_closed(a, cfg.separation(), tau_a, tau_b, eps * a)
        }
        _ => wightman_pullback(cfg, Detector::A, tau_a, Detector::B, tau_b, eps),
    }
}

/// Thermal Wightman value with a bound on the image-sum truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSumValue<T = f64> {
    pub value: Complex<T>,
    pub tail_bound: T,
}

/// KMS Wightman function realized as the imaginary-time image sum
/// `Σ_n W_M(Δt + i n β, r)`.
///
/// The images `|n| <= images` are summed explicitly; the remaining tail is
/// summed in closed form through the large-argument expansions of the
/// digamma (r > 0) or trigamma (r = 0) function evaluated at `images + 1`.
/// The reported bound is the truncation error of those expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalImageSum<T = f64> {
    beta: T,
    images: usize,
    tolerance: T,
}

impl<T: Real> ThermalImageSum<T> {
    pub const DEFAULT_IMAGES: usize = 10;

    pub fn new(beta: T, images: usize, tolerance: T) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(invalid("beta", format!("must be finite and > 0, got {beta}")));
        }
        if images < 1 {
            return Err(invalid("images", "at least one image pair is required"));
        }
        if !(tolerance > T::zero()) {
            return Err(invalid("tolerance", "must be > 0"));
        }
        Ok(Self {
            beta,
            images,
            tolerance,
        })
    }

    pub fn with_defaults(beta: T) -> Result<Self> {
        Self::new(beta, Self::DEFAULT_IMAGES, T::lit(1e-12))
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Value and tail bound, without checking the bound.
    pub fn evaluate(&self, dt: T, r: T, eps: T) -> ImageSumValue<T> {
        let images = self.thermal_part(dt, r, eps);
        ImageSumValue {
            value: minkowski_kernel(dt, r, eps) + images.value,
            tail_bound: images.tail_bound,
        }
    }

    /// The images `n != 0` alone: the thermal contribution `W_β` to the
    /// Wightman function, without the vacuum term.
    pub fn thermal_part(&self, dt: T, r: T, eps: T) -> ImageSumValue<T> {
        let beta = self.beta;
        let mut value = Complex::new(T::zero(), T::zero());
        for n in 1..=self.images {
            let shift = T::from_usize(n).unwrap() * beta;
            value = value + minkowski_kernel_complex(Complex::new(dt, shift - eps), r);
            value = value + minkowski_kernel_complex(Complex::new(dt, -shift - eps), r);
        }
        let z = Complex::new(dt, -eps);
        let start = T::from_usize(self.images + 1).unwrap();
        let i = Complex::new(T::zero(), T::one());
        let pref = inv_four_pi_sq::<T>();
        let (tail, bound) = if r > T::lit(1e-6) {
            // Σ_{|n|>N} 1/(c + i n β) = (ψ(N+1-q) - ψ(N+1+q)) / (iβ), q = -ic/β
            let partial = |c: Complex<T>| -> (Complex<T>, T) {
                let q = -i * c / beta;
                let lo = digamma_asymptotic(Complex::new(start, T::zero()) - q);
                let hi = digamma_asymptotic(Complex::new(start, T::zero()) + q);
                ((lo.value - hi.value) / (i * beta), (lo.bound + hi.bound) / beta)
            };
            let (sm, bm) = partial(z - r);
            let (sp, bp) = partial(z + r);
            let scale = pref / (T::lit(2.0) * r);
            (-(sm - sp) * scale, (bm + bp) * scale)
        } else {
            // Σ_{|n|>N} 1/(z + i n β)² = -(ψ'(N+1+q) + ψ'(N+1-q)) / β², q = -iz/β
            let q = -i * z / beta;
            let a = trigamma_asymptotic(Complex::new(start, T::zero()) + q);
            let b = trigamma_asymptotic(Complex::new(start, T::zero()) - q);
            let scale = pref / (beta * beta);
            ((a.value + b.value) * scale, (a.bound + b.bound) * scale)
        };
        ImageSumValue {
            value: value + tail,
            tail_bound: bound,
        }
    }

    /// Value of the thermal kernel at time difference `dt` and distance `r`.
    /// Fails when the tail bound exceeds the tolerance.
    pub fn kernel(&self, dt: T, r: T, eps: T) -> Result<ImageSumValue<T>> {
        let v = self.evaluate(dt, r, eps);
        if v.tail_bound > self.tolerance || !v.tail_bound.is_finite() {
            return Err(Error::ImageSumTruncation {
                images: self.images,
                bound: v.tail_bound.to_f64_lossy(),
                tolerance: self.tolerance.to_f64_lossy(),
            });
        }
        Ok(v)
    }
}

#[inline]
fn minkowski_kernel_complex<T: Real>(z: Complex<T>, r: T) -> Complex<T> {
    let d = z * z - Complex::new(r * r, T::zero());
    -d.inv() * inv_four_pi_sq::<T>()
}

/// Thermal Wightman function between two events.
pub fn wightman_thermal<T: Real>(
    x: &SpacetimePoint<T>,
    xp: &SpacetimePoint<T>,
    beta: T,
    eps: T,
    images: usize,
    tolerance: T,
) -> Result<ImageSumValue<T>> {
    ThermalImageSum::new(beta, images, tolerance)?.kernel(x.t - xp.t, x.spatial_distance(xp), eps)
}

/// Thermal contribution `W_β(Δt, r)` from its radial momentum integral,
/// `(1/2π²r) ∫₀^∞ dk sin(kr) cos(kΔt) / (e^{βk} - 1)`, with the `r → 0`
/// limit taken analytically. Kept as an independent check on the image sum.
pub fn wightman_thermal_integral<T: Real>(dt: T, r: T, beta: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(r >= T::zero()) {
        return Err(invalid("r", "distance must be >= 0"));
    }
    if !(beta > T::zero()) {
        return Err(invalid("beta", "must be > 0"));
    }
    if beta.is_infinite() {
        return Ok(T::zero());
    }
    // k = u/β
    let small_r = r * T::lit(1e8) < beta;
    let integrand = |u: T| -> T {
        let bose = u.exp_m1();
        let radial = if small_r { u / beta } else { (u * r / beta).sin() / r };
        radial * (u * dt / beta).cos() / bose
    };
    let res = integrate_1d_semiinfinite(integrand, spec);
    if !res.converged {
        return Err(Error::Integration(format!(
            "thermal momentum integral at dt = {dt}, r = {r}, beta = {beta}: error estimate {:e}",
            res.error.to_f64_lossy()
        )));
    }
    let two_pi_sq = T::lit(2.0) * T::PI() * T::PI();
    Ok(res.value / (two_pi_sq * beta))
}

/// Conformal-vacuum Wightman function of planar de Sitter,
/// `-(1/4π²) / (sinh²(πT(Δt - iε))/(πT)² - e^{2πTΔ₊t} L²)`.
///
/// `dplus_t` is `t + t'` and `separation` the comoving distance. The
/// regulator multiplies `πT` so that `temperature = 0` reduces to the
/// Minkowski kernel at the same `eps`.
pub fn wightman_desitter<T: Real>(dt: T, dplus_t: T, separation: T, temperature: T, eps: T) -> Complex<T> {
    if temperature == T::zero() {
        return minkowski_kernel(dt, separation, eps);
    }
    let pt = T::PI() * temperature;
    let s = (Complex::new(dt, -eps) * pt).sinh() / pt;
    let stretch = (T::lit(2.0) * pt * dplus_t).exp() * separation * separation;
    let d = s * s - Complex::new(stretch, T::zero());
    -d.inv() * inv_four_pi_sq::<T>()
}
