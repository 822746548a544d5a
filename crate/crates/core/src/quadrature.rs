//! Adaptive Gauss–Kronrod integration: 1D on finite and semi-infinite
//! ranges, nested 2D over the truncated switching box, and polynomial
//! extrapolation of regulated integrals to zero regulator.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Values an integrator can accumulate: real or complex scalars.
pub trait Value<T: Real>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn modulus(self) -> T;
    fn is_finite_value(self) -> bool;
}

impl<T: Real> Value<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn modulus(self) -> T {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl<T: Real> Value<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn modulus(self) -> T {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Tolerances and budget for an integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec<T = f64> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Half-width of the box `[-T_max, T_max]` the switching-damped
    /// integrands are truncated to.
    pub half_width: T,
    /// Subdivision budget of each adaptive 1D pass.
    pub max_subdivisions: usize,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn default_1d() -> Self {
        Self {
            abs_tol: T::lit(1e-10),
            rel_tol: T::lit(1e-8),
            half_width: T::lit(7.0),
            max_subdivisions: 400,
        }
    }

    pub fn default_2d() -> Self {
        Self {
            abs_tol: T::lit(1e-9),
            rel_tol: T::lit(1e-6),
            half_width: T::lit(7.0),
            max_subdivisions: 400,
        }
    }

    pub fn with_tolerances(mut self, abs_tol: T, rel_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) || !(self.rel_tol > T::zero()) {
            return Err(invalid("tolerance", "tolerances must be > 0"));
        }
        if !(self.half_width >= T::lit(5.0)) || !self.half_width.is_finite() {
            return Err(invalid(
                "half_width",
                format!("truncation half-width must be finite and >= 5, got {}", self.half_width),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions", "must be positive"));
        }
        Ok(())
    }

    fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self::default_2d()
    }
}

/// Outcome of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult<T = f64, V = Complex<T>> {
    pub value: V,
    /// Estimated absolute error, never negative.
    pub error: T,
    pub evaluations: usize,
    pub converged: bool,
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK21: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK21: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980792413,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG10: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One integrand sample: the value plus the absolute error already carried
/// by it (non-zero when the sample is itself an integral).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample<T, V> {
    value: V,
    error: T,
    evaluations: usize,
    ok: bool,
}

impl<T: Real, V: Value<T>> Sample<T, V> {
    fn exact(value: V) -> Self {
        Self {
            value,
            error: T::zero(),
            evaluations: 1,
            ok: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T, V> {
    a: T,
    b: T,
    value: V,
    error: T,
    resabs: T,
    ok: bool,
}

fn rescale_error<T: Real>(err: T, resabs: T, resasc: T) -> T {
    let mut err = err.abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = if scale < T::one() { resasc * scale } else { resasc };
    }
    let floor = T::lit(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) && floor > err {
        err = floor;
    }
    err
}

fn gk21<T, V, F>(f: &mut F, a: T, b: T, evals: &mut usize) -> Panel<T, V>
where
    T: Real,
    V: Value<T>,
    F: FnMut(T) -> Sample<T, V>,
{
    let center = (a + b) * T::lit(0.5);
    let half = (b - a) * T::lit(0.5);
    let habs = half.abs();

    let mut carried = T::zero();
    let mut ok = true;
    let mut take = |s: Sample<T, V>, w: T, evals: &mut usize| -> V {
        carried = carried + w * s.error;
        *evals += s.evaluations;
        ok &= s.ok;
        s.value
    };

    let fc = take(f(center), T::lit(WGK21[10]), evals);
    let mut res_k = fc * T::lit(WGK21[10]);
    let mut res_g = V::zero();
    let mut resabs = fc.modulus() * T::lit(WGK21[10]);
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let dx = half * T::lit(XGK21[j]);
        let w = T::lit(WGK21[j]);
        let f1 = take(f(center - dx), w, evals);
        let f2 = take(f(center + dx), w, evals);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + (f1 + f2) * w;
        resabs = resabs + (f1.modulus() + f2.modulus()) * w;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * T::lit(WG10[j / 2]);
        }
    }
    let mean = res_k * T::lit(0.5);
    let mut resasc = (fc - mean).modulus() * T::lit(WGK21[10]);
    for j in 0..10 {
        resasc = resasc + ((fv1[j] - mean).modulus() + (fv2[j] - mean).modulus()) * T::lit(WGK21[j]);
    }
    let value = res_k * half;
    let resabs = resabs * habs;
    let resasc = resasc * habs;
    let error = rescale_error((res_k - res_g).modulus() * habs, resabs, resasc) + carried * habs;
    let ok = ok && value.is_finite_value();
    Panel {
        a,
        b,
        value,
        error: if error.is_finite() { error } else { T::infinity() },
        resabs,
        ok,
    }
}

/// Globally adaptive bisection (QUADPACK QAG strategy) over `[a, b]` with
/// optional interior breakpoints that no panel may straddle.
pub(crate) fn adaptive<T, V, F>(
    mut f: F,
    a: T,
    b: T,
    breakpoints: &[T],
    abs_tol: T,
    rel_tol: T,
    max_subdivisions: usize,
) -> (IntegralResult<T, V>, T)
where
    T: Real,
    V: Value<T>,
    F: FnMut(T) -> Sample<T, V>,
{
    let mut evals = 0usize;
    if a == b {
        return (
            IntegralResult {
                value: V::zero(),
                error: T::zero(),
                evaluations: 0,
                converged: true,
            },
            T::zero(),
        );
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut cuts: Vec<T> = breakpoints.iter().copied().filter(|p| *p > lo && *p < hi).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(lo);
    nodes.extend(cuts);
    nodes.push(hi);

    let mut panels: Vec<Panel<T, V>> = nodes.windows(2).map(|w| gk21(&mut f, w[0], w[1], &mut evals)).collect();
    let mut frozen = vec![false; panels.len()];

    let mut converged = false;
    loop {
        let total: V = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
        let err: T = panels.iter().map(|p| p.error).sum();
        let target = abs_tol.max(rel_tol * total.modulus());
        if err <= target {
            converged = panels.iter().all(|p| p.ok);
            break;
        }
        if panels.len() >= max_subdivisions.max(nodes.len()) {
            break;
        }
        let pick = panels
            .iter()
            .enumerate()
            .filter(|(i, _)| !frozen[*i])
            .max_by(|(_, x), (_, y)| x.error.partial_cmp(&y.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(i) = pick else { break };
        let p = panels[i];
        let mid = (p.a + p.b) * T::lit(0.5);
        let width = p.b - p.a;
        let scale = p.a.abs().max(p.b.abs()).max(T::one());
        if width <= T::lit(200.0) * T::epsilon() * scale || !(mid > p.a && mid < p.b) {
            frozen[i] = true;
            continue;
        }
        let left = gk21(&mut f, p.a, mid, &mut evals);
        let right = gk21(&mut f, mid, p.b, &mut evals);
        panels[i] = left;
        panels.push(right);
        frozen.push(false);
    }
    let mut total = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    let error: T = panels.iter().map(|p| p.error).sum();
    let resabs: T = panels.iter().map(|p| p.resabs).sum();
    if a > b {
        total = V::zero() - total;
    }
    (
        IntegralResult {
            value: total,
            error,
            evaluations: evals,
            converged: converged && total.is_finite_value(),
        },
        resabs,
    )
}

/// Adaptive integral of `f` over `[a, b]`, splitting at `breakpoints`.
pub fn integrate_1d<T, V, F>(f: F, a: T, b: T, breakpoints: &[T], spec: &QuadratureSpec<T>) -> IntegralResult<T, V>
where
    T: Real,
    V: Value<T>,
    F: Fn(T) -> V,
{
    adaptive(
        |x| Sample::exact(f(x)),
        a,
        b,
        breakpoints,
        spec.abs_tol,
        spec.rel_tol,
        spec.max_subdivisions,
    )
    .0
}

/// Integral of `g` over `[0, ∞)` for integrands with Gaussian or exponential
/// decay.
///
/// The range is covered by panels `[0, 1], [1, 2], [2, 4], …`; integration
/// stops once a panel's absolute mass `∫|g|` falls below a quarter of the
/// absolute tolerance, which bounds the neglected tail for monotonically
/// damped integrands. Integrands with a removable singularity at the origin
/// must supply the limit themselves.
pub fn integrate_1d_semiinfinite<T, V, F>(g: F, spec: &QuadratureSpec<T>) -> IntegralResult<T, V>
where
    T: Real,
    V: Value<T>,
    F: Fn(T) -> V,
{
    let mut total = V::zero();
    let mut error = T::zero();
    let mut evaluations = 0;
    let mut converged = true;
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut quiet_panels = 0;
    for _ in 0..64 {
        let panel_tol = spec.abs_tol * T::lit(0.25);
        let (r, resabs) = adaptive(
            |x| Sample::exact(g(x)),
            lo,
            hi,
            &[],
            panel_tol,
            spec.rel_tol,
            spec.max_subdivisions,
        );
        total = total + r.value;
        error = error + r.error;
        evaluations += r.evaluations;
        converged &= r.converged;
        if resabs <= panel_tol && g(hi).modulus() * hi <= panel_tol {
            quiet_panels += 1;
            if quiet_panels == 2 {
                return IntegralResult {
                    value: total,
                    error: error + resabs,
                    evaluations,
                    converged: converged && error <= spec.target(total.modulus()),
                };
            }
        } else {
            quiet_panels = 0;
        }
        lo = hi;
        hi = hi * T::lit(2.0);
    }
    IntegralResult {
        value: total,
        error: T::infinity(),
        evaluations,
        converged: false,
    }
}

/// Integrand over the (inner, outer) plane for [`integrate_2d`].
///
/// The outer variable runs over `[-T_max, T_max]`; for each outer value the
/// inner range and any near-singular points (ridges) of the inner slice may
/// be supplied so the inner pass splits there.
pub trait Integrand2d<T: Real> {
    fn eval(&self, inner: T, outer: T) -> Complex<T>;

    fn inner_limits(&self, outer: T, half_width: T) -> (T, T) {
        let _ = outer;
        (-half_width, half_width)
    }

    fn ridges(&self, outer: T, lo: T, hi: T, out: &mut Vec<T>) {
        let _ = (outer, lo, hi, out);
    }
}

impl<T: Real, F: Fn(T, T) -> Complex<T>> Integrand2d<T> for F {
    fn eval(&self, inner: T, outer: T) -> Complex<T> {
        self(inner, outer)
    }
}

/// Nested adaptive cubature of `f` over the truncated box (or over the
/// region cut out by [`Integrand2d::inner_limits`]).
///
/// Each outer Kronrod node runs a full adaptive inner pass; the inner error
/// estimates are integrated with the outer weights and added to the outer
/// estimate, so the reported error covers both levels.
pub fn integrate_2d<T: Real, F: Integrand2d<T> + ?Sized>(f: &F, spec: &QuadratureSpec<T>) -> IntegralResult<T> {
    let w = spec.half_width;
    let inner_abs = spec.abs_tol / (T::lit(4.0) * w);
    let inner_rel = spec.rel_tol * T::lit(0.1);
    let mut ridges = Vec::new();
    let outer = |y: T| -> Sample<T, Complex<T>> {
        let (lo, hi) = f.inner_limits(y, w);
        if !(hi > lo) {
            return Sample {
                value: Complex::new(T::zero(), T::zero()),
                error: T::zero(),
                evaluations: 0,
                ok: true,
            };
        }
        ridges.clear();
        f.ridges(y, lo, hi, &mut ridges);
        let (r, _) = adaptive(
            |x| Sample::exact(f.eval(x, y)),
            lo,
            hi,
            &ridges,
            inner_abs,
            inner_rel,
            spec.max_subdivisions,
        );
        Sample {
            value: r.value,
            error: r.error,
            evaluations: r.evaluations,
            ok: r.converged,
        }
    };
    adaptive(
        outer,
        -w,
        w,
        &[T::zero()],
        spec.abs_tol,
        spec.rel_tol,
        spec.max_subdivisions,
    )
    .0
}

/// Result of extrapolating a regulated sequence to zero regulator.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation<T = f64> {
    pub value: Complex<T>,
    /// Difference between the extrapolants of the two highest orders.
    pub stability: T,
    /// Weights of the extrapolant on each input level (zero for levels that
    /// were not used).
    pub weights: Vec<T>,
    pub order: usize,
}

impl<T: Real> Extrapolation<T> {
    pub fn is_stable(&self, tolerance: T) -> bool {
        self.stability <= tolerance
    }

    /// Fails with [`Error::UnstableExtrapolation`] when successive orders
    /// disagree by more than `tolerance`.
    pub fn check(self, tolerance: T) -> Result<Self> {
        if self.is_stable(tolerance) {
            Ok(self)
        } else {
            Err(Error::UnstableExtrapolation {
                spread: self.stability.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            })
        }
    }

    /// Propagates per-level absolute errors through the extrapolation
    /// weights and adds the order spread.
    pub fn propagated_error(&self, level_errors: &[T]) -> T {
        self.weights
            .iter()
            .zip(level_errors)
            .map(|(w, e)| w.abs() * *e)
            .sum::<T>()
            + self.stability
    }
}

fn lagrange_at_zero<T: Real>(eps: &[T]) -> Vec<T> {
    (0..eps.len())
        .map(|k| {
            eps.iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .fold(T::one(), |acc, (_, ej)| acc * *ej / (*ej - eps[k]))
        })
        .collect()
}

/// Polynomial-in-ε extrapolation of `(ε_k, value_k)` to ε = 0.
///
/// Uses a polynomial of degree `min(order, n - 1)` through the levels with
/// the smallest ε. `ε_k` must be positive and strictly decreasing.
pub fn extrapolate_epsilon<T: Real>(values: &[(T, Complex<T>)], order: usize) -> Result<Extrapolation<T>> {
    if values.len() < 2 {
        return Err(invalid("levels", "extrapolation needs at least two levels"));
    }
    if values
        .iter()
        .any(|(e, v)| !(*e > T::zero()) || !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(invalid("levels", "regulators must be > 0 and values finite"));
    }
    if values.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(invalid("levels", "regulators must be strictly decreasing"));
    }
    let n = values.len();
    let degree = order.min(n - 1);
    let eval = |deg: usize| -> (Complex<T>, Vec<T>) {
        let start = n - deg - 1;
        let eps: Vec<T> = values[start..].iter().map(|(e, _)| *e).collect();
        let w = lagrange_at_zero(&eps);
        let value = values[start..]
            .iter()
            .zip(&w)
            .fold(Complex::new(T::zero(), T::zero()), |acc, ((_, v), wk)| acc + *v * *wk);
        let mut full = vec![T::zero(); start];
        full.extend(w);
        (value, full)
    };
    let (value, weights) = eval(degree);
    let stability = if degree == 0 {
        (values[n - 1].1 - values[n - 2].1).norm()
    } else {
        (value - eval(degree - 1).0).norm()
    };
    Ok(Extrapolation {
        value,
        stability,
        weights,
        order: degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_rule_is_exact_for_degree_31() {
        // On [-1, 1]: ∫ x^k = 2/(k+1) for even k.
        for k in 0..=31u32 {
            let want = if k % 2 == 0 { 2.0 / (k + 1) as f64 } else { 0.0 };
            let mut evals = 0;
            let p: Panel<f64, f64> = gk21(&mut |x: f64| Sample::exact(x.powi(k as i32)), -1.0, 1.0, &mut evals);
            assert!((p.value - want).abs() < 1e-15, "k = {k}: {} vs {want}", p.value);
        }
        // The embedded Gauss rule is exact to degree 19 and not beyond.
        let gauss = |k: i32| -> f64 {
            (0..5)
                .map(|j| WG10[j] * (XGK21[2 * j + 1].powi(k) + (-XGK21[2 * j + 1]).powi(k)))
                .sum()
        };
        assert!((gauss(18) - 2.0 / 19.0).abs() < 1e-15);
        assert!((gauss(20) - 2.0 / 21.0).abs() > 1e-8);
    }

    #[test]
    fn gaussian_on_half_line() {
        let spec = QuadratureSpec::default_1d();
        let r: IntegralResult<f64, f64> = integrate_1d_semiinfinite(|s: f64| (-s * s).exp(), &spec);
        assert!(r.converged);
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_reports_failure_for_slow_decay() {
        let spec = QuadratureSpec::default_1d();
        let r: IntegralResult<f64, f64> = integrate_1d_semiinfinite(|s: f64| 1.0 / (1.0 + s), &spec);
        assert!(!r.converged);
    }

    #[test]
    fn separable_gaussian_in_2d() {
        let spec = QuadratureSpec::default_2d().with_tolerances(1e-12, 1e-11);
        let f = |x: f64, y: f64| Complex::new((-(x * x + y * y) / 2.0).exp(), 0.0);
        let r = integrate_2d(&f, &spec);
        assert!(r.converged);
        assert!((r.value.re - 2.0 * PI).abs() < 1e-10);
        assert!(r.value.im.abs() < 1e-15);
    }

    #[test]
    fn oscillatory_gaussian_in_2d() {
        let spec = QuadratureSpec::default_2d().with_tolerances(1e-12, 1e-11);
        let omega = 2.0;
        let f = |x: f64, y: f64| Complex::from_polar((-(x * x + y * y) / 2.0).exp(), omega * (x - y));
        let r = integrate_2d(&f, &spec);
        // Each factor is the Fourier transform sqrt(2π) exp(-Ω²/2).
        let want = 2.0 * PI * (-omega * omega).exp();
        assert!((r.value.re - want).abs() < 1e-10, "{} vs {want}", r.value.re);
        assert!(r.value.im.abs() < 1e-10);
    }

    #[test]
    fn regulated_ridge_is_finite_with_error_estimate() {
        let spec = QuadratureSpec::default_2d();
        let eps = 0.05;
        let f = |x: f64, y: f64| {
            let g = (-(x * x + y * y) / 2.0).exp();
            Complex::new(g, 0.0) / (Complex::new(x - y, -eps) * Complex::new(x - y, -eps))
        };
        let r = integrate_2d(&f, &spec);
        assert!(r.converged);
        assert!(r.value.re.is_finite() && r.value.im.is_finite());
        assert!(r.error > 0.0 && r.error < 1e-6);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::default_2d()
        };
        let f = |x: f64, y: f64| Complex::new(1.0, 0.0) / Complex::new(x - y, -1e-6);
        let r = integrate_2d(&f, &spec);
        assert!(!r.converged);
    }

    #[test]
    fn extrapolation_examples() {
        let c = Complex::new(0.3, -1.2);
        let constant: Vec<_> = [0.1, 0.05, 0.025].iter().map(|e| (*e, c)).collect();
        let x = extrapolate_epsilon(&constant, 2).unwrap();
        assert!((x.value - c).norm() < 1e-15);
        assert!(x.stability < 1e-15);

        let c1 = Complex::new(2.0, 0.5);
        let linear: Vec<_> = [0.1, 0.05, 0.025].iter().map(|e| (*e, c + c1 * *e)).collect();
        let x = extrapolate_epsilon(&linear, 2).unwrap();
        assert!((x.value - c).norm() < 1e-14);
        let x1 = extrapolate_epsilon(&linear, 1).unwrap();
        assert!((x1.value - c).norm() < 1e-14);
    }

    #[test]
    fn extrapolation_rejects_bad_levels() {
        let v = Complex::new(1.0, 0.0);
        assert!(extrapolate_epsilon(&[(0.1, v)], 1).is_err());
        assert!(extrapolate_epsilon(&[(0.05, v), (0.1, v)], 1).is_err());
        assert!(extrapolate_epsilon(&[(0.1, v), (0.0, v)], 1).is_err());
    }

    #[test]
    fn extrapolation_flags_instability() {
        // 1/ε blows up: successive orders disagree wildly.
        let seq: Vec<_> = [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|e: &f64| (*e, Complex::new(1.0 / e, 0.0)))
            .collect();
        let x = extrapolate_epsilon(&seq, 3).unwrap();
        assert!(matches!(x.check(1e-6), Err(Error::UnstableExtrapolation { .. })));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::<f64>::default().validate().is_ok());
        let bad = QuadratureSpec {
            half_width: 4.0,
            ..QuadratureSpec::default_2d()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec::default_2d().with_tolerances(0.0, 1e-6);
        assert!(bad.validate().is_err());
    }
}
