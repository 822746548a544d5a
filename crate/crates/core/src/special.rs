//! Special functions: complementary error function and the large-argument
//! polygamma expansions used to sum the thermal image tail.

use num_complex::Complex;

use crate::scalar::Real;

/// Complementary error function.
///
/// Power series for |x| < 1 (positive-term form, no cancellation inside the
/// sum) and the Laplace continued fraction beyond, evaluated with modified
/// Lentz iteration until the update is below machine epsilon.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let two = T::lit(2.0);
    if x < T::zero() {
        return two - erfc(-x);
    }
    if x < T::one() {
        T::one() - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// Error function, `1 - erfc(x)` with the series used directly for small x.
pub fn erf<T: Real>(x: T) -> T {
    if x.abs() < T::one() {
        erf_series(x)
    } else {
        T::one() - erfc(x)
    }
}

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!
fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0usize;
    while term.abs() > T::epsilon() * sum.abs() && n < 200 {
        n += 1;
        term = term * T::lit(2.0) * x2 / T::from_usize(2 * n + 1).unwrap();
        sum = sum + term;
    }
    T::FRAC_2_SQRT_PI() * (-x2).exp() * sum
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfc_continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let half = T::lit(0.5);
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for k in 1..2000usize {
        let a = T::from_usize(k).unwrap() * half;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    (-x * x).exp() * (T::FRAC_2_SQRT_PI() * T::lit(0.5)) / f
}

// Even Bernoulli numbers B_2 .. B_18.
const BERNOULLI_EVEN: [f64; 9] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
];

/// A value together with a bound on the truncation error of the series
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded<V, T> {
    pub value: V,
    pub bound: T,
}

/// Digamma function from its asymptotic expansion,
/// `ln w - 1/(2w) - sum B_2k / (2k w^2k)`, with eight Bernoulli terms.
///
/// Intended for `Re w` of order ten or more. The returned bound is the
/// magnitude of the first omitted term, doubled to cover the sector factor
/// for complex arguments.
pub fn digamma_asymptotic<T: Real>(w: Complex<T>) -> Bounded<Complex<T>, T> {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv2;
    let mut series = Complex::new(T::zero(), T::zero());
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        let two_k = T::from_usize(2 * (k + 1)).unwrap();
        series = series + pow * (T::lit(*b) / two_k);
        pow = pow * inv2;
    }
    let value = w.ln() - inv * T::lit(0.5) - series;
    let bound = T::lit(2.0) * T::lit(BERNOULLI_EVEN[8].abs() / 18.0) * pow.norm();
    Bounded { value, bound }
}

/// Trigamma function from `1/w + 1/(2w^2) + sum B_2k / w^(2k+1)`.
pub fn trigamma_asymptotic<T: Real>(w: Complex<T>) -> Bounded<Complex<T>, T> {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut series = Complex::new(T::zero(), T::zero());
    for b in BERNOULLI_EVEN.iter().take(8) {
        series = series + pow * T::lit(*b);
        pow = pow * inv2;
    }
    let value = inv + inv2 * T::lit(0.5) + series;
    let bound = T::lit(2.0) * T::lit(BERNOULLI_EVEN[8].abs()) * pow.norm();
    Bounded { value, bound }
}
