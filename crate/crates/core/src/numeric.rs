//! Scalar trait and small log-domain helpers shared by every module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in the scalar type")
}

#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("integer representable in the scalar type")
}

/// `ln(k!)` for `k = 0..=n`.
pub fn ln_factorials<T: Real>(n: usize) -> Vec<T> {
    // accumulate in f64 so f32 builds keep the same table quality
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    out.push(T::zero());
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(lit(acc));
    }
    out
}

/// `ln C(n, k)` for `k = 0..=n`.
pub fn ln_binomials<T: Real>(n: usize) -> Vec<T> {
    let lf = ln_factorials::<f64>(n);
    (0..=n).map(|k| lit(lf[n] - lf[k] - lf[n - k])).collect()
}

/// Stable `ln Σ exp(x_i)`; empty input or all `-inf` gives `-inf`.
pub fn log_sum_exp<T: Real>(xs: &[T]) -> T {
    let mx = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if mx == T::neg_infinity() {
        return mx;
    }
    if mx == T::infinity() {
        return mx;
    }
    let s = pairwise_sum(&xs.iter().map(|&x| (x - mx).exp()).collect::<Vec<_>>());
    mx + s.ln()
}

/// Fixed-order pairwise summation, deterministic for a given input order.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        n if n <= 8 => xs.iter().fold(T::zero(), |a, &b| a + b),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

pub fn pairwise_sum_c<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    match xs.len() {
        0 => Complex::new(T::zero(), T::zero()),
        1 => xs[0],
        n if n <= 8 => xs.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum_c(l) + pairwise_sum_c(r)
        }
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_phase<T: Real>(p: T) -> T {
    if !p.is_finite() {
        return T::zero();
    }
    let pi = T::PI();
    let tau = pi + pi;
    if p > -pi && p <= pi {
        return p;
    }
    let mut r = p % tau;
    if r <= -pi {
        r += tau;
    } else if r > pi {
        r -= tau;
    }
    r
}

/// `Σ|v_k|²` summed smallest first.
pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    let mut mags: Vec<T> = v.iter().map(|c| c.norm_sqr()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    mags.iter().fold(T::zero(), |a, &b| a + b)
}

/// `⟨a|b⟩ = Σ conj(a_k) b_k`.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    let terms: Vec<Complex<T>> = a.iter().zip(b).map(|(x, y)| x.conj() * y).collect();
    pairwise_sum_c(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_small() {
        let lf = ln_factorials::<f64>(5);
        assert!((lf[5] - 120f64.ln()).abs() < 1e-14);
        let lb = ln_binomials::<f64>(6);
        assert!((lb[3] - 20f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn lse_handles_infinities() {
        assert_eq!(log_sum_exp::<f64>(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn wrap() {
        let pi = std::f64::consts::PI;
        assert_eq!(wrap_phase(pi), pi);
        assert!((wrap_phase(-pi) - pi).abs() < 1e-15);
        assert!((wrap_phase(3.0 * pi) - pi).abs() < 1e-12);
        assert!((wrap_phase(0.5 + 4.0 * pi) - 0.5).abs() < 1e-12);
    }
}
