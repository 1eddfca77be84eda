//! Complex numbers stored as (log-magnitude, phase).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::numeric::{lit, pairwise_sum_c, wrap_phase, Real};

/// `exp(log_mag) * exp(i * phase)`. Zero is `log_mag = -inf` with phase 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex<T> {
    pub log_mag: T,
    pub phase: T,
}

impl<T: Real> LogComplex<T> {
    pub fn new(log_mag: T, phase: T) -> Self {
        if log_mag == T::neg_infinity() || log_mag.is_nan() {
            return Self::zero();
        }
        Self { log_mag, phase: wrap_phase(phase) }
    }

    pub fn zero() -> Self {
        Self { log_mag: T::neg_infinity(), phase: T::zero() }
    }

    pub fn one() -> Self {
        Self { log_mag: T::zero(), phase: T::zero() }
    }

    pub fn from_real(x: T) -> Self {
        Self::from_complex(Complex::new(x, T::zero()))
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        let m = z.norm();
        if m == T::zero() {
            Self::zero()
        } else {
            Self::new(m.ln(), z.arg())
        }
    }

    pub fn to_complex(self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == T::neg_infinity()
    }

    pub fn abs(self) -> T {
        self.log_mag.exp()
    }

    /// `ln|z|²`
    pub fn log_norm_sqr(self) -> T {
        self.log_mag + self.log_mag
    }

    pub fn conj(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mag, -self.phase)
    }

    pub fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.log_mag + o.log_mag, self.phase + o.phase)
    }

    pub fn div(self, o: Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.log_mag - o.log_mag, self.phase - o.phase)
    }

    /// `z^n` with `0^0 = 1`.
    pub fn powi(self, n: u32) -> Self {
        if n == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return Self::zero();
        }
        let nf: T = lit(n as f64);
        Self::new(self.log_mag * nf, self.phase * nf)
    }

    pub fn scale_log(self, dl: T) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mag + dl, self.phase)
    }

    /// Sum of many values without leaving the log domain.
    pub fn sum(terms: &[Self]) -> Self {
        let mx = terms.iter().map(|t| t.log_mag).fold(T::neg_infinity(), T::max);
        if mx == T::neg_infinity() {
            return Self::zero();
        }
        let lin: Vec<Complex<T>> = terms
            .iter()
            .filter(|t| !t.is_zero())
            .map(|t| Complex::from_polar((t.log_mag - mx).exp(), t.phase))
            .collect();
        Self::from_complex(pairwise_sum_c(&lin)).scale_log(mx)
    }
}

impl<T: Real> Default for LogComplex<T> {
    fn default() -> Self {
        Self::zero()
    }
}
