//! Permutation-symmetric states in the maximal-spin Dicke sector.
//!
//! Index `k` of the amplitude array is the Dicke state `|J, m = k - J⟩` quantized along z,
//! so `k` counts the qubits in `|↑⟩` (the +1 eigenstate of Z).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::numeric::{from_usize, inner, lit, ln_binomials, norm_sqr, Real};
use crate::tridiag::TridiagonalOperator;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricState<T> {
    n: usize,
    amps: Vec<LogComplex<T>>,
}

pub(crate) fn check_even(n: usize) -> Result<()> {
    if n == 0 || n % 2 == 1 {
        Err(Error::OddQubitCount(n))
    } else {
        Ok(())
    }
}

impl<T: Real> SymmetricState<T> {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// `J = N/2`
    pub fn spin(&self) -> T {
        from_usize::<T>(self.n) / lit(2.0)
    }

    pub fn amplitudes(&self) -> &[LogComplex<T>] {
        &self.amps
    }

    pub fn amplitude(&self, k: usize) -> LogComplex<T> {
        self.amps[k]
    }

    /// Linear-scale amplitudes; magnitudes below the scalar's range flush to zero.
    pub fn to_linear(&self) -> Vec<Complex<T>> {
        self.amps.iter().map(|a| a.to_complex()).collect()
    }

    /// Normalize a linear amplitude vector without touching its global phase.
    pub fn from_linear(n: usize, v: Vec<Complex<T>>) -> Result<Self> {
        check_even(n)?;
        if v.len() != n + 1 {
            return Err(Error::LengthMismatch { expected: n + 1, got: v.len() });
        }
        let nrm = norm_sqr(&v);
        if nrm == T::zero() || !nrm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let s = nrm.sqrt().recip();
        Ok(Self { n, amps: v.into_iter().map(|c| LogComplex::from_complex(c * s)).collect() })
    }

    /// Normalize log-domain amplitudes without touching the global phase.
    pub fn from_log(n: usize, amps: Vec<LogComplex<T>>) -> Result<Self> {
        check_even(n)?;
        if amps.len() != n + 1 {
            return Err(Error::LengthMismatch { expected: n + 1, got: amps.len() });
        }
        let ln = log_norm_sqr(&amps);
        if ln == T::neg_infinity() || !ln.is_finite() {
            return Err(Error::ZeroVector);
        }
        let half = ln / lit(2.0);
        Ok(Self { n, amps: amps.into_iter().map(|a| a.scale_log(-half)).collect() })
    }

    /// `ln Σ|c_k|²`
    pub fn log_norm_sqr(&self) -> T {
        log_norm_sqr(&self.amps)
    }

    pub fn norm(&self) -> T {
        (self.log_norm_sqr() / lit(2.0)).exp()
    }

    /// Same state with the largest amplitude (first on ties) made real positive.
    pub fn canonical(&self) -> Self {
        let mut best = 0;
        for (k, a) in self.amps.iter().enumerate() {
            if a.log_mag > self.amps[best].log_mag {
                best = k;
            }
        }
        let ph = self.amps[best].phase;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(k, a)| if k == best { LogComplex::new(a.log_mag, T::zero()) } else { LogComplex::new(a.log_mag, a.phase - ph) })
            .collect();
        Self { n: self.n, amps }
    }

    /// Multiply amplitude k by `exp(i·f(k))`.
    pub fn with_phases(&self, f: impl Fn(usize) -> T) -> Self {
        let amps = self.amps.iter().enumerate().map(|(k, a)| if a.is_zero() { *a } else { LogComplex::new(a.log_mag, a.phase + f(k)) }).collect();
        Self { n: self.n, amps }
    }
}

fn log_norm_sqr<T: Real>(amps: &[LogComplex<T>]) -> T {
    let mut l: Vec<T> = amps.iter().map(|a| a.log_norm_sqr()).collect();
    l.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    crate::numeric::log_sum_exp(&l)
}

/// Validated constructor: renormalizes and fixes the global phase.
pub fn make_state<T: Real>(n: usize, amplitudes: Vec<LogComplex<T>>) -> Result<SymmetricState<T>> {
    check_even(n)?;
    if amplitudes.len() != n + 1 {
        return Err(Error::LengthMismatch { expected: n + 1, got: amplitudes.len() });
    }
    let ln = log_norm_sqr(&amplitudes);
    if ln == T::neg_infinity() {
        return Err(Error::ZeroVector);
    }
    let defect = (ln.exp() - T::one()).abs();
    if !(defect <= lit(1e-6)) {
        return Err(Error::NotNormalized(defect.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(SymmetricState::from_log(n, amplitudes)?.canonical())
}

/// Spin coherent state: every qubit in `e^{-iφ/2}cos(θ/2)|↑⟩ + e^{iφ/2}sin(θ/2)|↓⟩`.
///
/// `θ = 0` is `|↑…↑⟩` (the +Z pole, m = +J). At the poles φ is ignored.
pub fn coherent_state<T: Real>(n: usize, theta: T, phi: T) -> Result<SymmetricState<T>> {
    check_even(n)?;
    let lb = ln_binomials::<T>(n);
    let half: T = lit(0.5);
    let (s, c) = (theta * half).sin_cos();
    let tiny = T::epsilon();
    let (c, s) = (if c.abs() < tiny { T::zero() } else { c }, if s.abs() < tiny { T::zero() } else { s });
    let pole = c == T::zero() || s == T::zero();
    let phi = if pole { T::zero() } else { phi };
    let (lc, ls) = (c.abs().ln(), s.abs().ln());
    let j = from_usize::<T>(n) * half;
    let pi = T::PI();
    let amps = (0..=n)
        .map(|k| {
            let up = k;
            let dn = n - k;
            let lup = if up == 0 { T::zero() } else { from_usize::<T>(up) * lc };
            let ldn = if dn == 0 { T::zero() } else { from_usize::<T>(dn) * ls };
            let mut ph = -phi * (from_usize::<T>(k) - j);
            if c < T::zero() && up % 2 == 1 {
                ph += pi;
            }
            if s < T::zero() && dn % 2 == 1 {
                ph += pi;
            }
            LogComplex::new(lb[k] * half + lup + ldn, ph)
        })
        .collect();
    // absorbs the rounding of the log-binomials at large N
    SymmetricState::from_log(n, amps)
}

/// `⟨bra|ket⟩` accumulated in the log domain.
///
/// A result below the rounding floor of the sum (`2·len·ε·Σ|terms|`) carries no
/// information and is returned as exact zero, so antipodal coherent states are orthogonal.
pub fn overlap<T: Real>(bra: &SymmetricState<T>, ket: &SymmetricState<T>) -> Result<LogComplex<T>> {
    if bra.n != ket.n {
        return Err(Error::DimensionMismatch(bra.n, ket.n));
    }
    let terms: Vec<_> = bra.amps.iter().zip(&ket.amps).map(|(a, b)| a.conj().mul(*b)).collect();
    let s = LogComplex::sum(&terms);
    let mut mags: Vec<T> = terms.iter().map(|t| t.log_mag).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let floor = crate::numeric::log_sum_exp(&mags) + (T::epsilon() * from_usize::<T>(2 * terms.len())).ln();
    if s.log_mag < floor {
        return Ok(LogComplex::zero());
    }
    Ok(s)
}

/// `|⟨a|b⟩|²`
pub fn fidelity<T: Real>(a: &SymmetricState<T>, b: &SymmetricState<T>) -> Result<T> {
    Ok(overlap(a, b)?.log_norm_sqr().exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// The two axes completing a right-handed frame `(self, a, b)`.
    pub fn transverse(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn unit<T: Real>(self) -> (T, T, T) {
        let (o, z) = (T::one(), T::zero());
        match self {
            Axis::X => (o, z, z),
            Axis::Y => (z, o, z),
            Axis::Z => (z, z, o),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One of the six cardinal coherent states `|±X⟩, |±Y⟩, |±Z⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cardinal {
    pub sign: Sign,
    pub axis: Axis,
}

impl Cardinal {
    pub const fn new(sign: Sign, axis: Axis) -> Self {
        Self { sign, axis }
    }

    pub const ALL: [Cardinal; 6] = [
        Cardinal::new(Sign::Plus, Axis::X),
        Cardinal::new(Sign::Minus, Axis::X),
        Cardinal::new(Sign::Plus, Axis::Y),
        Cardinal::new(Sign::Minus, Axis::Y),
        Cardinal::new(Sign::Plus, Axis::Z),
        Cardinal::new(Sign::Minus, Axis::Z),
    ];

    pub fn antipode(self) -> Self {
        Self::new(self.sign.flip(), self.axis)
    }

    /// Bloch angles `(θ, φ)`.
    pub fn angles<T: Real>(self) -> (T, T) {
        let pi = T::PI();
        let h = pi / lit(2.0);
        match (self.sign, self.axis) {
            (Sign::Plus, Axis::X) => (h, T::zero()),
            (Sign::Minus, Axis::X) => (h, pi),
            (Sign::Plus, Axis::Y) => (h, h),
            (Sign::Minus, Axis::Y) => (h, -h),
            (Sign::Plus, Axis::Z) => (T::zero(), T::zero()),
            (Sign::Minus, Axis::Z) => (pi, T::zero()),
        }
    }

    pub fn state<T: Real>(self, n: usize) -> Result<SymmetricState<T>> {
        let (t, p) = self.angles();
        coherent_state(n, t, p)
    }

    pub fn label(self) -> &'static str {
        match (self.sign, self.axis) {
            (Sign::Plus, Axis::X) => "+X",
            (Sign::Minus, Axis::X) => "-X",
            (Sign::Plus, Axis::Y) => "+Y",
            (Sign::Minus, Axis::Y) => "-Y",
            (Sign::Plus, Axis::Z) => "+Z",
            (Sign::Minus, Axis::Z) => "-Z",
        }
    }
}

impl std::str::FromStr for Cardinal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Cardinal::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Format(format!("unknown cardinal direction {s:?}")))
    }
}

/// The six projections `⟨±σ|ψ⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapSextet<T> {
    pub a_plus_x: LogComplex<T>,
    pub a_minus_x: LogComplex<T>,
    pub a_plus_y: LogComplex<T>,
    pub a_minus_y: LogComplex<T>,
    pub a_plus_z: LogComplex<T>,
    pub a_minus_z: LogComplex<T>,
}

impl<T: Real> OverlapSextet<T> {
    pub fn get(&self, c: Cardinal) -> LogComplex<T> {
        match (c.sign, c.axis) {
            (Sign::Plus, Axis::X) => self.a_plus_x,
            (Sign::Minus, Axis::X) => self.a_minus_x,
            (Sign::Plus, Axis::Y) => self.a_plus_y,
            (Sign::Minus, Axis::Y) => self.a_minus_y,
            (Sign::Plus, Axis::Z) => self.a_plus_z,
            (Sign::Minus, Axis::Z) => self.a_minus_z,
        }
    }

    pub fn from_fn(mut f: impl FnMut(Cardinal) -> LogComplex<T>) -> Self {
        Self {
            a_plus_x: f(Cardinal::ALL[0]),
            a_minus_x: f(Cardinal::ALL[1]),
            a_plus_y: f(Cardinal::ALL[2]),
            a_minus_y: f(Cardinal::ALL[3]),
            a_plus_z: f(Cardinal::ALL[4]),
            a_minus_z: f(Cardinal::ALL[5]),
        }
    }

    /// Same sextet with every entry multiplied by `exp(i·phase)`.
    pub fn rephased(&self, phase: T) -> Self {
        Self::from_fn(|c| {
            let a = self.get(c);
            if a.is_zero() {
                a
            } else {
                LogComplex::new(a.log_mag, a.phase + phase)
            }
        })
    }
}

pub fn overlap_sextet<T: Real>(state: &SymmetricState<T>) -> OverlapSextet<T> {
    let mut err = None;
    let s = OverlapSextet::from_fn(|c| {
        let r = c.state(state.n).and_then(|b| overlap(&b, state));
        r.unwrap_or_else(|e| {
            err = Some(e);
            LogComplex::zero()
        })
    });
    debug_assert!(err.is_none());
    s
}

/// `cx·Ĵ_x + cy·Ĵ_y + cz·Ĵ_z` in the z-Dicke basis.
pub fn collective_generator<T: Real>(n: usize, cx: T, cy: T, cz: T) -> Result<TridiagonalOperator<T>> {
    check_even(n)?;
    if cx == T::zero() && cy == T::zero() && cz == T::zero() {
        return Err(Error::ZeroGenerator);
    }
    let j = from_usize::<T>(n) / lit(2.0);
    let half: T = lit(0.5);
    let diag = (0..=n).map(|k| cz * (from_usize::<T>(k) - j)).collect();
    let off = (0..n)
        .map(|k| {
            let m = from_usize::<T>(k) - j;
            let l = ((j - m) * (j + m + T::one())).sqrt();
            Complex::new(cx, -cy) * (l * half)
        })
        .collect();
    TridiagonalOperator::new(diag, off)
}

pub fn j_axis<T: Real>(n: usize, axis: Axis) -> Result<TridiagonalOperator<T>> {
    let (x, y, z) = axis.unit();
    collective_generator(n, x, y, z)
}

/// `exp(-i·angle·G)|ψ⟩`.
pub fn apply_rotation<T: Real>(state: &SymmetricState<T>, generator: &TridiagonalOperator<T>, angle: T) -> Result<SymmetricState<T>> {
    if generator.dim() != state.dim() {
        return Err(Error::DimensionMismatch(generator.dim(), state.dim()));
    }
    if generator.is_diagonal() {
        let d = generator.diag.clone();
        return Ok(state.with_phases(|k| -angle * d[k]));
    }
    let v = generator.exp_apply(&state.to_linear(), angle)?;
    SymmetricState::from_linear(state.n, v)
}

/// `(⟨G⟩, ⟨G²⟩ − ⟨G⟩²)`
pub fn moments<T: Real>(state: &SymmetricState<T>, generator: &TridiagonalOperator<T>) -> Result<(T, T)> {
    let v = state.to_linear();
    let gv = generator.apply(&v)?;
    let mean = inner(&v, &gv).re;
    let var = norm_sqr(&gv) - mean * mean;
    Ok((mean, var))
}

/// `½⟨G₁G₂ + G₂G₁⟩ − ⟨G₁⟩⟨G₂⟩`
pub fn cross_covariance<T: Real>(state: &SymmetricState<T>, g1: &TridiagonalOperator<T>, g2: &TridiagonalOperator<T>) -> Result<T> {
    let v = state.to_linear();
    let a = g1.apply(&v)?;
    let b = g2.apply(&v)?;
    Ok(inner(&a, &b).re - inner(&v, &a).re * inner(&v, &b).re)
}

/// `Q(θ,φ) = |⟨θ,φ|ψ⟩|²` on a regular grid, θ ∈ [0, π], φ ∈ [0, 2π] (both inclusive).
#[derive(Clone, Debug)]
pub struct HusimiGrid<T> {
    pub thetas: Vec<T>,
    pub phis: Vec<T>,
    raw: Vec<T>,
    max: T,
}

impl<T: Real> HusimiGrid<T> {
    pub fn raw(&self, i: usize, j: usize) -> T {
        self.raw[i * self.phis.len() + j]
    }

    /// Max-normalized value.
    pub fn value(&self, i: usize, j: usize) -> T {
        if self.max > T::zero() {
            self.raw(i, j) / self.max
        } else {
            T::zero()
        }
    }

    pub fn max_raw(&self) -> T {
        self.max
    }

    /// Trapezoid quadrature of `∫ Q sinθ dθ dφ`.
    pub fn integral(&self) -> T {
        let (p, q) = (self.thetas.len(), self.phis.len());
        let dt = T::PI() / from_usize::<T>(p - 1);
        let dp = (T::PI() + T::PI()) / from_usize::<T>(q - 1);
        let half: T = lit(0.5);
        let mut acc = T::zero();
        for i in 0..p {
            let wi = if i == 0 || i == p - 1 { half } else { T::one() };
            let st = self.thetas[i].sin();
            for j in 0..q {
                let wj = if j == 0 || j == q - 1 { half } else { T::one() };
                acc += wi * wj * st * self.raw(i, j);
            }
        }
        acc * dt * dp
    }

    /// Grid points that are strict local maxima (φ periodic) above `frac` of the global maximum.
    pub fn local_maxima(&self, frac: T) -> Vec<(usize, usize)> {
        let (p, q) = (self.thetas.len(), self.phis.len());
        // the last φ column repeats the first
        let qq = q - 1;
        let mut out = Vec::new();
        for i in 0..p {
            for j in 0..qq {
                let v = self.raw(i, j);
                if v < frac * self.max {
                    continue;
                }
                let mut is_max = true;
                for di in [-1isize, 0, 1] {
                    for dj in [-1isize, 0, 1] {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let ii = i as isize + di;
                        if ii < 0 || ii >= p as isize {
                            continue;
                        }
                        let jj = (j as isize + dj).rem_euclid(qq as isize) as usize;
                        let w = self.raw(ii as usize, jj);
                        if w > v || (w == v && (di, dj) < (0, 0)) {
                            is_max = false;
                        }
                    }
                }
                if is_max {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub fn husimi<T: Real>(state: &SymmetricState<T>, p_theta: usize, q_phi: usize) -> Result<HusimiGrid<T>> {
    if p_theta < 2 || q_phi < 2 {
        return Err(Error::OutOfRange { what: "grid size", value: p_theta.min(q_phi) as f64 });
    }
    let n = state.n;
    let half: T = lit(0.5);
    let j = from_usize::<T>(n) * half;
    let lb = ln_binomials::<T>(n);
    let thetas: Vec<T> = (0..p_theta).map(|i| T::PI() * from_usize::<T>(i) / from_usize::<T>(p_theta - 1)).collect();
    let phis: Vec<T> = (0..q_phi).map(|i| (T::PI() + T::PI()) * from_usize::<T>(i) / from_usize::<T>(q_phi - 1)).collect();
    let mut raw = vec![T::zero(); p_theta * q_phi];
    for (i, &th) in thetas.iter().enumerate() {
        // real weights of ⟨θ,0|k⟩ times ψ_k, kept relative to their maximum
        let (s, c) = (th * half).sin_cos();
        let (lc, ls) = (c.abs().ln(), s.abs().ln());
        let logs: Vec<T> = (0..=n)
            .map(|k| {
                let a = state.amps[k];
                if a.is_zero() {
                    return T::neg_infinity();
                }
                let up = if k == 0 { T::zero() } else { from_usize::<T>(k) * lc };
                let dn = if k == n { T::zero() } else { from_usize::<T>(n - k) * ls };
                lb[k] * half + up + dn + a.log_mag
            })
            .collect();
        let mx = logs.iter().copied().fold(T::neg_infinity(), T::max);
        if mx == T::neg_infinity() {
            continue;
        }
        let w: Vec<Complex<T>> = (0..=n)
            .map(|k| {
                let a = state.amps[k];
                let sgn = if c < T::zero() && k % 2 == 1 { T::PI() } else { T::zero() };
                Complex::from_polar((logs[k] - mx).exp(), a.phase + sgn)
            })
            .collect();
        for (jj, &ph) in phis.iter().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (k, wk) in w.iter().enumerate() {
                acc += wk * Complex::from_polar(T::one(), ph * (from_usize::<T>(k) - j));
            }
            raw[i * q_phi + jj] = acc.norm_sqr() * (mx + mx).exp();
        }
    }
    let max = raw.iter().copied().fold(T::zero(), T::max);
    Ok(HusimiGrid { thetas, phis, raw, max })
}
