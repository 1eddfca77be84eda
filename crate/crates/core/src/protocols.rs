//! State preparation: one-axis and two-axis twisting, kittens, generalized GHZ and Dicke states,
//! and the best-squeezing search.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::coherent::CoherentSuperposition;
use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::metrics::squeezing_parameter;
use crate::numeric::{from_usize, lit, Real};
use crate::state::{check_even, coherent_state, SymmetricState};
use crate::tridiag::{Spectral, TridiagonalOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Oat,
    Tact,
}

impl std::str::FromStr for Protocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oat" => Ok(Protocol::Oat),
            "tact" => Ok(Protocol::Tact),
            _ => Err(Error::Format(format!("unknown protocol {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionSpec<T> {
    pub protocol: Protocol,
    pub chi_t: T,
    pub n_qubits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezingOptimum<T> {
    pub t_best: T,
    pub xi2_best: T,
}

/// The x-polarized coherent state every protocol starts from.
pub fn initial_state<T: Real>(n: usize) -> Result<SymmetricState<T>> {
    coherent_state(n, T::FRAC_PI_2(), T::zero())
}

/// `exp(-iχt Ĵ_z²)`: amplitude k picks up `exp(-iχt (k-J)²)`.
pub fn evolve_oat<T: Real>(state: &SymmetricState<T>, chi_t: T) -> SymmetricState<T> {
    let j = state.spin();
    state.with_phases(|k| {
        let m = from_usize::<T>(k) - j;
        -chi_t * m * m
    })
}

/// `Ĵ_zĴ_y + Ĵ_yĴ_z`; zero diagonal, `⟨m+1|G|m⟩ = -i(2m+1)·√((J-m)(J+m+1))/2`.
pub fn tact_generator<T: Real>(n: usize) -> Result<TridiagonalOperator<T>> {
    check_even(n)?;
    let j = from_usize::<T>(n) / lit(2.0);
    let half: T = lit(0.5);
    let off = (0..n)
        .map(|k| {
            let m = from_usize::<T>(k) - j;
            let l = ((j - m) * (j + m + T::one())).sqrt();
            Complex::new(T::zero(), -(m + m + T::one()) * l * half)
        })
        .collect();
    TridiagonalOperator::new(vec![T::zero(); n + 1], off)
}

/// Two-axis twisting with one cached eigen-decomposition of the generator.
#[derive(Clone, Debug)]
pub struct TactEvolver<T> {
    n: usize,
    spectral: Spectral<T>,
}

impl<T: Real> TactEvolver<T> {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { n, spectral: tact_generator(n)?.spectral()? })
    }

    pub fn evolve(&self, state: &SymmetricState<T>, chi_t: T) -> Result<SymmetricState<T>> {
        if state.n_qubits() != self.n {
            return Err(Error::DimensionMismatch(self.n, state.n_qubits()));
        }
        SymmetricState::from_linear(self.n, self.spectral.exp_apply(&state.to_linear(), chi_t))
    }

    /// Evolve the same initial state to many times, projecting onto the eigenbasis once.
    pub fn trajectory(&self, state: &SymmetricState<T>, times: &[T]) -> Result<Vec<SymmetricState<T>>> {
        let w = self.spectral.project(&state.to_linear());
        times
            .iter()
            .map(|&t| SymmetricState::from_linear(self.n, self.spectral.reconstruct(&self.spectral.evolve_projected(&w, t))))
            .collect()
    }

    pub fn spectral(&self) -> &Spectral<T> {
        &self.spectral
    }
}

pub fn evolve_tact<T: Real>(state: &SymmetricState<T>, chi_t: T) -> Result<SymmetricState<T>> {
    TactEvolver::new(state.n_qubits())?.evolve(state, chi_t)
}

pub fn evolve<T: Real>(spec: &EvolutionSpec<T>) -> Result<SymmetricState<T>> {
    let s = initial_state(spec.n_qubits)?;
    match spec.protocol {
        Protocol::Oat => Ok(evolve_oat(&s, spec.chi_t)),
        Protocol::Tact => evolve_tact(&s, spec.chi_t),
    }
}

/// The n-head kitten as a superposition of `n` equatorial coherent states (rotated GHZ pairs).
pub fn kitten_superposition<T: Real>(n_qubits: usize, n_heads: usize) -> Result<CoherentSuperposition<T>> {
    check_even(n_qubits)?;
    if n_heads < 2 || n_heads % 2 == 1 {
        return Err(Error::OutOfRange { what: "kitten heads (even, >= 2)", value: n_heads as f64 });
    }
    let pi = T::PI();
    let nh = from_usize::<T>(n_heads);
    let h = T::FRAC_PI_2();
    // √(2/n) e^{-iπ/4} prefactor times the 1/√2 of each GHZ pair
    let lw = (T::one() / nh).ln() / lit(2.0);
    let mut comps = Vec::with_capacity(n_heads);
    for s in 0..n_heads / 2 {
        let sf = from_usize::<T>(s);
        let phase = -pi / lit(4.0) + pi * sf * sf / nh;
        let phi_s = (pi + pi) * sf / nh;
        let theta_s = (pi * sf + pi * nh / lit(4.0)) % (pi + pi);
        comps.push((LogComplex::new(lw, phase), h, phi_s));
        comps.push((LogComplex::new(lw, phase + theta_s), h, phi_s + pi));
    }
    CoherentSuperposition::new(n_qubits, comps)
}

pub fn kitten_state<T: Real>(n_qubits: usize, n_heads: usize) -> Result<SymmetricState<T>> {
    kitten_superposition(n_qubits, n_heads)?.to_state()
}

/// `(|0,0⟩ + |2ε,0⟩)/√K`.
pub fn generalized_ghz<T: Real>(n_qubits: usize, two_epsilon: T) -> Result<CoherentSuperposition<T>> {
    if !(two_epsilon >= T::zero() && two_epsilon <= T::PI()) {
        return Err(Error::OutOfRange { what: "2ε", value: two_epsilon.to_f64().unwrap_or(f64::NAN) });
    }
    CoherentSuperposition::new(n_qubits, vec![(LogComplex::one(), T::zero(), T::zero()), (LogComplex::one(), two_epsilon, T::zero())])?.normalized()
}

/// `|J, m⟩`.
pub fn dicke_state<T: Real>(n_qubits: usize, m: i64) -> Result<SymmetricState<T>> {
    check_even(n_qubits)?;
    let j = (n_qubits / 2) as i64;
    if m.abs() > j {
        return Err(Error::OutOfRange { what: "m", value: m as f64 });
    }
    let mut v = vec![LogComplex::zero(); n_qubits + 1];
    v[(m + j) as usize] = LogComplex::one();
    SymmetricState::from_log(n_qubits, v)
}

/// Leading-order optimal twisting time.
pub fn asymptotic_t_best<T: Real>(n: usize, protocol: Protocol) -> T {
    let nf = from_usize::<T>(n);
    match protocol {
        Protocol::Oat => lit::<T>(3f64.powf(1.0 / 6.0)) * nf.powf(lit(-2.0 / 3.0)),
        Protocol::Tact => (nf + nf).ln() / (nf + nf),
    }
}

/// `χt ↦ ξ²` for one protocol and size; TACT reuses one decomposition.
pub struct SqueezingCurve<T> {
    start: SymmetricState<T>,
    protocol: Protocol,
    tact: Option<(TactEvolver<T>, Vec<Complex<T>>)>,
}

impl<T: Real> SqueezingCurve<T> {
    pub fn new(n: usize, protocol: Protocol) -> Result<Self> {
        let start = initial_state(n)?;
        let tact = match protocol {
            Protocol::Oat => None,
            Protocol::Tact => {
                let ev = TactEvolver::new(n)?;
                let w = ev.spectral.project(&start.to_linear());
                Some((ev, w))
            }
        };
        Ok(Self { start, protocol, tact })
    }

    pub fn state(&self, chi_t: T) -> Result<SymmetricState<T>> {
        match (&self.protocol, &self.tact) {
            (Protocol::Tact, Some((ev, w))) => {
                SymmetricState::from_linear(self.start.n_qubits(), ev.spectral.reconstruct(&ev.spectral.evolve_projected(w, chi_t)))
            }
            _ => Ok(evolve_oat(&self.start, chi_t)),
        }
    }

    pub fn xi2(&self, chi_t: T) -> Result<T> {
        squeezing_parameter(&self.state(chi_t)?)
    }
}

/// Grid scan over `(0, 4·t_guess]` followed by golden-section refinement.
pub fn find_best_squeezing<T: Real>(n_qubits: usize, protocol: Protocol) -> Result<SqueezingOptimum<T>> {
    if n_qubits < 4 {
        return Err(Error::OutOfRange { what: "N (>= 4)", value: n_qubits as f64 });
    }
    let curve = SqueezingCurve::new(n_qubits, protocol)?;
    let guess = asymptotic_t_best::<T>(n_qubits, protocol);
    let points = 200;
    let hi = guess * lit(4.0);
    let grid: Vec<T> = (1..=points).map(|i| hi * from_usize::<T>(i) / from_usize::<T>(points)).collect();
    let vals: Vec<T> = grid.iter().map(|&t| curve.xi2(t).unwrap_or(T::infinity())).collect();
    let mut best = 0;
    for i in 1..points {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    let lo_t = if best == 0 { T::zero() } else { grid[best - 1] };
    let hi_t = grid[(best + 1).min(points - 1)];
    let f = |t: T| curve.xi2(t).unwrap_or(T::infinity());
    let (t, v) = golden_section(f, lo_t, hi_t, lit(1e-6));
    let (t, v) = if v <= vals[best] { (t, v) } else { (grid[best], vals[best]) };
    Ok(SqueezingOptimum { t_best: t, xi2_best: v })
}

/// Minimize a unimodal function on `[a, b]` to relative tolerance `rtol` in the argument.
pub fn golden_section<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, rtol: T) -> (T, T) {
    let g: T = lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= rtol * (a.abs() + b.abs()) / lit(2.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Earliest `χt` in `(0, t_best]` where `ξ²` drops to `target` (bisection on the monotone branch).
pub fn time_for_xi2<T: Real>(n_qubits: usize, protocol: Protocol, target: T) -> Result<T> {
    let opt = find_best_squeezing::<T>(n_qubits, protocol)?;
    if target < opt.xi2_best || target >= T::one() {
        return Err(Error::OutOfRange { what: "target squeezing", value: target.to_f64().unwrap_or(f64::NAN) });
    }
    let curve = SqueezingCurve::new(n_qubits, protocol)?;
    let (mut lo, mut hi) = (T::zero(), opt.t_best);
    for _ in 0..200 {
        let mid = (lo + hi) / lit(2.0);
        if curve.xi2(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::epsilon() * hi * lit(4.0) {
            break;
        }
    }
    Ok((lo + hi) / lit(2.0))
}
