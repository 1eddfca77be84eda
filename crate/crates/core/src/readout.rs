//! Twist-echo readout: prepare with one-axis twisting, kick, untwist, rotate the target direction
//! onto +z and project on the top Dicke state.
//!
//! Two calibrations are offered. `PaperLiteral` measures the fringe on the untwisted coherent
//! state itself, where the first-order response vanishes by symmetry, so it reports a degenerate
//! gain. `AnalyticGain` measures the first-order response on a synthetic reference state
//! `r|sσ⟩ + √(1-r²)·e^{iη}|sσ, one flip⟩` at `r = ½`, differentiated in `r`, with `η` chosen so the
//! response is real and positive.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{lit, Real};
use crate::protocols::initial_state;
use crate::state::{collective_generator, j_axis, Axis, Cardinal, OverlapSextet, Sign};
use crate::logc::LogComplex;
use crate::tridiag::TridiagonalOperator;

const MAX_KICK: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalibrationMode {
    PaperLiteral,
    AnalyticGain,
}

impl std::str::FromStr for CalibrationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "paper-literal" | "literal" => Ok(CalibrationMode::PaperLiteral),
            "analytic-gain" | "analytic" => Ok(CalibrationMode::AnalyticGain),
            _ => Err(Error::Format(format!("unknown calibration mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadoutPlan<T> {
    pub n_qubits: usize,
    pub chi_t: T,
    pub kick_angle: T,
    pub target: Cardinal,
    pub analysis_phases: Vec<T>,
    /// 0 means exact probabilities
    pub shots: u64,
    pub seed: u64,
}

impl<T: Real> ReadoutPlan<T> {
    pub fn new(n_qubits: usize, chi_t: T, kick_angle: T, target: Cardinal) -> Self {
        Self { n_qubits, chi_t, kick_angle, target, analysis_phases: vec![T::zero(), T::FRAC_PI_2()], shots: 0, seed: 0 }
    }

    pub fn with_shots(mut self, shots: u64, seed: u64) -> Self {
        self.shots = shots;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        crate::state::check_even(self.n_qubits)?;
        check_kick(self.kick_angle)?;
        if !self.chi_t.is_finite() {
            return Err(Error::OutOfRange { what: "chi_t", value: f64::NAN });
        }
        Ok(())
    }
}

fn check_kick<T: Real>(theta: T) -> Result<()> {
    if !(theta > T::zero() && theta <= lit(MAX_KICK)) {
        return Err(Error::OutOfRange { what: "kick angle (0, 0.3]", value: theta.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationGain<T> {
    pub a: T,
    pub b: T,
    pub mode: CalibrationMode,
}

type Vector<T> = Vec<Complex<T>>;

/// One rotation `exp(-i·angle·J_axis)`.
fn rotate<T: Real>(v: &[Complex<T>], n: usize, axis: Axis, angle: T) -> Result<Vector<T>> {
    j_axis::<T>(n, axis)?.exp_apply(v, angle)
}

/// The rotation sequence taking `|sσ⟩` to `|+Z⟩` (up to phase), rightmost first.
pub fn detection_sequence<T: Real>(target: Cardinal) -> Vec<(Axis, T)> {
    let h = T::FRAC_PI_2();
    let pi = T::PI();
    let plus = match target.axis {
        Axis::X => Some((Axis::Y, -h)),
        Axis::Y => Some((Axis::X, h)),
        Axis::Z => None,
    };
    let flip = match target.axis {
        Axis::Z => (Axis::Y, pi),
        _ => (Axis::Z, pi),
    };
    let mut seq = Vec::new();
    if target.sign == Sign::Minus {
        seq.push(flip);
    }
    seq.extend(plus);
    seq
}

/// `M_{sσ} v`.
pub fn apply_detection_map<T: Real>(v: &[Complex<T>], n: usize, target: Cardinal) -> Result<Vector<T>> {
    let mut out = v.to_vec();
    for (axis, angle) in detection_sequence::<T>(target) {
        out = rotate(&out, n, axis, angle)?;
    }
    Ok(out)
}

/// `M_{sσ}† v`.
pub fn apply_detection_map_inverse<T: Real>(v: &[Complex<T>], n: usize, target: Cardinal) -> Result<Vector<T>> {
    let mut out = v.to_vec();
    for (axis, angle) in detection_sequence::<T>(target).into_iter().rev() {
        out = rotate(&out, n, axis, -angle)?;
    }
    Ok(out)
}

/// Kick generator `s·(cos φ·Ĵ_β + sin φ·Ĵ_γ)` with `(σ, β, γ)` right-handed.
pub fn kick_generator<T: Real>(n: usize, target: Cardinal, phase: T) -> Result<TridiagonalOperator<T>> {
    let (beta, gamma) = target.axis.transverse();
    let s = target.sign.value::<T>();
    let mut c = [T::zero(); 3];
    c[beta as usize] = s * phase.cos();
    c[gamma as usize] = s * phase.sin();
    collective_generator(n, c[0], c[1], c[2])
}

fn oat<T: Real>(v: &[Complex<T>], chi_t: T) -> Vector<T> {
    let n = v.len() - 1;
    let j: T = lit(n as f64 / 2.0);
    v.iter()
        .enumerate()
        .map(|(k, a)| {
            let m = lit::<T>(k as f64) - j;
            a * Complex::from_polar(T::one(), -chi_t * m * m)
        })
        .collect()
}

/// Top-Dicke probability after kick (by `θ` at analysis phase `φ`) and detection, for an
/// arbitrary pre-kick vector in the untwisted frame.
fn echo_from<T: Real>(pre: &[Complex<T>], n: usize, chi_t: T, target: Cardinal, theta: T, phase: T) -> Result<T> {
    let twisted = oat(pre, chi_t);
    let kicked = if theta == T::zero() { twisted } else { kick_generator(n, target, phase)?.exp_apply(&twisted, theta)? };
    let back = oat(&kicked, -chi_t);
    let det = apply_detection_map(&back, n, target)?;
    let p = det[n].norm_sqr();
    Ok(p.max(T::zero()).min(T::one()))
}

/// Exact `P = |⟨+Z| M_{sσ} U† R(θ,φ) U |+X⟩|²`.
pub fn readout_probability<T: Real>(plan: &ReadoutPlan<T>, phase: T) -> Result<T> {
    crate::state::check_even(plan.n_qubits)?;
    if !(plan.kick_angle >= T::zero() && plan.kick_angle <= lit(MAX_KICK)) {
        return Err(Error::OutOfRange { what: "kick angle [0, 0.3]", value: plan.kick_angle.to_f64().unwrap_or(f64::NAN) });
    }
    let start = initial_state::<T>(plan.n_qubits)?.to_linear();
    echo_from(&start, plan.n_qubits, plan.chi_t, plan.target, plan.kick_angle, phase)
}

pub fn calibrate<T: Real>(n_qubits: usize, target: Cardinal, theta: T, mode: CalibrationMode) -> Result<CalibrationGain<T>> {
    crate::state::check_even(n_qubits)?;
    check_kick(theta)?;
    let gain = match mode {
        CalibrationMode::PaperLiteral => {
            let plan = ReadoutPlan::new(n_qubits, T::zero(), theta, target);
            let p0 = readout_probability(&plan, T::zero())?;
            let pp = readout_probability(&plan, T::PI())?;
            CalibrationGain { a: (p0 + pp) / lit(2.0), b: (p0 - pp) / lit(2.0), mode }
        }
        CalibrationMode::AnalyticGain => analytic_gain(n_qubits, target, theta)?,
    };
    if gain.b.abs() < lit(1e-12) || !gain.b.is_finite() {
        return Err(Error::DegenerateGain(gain.b.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(gain)
}

fn analytic_gain<T: Real>(n: usize, target: Cardinal, theta: T) -> Result<CalibrationGain<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut top = vec![zero; n + 1];
    top[n] = Complex::new(T::one(), T::zero());
    let mut flip = vec![zero; n + 1];
    flip[n - 1] = Complex::new(T::one(), T::zero());
    let ref_top = apply_detection_map_inverse(&top, n, target)?;
    let ref_flip = apply_detection_map_inverse(&flip, n, target)?;

    // choose η so ⟨sσ|(-iK)|flip⟩·e^{iη} is real positive
    let k = kick_generator::<T>(n, target, T::zero())?;
    let kf = k.apply(&ref_flip)?;
    let c: Complex<T> = ref_top.iter().zip(&kf).fold(zero, |a, (x, y)| a + x.conj() * y) * Complex::new(T::zero(), -T::one());
    let eta = if c.norm() > T::zero() { -c.arg() } else { T::zero() };
    let rot = Complex::from_polar(T::one(), eta);

    let response = |r: T| -> Result<T> {
        let s = (T::one() - r * r).sqrt();
        let v: Vector<T> = ref_top.iter().zip(&ref_flip).map(|(a, b)| a * r + b * rot * s).collect();
        let kicked = echo_from(&v, n, T::zero(), target, theta, T::zero())?;
        let bare = echo_from(&v, n, T::zero(), target, T::zero(), T::zero())?;
        Ok(kicked - bare)
    };
    let r0: T = lit(0.5);
    let h: T = lit(1e-4);
    let b = (response(r0 + h)? - response(r0 - h)?) / (h + h);

    let p0 = echo_from(&ref_top, n, T::zero(), target, theta, T::zero())?;
    let pp = echo_from(&ref_top, n, T::zero(), target, theta, T::PI())?;
    Ok(CalibrationGain { a: (p0 + pp) / lit(2.0), b, mode: CalibrationMode::AnalyticGain })
}

/// A single probability or its binomial frequency.
fn observe<T: Real>(p: T, shots: u64, rng: &mut ChaCha8Rng) -> Result<T> {
    if shots == 0 {
        return Ok(p);
    }
    let pf = p.to_f64().unwrap_or(0.0).clamp(0.0, 1.0);
    let d = Binomial::new(shots, pf).map_err(|e| Error::Format(e.to_string()))?;
    Ok(lit::<T>(d.sample(rng) as f64 / shots as f64))
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Two-phase quadrature estimate of `a_{sσ}`.
pub fn estimate_overlap<T: Real>(plan: &ReadoutPlan<T>, gain: &CalibrationGain<T>) -> Result<Complex<T>> {
    estimate_overlap_stream(plan, gain, 0)
}

fn estimate_overlap_stream<T: Real>(plan: &ReadoutPlan<T>, gain: &CalibrationGain<T>, stream: u64) -> Result<Complex<T>> {
    plan.validate()?;
    if gain.b.abs() < lit(1e-12) || !gain.b.is_finite() {
        return Err(Error::DegenerateGain(gain.b.to_f64().unwrap_or(f64::NAN)));
    }
    let mut rng = rng_for(plan.seed, stream);
    let p0 = observe(readout_probability(plan, T::zero())?, plan.shots, &mut rng)?;
    let p1 = observe(readout_probability(plan, T::FRAC_PI_2())?, plan.shots, &mut rng)?;
    Ok(Complex::new((p0 - gain.a) / gain.b, -(p1 - gain.a) / gain.b))
}

/// Binomial standard deviation of each quadrature, `√(P(1-P)/shots)/|B|`.
pub fn quadrature_sigma<T: Real>(plan: &ReadoutPlan<T>, gain: &CalibrationGain<T>) -> Result<Complex<T>> {
    if plan.shots == 0 {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let s = |p: T| ((p * (T::one() - p)).max(T::zero()) / lit(plan.shots as f64)).sqrt() / gain.b.abs();
    Ok(Complex::new(s(readout_probability(plan, T::zero())?), s(readout_probability(plan, T::FRAC_PI_2())?)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SextetEstimate<T> {
    /// in `Cardinal::ALL` order
    pub estimates: [Complex<T>; 6],
    pub sigmas: [Complex<T>; 6],
    pub gains: [CalibrationGain<T>; 6],
}

impl<T: Real> SextetEstimate<T> {
    pub fn sextet(&self) -> OverlapSextet<T> {
        OverlapSextet::from_fn(|c| {
            let i = Cardinal::ALL.iter().position(|x| *x == c).unwrap_or(0);
            LogComplex::from_complex(self.estimates[i])
        })
    }
}

/// All six targets, analytic-gain calibrated; target `i` draws from stream `i` of the seed.
pub fn estimate_sextet<T: Real>(n_qubits: usize, chi_t: T, theta: T, shots: u64, seed: u64) -> Result<SextetEstimate<T>> {
    estimate_sextet_with(n_qubits, chi_t, theta, shots, seed, CalibrationMode::AnalyticGain)
}

pub fn estimate_sextet_with<T: Real>(n_qubits: usize, chi_t: T, theta: T, shots: u64, seed: u64, mode: CalibrationMode) -> Result<SextetEstimate<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut estimates = [zero; 6];
    let mut sigmas = [zero; 6];
    let mut gains = [CalibrationGain { a: T::zero(), b: T::zero(), mode }; 6];
    for (i, &target) in Cardinal::ALL.iter().enumerate() {
        let plan = ReadoutPlan::new(n_qubits, chi_t, theta, target).with_shots(shots, seed);
        let gain = calibrate(n_qubits, target, theta, mode)?;
        estimates[i] = estimate_overlap_stream(&plan, &gain, i as u64)?;
        sigmas[i] = quadrature_sigma(&plan, &gain)?;
        gains[i] = gain;
    }
    Ok(SextetEstimate { estimates, sigmas, gains })
}
