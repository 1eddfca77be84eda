//! Scalar diagnostics: stabilizer Rényi entropy (exact and estimated), squeezing and Bell
//! correlations.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::coherent::{exact_q, finish_sre, residue_tolerance, PauliClass};
use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::numeric::{from_usize, lit, ln_binomials, ln_factorials, log_sum_exp, pairwise_sum, Real};
use crate::state::{check_even, cross_covariance, j_axis, moments, overlap_sextet, Axis, Cardinal, OverlapSextet, Sign, SymmetricState};

pub const ORACLE_MAX_QUBITS: usize = 14;
pub const SYMMETRIC_MAX_QUBITS: usize = 512;

/// Per-configuration amplitudes `c_k / √C(N,k)` of the expanded statevector.
fn config_amplitudes<T: Real>(state: &SymmetricState<T>) -> Vec<Complex<T>> {
    let lb = ln_binomials::<T>(state.n_qubits());
    let h: T = lit(0.5);
    state.amplitudes().iter().zip(&lb).map(|(a, &l)| a.scale_log(-l * h).to_complex()).collect()
}

/// In-place Walsh–Hadamard transform (unnormalized).
fn walsh_hadamard<T: Real>(v: &mut [Complex<T>]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Exact `M_q` by summing over all `4^N` Pauli strings of the expanded `2^N` statevector.
///
/// Bit value 0 is `|↑⟩`. For each X-mask `x` the Z-mask sums are one Walsh–Hadamard transform
/// of `conj(ψ(b⊕x))·ψ(b)`.
pub fn sre_oracle_statevector<T: Real>(state: &SymmetricState<T>, q: T) -> Result<T> {
    let qi = exact_q(q)?;
    let n = state.n_qubits();
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::TooLarge { n, limit: ORACLE_MAX_QUBITS });
    }
    let b = config_amplitudes(state);
    let dim = 1usize << n;
    let psi: Vec<Complex<T>> = (0..dim).map(|i| b[n - (i as u32).count_ones() as usize]).collect();
    let mut partial = Vec::with_capacity(dim);
    let mut f = vec![Complex::new(T::zero(), T::zero()); dim];
    for x in 0..dim {
        for (i, fi) in f.iter_mut().enumerate() {
            *fi = psi[i ^ x].conj() * psi[i];
        }
        walsh_hadamard(&mut f);
        let terms: Vec<T> = f.iter().map(|e| e.norm_sqr().powi(qi as i32)).collect();
        partial.push(pairwise_sum(&terms));
    }
    let total = pairwise_sum(&partial);
    Ok(finish_sre(total.ln(), n, q))
}

/// Coefficients of `(1+x)^p (1-x)^r` when `minus_first` is false, `(x-1)^r (1+x)^p` otherwise.
fn block_poly<T: Real>(p: usize, r: usize, minus_first: bool) -> Vec<T> {
    let mut c = vec![T::one()];
    for _ in 0..p {
        let mut nx = vec![T::zero(); c.len() + 1];
        for (i, &v) in c.iter().enumerate() {
            nx[i] += v;
            nx[i + 1] += v;
        }
        c = nx;
    }
    for _ in 0..r {
        let mut nx = vec![T::zero(); c.len() + 1];
        for (i, &v) in c.iter().enumerate() {
            if minus_first {
                nx[i] -= v;
                nx[i + 1] += v;
            } else {
                nx[i] += v;
                nx[i + 1] -= v;
            }
        }
        c = nx;
    }
    c
}

fn minus_i_pow<T: Real>(k: usize) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    match k % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, -o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, o),
    }
}

fn realize<T: Real>(e: Complex<T>) -> Result<T> {
    if e.im.abs() > residue_tolerance::<T>() {
        return Err(Error::ImaginaryResidue(e.im.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(e.re)
}

/// `⟨ψ|P_rep|ψ⟩` from Dicke amplitudes.
///
/// With `a = n_x + n_y` flipped sites, `u` up-spins among them in the ket and `s` up-spins in
/// the Z/I block, the value is `(-i)^{n_y} Σ_{u,s} F_xy[u] F_zi[s] conj(b_{a-u+s}) b_{u+s}`,
/// where `F_xy`, `F_zi` are the coefficients of `(1+x)^{n_x}(1-x)^{n_y}` and
/// `(x-1)^{n_z}(1+x)^{n_i}`.
pub fn pauli_class_expectation<T: Real>(state: &SymmetricState<T>, class: PauliClass) -> Result<T> {
    let n = state.n_qubits();
    class.check(n)?;
    let b = config_amplitudes(state);
    let a = class.n_x + class.n_y;
    let fxy = block_poly::<T>(class.n_x, class.n_y, false);
    let fzi = block_poly::<T>(class.n_i, class.n_z, true);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (u, &fu) in fxy.iter().enumerate() {
        if fu == T::zero() {
            continue;
        }
        let mut inner = Complex::new(T::zero(), T::zero());
        for (s, &fs) in fzi.iter().enumerate() {
            inner += b[a - u + s].conj() * b[u + s] * fs;
        }
        acc += inner * fu;
    }
    realize(acc * minus_i_pow::<T>(class.n_y))
}

/// Exact `M_q` over Pauli classes with multinomial weights, `O(N⁴)` overall.
pub fn sre_exact_symmetric<T: Real>(state: &SymmetricState<T>, q: T) -> Result<T> {
    let qi = exact_q(q)?;
    let n = state.n_qubits();
    if n > SYMMETRIC_MAX_QUBITS {
        return Err(Error::TooLarge { n, limit: SYMMETRIC_MAX_QUBITS });
    }
    let b = config_amplitudes(state);
    let lf = ln_factorials::<T>(n);
    let two_q: T = from_usize(2 * qi as usize);
    let mut logs = Vec::new();
    for a in 0..=n {
        let bb = n - a;
        // h[nz][u] = Σ_s F_zi^{(nz)}[s] conj(b_{a-u+s}) b_{u+s}
        let mut h = vec![vec![Complex::new(T::zero(), T::zero()); a + 1]; bb + 1];
        for (nz, row) in h.iter_mut().enumerate() {
            let fzi = block_poly::<T>(bb - nz, nz, true);
            for (u, hu) in row.iter_mut().enumerate() {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (s, &fs) in fzi.iter().enumerate() {
                    acc += b[a - u + s].conj() * b[u + s] * fs;
                }
                *hu = acc;
            }
        }
        for nx in 0..=a {
            let ny = a - nx;
            let fxy = block_poly::<T>(nx, ny, false);
            let ph = minus_i_pow::<T>(ny);
            for (nz, row) in h.iter().enumerate() {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (u, &fu) in fxy.iter().enumerate() {
                    acc += row[u] * fu;
                }
                let e = realize(acc * ph)?;
                if e != T::zero() {
                    let class = PauliClass::new(nx, ny, nz, bb - nz);
                    logs.push(class.ln_multiplicity(&lf) + two_q * e.abs().ln());
                }
            }
        }
    }
    Ok(finish_sre(log_sum_exp(&logs), n, q))
}

/// `c[σ][n-1][m-1]` for σ = X, Y, Z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicCoefficients<T> {
    pub c: [[[T; 2]; 2]; 3],
}

impl<T: Real> MagicCoefficients<T> {
    pub fn get(&self, axis: Axis, n: usize, m: usize) -> T {
        self.c[axis as usize][n - 1][m - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.c.iter().flat_map(|a| a.iter().flat_map(|b| b.iter().copied()))
    }
}

/// The twelve real coefficients built from the overlap sextet.
pub fn magic_coefficients<T: Real>(sextet: &OverlapSextet<T>) -> MagicCoefficients<T> {
    let two: T = lit(2.0);
    let mut c = [[[T::zero(); 2]; 2]; 3];
    for axis in Axis::ALL {
        let ap = sextet.get(Cardinal::new(Sign::Plus, axis));
        let am = sextet.get(Cardinal::new(Sign::Minus, axis));
        let (pp, mm) = (ap.log_norm_sqr().exp(), am.log_norm_sqr().exp());
        // w = ⟨ψ|−σ⟩⟨σ|ψ⟩
        let w = am.conj().mul(ap).to_complex();
        let row = &mut c[axis as usize];
        row[0] = [pp - mm, pp + mm];
        row[1] = [-two * w.im, two * w.re];
    }
    MagicCoefficients { c }
}

/// The `n = 2` coefficients written as `√((-1)^m)(w + (-1)^m conj(w))` with `√(-1) = i`.
pub fn magic_coefficients_complex<T: Real>(sextet: &OverlapSextet<T>) -> [[Complex<T>; 2]; 3] {
    let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 3];
    for axis in Axis::ALL {
        let ap = sextet.get(Cardinal::new(Sign::Plus, axis));
        let am = sextet.get(Cardinal::new(Sign::Minus, axis));
        let w = am.conj().mul(ap).to_complex();
        let i = Complex::new(T::zero(), T::one());
        out[axis as usize] = [i * (w - w.conj()), w + w.conj()];
    }
    out
}

/// Large-N estimator `1/(1-q) log₂(½ Σ |c|^{2q})`.
pub fn sre_approx<T: Real>(sextet: &OverlapSextet<T>, q: T, n_qubits: usize) -> Result<T> {
    check_even(n_qubits)?;
    let qf = q.to_f64().unwrap_or(f64::NAN);
    if !(qf > 0.0) || qf == 1.0 || !qf.is_finite() {
        return Err(Error::InvalidRenyiIndex(qf));
    }
    let mc = magic_coefficients(sextet);
    let two_q = q + q;
    let terms: Vec<T> = mc.iter().map(|c| if c == T::zero() { T::zero() } else { c.abs().powf(two_q) }).collect();
    let s = pairwise_sum(&terms) / lit(2.0);
    Ok(s.log2() / (T::one() - q))
}

/// Estimator applied to a state directly.
pub fn sre_approx_state<T: Real>(state: &SymmetricState<T>, q: T) -> Result<T> {
    sre_approx(&overlap_sextet(state), q, state.n_qubits())
}

/// Wineland parameter `ξ² = N·min Var_⊥ / ⟨Ĵ_x⟩²` with the transverse plane spanned by y and z.
///
/// Written with `Ĵ` operators; the Pauli-sum normalization `Ŷ = 2Ĵ_y` cancels in the ratio.
pub fn squeezing_parameter<T: Real>(state: &SymmetricState<T>) -> Result<T> {
    let n = state.n_qubits();
    let jx = j_axis(n, Axis::X)?;
    let jy = j_axis(n, Axis::Y)?;
    let jz = j_axis(n, Axis::Z)?;
    let (mx, _) = moments(state, &jx)?;
    if mx.abs() <= lit::<T>(1e-9) * state.spin() {
        return Err(Error::VanishingMeanSpin);
    }
    let (_, vy) = moments(state, &jy)?;
    let (_, vz) = moments(state, &jz)?;
    let cov = cross_covariance(state, &jy, &jz)?;
    let h: T = lit(0.5);
    let d = h * (vy - vz);
    let min_var = h * (vy + vz) - (d * d + cov * cov).sqrt();
    Ok(from_usize::<T>(n) * min_var / (mx * mx))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellResult<T> {
    pub log2_e: T,
    pub q: T,
}

impl<T: Real> BellResult<T> {
    pub fn e(&self) -> T {
        self.log2_e.exp2()
    }
}

/// `𝓔 = |⟨top|ψ⟩|²·|⟨bottom|ψ⟩|²` for the extremal Dicke states along `axis` (x or z).
pub fn bell_correlator<T: Real>(state: &SymmetricState<T>, axis: Axis) -> Result<BellResult<T>> {
    let n = state.n_qubits();
    let (top, bot): (LogComplex<T>, LogComplex<T>) = match axis {
        Axis::Z => (state.amplitude(n), state.amplitude(0)),
        Axis::X => {
            let s = overlap_sextet(state);
            (s.a_plus_x, s.a_minus_x)
        }
        Axis::Y => return Err(Error::OutOfRange { what: "Bell axis (x or z)", value: 1.0 }),
    };
    let log2_e = (top.log_norm_sqr() + bot.log_norm_sqr()) / T::LN_2();
    let log2_e = if log2_e.is_nan() { T::neg_infinity() } else { log2_e };
    Ok(BellResult { log2_e, q: from_usize::<T>(n) + log2_e })
}

pub fn bell_from_sextet<T: Real>(sextet: &OverlapSextet<T>, n: usize) -> BellResult<T> {
    let log2_e = (sextet.a_plus_x.log_norm_sqr() + sextet.a_minus_x.log_norm_sqr()) / T::LN_2();
    BellResult { log2_e, q: from_usize::<T>(n) + log2_e }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::coherent_state;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    type S = SymmetricState<f64>;

    fn oat(n: usize, t: f64) -> S {
        let px = coherent_state::<f64>(n, FRAC_PI_2, 0.0).unwrap();
        let j = n as f64 / 2.0;
        px.with_phases(|k| -t * (k as f64 - j).powi(2))
    }

    fn random_state(n: usize, seed: u64) -> S {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v = (0..=n).map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        S::from_linear(n, v).unwrap()
    }

    fn ghz_x(n: usize, theta: f64) -> S {
        let p = coherent_state::<f64>(n, FRAC_PI_2, 0.0).unwrap().to_linear();
        let m = coherent_state::<f64>(n, FRAC_PI_2, PI).unwrap().to_linear();
        let e = Complex::from_polar(1.0, theta);
        S::from_linear(n, p.iter().zip(&m).map(|(a, b)| a + b * e).collect()).unwrap()
    }

    /// Literal oracle: build every Pauli string and apply it site by site.
    fn brute_sre(state: &S, q: i32) -> f64 {
        let n = state.n_qubits();
        let b = config_amplitudes(state);
        let dim = 1usize << n;
        let psi: Vec<Complex<f64>> = (0..dim).map(|i| b[n - (i as u32).count_ones() as usize]).collect();
        let i = Complex::new(0.0, 1.0);
        let mut total = 0.0;
        for code in 0..(1usize << (2 * n)) {
            let mut out = vec![Complex::new(0.0, 0.0); dim];
            for (basis, amp) in psi.iter().enumerate() {
                let mut target = basis;
                let mut f = Complex::new(1.0, 0.0);
                for site in 0..n {
                    let bit = (basis >> site) & 1;
                    match (code >> (2 * site)) & 3 {
                        1 => target ^= 1 << site,
                        2 => {
                            target ^= 1 << site;
                            f *= if bit == 0 { i } else { -i };
                        }
                        3 => {
                            if bit == 1 {
                                f = -f;
                            }
                        }
                        _ => {}
                    }
                }
                out[target] += f * amp;
            }
            let e: Complex<f64> = psi.iter().zip(&out).map(|(a, b)| a.conj() * b).sum();
            total += e.re.abs().powi(2 * q);
        }
        (total.log2() - n as f64) / (1.0 - q as f64)
    }

    /// Representative expectation on the expanded statevector.
    fn brute_class(state: &S, order: &[u8]) -> f64 {
        let n = state.n_qubits();
        let b = config_amplitudes(state);
        let dim = 1usize << n;
        let psi: Vec<Complex<f64>> = (0..dim).map(|i| b[n - (i as u32).count_ones() as usize]).collect();
        let i = Complex::new(0.0, 1.0);
        let mut e = Complex::new(0.0, 0.0);
        for (basis, amp) in psi.iter().enumerate() {
            let mut target = basis;
            let mut f = Complex::new(1.0, 0.0);
            for (site, &p) in order.iter().enumerate() {
                let bit = (basis >> site) & 1;
                match p {
                    1 => target ^= 1 << site,
                    2 => {
                        target ^= 1 << site;
                        f *= if bit == 0 { i } else { -i };
                    }
                    3 if bit == 1 => f = -f,
                    _ => {}
                }
            }
            e += psi[target].conj() * f * amp;
        }
        e.re
    }

    #[test]
    fn oracle_matches_literal_brute_force() {
        for n in [2usize, 4, 6] {
            for seed in 0..3 {
                let s = random_state(n, seed);
                let a = sre_oracle_statevector(&s, 2.0).unwrap();
                let b = brute_sre(&s, 2);
                assert!((a - b).abs() < 1e-11, "{n} {a} {b}");
                let a3 = sre_oracle_statevector(&s, 3.0).unwrap();
                assert!((a3 - brute_sre(&s, 3)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let pz = coherent_state::<f64>(8, 0.0, 0.0).unwrap();
        assert!(sre_oracle_statevector(&pz, 2.0).unwrap().abs() < 1e-12);
        for n in [2usize, 4, 6, 8, 10] {
            let px = coherent_state::<f64>(n, FRAC_PI_2, 0.0).unwrap();
            assert!(sre_oracle_statevector(&px, 2.0).unwrap().abs() < 1e-12);
        }
        assert!(sre_oracle_statevector(&random_state(16, 0), 2.0).is_err());
        assert!(sre_oracle_statevector(&pz, 1.5).is_err());
    }

    #[test]
    fn class_expectation_examples() {
        let s = random_state(10, 5);
        assert!((pauli_class_expectation(&s, PauliClass::new(0, 0, 0, 10)).unwrap() - 1.0).abs() < 1e-13);
        let n = 10;
        for k in 0..=n {
            let mut v = vec![LogComplex::zero(); n + 1];
            v[k] = LogComplex::one();
            let d = S::from_log(n, v).unwrap();
            let m = k as f64 - 5.0;
            let e = pauli_class_expectation(&d, PauliClass::new(0, 0, 1, n - 1)).unwrap();
            assert!((e - 2.0 * m / n as f64).abs() < 1e-13);
        }
        assert!(pauli_class_expectation(&s, PauliClass::new(1, 0, 0, 0)).is_err());
    }

    #[test]
    fn class_expectation_matches_statevector() {
        for n in [2usize, 4, 6, 8, 10] {
            for (idx, t) in [0.1, 0.37, 1.2].iter().enumerate() {
                let s = oat(n, *t).with_phases(|k| 0.3 * idx as f64 * k as f64);
                for class in PauliClass::enumerate(n) {
                    let got = pauli_class_expectation(&s, class).unwrap();
                    let want = brute_class(&s, &class.representative());
                    assert!((got - want).abs() < 1e-10, "{n} {class:?} {got} {want}");
                }
            }
        }
    }

    #[test]
    fn permutation_independence() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for n in [4usize, 6, 8] {
            let s = random_state(n, n as u64);
            for class in PauliClass::enumerate(n) {
                let rep = class.representative();
                let base = brute_class(&s, &rep);
                let mut perm = rep.clone();
                perm.shuffle(&mut rng);
                assert!((brute_class(&s, &perm) - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_matches_oracle() {
        for n in (2..=12).step_by(2) {
            for seed in 0..2 {
                let s = random_state(n, 100 + seed);
                let a = sre_exact_symmetric(&s, 2.0).unwrap();
                let b = sre_oracle_statevector(&s, 2.0).unwrap();
                assert!((a - b).abs() < 1e-9, "{n} {a} {b}");
            }
        }
    }

    #[test]
    fn dicke_two_qubit_is_stabilizer() {
        let v = vec![LogComplex::zero(), LogComplex::one(), LogComplex::zero()];
        let d = S::from_log(2, v).unwrap();
        assert!(sre_oracle_statevector(&d, 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn coefficient_examples() {
        let px = coherent_state::<f64>(20, FRAC_PI_2, 0.0).unwrap();
        let mc = magic_coefficients(&overlap_sextet(&px));
        assert!((mc.get(Axis::X, 1, 1) - 1.0).abs() < 1e-14);
        assert!((mc.get(Axis::X, 1, 2) - 1.0).abs() < 1e-14);
        assert!(mc.get(Axis::X, 2, 1).abs() < 1e-14 && mc.get(Axis::X, 2, 2).abs() < 1e-14);
        let g = ghz_x(20, 0.0);
        let mc = magic_coefficients(&overlap_sextet(&g));
        assert!((mc.get(Axis::X, 1, 2) - 1.0).abs() < 1e-12);
        assert!(mc.get(Axis::X, 1, 1).abs() < 1e-12);
        assert!((mc.get(Axis::X, 2, 2) - 1.0).abs() < 1e-12);
        assert!(mc.get(Axis::X, 2, 1).abs() < 1e-12);
    }

    #[test]
    fn dicke_coefficients() {
        let n = 1000;
        let mut v = vec![LogComplex::zero(); n + 1];
        v[n / 2] = LogComplex::one();
        let d = S::from_log(n, v).unwrap();
        let mc = magic_coefficients(&overlap_sextet(&d));
        let lb = ln_binomials::<f64>(n);
        let expect = 2.0 * (lb[n / 2] - n as f64 * 2f64.ln()).exp();
        for axis in [Axis::X, Axis::Y] {
            for k in 1..=2 {
                assert!((mc.get(axis, k, 2).abs() - expect).abs() < 1e-12, "{axis:?} {k}");
                assert!(mc.get(axis, k, 1).abs() < 1e-12);
            }
        }
        for k in 1..=2 {
            for m in 1..=2 {
                assert!(mc.get(Axis::Z, k, m).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn approx_examples() {
        let px = coherent_state::<f64>(20, FRAC_PI_2, 0.0).unwrap();
        assert!(sre_approx_state(&px, 2.0).unwrap().abs() < 1e-12);
        for th in [0.0, 0.4, 1.1, FRAC_PI_2, 2.5] {
            let g = ghz_x(40, th);
            let want = -((1.0 + th.cos().powi(4) + th.sin().powi(4)) / 2.0).log2();
            assert!((sre_approx_state(&g, 2.0).unwrap() - want).abs() < 1e-10, "{th}");
        }
        assert!(sre_approx_state(&px, 1.0).is_err());
        assert!(sre_approx_state(&px, 0.5).is_ok());
    }

    #[test]
    fn squeezing_examples() {
        let px = coherent_state::<f64>(100, FRAC_PI_2, 0.0).unwrap();
        assert!((squeezing_parameter(&px).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(squeezing_parameter(&oat(20, FRAC_PI_2)), Err(Error::VanishingMeanSpin));
    }

    #[test]
    fn bell_examples() {
        for th in [0.0, 1.0, 2.0] {
            let b = bell_correlator(&ghz_x(30, th), Axis::X).unwrap();
            assert!((b.log2_e + 2.0).abs() < 1e-10);
            assert!((b.q - 28.0).abs() < 1e-10);
        }
        let px = coherent_state::<f64>(30, FRAC_PI_2, 0.0).unwrap();
        let b = bell_correlator(&px, Axis::X).unwrap();
        assert_eq!(b.log2_e, f64::NEG_INFINITY);
        assert_eq!(b.e(), 0.0);
        assert!(bell_correlator(&px, Axis::Y).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn coefficient_forms_agree(seed in 0u64..10_000, n in (1usize..30).prop_map(|x| 2 * x)) {
            let s = random_state(n, seed);
            let sx = overlap_sextet(&s);
            let mc = magic_coefficients(&sx);
            let cc = magic_coefficients_complex(&sx);
            for axis in Axis::ALL {
                for m in 0..2 {
                    let z = cc[axis as usize][m];
                    prop_assert!(z.im.abs() < 1e-10);
                    prop_assert!((z.re - mc.get(axis, 2, m + 1)).abs() < 1e-10);
                }
            }
            prop_assert!(mc.iter().all(|c| c.abs() <= 2.0));
        }

        #[test]
        fn approx_invariant_under_global_phase(seed in 0u64..10_000, ph in -3.0f64..3.0) {
            let s = random_state(24, seed);
            let a = sre_approx(&overlap_sextet(&s), 2.0, 24).unwrap();
            let b = sre_approx(&overlap_sextet(&s).rephased(ph), 2.0, 24).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn sre_paths_non_negative(seed in 0u64..10_000, n in (1usize..5).prop_map(|x| 2 * x)) {
            let s = random_state(n, seed);
            prop_assert!(sre_exact_symmetric(&s, 2.0).unwrap() >= -1e-10);
            prop_assert!(sre_oracle_statevector(&s, 2.0).unwrap() >= -1e-10);
        }

        #[test]
        fn bell_bound(seed in 0u64..10_000, n in (1usize..40).prop_map(|x| 2 * x)) {
            let s = random_state(n, seed);
            let b = bell_correlator(&s, Axis::X).unwrap();
            prop_assert!(b.q <= n as f64 - 2.0 + 1e-9);
            let bz = bell_correlator(&s, Axis::Z).unwrap();
            prop_assert!(bz.log2_e <= -2.0 + 1e-9);
        }

        #[test]
        fn sextet_pairs_bounded(seed in 0u64..10_000) {
            let s = random_state(30, seed);
            let sx = overlap_sextet(&s);
            let tot: f64 = Cardinal::ALL.iter().map(|&c| sx.get(c).log_norm_sqr().exp()).sum();
            prop_assert!(tot <= 3.0 + 1e-9);
        }
    }
}
