//! Pauli-string matrix elements between spin coherent states and the few-component
//! superposition fast path for exact SRE.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::numeric::{from_usize, lit, ln_factorials, log_sum_exp, Real};
use crate::state::{check_even, coherent_state, Axis, Cardinal, Sign, SymmetricState};

/// Permutation class of Pauli strings: how many X, Y, Z and identity factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliClass {
    pub n_x: usize,
    pub n_y: usize,
    pub n_z: usize,
    pub n_i: usize,
}

impl PauliClass {
    pub const fn new(n_x: usize, n_y: usize, n_z: usize, n_i: usize) -> Self {
        Self { n_x, n_y, n_z, n_i }
    }

    pub fn total(&self) -> usize {
        self.n_x + self.n_y + self.n_z + self.n_i
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.total() != n {
            Err(Error::ClassMismatch { n, got: self.total() })
        } else {
            Ok(())
        }
    }

    /// `ln(N! / (n_x! n_y! n_z! n_i!))` given a factorial table.
    pub fn ln_multiplicity<T: Real>(&self, lf: &[T]) -> T {
        lf[self.total()] - lf[self.n_x] - lf[self.n_y] - lf[self.n_z] - lf[self.n_i]
    }

    /// Representative string with contiguous blocks X…Y…Z…I; 0=I, 1=X, 2=Y, 3=Z per site.
    pub fn representative(&self) -> Vec<u8> {
        let mut v = vec![1u8; self.n_x];
        v.extend(std::iter::repeat(2u8).take(self.n_y));
        v.extend(std::iter::repeat(3u8).take(self.n_z));
        v.extend(std::iter::repeat(0u8).take(self.n_i));
        v
    }

    /// All classes for `n` qubits, lexicographic in `(n_x, n_y, n_z)`.
    pub fn enumerate(n: usize) -> impl Iterator<Item = PauliClass> {
        (0..=n).flat_map(move |x| (0..=n - x).flat_map(move |y| (0..=n - x - y).map(move |z| PauliClass::new(x, y, z, n - x - y - z))))
    }
}

/// Single-qubit matrix elements `⟨θi,φi|σ|θj,φj⟩` for σ = X, Y, Z, I.
pub fn elementary_coefficients<T: Real>(theta_i: T, phi_i: T, theta_j: T, phi_j: T) -> [Complex<T>; 4] {
    let h: T = lit(0.5);
    let (st, dt) = ((theta_i + theta_j) * h, (theta_i - theta_j) * h);
    let (sp, dp) = ((phi_i + phi_j) * h, (phi_i - phi_j) * h);
    let alpha = Complex::new(sp.cos() * st.sin(), -sp.sin() * dt.sin());
    let beta = Complex::new(sp.sin() * st.sin(), sp.cos() * dt.sin());
    let gamma = Complex::new(dp.cos() * st.cos(), dp.sin() * dt.cos());
    let kappa = Complex::new(dp.cos() * dt.cos(), dp.sin() * st.cos());
    [alpha, beta, gamma, kappa]
}

/// `⟨bra|P_rep|ket⟩` for coherent states, `α^{n_x} β^{n_y} γ^{n_z} κ^{n_i}`.
pub fn coherent_matrix_element<T: Real>(bra: (T, T), ket: (T, T), class: PauliClass, n_qubits: usize) -> Result<LogComplex<T>> {
    class.check(n_qubits)?;
    let c = elementary_coefficients(bra.0, bra.1, ket.0, ket.1);
    Ok(pauli_power(&c.map(LogComplex::from_complex), class))
}

fn pauli_power<T: Real>(c: &[LogComplex<T>; 4], class: PauliClass) -> LogComplex<T> {
    c[0].powi(class.n_x as u32).mul(c[1].powi(class.n_y as u32)).mul(c[2].powi(class.n_z as u32)).mul(c[3].powi(class.n_i as u32))
}

fn ipow<T: Real>(k: usize, sign: T) -> Complex<T> {
    // (sign·i)^k
    let (o, z) = (T::one(), T::zero());
    match k % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, sign),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -sign),
    }
}

/// The twelve cardinal matrix elements `⟨sσ|P|s'σ⟩` of a Pauli class, independent of N
/// apart from the class counts. Entries are listed for the six diagonal pairs followed by
/// the six antipodal pairs.
pub fn cardinal_table<T: Real>(class: PauliClass) -> Vec<((Cardinal, Cardinal), Complex<T>)> {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let count = |a: Axis| match a {
        Axis::X => class.n_x,
        Axis::Y => class.n_y,
        Axis::Z => class.n_z,
    };
    let mut out = Vec::with_capacity(12);
    for c in Cardinal::ALL {
        let (a, b) = c.axis.transverse();
        let v = if count(a) == 0 && count(b) == 0 {
            if c.sign == Sign::Minus && count(c.axis) % 2 == 1 {
                -one
            } else {
                one
            }
        } else {
            zero
        };
        out.push(((c, c), v));
    }
    for c in Cardinal::ALL {
        let v = if count(c.axis) != 0 || class.n_i != 0 {
            zero
        } else {
            // per qubit one transverse factor is 1, the other is ±i
            let s: T = c.sign.value();
            match c.axis {
                Axis::X => ipow(class.n_z, -s),
                Axis::Y => ipow(class.n_z, s),
                Axis::Z => ipow(class.n_y, -s),
            }
        };
        out.push(((c, c.antipode()), v));
    }
    out
}

/// Few-component coherent superposition `Σ_i w_i |θ_i, φ_i⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentSuperposition<T> {
    pub n_qubits: usize,
    pub components: Vec<(LogComplex<T>, T, T)>,
}

impl<T: Real> CoherentSuperposition<T> {
    pub fn new(n_qubits: usize, components: Vec<(LogComplex<T>, T, T)>) -> Result<Self> {
        check_even(n_qubits)?;
        if components.is_empty() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { n_qubits, components })
    }

    /// Squared norm from the Gram matrix of the components.
    pub fn norm_sqr(&self) -> T {
        let id = PauliClass::new(0, 0, 0, self.n_qubits);
        self.expectation_raw(id).0
    }

    /// Rescale the weights to unit norm.
    pub fn normalized(mut self) -> Result<Self> {
        let ns = self.norm_sqr();
        if !(ns > T::zero()) {
            return Err(Error::ZeroVector);
        }
        let dl = -ns.ln() / lit(2.0);
        for c in &mut self.components {
            c.0 = c.0.scale_log(dl);
        }
        Ok(self)
    }

    pub fn check_normalized(&self) -> Result<()> {
        let d = (self.norm_sqr() - T::one()).abs();
        if d > lit(1e-10) {
            Err(Error::NotNormalized(d.to_f64().unwrap_or(f64::NAN)))
        } else {
            Ok(())
        }
    }

    /// Dicke-basis amplitudes.
    pub fn to_state(&self) -> Result<SymmetricState<T>> {
        let n = self.n_qubits;
        let mut parts: Vec<Vec<LogComplex<T>>> = vec![Vec::with_capacity(self.components.len()); n + 1];
        for &(w, t, p) in &self.components {
            let c = coherent_state(n, t, p)?;
            for (k, a) in c.amplitudes().iter().enumerate() {
                parts[k].push(w.mul(*a));
            }
        }
        SymmetricState::from_log(n, parts.iter().map(|p| LogComplex::sum(p)).collect())
    }

    /// `(Re, |Im|, Σ|terms|)` of `⟨ψ|P_rep|ψ⟩`.
    fn expectation_raw(&self, class: PauliClass) -> (T, T, T) {
        let mut terms = Vec::with_capacity(self.components.len().pow(2));
        for &(wi, ti, pi) in &self.components {
            for &(wj, tj, pj) in &self.components {
                let c = elementary_coefficients(ti, pi, tj, pj).map(LogComplex::from_complex);
                terms.push(wi.conj().mul(wj).mul(pauli_power(&c, class)));
            }
        }
        let scale = terms.iter().map(|t| t.log_mag).fold(T::neg_infinity(), T::max);
        if scale == T::neg_infinity() {
            return (T::zero(), T::zero(), T::zero());
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut mag = T::zero();
        for t in &terms {
            if !t.is_zero() {
                acc += Complex::from_polar((t.log_mag - scale).exp(), t.phase);
                mag += (t.log_mag - scale).exp();
            }
        }
        let f = scale.exp();
        (acc.re * f, acc.im.abs() * f, mag * f)
    }

    /// Real expectation of the class representative; errors on a non-negligible imaginary part.
    pub fn class_expectation(&self, class: PauliClass) -> Result<T> {
        class.check(self.n_qubits)?;
        let (re, im, mag) = self.expectation_raw(class);
        if im > residue_tolerance::<T>() * mag.max(T::one()) {
            return Err(Error::ImaginaryResidue(im.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(re)
    }
}

pub(crate) fn residue_tolerance<T: Real>() -> T {
    lit::<T>(1e-10).max(T::epsilon() * lit(1e4))
}

/// Validate an exact-path Rényi index: integer `q ≥ 2` (so `2q` is an even integer).
pub(crate) fn exact_q<T: Real>(q: T) -> Result<u32> {
    let qf = q.to_f64().unwrap_or(f64::NAN);
    if qf.is_finite() && qf >= 2.0 && qf.fract() == 0.0 && qf <= 64.0 {
        Ok(qf as u32)
    } else {
        Err(Error::InvalidRenyiIndex(qf))
    }
}

/// Exact `M_q` of a normalized coherent superposition, summed class by class.
pub fn sre_exact_coherent<T: Real>(sup: &CoherentSuperposition<T>, q: T) -> Result<T> {
    let qi = exact_q(q)?;
    if sup.components.len() > 64 {
        return Err(Error::TooLarge { n: sup.components.len(), limit: 64 });
    }
    sup.check_normalized()?;
    let n = sup.n_qubits;
    let lf = ln_factorials::<T>(n);
    let two_q: T = from_usize(2 * qi as usize);
    let mut logs = Vec::new();
    for class in PauliClass::enumerate(n) {
        let e = sup.class_expectation(class)?;
        if e != T::zero() {
            logs.push(class.ln_multiplicity(&lf) + two_q * e.abs().ln());
        }
    }
    Ok(finish_sre(log_sum_exp(&logs), n, q))
}

/// `1/(1-q) · (log₂ Σ − N)` from `ln Σ`.
pub(crate) fn finish_sre<T: Real>(ln_sum: T, n: usize, q: T) -> T {
    let log2 = ln_sum / T::LN_2() - from_usize(n);
    log2 / (T::one() - q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// 2×2 Paulis on the per-qubit spinor, independent of the closed forms above.
    fn spinor(t: f64, p: f64) -> [Complex<f64>; 2] {
        [Complex::from_polar((t / 2.0).cos(), -p / 2.0), Complex::from_polar((t / 2.0).sin(), p / 2.0)]
    }

    fn pauli(k: u8, v: [Complex<f64>; 2]) -> [Complex<f64>; 2] {
        let i = Complex::new(0.0, 1.0);
        match k {
            0 => v,
            1 => [v[1], v[0]],
            2 => [-i * v[1], i * v[0]],
            _ => [v[0], -v[1]],
        }
    }

    fn brute_element(bra: (f64, f64), ket: (f64, f64), string: &[u8]) -> Complex<f64> {
        string.iter().fold(Complex::new(1.0, 0.0), |acc, &k| {
            let b = spinor(bra.0, bra.1);
            let kv = pauli(k, spinor(ket.0, ket.1));
            acc * (b[0].conj() * kv[0] + b[1].conj() * kv[1])
        })
    }

    #[test]
    fn elementary_examples() {
        let c = elementary_coefficients(FRAC_PI_2, 0.0, FRAC_PI_2, 0.0);
        assert!((c[0] - 1.0).norm() < 1e-15);
        let c = elementary_coefficients(0.7, -1.2, 0.7, -1.2);
        assert!((c[3] - 1.0).norm() < 1e-15);
        let c = elementary_coefficients(0.0, 0.0, PI, 0.0);
        assert!(c[2].norm() < 1e-15 && c[3].norm() < 1e-15);
        assert!((c[0].norm() - 1.0).abs() < 1e-15 && (c[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_element_examples() {
        let one = coherent_matrix_element((FRAC_PI_2, 0.0), (FRAC_PI_2, 0.0), PauliClass::new(8, 0, 0, 0), 8).unwrap();
        assert!((one.to_complex() - 1.0).norm() < 1e-14);
        // ⟨+Z|Y…Y|−Z⟩ = (−i)^N in the spinor convention used here
        for n in [2usize, 4, 6] {
            let e = coherent_matrix_element((0.0, 0.0), (PI, 0.0), PauliClass::new(0, n, 0, 0), n).unwrap();
            assert!((e.to_complex() - ipow::<f64>(n, -1.0)).norm() < 1e-14);
        }
        assert!(coherent_matrix_element((0.0, 0.0), (0.0, 0.0), PauliClass::new(1, 0, 0, 0), 2).is_err());
    }

    #[test]
    fn matrix_element_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let bra = (rng.random::<f64>() * PI, (rng.random::<f64>() - 0.5) * 2.0 * PI);
            let ket = (rng.random::<f64>() * PI, (rng.random::<f64>() - 0.5) * 2.0 * PI);
            let x = rng.random_range(0..=6);
            let y = rng.random_range(0..=6 - x);
            let z = rng.random_range(0..=6 - x - y);
            let class = PauliClass::new(x, y, z, 6 - x - y - z);
            let got = coherent_matrix_element(bra, ket, class, 6).unwrap().to_complex();
            let want = brute_element(bra, ket, &class.representative());
            assert!((got - want).norm() < 1e-12, "{class:?} {got} {want}");
        }
    }

    #[test]
    fn cardinal_table_examples() {
        let px = Cardinal::new(Sign::Plus, Axis::X);
        let t = cardinal_table::<f64>(PauliClass::new(2, 0, 0, 0));
        let v = t.iter().find(|e| e.0 == (px, px)).unwrap().1;
        assert_eq!(v, Complex::new(1.0, 0.0));
        let t = cardinal_table::<f64>(PauliClass::new(0, 0, 1, 1));
        let v = t.iter().find(|e| e.0 == (px, px.antipode())).unwrap().1;
        assert_eq!(v, Complex::new(0.0, 0.0));
    }

    #[test]
    fn cardinal_table_matches_formula_and_brute_force() {
        for n in 1..=8usize {
            for class in PauliClass::enumerate(n) {
                for ((a, b), v) in cardinal_table::<f64>(class) {
                    let formula = coherent_matrix_element(a.angles(), b.angles(), class, n).unwrap().to_complex();
                    let brute = brute_element(a.angles(), b.angles(), &class.representative());
                    assert!((v - formula).norm() < 1e-12, "{class:?} {a:?} {b:?} {v} {formula}");
                    assert!((v - brute).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn class_enumeration_order() {
        let v: Vec<_> = PauliClass::enumerate(2).collect();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], PauliClass::new(0, 0, 0, 2));
        assert_eq!(v[9], PauliClass::new(2, 0, 0, 0));
        assert_eq!(PauliClass::enumerate(12).count(), 13 * 14 * 15 / 6);
    }

    #[test]
    fn single_cardinal_component_has_zero_sre() {
        for c in Cardinal::ALL {
            let (t, p) = c.angles::<f64>();
            let s = CoherentSuperposition::new(10, vec![(LogComplex::one(), t, p)]).unwrap();
            assert!(sre_exact_coherent(&s, 2.0).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn q_validation() {
        let s = CoherentSuperposition::new(4, vec![(LogComplex::one(), 0.0, 0.0)]).unwrap();
        assert!(sre_exact_coherent(&s, 1.0).is_err());
        assert!(sre_exact_coherent(&s, 2.5).is_err());
        let bad = CoherentSuperposition::new(4, vec![(LogComplex::from_real(2.0), 0.0, 0.0)]).unwrap();
        assert!(matches!(sre_exact_coherent(&bad, 2.0), Err(Error::NotNormalized(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn coefficient_constraint(a in -7.0f64..7.0, b in -7.0f64..7.0, c in -7.0f64..7.0, d in -7.0f64..7.0) {
            let s: f64 = elementary_coefficients(a, b, c, d).iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((s - 2.0).abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sre_invariant_under_global_phase(ph in -3.0f64..3.0, e in 0.1f64..3.0) {
            let n = 8;
            let mk = |p: f64| CoherentSuperposition::new(n, vec![(LogComplex::new(0.0, p), 0.0, 0.0), (LogComplex::new(0.0, p), e, 0.0)]).unwrap().normalized().unwrap();
            let a = sre_exact_coherent(&mk(0.0), 2.0).unwrap();
            let b = sre_exact_coherent(&mk(ph), 2.0).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn superposition_expectations_are_real(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let comps = (0..3).map(|_| (LogComplex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() * 6.0), rng.random::<f64>() * PI, rng.random::<f64>() * 6.0)).collect();
            let s = CoherentSuperposition::new(6, comps).unwrap().normalized().unwrap();
            for class in PauliClass::enumerate(6) {
                prop_assert!(s.class_expectation(class).is_ok());
            }
        }
    }
}
