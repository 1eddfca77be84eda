//! Hermitian tridiagonal operators in the Dicke basis and their spectral exponentials.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numeric::{lit, Real};

/// Hermitian tridiagonal matrix.
///
/// `off[k]` is the element `G[k+1][k]`; `G[k][k+1]` is its conjugate.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalOperator<T> {
    pub diag: Vec<T>,
    pub off: Vec<Complex<T>>,
}

impl<T: Real> TridiagonalOperator<T> {
    pub fn new(diag: Vec<T>, off: Vec<Complex<T>>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch(diag.len(), off.len() + 1));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.off.iter().all(|c| c.re == T::zero() && c.im == T::zero())
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch(n, v.len()));
        }
        let mut out: Vec<Complex<T>> = v.iter().zip(&self.diag).map(|(x, &d)| x * d).collect();
        for k in 0..n - 1 {
            let o = self.off[k];
            out[k + 1] += o * v[k];
            out[k] += o.conj() * v[k + 1];
        }
        Ok(out)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            diag: self.diag.iter().map(|&d| d * s).collect(),
            off: self.off.iter().map(|&o| o * s).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.dim() != o.dim() {
            return Err(Error::DimensionMismatch(self.dim(), o.dim()));
        }
        Ok(Self {
            diag: self.diag.iter().zip(&o.diag).map(|(a, b)| *a + *b).collect(),
            off: self.off.iter().zip(&o.off).map(|(a, b)| a + b).collect(),
        })
    }

    /// Dense copy, row-major. Test and debugging aid.
    pub fn to_dense(&self) -> Vec<Vec<Complex<T>>> {
        let n = self.dim();
        let mut m = vec![vec![Complex::new(T::zero(), T::zero()); n]; n];
        for k in 0..n {
            m[k][k] = Complex::new(self.diag[k], T::zero());
        }
        for k in 0..n - 1 {
            m[k + 1][k] = self.off[k];
            m[k][k + 1] = self.off[k].conj();
        }
        m
    }

    pub fn spectral(&self) -> Result<Spectral<T>> {
        Spectral::new(self)
    }

    /// `exp(-i·angle·G) v`.
    pub fn exp_apply(&self, v: &[Complex<T>], angle: T) -> Result<Vec<Complex<T>>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), v.len()));
        }
        if self.is_diagonal() {
            return Ok(v
                .iter()
                .zip(&self.diag)
                .map(|(x, &d)| x * Complex::from_polar(T::one(), -angle * d))
                .collect());
        }
        Ok(self.spectral()?.exp_apply(v, angle))
    }
}

/// Eigen-decomposition `G = D V Λ Vᵀ D†` with `D` a diagonal phase gauge and `V` real orthogonal.
#[derive(Clone, Debug)]
pub struct Spectral<T> {
    pub values: Vec<T>,
    /// column-major: `vectors[j * n + k]` is component k of eigenvector j
    vectors: Vec<T>,
    gauge: Vec<Complex<T>>,
}

impl<T: Real> Spectral<T> {
    pub fn new(op: &TridiagonalOperator<T>) -> Result<Self> {
        let n = op.dim();
        let mut gauge = Vec::with_capacity(n);
        gauge.push(Complex::new(T::one(), T::zero()));
        for k in 0..n - 1 {
            let o = op.off[k];
            let g = if o.norm() > T::zero() { gauge[k] * (o / o.norm()) } else { gauge[k] };
            gauge.push(g);
        }
        let mut d = op.diag.clone();
        let mut e: Vec<T> = op.off.iter().map(|o| o.norm()).collect();
        e.push(T::zero());
        let mut z = vec![T::zero(); n * n];
        for j in 0..n {
            z[j * n + j] = T::one();
        }
        tql_implicit(&mut d, &mut e, &mut z)?;
        Ok(Self { values: d, vectors: z, gauge })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> &[T] {
        let n = self.dim();
        &self.vectors[j * n..(j + 1) * n]
    }

    /// Components of `v` in the eigenbasis.
    pub fn project(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        let y: Vec<Complex<T>> = v.iter().zip(&self.gauge).map(|(x, g)| x * g.conj()).collect();
        (0..n)
            .map(|j| {
                let col = self.vector(j);
                col.iter().zip(&y).fold(Complex::new(T::zero(), T::zero()), |a, (&c, &yk)| a + yk * c)
            })
            .collect()
    }

    /// Inverse of [`Spectral::project`].
    pub fn reconstruct(&self, w: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for (j, wj) in w.iter().enumerate() {
            for (o, &c) in out.iter_mut().zip(self.vector(j)) {
                *o += wj * c;
            }
        }
        out.iter().zip(&self.gauge).map(|(x, g)| x * g).collect()
    }

    /// Phase the eigen-components by `exp(-i·angle·λ)`.
    pub fn evolve_projected(&self, w: &[Complex<T>], angle: T) -> Vec<Complex<T>> {
        w.iter()
            .zip(&self.values)
            .map(|(x, &l)| x * Complex::from_polar(T::one(), -angle * l))
            .collect()
    }

    pub fn exp_apply(&self, v: &[Complex<T>], angle: T) -> Vec<Complex<T>> {
        self.reconstruct(&self.evolve_projected(&self.project(v), angle))
    }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` couples `i` and `i+1` (`e[n-1]` ignored). On return `d`
/// holds the eigenvalues and the columns of `z` (column-major, `z[j*n+k]`) are rotated by
/// the same transformations, so starting from the identity they become the eigenvectors.
pub fn tql_implicit<T: Real>(d: &mut [T], e: &mut [T], z: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let two: T = lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m] == T::zero() {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let sr = if g >= T::zero() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sr);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (ci, ci1) = (i * n, (i + 1) * n);
                for k in 0..n {
                    let f = z[ci1 + k];
                    let zi = z[ci + k];
                    z[ci1 + k] = s * zi + c * f;
                    z[ci + k] = c * zi - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
