//! Small dense complex matrix helpers: row-major storage, Hermitian
//! Cholesky, and extreme eigenvalues of Hermitian matrices by cyclic Jacobi
//! on the real symmetric embedding.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::float::Float;

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<S: Float> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<S>>,
}

impl<S: Float> CMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![Complex::new(S::zero(), S::zero()); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<S>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex<S> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex<S>) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex<S>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn scale(&mut self, s: S) {
        for v in self.data.iter_mut() {
            *v = v.scale(s);
        }
    }

    pub fn frobenius(&self) -> S {
        self.data.iter().map(|c| c.norm_sqr()).sum::<S>().sqrt()
    }

    /// y = A x.
    pub fn matvec(&self, x: &[Complex<S>], y: &mut [Complex<S>]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = Complex::new(S::zero(), S::zero());
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[r] = acc;
        }
    }

    /// y = A^H x.
    pub fn matvec_adjoint(&self, x: &[Complex<S>], y: &mut [Complex<S>]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        for v in y.iter_mut() {
            *v = Complex::new(S::zero(), S::zero());
        }
        for r in 0..self.rows {
            let xr = x[r];
            let row = self.row(r);
            for (c, a) in row.iter().enumerate() {
                y[c] += a.conj() * xr;
            }
        }
    }

    /// A A^H (rows x rows, Hermitian).
    pub fn gram_rows(&self) -> CMat<S> {
        let mut g = CMat::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..=i {
                let mut acc = Complex::new(S::zero(), S::zero());
                for (a, b) in self.row(i).iter().zip(self.row(j)) {
                    acc += a * b.conj();
                }
                g.set(i, j, acc);
                g.set(j, i, acc.conj());
            }
        }
        g
    }

    /// Gram matrix of a column subset: G = (A_T)^H (A_T), size |T| x |T|.
    pub fn gram_columns(&self, cols: &[usize]) -> CMat<S> {
        let s = cols.len();
        let mut g = CMat::zeros(s, s);
        for (i, &ci) in cols.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate().take(i + 1) {
                let mut acc = Complex::new(S::zero(), S::zero());
                for r in 0..self.rows {
                    acc += self.at(r, ci).conj() * self.at(r, cj);
                }
                g.set(i, j, acc);
                g.set(j, i, acc.conj());
            }
        }
        g
    }
}

/// Cholesky factor (lower triangular) of a Hermitian positive definite
/// matrix.
pub struct Cholesky<S: Float> {
    l: CMat<S>,
}

impl<S: Float> Cholesky<S> {
    pub fn new(g: &CMat<S>) -> Result<Self> {
        let n = g.rows();
        if g.cols() != n {
            return Err(Error::invalid_argument("cholesky needs a square matrix"));
        }
        let mut l = CMat::zeros(n, n);
        for j in 0..n {
            let mut d = g.at(j, j).re;
            for k in 0..j {
                d -= l.at(j, k).norm_sqr();
            }
            if !(d > S::zero()) {
                return Err(Error::invalid_argument("matrix not positive definite"));
            }
            let dj = d.sqrt();
            l.set(j, j, Complex::new(dj, S::zero()));
            for i in j + 1..n {
                let mut acc = g.at(i, j);
                for k in 0..j {
                    acc -= l.at(i, k) * l.at(j, k).conj();
                }
                l.set(i, j, acc.unscale(dj));
            }
        }
        Ok(Cholesky { l })
    }

    /// Solves G x = b.
    pub fn solve(&self, b: &[Complex<S>]) -> Vec<Complex<S>> {
        let n = self.l.rows();
        debug_assert_eq!(b.len(), n);
        // forward: L y = b
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let lik = self.l.at(i, k);
                y[i] = y[i] - lik * y[k];
            }
            y[i] = y[i].unscale(self.l.at(i, i).re);
        }
        // backward: L^H x = y
        for i in (0..n).rev() {
            for k in i + 1..n {
                let lki = self.l.at(k, i).conj();
                y[i] = y[i] - lki * y[k];
            }
            y[i] = y[i].unscale(self.l.at(i, i).re);
        }
        y
    }
}

/// Extreme eigenvalues (min, max) of a Hermitian matrix.
///
/// The complex matrix is embedded into the real symmetric form
/// [[Re, -Im], [Im, Re]] (same spectrum, doubled multiplicity) and
/// diagonalized by cyclic Jacobi rotations.
pub fn hermitian_eigen_extremes<S: Float>(g: &CMat<S>) -> Result<(S, S)> {
    let n = g.rows();
    if g.cols() != n || n == 0 {
        return Err(Error::invalid_argument("eigen needs a nonempty square matrix"));
    }
    let m = 2 * n;
    let mut a = vec![S::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            let v = g.at(i, j);
            a[i * m + j] = v.re;
            a[i * m + (j + n)] = -v.im;
            a[(i + n) * m + j] = v.im;
            a[(i + n) * m + (j + n)] = v.re;
        }
    }
    // symmetrize away representation round-off
    for i in 0..m {
        for j in 0..i {
            let s = (a[i * m + j] + a[j * m + i]) * S::of(0.5);
            a[i * m + j] = s;
            a[j * m + i] = s;
        }
    }

    let scale = (0..m).map(|i| a[i * m + i].abs()).fold(S::zero(), S::max).max(S::one());
    let tol = S::of(1e-15) * scale;
    for _sweep in 0..64 {
        let mut off = S::zero();
        for p in 0..m {
            for q in p + 1..m {
                off = off.max(a[p * m + q].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() <= tol * S::of(1e-2) {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let tau = (aqq - app) / (S::of(2.0) * apq);
                let t = if tau >= S::zero() {
                    S::one() / (tau + (S::one() + tau * tau).sqrt())
                } else {
                    -S::one() / (-tau + (S::one() + tau * tau).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut lo = S::infinity();
    let mut hi = S::neg_infinity();
    for i in 0..m {
        lo = lo.min(a[i * m + i]);
        hi = hi.max(a[i * m + i]);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand::SeedableRng;

    fn random_cmat(rows: usize, cols: usize, seed: u64) -> CMat<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMat::from_fn(rows, cols, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let a = random_cmat(6, 10, 1);
        let mut g = a.gram_rows();
        for i in 0..6 {
            let d = g.at(i, i) + Complex::new(1.0, 0.0);
            g.set(i, i, d);
        }
        let chol = Cholesky::new(&g).unwrap();
        let b: Vec<Complex<f64>> = (0..6).map(|k| Complex::new(k as f64, -1.0)).collect();
        let x = chol.solve(&b);
        let mut gx = vec![Complex::new(0.0, 0.0); 6];
        g.matvec(&x, &mut gx);
        for (u, v) in gx.iter().zip(&b) {
            assert!((u - v).norm() < 1e-10);
        }
    }

    #[test]
    fn adjoint_matvec_consistency() {
        let a = random_cmat(5, 8, 2);
        let x: Vec<Complex<f64>> = (0..8).map(|k| Complex::new(0.1 * k as f64, 1.0)).collect();
        let y: Vec<Complex<f64>> = (0..5).map(|k| Complex::new(-0.2 * k as f64, 0.5)).collect();
        let mut ax = vec![Complex::new(0.0, 0.0); 5];
        a.matvec(&x, &mut ax);
        let mut ahy = vec![Complex::new(0.0, 0.0); 8];
        a.matvec_adjoint(&y, &mut ahy);
        // <Ax, y> == <x, A^H y>
        let lhs: Complex<f64> = ax.iter().zip(&y).map(|(u, v)| u * v.conj()).sum();
        let rhs: Complex<f64> = x.iter().zip(&ahy).map(|(u, v)| u * v.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn eigen_extremes_match_nalgebra() {
        for seed in 0..10 {
            let n = 5;
            let b = random_cmat(n + 2, n, seed);
            let g = b.gram_columns(&(0..n).collect::<Vec<_>>());
            let (lo, hi) = hermitian_eigen_extremes(&g).unwrap();

            // oracle: real symmetric embedding via nalgebra
            let m = 2 * n;
            let mut emb = DMatrix::<f64>::zeros(m, m);
            for i in 0..n {
                for j in 0..n {
                    let v = g.at(i, j);
                    emb[(i, j)] = v.re;
                    emb[(i, j + n)] = -v.im;
                    emb[(i + n, j)] = v.im;
                    emb[(i + n, j + n)] = v.re;
                }
            }
            let eig = emb.symmetric_eigen();
            let lo_ref = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi_ref = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!((lo - lo_ref).abs() < 1e-9, "lo {lo} vs {lo_ref}");
            assert!((hi - hi_ref).abs() < 1e-9, "hi {hi} vs {hi_ref}");
        }
    }

    #[test]
    fn eigen_identity() {
        let mut g = CMat::<f64>::zeros(4, 4);
        for i in 0..4 {
            g.set(i, i, Complex::new(1.0, 0.0));
        }
        let (lo, hi) = hermitian_eigen_extremes(&g).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }
}
