//! Compressive-sensing diagnostics for warped Fourier dictionaries:
//! mutual coherence, restricted-isometry estimates, aliasing-sum decay,
//! covering cardinality bounds, and the isometry-constant perturbation
//! bound.

use num_complex::Complex;
use num_traits::FloatConst;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::float::Float;
use crate::linalg::{hermitian_eigen_extremes, CMat};
use crate::mp::{self, Fx};
use crate::sparse::SensingMatrix;
use crate::spectral::{fourier_coeffs, wavenumber_at};

/// Monte-Carlo lower bound on the restricted isometry constant.
#[derive(Debug, Clone, Copy)]
pub struct RipEstimate<S: Float> {
    pub s: usize,
    pub delta_lower: S,
    pub trials: usize,
    pub seed: u64,
}

/// Max modulus entry of U*U - I: how far the dictionary columns are from
/// orthonormal. Meaningful for weighted matrices with near-unit columns.
pub fn mutual_coherence<S: Float>(u: &SensingMatrix<S>) -> S {
    let m = u.matrix();
    let nb = m.cols();
    let mut worst = S::zero();
    for i in 0..nb {
        for j in 0..=i {
            let mut acc = Complex::new(S::zero(), S::zero());
            for r in 0..m.rows() {
                acc += m.at(r, i).conj() * m.at(r, j);
            }
            if i == j {
                acc -= Complex::new(S::one(), S::zero());
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

fn support_deviation<S: Float>(m: &CMat<S>, support: &[usize]) -> Result<S> {
    let g = m.gram_columns(support);
    let (lo, hi) = hermitian_eigen_extremes(&g)?;
    Ok((hi - S::one()).max(S::one() - lo))
}

/// Draws `trials` random supports of size `s` (permutation prefixes, so
/// supports are nested across s levels for a fixed seed) and returns the
/// worst isometry deviation seen: a lower bound on delta_s.
pub fn estimate_delta_s<S: Float>(
    phi: &SensingMatrix<S>,
    s: usize,
    trials: usize,
    seed: u64,
) -> Result<RipEstimate<S>> {
    let nb = phi.matrix().cols();
    if s == 0 || s > nb {
        return Err(Error::invalid_argument(format!("sparsity {s} out of range for {nb} columns")));
    }
    if trials == 0 {
        return Err(Error::invalid_argument("trials must be >= 1"));
    }
    let mut delta = S::zero();
    for trial in 0..trials {
        let mix = seed.wrapping_add((trial as u64).wrapping_mul(0x9E3779B97F4A7C15));
        let mut rng = ChaCha8Rng::seed_from_u64(mix);
        let mut perm: Vec<usize> = (0..nb).collect();
        perm.shuffle(&mut rng);
        delta = delta.max(support_deviation(phi.matrix(), &perm[..s])?);
    }
    Ok(RipEstimate { s, delta_lower: delta, trials, seed })
}

/// Exact delta_s by enumerating every support of size s. Combinatorial;
/// intended for dictionaries of at most a few dozen columns.
pub fn exact_delta_s<S: Float>(phi: &SensingMatrix<S>, s: usize) -> Result<S> {
    delta_s_enumerated(phi.matrix(), s)
}

/// Exhaustive delta_s of a raw complex matrix.
pub fn delta_s_enumerated<S: Float>(m: &CMat<S>, s: usize) -> Result<S> {
    let nb = m.cols();
    if s == 0 || s > nb {
        return Err(Error::invalid_argument(format!("sparsity {s} out of range for {nb} columns")));
    }
    let count = binomial(nb, s);
    if count > 2_000_000 {
        return Err(Error::invalid_argument(format!(
            "support enumeration too large: C({nb},{s}) = {count}"
        )));
    }
    let mut delta = S::zero();
    let mut support: Vec<usize> = (0..s).collect();
    loop {
        delta = delta.max(support_deviation(m, &support)?);
        // advance to the next combination in lexicographic order
        let mut i = s;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            if support[i] != i + nb - s {
                break false;
            }
        };
        if done {
            return Ok(delta);
        }
        support[i] += 1;
        for j in i + 1..s {
            support[j] = support[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Trigonometric-polynomial warp of the unit interval:
/// `phi'(t) = 1 + sum_j (c_j cos(2 pi j t) + d_j sin(2 pi j t))`, giving
/// phi(0) = 0 and phi(1) = 1 identically.
///
/// The coefficients are the exact description of the warp. Evaluating the
/// warp from them in extended precision is what lets the aliasing sum be
/// observed far below the f64 rounding floor.
#[derive(Debug, Clone)]
pub struct TrigWarp<S: Float> {
    cos_coeffs: Vec<S>,
    sin_coeffs: Vec<S>,
}

impl<S: Float> TrigWarp<S> {
    /// The identity warp phi(t) = t.
    pub fn identity() -> Self {
        TrigWarp { cos_coeffs: Vec::new(), sin_coeffs: Vec::new() }
    }

    pub fn new(cos_coeffs: Vec<S>, sin_coeffs: Vec<S>) -> Result<Self> {
        if cos_coeffs.len() != sin_coeffs.len() {
            return Err(Error::invalid_argument("warp coefficient lengths differ"));
        }
        let w = TrigWarp { cos_coeffs, sin_coeffs };
        let n = 4096.max(64 * (w.degree() + 1));
        for j in 0..n {
            let t = S::of_usize(j) / S::of_usize(n);
            if w.deriv_at(t) <= S::zero() {
                return Err(Error::invalid_phase("warp derivative not positive"));
            }
        }
        Ok(w)
    }

    pub fn degree(&self) -> usize {
        self.cos_coeffs.len()
    }

    /// l1 norm of the exponential-basis coefficients of phi':
    /// 1 + sum_j sqrt(c_j^2 + d_j^2).
    pub fn deriv_coeff_l1(&self) -> S {
        let mut acc = S::one();
        for (c, d) in self.cos_coeffs.iter().zip(&self.sin_coeffs) {
            acc += (*c * *c + *d * *d).sqrt();
        }
        acc
    }

    pub fn deriv_at(&self, t: S) -> S {
        let two_pi = S::of(2.0) * S::PI();
        let mut acc = S::one();
        for (j, (c, d)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let arg = two_pi * S::of_usize(j + 1) * t;
            acc += *c * arg.cos() + *d * arg.sin();
        }
        acc
    }

    pub fn warp_at(&self, t: S) -> S {
        let two_pi = S::of(2.0) * S::PI();
        let mut acc = t;
        for (j, (c, d)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let m = S::of_usize(j + 1);
            let arg = two_pi * m * t;
            acc += (*c * arg.sin() - *d * (arg.cos() - S::one())) / (two_pi * m);
        }
        acc
    }

    /// (phi'(t), phi(t)) at t = m/l in fixed point.
    fn eval_fx(&self, m: u64, l: u64) -> (Fx, Fx) {
        let t = Fx::from_ratio(m, l);
        let mut deriv = Fx::one();
        let mut warp = t.clone();
        for (j, (c, d)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let k = (j + 1) as i64;
            let arg = mp::two_pi().mul_i64(k);
            let arg = &arg * &t;
            let (s, co) = mp::sin_cos(&arg);
            let cj = Fx::from_f64(c.to_f64().unwrap());
            let dj = Fx::from_f64(d.to_f64().unwrap());
            deriv = &deriv + &(&(&cj * &co) + &(&dj * &s));
            // (c sin(arg) - d (cos(arg) - 1)) / (2 pi k)
            let num = &(&cj * &s) - &(&dj * &(&co - &Fx::one()));
            warp = &warp + &num.div(&mp::two_pi().mul_i64(k));
        }
        (deriv, warp)
    }
}

/// Result of the aliasing-sum probe.
#[derive(Debug, Clone, Copy)]
pub struct OscSum<S: Float> {
    pub value_re: S,
    pub value_im: S,
    /// Structural decay envelope max((k |F(phi')|_1 / L)^n, (2 M0 / L)^n).
    pub bound: S,
    /// |value| / bound, the empirical stand-in for the envelope constant.
    pub ratio: S,
}

impl<S: Float> OscSum<S> {
    pub fn modulus(&self) -> S {
        (self.value_re * self.value_re + self.value_im * self.value_im).sqrt()
    }
}

/// `(1/L) sum_{m=0}^{L-1} phi'(t_m) e^{i 2 pi k phi(t_m)}` on the L-point
/// uniform grid, evaluated in ~385-digit fixed point, together with the
/// order-n decay envelope. For warps sampled exactly at the grid the result
/// is accurate in a relative sense down to roughly 1e-380.
pub fn oscillatory_sum<S: Float>(
    warp: &TrigWarp<S>,
    k: i64,
    l: usize,
    n: u32,
) -> Result<OscSum<S>> {
    if l == 0 {
        return Err(Error::invalid_argument("grid size must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid_argument("decay order must be >= 1"));
    }
    let mut re = Fx::zero();
    let mut im = Fx::zero();
    for m in 0..l as u64 {
        let (deriv, phi) = warp.eval_fx(m, l as u64);
        let arg = &mp::two_pi().mul_i64(k) * &phi;
        let (s, c) = mp::sin_cos(&arg);
        re = &re + &(&deriv * &c);
        im = &im + &(&deriv * &s);
    }
    let value_re = S::of(re.div_u32(l as u32).to_f64());
    let value_im = S::of(im.div_u32(l as u32).to_f64());

    let m0 = warp.degree();
    let lf = S::of_usize(l);
    let b1 = (S::of(k.unsigned_abs() as f64) * warp.deriv_coeff_l1() / lf).powi(n as i32);
    let b2 = (S::of(2.0) * S::of_usize(m0) / lf).powi(n as i32);
    let bound = b1.max(b2);
    let modulus = (value_re * value_re + value_im * value_im).sqrt();
    let ratio = if bound > S::zero() { modulus / bound } else { S::infinity() };
    Ok(OscSum { value_re, value_im, bound, ratio })
}

/// Covering cardinality bound for the warp family of degree m0 at radius r:
/// `(16 pi m0^2 / r + 1)^(2 m0)`, or the sharper `(8 pi m0^2 / r^2)^m0`.
pub fn covering_bound<S: Float>(m0: u32, r: S, sharp: bool) -> Result<S> {
    if !(r > S::zero()) {
        return Err(Error::invalid_argument("radius must be positive"));
    }
    let pi = S::PI();
    let m = S::of(f64::from(m0));
    if sharp {
        Ok((S::of(8.0) * pi * m * m / (r * r)).powi(m0 as i32))
    } else {
        Ok((S::of(16.0) * pi * m * m / r + S::one()).powi(2 * m0 as i32))
    }
}

/// Perturbation bound on the isometry constant:
/// `|delta_s(A) - delta_s(B)| <= (2 eps sqrt(M) + eps^2 M) S` for A with
/// unit columns and eps the max entry perturbation.
pub fn delta_perturbation_bound<S: Float>(eps: S, m: usize, s: usize) -> Result<S> {
    if eps < S::zero() {
        return Err(Error::invalid_argument("eps must be nonnegative"));
    }
    let mf = S::of_usize(m);
    Ok((S::of(2.0) * eps * mf.sqrt() + eps * eps * mf) * S::of_usize(s))
}

/// Checks the coefficient box of positive mean-1 trigonometric polynomials:
/// every harmonic satisfies c_j^2 + d_j^2 <= 4 and the sup norm stays under
/// 4 m0 + 1. Errors unless the grid mean is 1.
pub fn fourier_coeff_box_check<S: Float>(phi_prime: &[S]) -> Result<bool> {
    let n = phi_prime.len();
    if n < 4 {
        return Err(Error::invalid_argument("need at least 4 samples"));
    }
    let coeffs = fourier_coeffs(phi_prime);
    let tol = S::of(1e-9);
    if (coeffs[0].re - S::one()).abs() > tol || coeffs[0].im.abs() > tol {
        return Err(Error::invalid_argument("mean must be 1"));
    }
    // degree = largest wavenumber carrying mass
    let mut m0 = 0usize;
    for (idx, c) in coeffs.iter().enumerate() {
        let k = wavenumber_at(idx, n).unsigned_abs() as usize;
        if k > 0 && c.norm() > tol {
            m0 = m0.max(k);
        }
    }
    let four = S::of(4.0);
    for k in 1..=m0 as i64 {
        let idx = k as usize;
        // c_k^2 + d_k^2 = 4 |chat(k)|^2 for real data
        let sq = four * coeffs[idx].norm_sqr();
        if sq > four + tol {
            return Ok(false);
        }
    }
    let sup = phi_prime.iter().fold(S::zero(), |a, &b| a.max(b.abs()));
    let limit = four * S::of_usize(m0) + S::one() + tol;
    Ok(sup <= limit)
}
