//! Spectral engine in the phase coordinate.
//!
//! Fourier analysis happens in the normalized phase variable: a forward
//! transform (either FFT on an interpolated mesh or direct non-uniform
//! quadrature), a band cutoff that splits carrier content from the low band,
//! and synthesis back at arbitrary phase points. The wavenumber layout is
//! `omega in {-N/2+1, ..., N/2}` with coefficients stored in FFT order.

use num_complex::Complex;
use num_traits::FloatConst;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::float::Float;
use crate::model::{PhaseFn, Signal};
use crate::spline::PeriodicCubicSpline;

/// Tolerance for normalized-phase range checks.
const THETA_BAR_SLACK: f64 = 1e-9;

/// Complex Fourier coefficients indexed by integer wavenumber in the
/// normalized phase coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSpectrum<S: Float> {
    /// FFT-order storage: index `w` holds wavenumber `w` for `w <= N/2`,
    /// wavenumber `w - N` above.
    coeffs: Vec<Complex<S>>,
    /// Cycle count of the phase the spectrum was taken against (0 when the
    /// producer has no phase context).
    pub cycle_count: S,
}

impl<S: Float> ThetaSpectrum<S> {
    pub fn from_coeffs(coeffs: Vec<Complex<S>>, cycle_count: S) -> Result<Self> {
        if coeffs.len() < 2 || coeffs.len() % 2 != 0 {
            return Err(Error::invalid_argument("spectrum length must be even and >= 2"));
        }
        Ok(ThetaSpectrum { coeffs, cycle_count })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_wavenumber(&self) -> i64 {
        -(self.coeffs.len() as i64) / 2 + 1
    }

    pub fn max_wavenumber(&self) -> i64 {
        self.coeffs.len() as i64 / 2
    }

    /// Coefficient at wavenumber `w`; zero outside the stored range.
    pub fn coeff(&self, w: i64) -> Complex<S> {
        let n = self.coeffs.len() as i64;
        if w < self.min_wavenumber() || w > self.max_wavenumber() {
            Complex::new(S::zero(), S::zero())
        } else {
            let idx = if w >= 0 { w } else { w + n };
            self.coeffs[idx as usize]
        }
    }

    pub fn set_coeff(&mut self, w: i64, c: Complex<S>) {
        let n = self.coeffs.len() as i64;
        assert!(w >= self.min_wavenumber() && w <= self.max_wavenumber());
        let idx = if w >= 0 { w } else { w + n };
        self.coeffs[idx as usize] = c;
    }

    pub fn coeffs(&self) -> &[Complex<S>] {
        &self.coeffs
    }

    /// Sum of coefficient moduli.
    pub fn l1_norm(&self) -> S {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Wavenumbers with |coefficient| above `floor`, with coefficients.
    pub fn nonzero(&self, floor: S) -> Vec<(i64, Complex<S>)> {
        (self.min_wavenumber()..=self.max_wavenumber())
            .filter_map(|w| {
                let c = self.coeff(w);
                (c.norm() > floor).then_some((w, c))
            })
            .collect()
    }
}

/// Envelope pair (a, b) on the time grid: the in-phase and quadrature
/// components relative to the current carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopePair<S: Float> {
    pub a: Vec<S>,
    pub b: Vec<S>,
}

// ---------------------------------------------------------------------------
// accurate unit phasors
// ---------------------------------------------------------------------------

/// Exact product split: returns (hi, lo) with hi + lo = a * b exactly.
#[inline]
fn two_prod<S: Float>(a: S, b: S) -> (S, S) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// e^{i 2 pi x}.
#[inline]
pub fn cis_two_pi<S: Float>(x: S) -> Complex<S> {
    let arg = S::of(2.0) * S::PI() * x;
    let (s, c) = arg.sin_cos();
    Complex::new(c, s)
}

/// e^{i 2 pi k x} with the product k * x reduced mod 1 in doubled precision,
/// so the phase stays accurate for large |k * x|.
#[inline]
pub fn cis_two_pi_prod<S: Float>(k: S, x: S) -> Complex<S> {
    let (hi, lo) = two_prod(k, x);
    let red = hi.fract() + lo;
    let arg = S::of(2.0) * S::PI() * red;
    let (s, c) = arg.sin_cos();
    Complex::new(c, s)
}

// ---------------------------------------------------------------------------
// FFT plumbing
// ---------------------------------------------------------------------------

fn run_fft<S: Float>(buf: &mut [Complex<S>], inverse: bool) {
    let mut planner = FftPlanner::<S>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(buf);
}

/// Normalized Fourier coefficients (forward FFT / N) of real samples.
pub(crate) fn fourier_coeffs<S: Float>(values: &[S]) -> Vec<Complex<S>> {
    let n = values.len();
    let mut buf: Vec<Complex<S>> = values.iter().map(|&v| Complex::new(v, S::zero())).collect();
    run_fft(&mut buf, false);
    let scale = S::one() / S::of_usize(n);
    for c in buf.iter_mut() {
        *c = c.scale(scale);
    }
    buf
}

/// Real part of the inverse FFT of normalized coefficients.
pub(crate) fn inverse_real<S: Float>(coeffs: &[Complex<S>]) -> Vec<S> {
    let mut buf = coeffs.to_vec();
    run_fft(&mut buf, true);
    buf.into_iter().map(|c| c.re).collect()
}

/// FFT-order wavenumber of storage index `idx` in a length-`n` spectrum.
#[inline]
pub(crate) fn wavenumber_at(idx: usize, n: usize) -> i64 {
    let half = n / 2;
    if idx <= half {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

/// Normalized phase `theta_bar = (theta - theta(0)) / (2 pi L)` and the cycle
/// count `L`. Monotonicity is enforced by `PhaseFn` construction.
pub fn normalize_phase<S: Float>(theta: &PhaseFn<S>) -> (PhaseFn<S>, S) {
    let l = theta.cycle_count();
    let (values, derivative) = theta.theta_bar();
    let bar = PhaseFn::new(theta.grid(), values, derivative)
        .expect("normalized phase inherits monotonicity");
    (bar, l)
}

/// Interpolates a uniformly sampled signal to the uniform mesh in the
/// normalized phase coordinate: returns the signal at the points where
/// `theta_bar` takes the values j/N.
pub fn interp_to_theta_grid<S: Float>(signal: &Signal<S>, theta: &PhaseFn<S>) -> Result<Vec<S>> {
    let grid = signal.uniform_grid()?;
    if grid != theta.grid() {
        return Err(Error::invalid_argument("signal and phase grids differ"));
    }
    let n = grid.len();
    let targets: Vec<S> = (0..n).map(|j| S::of_usize(j) / S::of_usize(n)).collect();
    interp_at_theta_points(signal, theta, &targets)
}

/// Signal values at arbitrary points of the normalized phase coordinate,
/// by periodic cubic spline over the (theta_bar, value) pairs.
pub(crate) fn interp_at_theta_points<S: Float>(
    signal: &Signal<S>,
    theta: &PhaseFn<S>,
    theta_bar_targets: &[S],
) -> Result<Vec<S>> {
    if theta.derivative().iter().any(|&d| d <= S::zero()) {
        return Err(Error::invalid_phase("phase derivative must be positive to warp"));
    }
    let (tb, _) = theta.theta_bar();
    let spline = PeriodicCubicSpline::new(&tb, signal.values())?;
    Ok(spline.eval_many(theta_bar_targets))
}

/// Forward transform on the uniform phase mesh:
/// `coeff(w) = (1/N) sum_j values_j e^{-i 2 pi w j / N}`.
pub fn theta_fft<S: Float>(values: &[S]) -> Result<ThetaSpectrum<S>> {
    if values.len() % 2 != 0 || values.is_empty() {
        return Err(Error::invalid_argument("theta_fft needs an even number of samples"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid_argument("non-finite sample"));
    }
    ThetaSpectrum::from_coeffs(fourier_coeffs(values), S::zero())
}

/// Direct non-uniform transform: `coeff(k) = sum_j w_j f_j e^{-i 2 pi k tb_j}`.
///
/// `weights = Some(w)` carries quadrature weights (`theta_bar'(t_j)/N` on a
/// uniform time grid, realizing the integral in d theta_bar); `None` means
/// unit weights, the plain dictionary evaluation used by sensing matrices.
pub fn theta_nudft<S: Float>(
    values: &[S],
    theta_bar: &[S],
    weights: Option<&[S]>,
    n_modes: usize,
) -> Result<ThetaSpectrum<S>> {
    if values.len() != theta_bar.len() {
        return Err(Error::invalid_argument("values/theta_bar length mismatch"));
    }
    if let Some(w) = weights {
        if w.len() != values.len() {
            return Err(Error::invalid_argument("weights length mismatch"));
        }
    }
    if n_modes < 2 || n_modes % 2 != 0 {
        return Err(Error::invalid_argument("n_modes must be even and >= 2"));
    }
    let slack = S::of(THETA_BAR_SLACK);
    if theta_bar.iter().any(|&u| u < -slack || u > S::one() + slack) {
        return Err(Error::invalid_phase("theta_bar outside [0, 1]"));
    }

    let half = n_modes / 2;
    let mut coeffs = vec![Complex::new(S::zero(), S::zero()); n_modes];
    // Real input: compute w >= 0, mirror by conjugation below.
    for (j, (&f, &u)) in values.iter().zip(theta_bar).enumerate() {
        let w = weights.map_or(S::one(), |ws| ws[j]);
        let wf = w * f;
        let step = cis_two_pi(-u);
        let mut ph = Complex::new(S::one(), S::zero());
        for k in 0..=half {
            // resync the recurrence so phase drift stays at machine level
            if k % 32 == 0 {
                ph = cis_two_pi_prod(-S::of_usize(k), u);
            }
            coeffs[k] += ph.scale(wf);
            ph = ph * step;
        }
    }
    for k in 1..half {
        let idx_neg = n_modes - k;
        coeffs[idx_neg] = coeffs[k].conj();
    }
    ThetaSpectrum::from_coeffs(coeffs, S::zero())
}

/// Jump cutoff: 1 strictly inside (-1/2, 1/2), 0 elsewhere (boundary
/// excluded).
pub fn cutoff_chi<S: Float>(omega_over_l: S) -> S {
    if omega_over_l > S::of(-0.5) && omega_over_l < S::of(0.5) {
        S::one()
    } else {
        S::zero()
    }
}

/// Splits the spectrum around the carrier at the rounded cycle count:
/// `a_hat(w) = (r(w+L) + r(w-L)) chi(w/L)`,
/// `b_hat(w) = -i (r(w+L) - r(w-L)) chi(w/L)`.
/// The integer shift uses round(L); the cutoff argument keeps the exact L.
pub fn extract_envelope_spectra<S: Float>(
    spectrum: &ThetaSpectrum<S>,
    l: S,
) -> Result<(ThetaSpectrum<S>, ThetaSpectrum<S>)> {
    if l < S::one() {
        return Err(Error::invalid_argument("cycle count below 1"));
    }
    let lr = l.round().to_i64().ok_or_else(|| Error::invalid_argument("cycle count overflow"))?;
    let n = spectrum.len();
    let mut a = ThetaSpectrum::from_coeffs(vec![Complex::new(S::zero(), S::zero()); n], l)?;
    let mut b = a.clone();
    let minus_i = Complex::new(S::zero(), -S::one());
    for w in a.min_wavenumber()..=a.max_wavenumber() {
        let chi = cutoff_chi(S::of(w as f64) / l);
        if chi > S::zero() {
            let rp = spectrum.coeff(w + lr);
            let rm = spectrum.coeff(w - lr);
            a.set_coeff(w, rp + rm);
            b.set_coeff(w, minus_i * (rp - rm));
        }
    }
    Ok((a, b))
}

/// Evaluates `Re sum_w coeff(w) e^{i 2 pi w tb_j}` at the given phase points.
/// On the uniform mesh `tb_j = j/N` this inverts `theta_fft` exactly.
pub fn inverse_theta_fft<S: Float>(spectrum: &ThetaSpectrum<S>, theta_bar_points: &[S]) -> Vec<S> {
    let nz = spectrum.nonzero(S::zero());
    let mut out = vec![S::zero(); theta_bar_points.len()];
    for (j, &u) in theta_bar_points.iter().enumerate() {
        let mut acc = S::zero();
        for &(w, c) in &nz {
            let ph = cis_two_pi_prod(S::of(w as f64), u);
            acc += c.re * ph.re - c.im * ph.im;
        }
        out[j] = acc;
    }
    out
}

/// Inverse FFT of the spectrum onto its own uniform mesh (values at j/N).
pub fn inverse_on_mesh<S: Float>(spectrum: &ThetaSpectrum<S>) -> Vec<S> {
    inverse_real(spectrum.coeffs())
}

/// L2-orthogonal projection onto span{ e^{i 2 pi k t}, |k| <= m0 } on the
/// uniform time grid, realized by FFT truncation.
pub fn project_low_modes<S: Float>(values: &[S], m0: usize) -> Result<Vec<S>> {
    Ok(project_low_modes_coeffs(values, m0)?.0)
}

/// Projection plus the surviving coefficients (index = wavenumber offset by
/// m0: slot k + m0 holds wavenumber k in -m0..=m0).
pub(crate) fn project_low_modes_coeffs<S: Float>(
    values: &[S],
    m0: usize,
) -> Result<(Vec<S>, Vec<Complex<S>>)> {
    let n = values.len();
    if 2 * m0 >= n {
        return Err(Error::invalid_argument(format!(
            "projection band m0 = {m0} too wide for grid {n}"
        )));
    }
    let mut coeffs = fourier_coeffs(values);
    for (idx, c) in coeffs.iter_mut().enumerate() {
        if wavenumber_at(idx, n).unsigned_abs() as usize > m0 {
            *c = Complex::new(S::zero(), S::zero());
        }
    }
    let vals = inverse_real(&coeffs);
    let kept = (-(m0 as i64)..=m0 as i64)
        .map(|k| {
            let idx = if k >= 0 { k as usize } else { (k + n as i64) as usize };
            coeffs[idx]
        })
        .collect();
    Ok((vals, kept))
}

/// Spectral derivative of a real periodic sequence (Nyquist mode zeroed).
pub(crate) fn spectral_derivative<S: Float>(values: &[S]) -> Vec<S> {
    let n = values.len();
    let mut coeffs = fourier_coeffs(values);
    let two_pi = S::of(2.0) * S::PI();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let k = wavenumber_at(idx, n);
        if n % 2 == 0 && idx == n / 2 {
            *c = Complex::new(S::zero(), S::zero());
        } else {
            let factor = Complex::new(S::zero(), two_pi * S::of(k as f64));
            *c = *c * factor;
        }
    }
    inverse_real(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gen_example_signal, make_uniform_grid};
    use num_traits::FloatConst;
    use proptest::prelude::*;

    const TAU: f64 = std::f64::consts::TAU;

    #[test]
    fn normalize_phase_examples() {
        let g = make_uniform_grid(64).unwrap();
        let lin = PhaseFn::linear(g, 1.0f64).unwrap();
        let (bar, l) = normalize_phase(&lin);
        assert!((l - 1.0).abs() < 1e-14);
        for j in 0..64 {
            assert!((bar.values()[j] - g.point::<f64>(j)).abs() < 1e-14);
        }

        let g = make_uniform_grid(256).unwrap();
        let (_, truth) = gen_example_signal::<f64>(1, g, 0).unwrap();
        let (_, l) = normalize_phase(&truth.phase);
        assert!((l - 10.0).abs() < 1e-12);

        // shift invariance: theta = 4 pi t + c
        let vals: Vec<f64> = (0..64).map(|j| 4.0 * f64::PI() * (j as f64 / 64.0) + 1.7).collect();
        let deriv = vec![4.0 * f64::PI(); 64];
        let g = make_uniform_grid(64).unwrap();
        let ph = PhaseFn::new(g, vals, deriv).unwrap();
        let (bar, l) = normalize_phase(&ph);
        assert!((l - 2.0).abs() < 1e-14);
        for j in 0..64 {
            assert!((bar.values()[j] - g.point::<f64>(j)).abs() < 1e-13);
        }
    }

    #[test]
    fn interp_identity_warp_and_constant() {
        let g = make_uniform_grid(128).unwrap();
        let vals: Vec<f64> = (0..128).map(|j| (TAU * 3.0 * (j as f64) / 128.0).sin()).collect();
        let f = Signal::uniform(g, vals.clone()).unwrap();
        let lin = PhaseFn::linear(g, 1.0f64).unwrap();
        let out = interp_to_theta_grid(&f, &lin).unwrap();
        for (o, v) in out.iter().zip(&vals) {
            assert!((o - v).abs() < 1e-12);
        }

        let c = Signal::uniform(g, vec![3.0; 128]).unwrap();
        let (_, truth) = gen_example_signal::<f64>(1, make_uniform_grid(128).unwrap(), 0).unwrap();
        let warped = interp_to_theta_grid(&c, &truth.phase).unwrap();
        for o in warped {
            assert!((o - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interp_cosine_against_analytic_nodes() {
        // cos(theta) sampled in t, warped to the uniform theta_bar mesh,
        // equals cos(2 pi L u + theta(0)) at u = j/N up to spline error.
        let n = 1024;
        let g = make_uniform_grid(n).unwrap();
        let (_, truth) = gen_example_signal::<f64>(1, g, 0).unwrap();
        let vals: Vec<f64> = truth.phase.values().iter().map(|&t| t.cos()).collect();
        let f = Signal::uniform(g, vals).unwrap();
        let out = interp_to_theta_grid(&f, &truth.phase).unwrap();
        let l = truth.phase.cycle_count();
        let th0 = truth.phase.values()[0];
        let mut worst: f64 = 0.0;
        for (j, o) in out.iter().enumerate() {
            let u = j as f64 / n as f64;
            worst = worst.max((o - (TAU * l * u + th0).cos()).abs());
        }
        assert!(worst < 1e-6, "max deviation {worst}");
    }

    #[test]
    fn theta_fft_basic_modes() {
        let n = 64;
        let c = theta_fft(&vec![2.5f64; n]).unwrap();
        assert!((c.coeff(0).re - 2.5).abs() < 1e-14);
        for w in 1..=n as i64 / 2 {
            assert!(c.coeff(w).norm() < 1e-13);
        }

        let vals: Vec<f64> = (0..n).map(|j| (TAU * j as f64 / n as f64).cos()).collect();
        let c = theta_fft(&vals).unwrap();
        assert!((c.coeff(1).re - 0.5).abs() < 1e-12);
        assert!((c.coeff(-1).re - 0.5).abs() < 1e-12);
        assert!(c.coeff(1).im.abs() < 1e-12);
        let mass: f64 = (c.min_wavenumber()..=c.max_wavenumber())
            .filter(|&w| w != 1 && w != -1)
            .map(|w| c.coeff(w).norm())
            .sum();
        assert!(mass < 1e-12);

        assert!(theta_fft(&vec![0.0f64; 5]).is_err());
    }

    #[test]
    fn example1_spectrum_support() {
        // Warped example-1 signal concentrates at |w| <= 3 and |w -+ 10| <= 3.
        let n = 1024;
        let g = make_uniform_grid(n).unwrap();
        let (f, truth) = gen_example_signal::<f64>(1, g, 0).unwrap();
        let warped = interp_to_theta_grid(&f, &truth.phase).unwrap();
        let c = theta_fft(&warped).unwrap();
        let mut on = 0.0f64;
        let mut off = 0.0f64;
        for w in c.min_wavenumber()..=c.max_wavenumber() {
            let m = c.coeff(w).norm();
            if w.abs() <= 3 || (w.abs() - 10).abs() <= 3 {
                on += m;
            } else {
                off += m;
            }
        }
        assert!(off / (on + off) <= 1e-3, "off-support fraction {}", off / (on + off));
    }

    #[test]
    fn nudft_orthonormality_and_agreement_with_fft() {
        let n = 64;
        let tb: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let w = vec![1.0 / n as f64; n];

        let ones = vec![1.0f64; n];
        let c = theta_nudft(&ones, &tb, Some(&w), n).unwrap();
        assert!((c.coeff(0).re - 1.0).abs() < 1e-13);

        let cosv: Vec<f64> = tb.iter().map(|&u| (TAU * u).cos()).collect();
        let c = theta_nudft(&cosv, &tb, Some(&w), n).unwrap();
        assert!((c.coeff(1).re - 0.5).abs() < 1e-12);
        assert!(c.coeff(1).im.abs() < 1e-12);

        // agreement with theta_fft on matching range
        let vals: Vec<f64> =
            tb.iter().map(|&u| (TAU * u).sin() + 0.5 * (3.0 * TAU * u).cos() - 0.2).collect();
        let a = theta_fft(&vals).unwrap();
        let b = theta_nudft(&vals, &tb, Some(&w), n).unwrap();
        for w_ in a.min_wavenumber()..=a.max_wavenumber() {
            assert!((a.coeff(w_) - b.coeff(w_)).norm() < 1e-12);
        }
    }

    #[test]
    fn nudft_example1_mean_coefficient() {
        // Fourier coefficient of the example-1 mean in the carrier-aligned
        // phase coordinate: the 2 sin(2 theta_bar_paper) term lands at k = 2
        // with value exactly 1/i = -i.
        let n = 2048;
        let g = make_uniform_grid(n).unwrap();
        let (_, truth) = gen_example_signal::<f64>(1, g, 0).unwrap();
        let l = truth.phase.cycle_count();
        let tb_no: Vec<f64> = truth
            .phase
            .values()
            .iter()
            .map(|&th| {
                let u = th / (TAU * l);
                u - u.floor()
            })
            .collect();
        let w = truth.phase.quadrature_weights();
        let c = theta_nudft(&truth.a0, &tb_no, Some(&w), 64).unwrap();
        let got = c.coeff(2);
        assert!((got.re - 0.0).abs() < 1e-8 && (got.im + 1.0).abs() < 1e-8, "got {got}");
    }

    #[test]
    fn nudft_rejects_out_of_range_phase() {
        let vals = vec![1.0f64; 4];
        let tb = vec![0.0, 0.5, 1.2, 1.4];
        assert!(theta_nudft(&vals, &tb, None, 4).is_err());
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff_chi(0.0f64), 1.0);
        assert_eq!(cutoff_chi(0.5f64), 0.0);
        assert_eq!(cutoff_chi(-0.5f64), 0.0);
        assert_eq!(cutoff_chi(-0.49f64), 1.0);
        assert_eq!(cutoff_chi(0.7f64), 0.0);
    }

    #[test]
    fn envelope_extraction_pure_carriers() {
        let n = 128;
        let l = 8i64;
        let tb: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let cosv: Vec<f64> = tb.iter().map(|&u| (TAU * l as f64 * u).cos()).collect();
        let spec = theta_fft(&cosv).unwrap();
        let (a, b) = extract_envelope_spectra(&spec, l as f64).unwrap();
        assert!((a.coeff(0).re - 1.0).abs() < 1e-12);
        assert!(a.coeff(0).im.abs() < 1e-12);
        assert!(b.l1_norm() < 1e-12);

        let sinv: Vec<f64> = tb.iter().map(|&u| (TAU * l as f64 * u).sin()).collect();
        let spec = theta_fft(&sinv).unwrap();
        let (a, b) = extract_envelope_spectra(&spec, l as f64).unwrap();
        assert!((b.coeff(0).re - 1.0).abs() < 1e-12);
        assert!(a.l1_norm() < 1e-12);

        assert!(extract_envelope_spectra(&spec, 0.5).is_err());
    }

    #[test]
    fn envelope_extraction_example1_exact_phase() {
        // With the exact phase, the in-phase envelope equals a1 and the
        // quadrature part vanishes.
        let n = 1024;
        let g = make_uniform_grid(n).unwrap();
        let (f, truth) = gen_example_signal::<f64>(1, g, 0).unwrap();
        let l = truth.phase.cycle_count();
        let tb_no: Vec<f64> = truth
            .phase
            .values()
            .iter()
            .map(|&th| {
                let u = th / (TAU * l);
                u - u.floor()
            })
            .collect();
        let w = truth.phase.quadrature_weights();
        let spec = theta_nudft(f.values(), &tb_no, Some(&w), n).unwrap();
        let (ah, bh) = extract_envelope_spectra(&spec, l).unwrap();
        let a = inverse_theta_fft(&ah, &tb_no);
        let b = inverse_theta_fft(&bh, &tb_no);
        let mut worst: f64 = 0.0;
        for j in 0..n {
            worst = worst.max((a[j] - truth.a1[j]).abs()).max(b[j].abs());
        }
        assert!(worst < 1e-8, "worst envelope deviation {worst}");
    }

    #[test]
    fn inverse_round_trip_and_pointwise() {
        let n = 128;
        let vals: Vec<f64> = (0..n)
            .map(|j| {
                let t = j as f64 / n as f64;
                0.3 + (TAU * t).sin() - 2.0 * (TAU * 5.0 * t).cos()
            })
            .collect();
        let spec = theta_fft(&vals).unwrap();
        let tb: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let back = inverse_theta_fft(&spec, &tb);
        for (x, y) in back.iter().zip(&vals) {
            assert!((x - y).abs() < 1e-12);
        }
        let mesh = inverse_on_mesh(&spec);
        for (x, y) in mesh.iter().zip(&vals) {
            assert!((x - y).abs() < 1e-12);
        }

        let mut single = ThetaSpectrum::from_coeffs(
            vec![Complex::new(0.0f64, 0.0); 16],
            0.0,
        )
        .unwrap();
        single.set_coeff(0, Complex::new(2.25, 0.0));
        let out = inverse_theta_fft(&single, &[0.0, 0.37, 0.9]);
        for v in out {
            assert!((v - 2.25).abs() < 1e-14);
        }

        // spectrum of cos(2 pi u) at u = 0, 1/4, 1/2
        let cosv: Vec<f64> = (0..16).map(|j| (TAU * j as f64 / 16.0).cos()).collect();
        let spec = theta_fft(&cosv).unwrap();
        let out = inverse_theta_fft(&spec, &[0.0, 0.25, 0.5]);
        assert!((out[0] - 1.0).abs() < 1e-12);
        assert!(out[1].abs() < 1e-12);
        assert!((out[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_mode_separation_idempotence_self_adjoint() {
        let n = 256;
        let t: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let v: Vec<f64> = t.iter().map(|&x| (TAU * x).cos() + (TAU * 5.0 * x).cos()).collect();
        let p = project_low_modes(&v, 2).unwrap();
        for (j, &x) in t.iter().enumerate() {
            assert!((p[j] - (TAU * x).cos()).abs() < 1e-12);
        }
        let pp = project_low_modes(&p, 2).unwrap();
        for (a, b) in pp.iter().zip(&p) {
            assert!((a - b).abs() < 1e-12);
        }
        // fixed point for members of the band
        let vb: Vec<f64> = t.iter().map(|&x| 1.0 - 0.5 * (TAU * 2.0 * x).sin()).collect();
        let pb = project_low_modes(&vb, 2).unwrap();
        for (a, b) in pb.iter().zip(&vb) {
            assert!((a - b).abs() < 1e-12);
        }
        // self-adjointness on the grid inner product
        let u: Vec<f64> = t.iter().map(|&x| (TAU * 3.0 * x).sin() + 0.2).collect();
        let w: Vec<f64> = t.iter().map(|&x| (TAU * 7.0 * x).cos() - 1.0).collect();
        let pu = project_low_modes(&u, 4).unwrap();
        let pw = project_low_modes(&w, 4).unwrap();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        assert!((dot(&pu, &w) - dot(&u, &pw)).abs() < 1e-12);

        assert!(project_low_modes(&v, n / 2).is_err());
    }

    #[test]
    fn spectral_identity_composition() {
        // f = f0 + a cos(2 pi L u) - b sin(2 pi L u) on the mesh pushes the
        // envelope spectra to the carrier bands.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 256;
        let l = 20i64;
        let m1 = 4i64;
        for _ in 0..50 {
            let mut band = |m: i64| -> Vec<f64> {
                let coef: Vec<(f64, f64)> =
                    (0..=m).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                (0..n)
                    .map(|j| {
                        let u = j as f64 / n as f64;
                        coef.iter()
                            .enumerate()
                            .map(|(k, &(c, d))| {
                                c * (TAU * k as f64 * u).cos() + d * (TAU * k as f64 * u).sin()
                            })
                            .sum()
                    })
                    .collect()
            };
            let f0 = band(m1);
            let a = band(m1);
            let b = band(m1);
            let f: Vec<f64> = (0..n)
                .map(|j| {
                    let u = j as f64 / n as f64;
                    f0[j] + a[j] * (TAU * l as f64 * u).cos() - b[j] * (TAU * l as f64 * u).sin()
                })
                .collect();
            let fh = theta_fft(&f).unwrap();
            let f0h = theta_fft(&f0).unwrap();
            let ah = theta_fft(&a).unwrap();
            let bh = theta_fft(&b).unwrap();
            let i = Complex::new(0.0, 1.0);
            for w in -(l + m1)..=(l + m1) {
                let lhs = fh.coeff(w);
                let rhs = f0h.coeff(w)
                    + (ah.coeff(w + l) + ah.coeff(w - l)).scale(0.5)
                    - i * (bh.coeff(w + l) - bh.coeff(w - l)).scale(0.5);
                assert!((lhs - rhs).norm() < 1e-10, "w = {w}: {} vs {}", lhs, rhs);
            }
        }
    }

    proptest! {
        #[test]
        fn fft_round_trip_and_conjugate_symmetry(
            raw in proptest::collection::vec(-10.0f64..10.0, 8..200),
        ) {
            let n = raw.len() - raw.len() % 2;
            let vals = &raw[..n];
            let spec = theta_fft(vals).unwrap();
            // conjugate symmetry for real input
            for w in 1..(n as i64) / 2 {
                prop_assert!((spec.coeff(-w) - spec.coeff(w).conj()).norm() < 1e-12);
            }
            let tb: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
            let back = inverse_theta_fft(&spec, &tb);
            for (x, y) in back.iter().zip(vals) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
